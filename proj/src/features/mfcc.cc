// features/mfcc.cc

// Copyright 2026  The fasr Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "fasr/features/mfcc.h"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "fasr/base/error.h"

namespace fasr {

namespace {

// The FFTW planner is not thread-safe; execution on distinct plans is.
std::mutex &PlannerMutex() {
  static std::mutex m;
  return m;
}

double HzToMel(double hz) { return 1127.0 * std::log(1.0 + hz / 700.0); }

}  // namespace

DctPair BuildDctPair(int num_cepstra, int num_mel_filters) {
  if (num_mel_filters < 1 || num_cepstra < 1 || num_cepstra > num_mel_filters)
    Fail(ErrorKind::kInvalidConfiguration,
         "DCT needs 1 <= c <= m, got c=" + std::to_string(num_cepstra) +
             " m=" + std::to_string(num_mel_filters));
  const int c = num_cepstra, m = num_mel_filters;
  DctPair dct;
  dct.forward.resize(c, m);
  const double first = std::sqrt(1.0 / m), rest = std::sqrt(2.0 / m);
  for (int k = 0; k < c; ++k) {
    for (int j = 0; j < m; ++j) {
      dct.forward(k, j) =
          k == 0 ? first
                 : rest * std::cos(std::numbers::pi * k * (j + 0.5) / m);
    }
  }
  dct.inverse = dct.forward.transpose();
  return dct;
}

MelFilterbank BuildMelFilterbank(const FeatureConfig &config) {
  config.Validate();
  const int m = config.num_mel_filters;
  const int fft_size = config.FftSize();
  const int num_bins = fft_size / 2 + 1;
  const double high = config.high_freq > 0.0 ? config.high_freq
                                              : config.sample_rate / 2.0;
  const double mel_low = HzToMel(config.low_freq), mel_high = HzToMel(high);
  const double spacing = (mel_high - mel_low) / (m + 1);

  MelFilterbank fb;
  fb.weights = Matrix::Zero(m, num_bins);
  for (int i = 0; i < m; ++i) {
    double left = mel_low + i * spacing, center = left + spacing,
           right = center + spacing;
    for (int k = 0; k < num_bins; ++k) {
      double mel = HzToMel(k * config.sample_rate / fft_size);
      if (mel > left && mel < right) {
        fb.weights(i, k) = mel <= center ? (mel - left) / (center - left)
                                         : (right - mel) / (right - center);
      }
    }
    if (fb.weights.row(i).maxCoeff() <= 0.0)
      Fail(ErrorKind::kInvalidConfiguration,
           "mel filter " + std::to_string(i) +
               " covers no DFT bin; use fewer filters or a longer frame");
  }
  return fb;
}

MfccComputer::MfccComputer(const FeatureConfig &config)
    : config_(config),
      dct_(BuildDctPair(config.num_cepstra, config.num_mel_filters)),
      filterbank_(BuildMelFilterbank(config)),
      fft_size_(config.FftSize()) {
  const int len = config_.FrameLengthSamples();
  window_.resize(len);
  for (int n = 0; n < len; ++n) {
    double phase = len > 1 ? 2.0 * std::numbers::pi * n / (len - 1) : 0.0;
    switch (config_.window) {
      case WindowType::kHamming: window_[n] = 0.54 - 0.46 * std::cos(phase); break;
      case WindowType::kHanning: window_[n] = 0.5 - 0.5 * std::cos(phase); break;
      case WindowType::kRectangular: window_[n] = 1.0; break;
    }
  }
  std::lock_guard<std::mutex> lock(PlannerMutex());
  fft_in_ = fftw_alloc_real(fft_size_);
  fft_out_ = fftw_alloc_complex(fft_size_ / 2 + 1);
  plan_ = fftw_plan_dft_r2c_1d(fft_size_, fft_in_,
                               static_cast<fftw_complex *>(fft_out_),
                               FFTW_ESTIMATE);
}

MfccComputer::~MfccComputer() {
  std::lock_guard<std::mutex> lock(PlannerMutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  fftw_free(fft_in_);
  fftw_free(fft_out_);
}

int MfccComputer::NumFrames(size_t num_samples) const {
  const size_t len = config_.FrameLengthSamples();
  if (num_samples < len) return 0;
  return static_cast<int>((num_samples - len) / config_.FrameShiftSamples()) + 1;
}

RowMatrix MfccComputer::Compute(std::span<const double> samples) {
  for (double s : samples)
    if (!std::isfinite(s))
      Fail(ErrorKind::kInvalidInput, "non-finite sample in waveform");
  const int num_frames = NumFrames(samples.size());
  if (num_frames == 0)
    Fail(ErrorKind::kEmptyInput, "signal shorter than one frame (" +
                                     std::to_string(samples.size()) +
                                     " samples)");
  const int len = config_.FrameLengthSamples();
  const int shift = config_.FrameShiftSamples();
  const int num_bins = fft_size_ / 2 + 1;
  auto *spectrum = static_cast<fftw_complex *>(fft_out_);

  RowMatrix out(num_frames, config_.num_cepstra);
  Vector power(num_bins), log_mel(config_.num_mel_filters);
  for (int t = 0; t < num_frames; ++t) {
    const double *frame = samples.data() + static_cast<size_t>(t) * shift;
    for (int n = 0; n < len; ++n) {
      double x = frame[n];
      if (config_.preemphasis)
        x -= config_.preemphasis_coeff * (n > 0 ? frame[n - 1] : frame[0]);
      fft_in_[n] = x * window_[n];
    }
    for (int n = len; n < fft_size_; ++n) fft_in_[n] = 0.0;
    fftw_execute(static_cast<fftw_plan>(plan_));
    for (int k = 0; k < num_bins; ++k)
      power[k] = spectrum[k][0] * spectrum[k][0] + spectrum[k][1] * spectrum[k][1];
    log_mel = filterbank_.weights * power;
    for (int i = 0; i < log_mel.size(); ++i)
      log_mel[i] = std::log(std::max(log_mel[i], config_.mel_floor));
    out.row(t) = (dct_.forward * log_mel).transpose();
  }
  return out;
}

RowMatrix ComputeStaticMfcc(std::span<const double> samples,
                            const FeatureConfig &config) {
  MfccComputer computer(config);
  return computer.Compute(samples);
}

RowMatrix ComputeDeltas(const RowMatrix &input,
                        const std::vector<double> &weights) {
  const int num_frames = static_cast<int>(input.rows());
  const int context = static_cast<int>(weights.size() - 1) / 2;
  RowMatrix out = RowMatrix::Zero(num_frames, input.cols());
  // Taps sum to zero, so differences against the centre frame give the
  // same value and make constant runs come out exactly zero.
  for (int t = 0; t < num_frames; ++t) {
    for (int k = 0; k < static_cast<int>(weights.size()); ++k) {
      if (weights[k] == 0.0) continue;
      int src = std::clamp(t - context + k, 0, num_frames - 1);
      out.row(t) += weights[k] * (input.row(src) - input.row(t));
    }
  }
  return out;
}

FeatureSequence AppendDynamics(const RowMatrix &static_cepstra,
                               const FeatureConfig &config) {
  config.Validate();
  if (static_cepstra.rows() < 1)
    Fail(ErrorKind::kEmptyInput, "no frames to append dynamics to");
  const int c = config.num_cepstra;
  if (static_cepstra.cols() != c)
    Fail(ErrorKind::kInvalidInput,
         "static matrix has " + std::to_string(static_cepstra.cols()) +
             " columns, config expects " + std::to_string(c));
  FeatureSequence seq;
  seq.config = config;
  seq.data.resize(static_cepstra.rows(), config.Dim());
  seq.data.leftCols(c) = static_cepstra;
  if (config.include_delta) {
    RowMatrix delta = ComputeDeltas(static_cepstra, config.delta_weights);
    seq.data.middleCols(c, c) = delta;
    if (config.include_accel)
      seq.data.middleCols(2 * c, c) = ComputeDeltas(delta, config.delta_weights);
  }
  return seq;
}

FeatureSequence ComputeFeatures(std::span<const double> samples,
                                const FeatureConfig &config) {
  return AppendDynamics(ComputeStaticMfcc(samples, config), config);
}

}  // namespace fasr
