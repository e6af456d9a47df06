// features/feature-config.cc

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

#include "fasr/features/feature-config.h"

#include <cmath>
#include <numeric>

#include "fasr/base/error.h"

namespace fasr {

const char *WindowTypeName(WindowType w) {
  switch (w) {
    case WindowType::kHamming: return "hamming";
    case WindowType::kHanning: return "hanning";
    case WindowType::kRectangular: return "rectangular";
  }
  return "hamming";
}

WindowType ParseWindowType(const std::string &name) {
  if (name == "hamming") return WindowType::kHamming;
  if (name == "hanning") return WindowType::kHanning;
  if (name == "rectangular") return WindowType::kRectangular;
  Fail(ErrorKind::kInvalidConfiguration, "unknown window type '" + name + "'");
}

void FeatureConfig::Validate() const {
  auto bad = [](const std::string &what) {
    Fail(ErrorKind::kInvalidConfiguration, "feature config: " + what);
  };
  if (!(sample_rate > 0.0)) bad("sample_rate must be positive");
  if (!(frame_shift_ms > 0.0)) bad("frame_shift_ms must be positive");
  if (!(frame_length_ms > frame_shift_ms))
    bad("frame_length_ms must exceed frame_shift_ms");
  if (FrameShiftSamples() < 1) bad("frame shift shorter than one sample");
  if (num_mel_filters < 1) bad("num_mel_filters must be >= 1");
  if (num_cepstra < 1 || num_cepstra > num_mel_filters)
    bad("num_cepstra must satisfy 1 <= c <= num_mel_filters");
  if (!(mel_floor > 0.0)) bad("mel_floor must be positive");
  if (include_accel && !include_delta)
    bad("acceleration requires delta coefficients");
  if (include_delta) {
    if (delta_weights.empty() || delta_weights.size() % 2 == 0)
      bad("delta_weights must have an odd number of taps");
    double sum = std::accumulate(delta_weights.begin(), delta_weights.end(), 0.0);
    if (std::abs(sum) > 1e-12) bad("delta_weights must sum to 0");
  }
  double nyquist = sample_rate / 2.0;
  double high = high_freq > 0.0 ? high_freq : nyquist;
  if (low_freq < 0.0 || high > nyquist || low_freq >= high)
    bad("frequency range must satisfy 0 <= low < high <= nyquist");
}

int FeatureConfig::FrameLengthSamples() const {
  return static_cast<int>(std::lround(sample_rate * frame_length_ms / 1000.0));
}

int FeatureConfig::FrameShiftSamples() const {
  return static_cast<int>(std::lround(sample_rate * frame_shift_ms / 1000.0));
}

int FeatureConfig::FftSize() const {
  int n = 1;
  while (n < FrameLengthSamples()) n <<= 1;
  return n;
}

void to_json(nlohmann::json &j, const FeatureConfig &c) {
  j = nlohmann::json{{"sample_rate", c.sample_rate},
                     {"frame_length_ms", c.frame_length_ms},
                     {"frame_shift_ms", c.frame_shift_ms},
                     {"num_mel_filters", c.num_mel_filters},
                     {"num_cepstra", c.num_cepstra},
                     {"include_delta", c.include_delta},
                     {"include_accel", c.include_accel},
                     {"delta_weights", c.delta_weights},
                     {"mel_floor", c.mel_floor},
                     {"window", WindowTypeName(c.window)},
                     {"preemphasis", c.preemphasis},
                     {"preemphasis_coeff", c.preemphasis_coeff},
                     {"low_freq", c.low_freq},
                     {"high_freq", c.high_freq}};
}

void from_json(const nlohmann::json &j, FeatureConfig &c) {
  FeatureConfig d;
  c.sample_rate = j.value("sample_rate", d.sample_rate);
  c.frame_length_ms = j.value("frame_length_ms", d.frame_length_ms);
  c.frame_shift_ms = j.value("frame_shift_ms", d.frame_shift_ms);
  c.num_mel_filters = j.value("num_mel_filters", d.num_mel_filters);
  c.num_cepstra = j.value("num_cepstra", d.num_cepstra);
  c.include_delta = j.value("include_delta", d.include_delta);
  c.include_accel = j.value("include_accel", d.include_accel);
  c.delta_weights = j.value("delta_weights", d.delta_weights);
  c.mel_floor = j.value("mel_floor", d.mel_floor);
  c.window = ParseWindowType(j.value("window", std::string("hamming")));
  c.preemphasis = j.value("preemphasis", d.preemphasis);
  c.preemphasis_coeff = j.value("preemphasis_coeff", d.preemphasis_coeff);
  c.low_freq = j.value("low_freq", d.low_freq);
  c.high_freq = j.value("high_freq", d.high_freq);
}

}  // namespace fasr
