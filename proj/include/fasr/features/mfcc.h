// features/mfcc.h

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

#ifndef FASR_FEATURES_MFCC_H_
#define FASR_FEATURES_MFCC_H_

#include <span>
#include <vector>

#include "fasr/base/math.h"
#include "fasr/features/feature-config.h"

namespace fasr {

/// Orthonormal type-II DCT rows 0..c-1 (forward) and its right inverse.
/// Because the rows are orthonormal the inverse is the transpose, so
/// forward * inverse = I_c and inverse * forward is a projection.
struct DctPair {
  Matrix forward;  // c x m
  Matrix inverse;  // m x c
};

DctPair BuildDctPair(int num_cepstra, int num_mel_filters);

/// Triangular mel filters over the non-negative DFT bins.
struct MelFilterbank {
  Matrix weights;  // m x (fft_size / 2 + 1)
};

MelFilterbank BuildMelFilterbank(const FeatureConfig &config);

/// Observation matrix with layout [static c | delta c | accel c] per row.
struct FeatureSequence {
  RowMatrix data;
  FeatureConfig config;

  int NumFrames() const { return static_cast<int>(data.rows()); }
  int Dim() const { return static_cast<int>(data.cols()); }
  std::span<const double> Frame(int t) const {
    return {data.row(t).data(), static_cast<size_t>(data.cols())};
  }
};

/// Computes static cepstra; reusable across utterances with one config.
/// Not safe to share one instance between threads (it owns scratch
/// buffers); construct one per thread instead.
class MfccComputer {
 public:
  explicit MfccComputer(const FeatureConfig &config);
  ~MfccComputer();
  MfccComputer(const MfccComputer &) = delete;
  MfccComputer &operator=(const MfccComputer &) = delete;

  int NumFrames(size_t num_samples) const;
  /// Returns a T x c matrix of static cepstra.
  RowMatrix Compute(std::span<const double> samples);

  const DctPair &dct() const { return dct_; }
  const MelFilterbank &filterbank() const { return filterbank_; }

 private:
  FeatureConfig config_;
  DctPair dct_;
  MelFilterbank filterbank_;
  std::vector<double> window_;
  int fft_size_;
  double *fft_in_ = nullptr;
  void *fft_out_ = nullptr;
  void *plan_ = nullptr;
};

RowMatrix ComputeStaticMfcc(std::span<const double> samples,
                            const FeatureConfig &config);

/// Appends delta and acceleration streams as enabled in `config`.
/// Edge frames are replicated.
FeatureSequence AppendDynamics(const RowMatrix &static_cepstra,
                               const FeatureConfig &config);

/// Applies the regression taps of `config` once, column by column.
RowMatrix ComputeDeltas(const RowMatrix &input,
                        const std::vector<double> &weights);

/// Convenience: static MFCCs followed by AppendDynamics.
FeatureSequence ComputeFeatures(std::span<const double> samples,
                                const FeatureConfig &config);

}  // namespace fasr

#endif  // FASR_FEATURES_MFCC_H_
