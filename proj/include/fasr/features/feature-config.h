// features/feature-config.h

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

#ifndef FASR_FEATURES_FEATURE_CONFIG_H_
#define FASR_FEATURES_FEATURE_CONFIG_H_

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fasr {

enum class WindowType { kHamming, kHanning, kRectangular };

const char *WindowTypeName(WindowType w);
WindowType ParseWindowType(const std::string &name);

/// Front-end configuration shared by feature extraction, the acoustic models
/// and the interaction model.  Every model set carries one of these, and
/// features are only comparable with models built for the same config.
struct FeatureConfig {
  double sample_rate = 16000.0;
  double frame_length_ms = 25.0;
  double frame_shift_ms = 10.0;
  int num_mel_filters = 27;
  int num_cepstra = 13;
  bool include_delta = true;
  bool include_accel = true;
  // Regression taps in time order: delta[t] = sum_k w[k] * x[t - K + k],
  // K = (size - 1) / 2.  Must sum to zero.
  std::vector<double> delta_weights = {-0.25, -0.5, 0.0, 0.5, 0.25};
  double mel_floor = 1e-10;
  WindowType window = WindowType::kHamming;
  bool preemphasis = false;
  double preemphasis_coeff = 0.97;
  double low_freq = 0.0;
  double high_freq = 0.0;  // <= 0 means Nyquist.

  /// Throws Error(kInvalidConfiguration) on any violated invariant.
  void Validate() const;

  int FrameLengthSamples() const;
  int FrameShiftSamples() const;
  int FftSize() const;
  int NumStreams() const { return 1 + include_delta + include_accel; }
  int Dim() const { return num_cepstra * NumStreams(); }
  int DeltaContext() const {
    return static_cast<int>(delta_weights.size() - 1) / 2;
  }

  bool operator==(const FeatureConfig &other) const = default;
};

void to_json(nlohmann::json &j, const FeatureConfig &c);
void from_json(const nlohmann::json &j, FeatureConfig &c);

}  // namespace fasr

#endif  // FASR_FEATURES_FEATURE_CONFIG_H_
