// models/gmm-hmm.h

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

#ifndef FASR_MODELS_GMM_HMM_H_
#define FASR_MODELS_GMM_HMM_H_

#include <map>
#include <string>
#include <vector>

#include "fasr/base/math.h"
#include "fasr/features/feature-config.h"

namespace fasr {

struct GaussianComponent {
  Vector mean;
  Vector variance;  // diagonal
  double log_weight = 0.0;

  int Dim() const { return static_cast<int>(mean.size()); }
  bool operator==(const GaussianComponent &o) const {
    return mean == o.mean && variance == o.variance && log_weight == o.log_weight;
  }
};

using Gmm = std::vector<GaussianComponent>;

/// Diagonal Gaussian log density.
double DiagGaussianLogDensity(const GaussianComponent &g,
                              std::span<const double> x);
/// log sum_m w_m N(x; mu_m, sigma_m).
double GmmLogLikelihood(const Gmm &gmm, std::span<const double> x);

/// Left-to-right HMM with GMM emissions.  Row i of the transition matrix
/// together with the exit probability of state i forms a distribution, so a
/// model embedded in a phoneme sequence can leave through any state whose
/// exit probability is nonzero.  A model used stand-alone simply has zero
/// exit mass.
struct GmmHmm {
  std::string name;
  Matrix log_transitions;  // N x N
  Vector log_exit;         // N
  Vector log_priors;       // N
  std::vector<Gmm> states;

  int NumStates() const { return static_cast<int>(states.size()); }
  int Dim() const;
  int MaxComponents() const;

  /// Throws Error(kLoad) naming this model and the offending field.
  void Validate() const;

  bool operator==(const GmmHmm &o) const {
    return name == o.name && log_transitions == o.log_transitions &&
           log_exit == o.log_exit && log_priors == o.log_priors &&
           states == o.states;
  }
};

struct SpeakerModels {
  std::string id;
  std::map<std::string, GmmHmm> phonemes;
  // Flat mixture over the static stream, used for frame-level speaker scores.
  Gmm frame_gmm;
};

struct SpeakerModelSet {
  FeatureConfig feature_config;
  std::map<std::string, SpeakerModels> speakers;

  const SpeakerModels &Speaker(const std::string &id) const;
  std::vector<std::string> SpeakerIds() const;
  void Validate() const;
};

}  // namespace fasr

#endif  // FASR_MODELS_GMM_HMM_H_
