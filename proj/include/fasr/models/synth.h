// models/synth.h

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

#ifndef FASR_MODELS_SYNTH_H_
#define FASR_MODELS_SYNTH_H_

#include <cstdint>
#include <random>
#include <vector>

#include "fasr/models/gmm-hmm.h"

namespace fasr {

struct SynthesisOptions {
  double self_loop_min = 0.5;
  double self_loop_max = 0.9;
  // Share of the forward mass that jumps over the next state.
  double skip_fraction = 0.0;
  // When set, the last state leaves the model with mass 1 - self loop;
  // otherwise its self loop is 1.
  bool final_exit = false;
  bool random_priors = false;
  double variance_min = 1.0;
  double variance_max = 1.0;
  // Standard deviation of component means around their state mean.
  double component_spread = 1.0;
};

/// Random valid left-to-right model.  State means (weighted component
/// means) lie on a line, consecutive states `separation` apart.
GmmHmm SynthesizeRandomModel(int num_states, int num_components, int dim,
                             double separation, uint64_t seed,
                             const SynthesisOptions &opts = {});

struct SampledPath {
  std::vector<int> states;
  RowMatrix frames;
};

/// One draw from a diagonal GMM, first `num_dims` dimensions (all when < 0).
Vector SampleGmm(const Gmm &gmm, std::mt19937_64 &rng, int num_dims = -1);

/// Draws a state path from priors and transitions, stopping when the exit
/// transition is drawn or after max_frames, and one frame per state from
/// the first `num_dims` dimensions of the state GMM (all when < 0).
SampledPath SampleFeaturePath(const GmmHmm &model, int max_frames,
                              std::mt19937_64 &rng, int num_dims = -1);
SampledPath SampleFeaturePath(const GmmHmm &model, int max_frames,
                              uint64_t seed, int num_dims = -1);

/// Expected number of frames spent in each state over paths of at most
/// max_frames, computed by propagating the chain distribution.
Vector ExpectedOccupancy(const GmmHmm &model, int max_frames);

}  // namespace fasr

#endif  // FASR_MODELS_SYNTH_H_
