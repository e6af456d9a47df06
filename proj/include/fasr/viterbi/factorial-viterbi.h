// viterbi/factorial-viterbi.h

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

#ifndef FASR_VITERBI_FACTORIAL_VITERBI_H_
#define FASR_VITERBI_FACTORIAL_VITERBI_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "fasr/base/math.h"
#include "fasr/models/gmm-hmm.h"
#include "fasr/vts/joint-scorer.h"

namespace fasr {

/// Markov chain of one source, in the log domain.
struct ChainTopology {
  Matrix log_transitions;
  Vector log_priors;
  // Added to the score of the final frame's state; zeros mean the path may
  // end anywhere.
  Vector log_final;

  int NumStates() const { return static_cast<int>(log_priors.size()); }
  /// Uses the model's exit probabilities as final weights when requested.
  static ChainTopology FromHmm(const GmmHmm &hmm, bool use_exit_weights);
};

struct JointStatePath {
  std::vector<int> states_a;
  std::vector<int> states_b;
  double log_score = kLogZero;
};

/// log p(y_t | s_a, s_b) for a frame t.
using JointFrameScore = std::function<double(int t, int state_a, int state_b)>;

struct ViterbiStats {
  uint64_t chain_b_candidates = 0;  // work in the chain-b expansions
  uint64_t chain_a_candidates = 0;  // work in the chain-a expansions
  uint64_t acoustic_evaluations = 0;
};

/// Per-frame factors for debugging tiny instances.
struct ViterbiTrace {
  std::vector<Matrix> after_acoustic;  // tau including frame t likelihood
  std::vector<Matrix> tau_b;           // after chain-b expansion
  std::vector<Matrix> tau_a;           // after chain-a expansion
};

/// Exact max-product inference over the two-chain factorial model.  Each
/// frame adds the joint likelihood, expands chain b (max over the previous
/// b state), then chain a (max over the previous a state).  Ties go to the
/// lowest state index.  Throws Error(kInfeasible) if no path has finite
/// score.
JointStatePath TwoDimensionalViterbi(const ChainTopology &a, const ChainTopology &b,
                                     int num_frames, const JointFrameScore &score,
                                     ViterbiStats *stats = nullptr,
                                     ViterbiTrace *trace = nullptr);

/// Largest (N_a N_b)^T the exhaustive search will accept.
inline constexpr double kExhaustiveGuard = 1e7;

/// Enumerates joint state sequences in lexicographic order and keeps the
/// first strict maximum.  Throws Error(kRefused) above kExhaustiveGuard.
JointStatePath ExhaustiveJointViterbi(const ChainTopology &a, const ChainTopology &b,
                                      int num_frames, const JointFrameScore &score);

/// Score of a given joint path under the same definition.
double JointPathScore(const ChainTopology &a, const ChainTopology &b,
                      const std::vector<int> &states_a,
                      const std::vector<int> &states_b, const JointFrameScore &score);

struct FactorialViterbiOptions {
  bool use_exit_weights = false;
};

/// Model-level entry points: likelihoods come from VTS compensation of the
/// two HMMs' state GMMs (component max or log-sum per `interaction`).
JointStatePath TwoDimensionalViterbi(const GmmHmm &hmm_a, const GmmHmm &hmm_b,
                                     const FeatureSequence &features,
                                     const InteractionConfig &interaction,
                                     const FactorialViterbiOptions &opts = {},
                                     CompensationCache *cache = nullptr,
                                     ViterbiStats *stats = nullptr,
                                     ViterbiTrace *trace = nullptr);

JointStatePath ExhaustiveJointViterbi(const GmmHmm &hmm_a, const GmmHmm &hmm_b,
                                      const FeatureSequence &features,
                                      const InteractionConfig &interaction,
                                      const FactorialViterbiOptions &opts = {},
                                      CompensationCache *cache = nullptr);

/// Precomputes the T x (N_a N_b) likelihood table for a model pair.
std::vector<Matrix> JointLikelihoodTable(const GmmHmm &hmm_a, const GmmHmm &hmm_b,
                                         const FeatureSequence &features,
                                         const InteractionConfig &interaction,
                                         CompensationCache *cache = nullptr);

}  // namespace fasr

#endif  // FASR_VITERBI_FACTORIAL_VITERBI_H_
