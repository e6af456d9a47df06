// viterbi/factorial-viterbi.cc

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

#include "fasr/viterbi/factorial-viterbi.h"

#include <cmath>
#include <string>

#include "fasr/base/error.h"

namespace fasr {

ChainTopology ChainTopology::FromHmm(const GmmHmm &hmm, bool use_exit_weights) {
  ChainTopology c;
  c.log_transitions = hmm.log_transitions;
  c.log_priors = hmm.log_priors;
  c.log_final = use_exit_weights ? hmm.log_exit : Vector::Zero(hmm.NumStates());
  return c;
}

JointStatePath TwoDimensionalViterbi(const ChainTopology &a, const ChainTopology &b,
                                     int num_frames, const JointFrameScore &score,
                                     ViterbiStats *stats, ViterbiTrace *trace) {
  if (num_frames < 1) Fail(ErrorKind::kEmptyInput, "no frames to decode");
  const int na = a.NumStates(), nb = b.NumStates();
  using IndexMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;
  std::vector<IndexMatrix> psi_b(num_frames - 1), psi_a(num_frames - 1);

  Matrix tau(na, nb), tau_b(na, nb);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) tau(i, j) = a.log_priors[i] + b.log_priors[j];

  for (int t = 0; t < num_frames; ++t) {
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < nb; ++j)
        if (tau(i, j) != kLogZero) tau(i, j) += score(t, i, j);
    if (stats) stats->acoustic_evaluations += static_cast<uint64_t>(na) * nb;
    if (trace) trace->after_acoustic.push_back(tau);
    if (t == num_frames - 1) break;

    // Chain b: tau_b(i, j') = max_j tau(i, j) + log p(j' | j).
    IndexMatrix &pb = psi_b[t];
    pb.resize(na, nb);
    for (int i = 0; i < na; ++i) {
      for (int jn = 0; jn < nb; ++jn) {
        double best = kLogZero;
        int arg = 0;
        for (int j = 0; j < nb; ++j) {
          double v = tau(i, j) + b.log_transitions(j, jn);
          if (v > best) {
            best = v;
            arg = j;
          }
        }
        tau_b(i, jn) = best;
        pb(i, jn) = arg;
      }
    }
    // Chain a: tau(i', j') = max_i tau_b(i, j') + log p(i' | i).
    IndexMatrix &pa = psi_a[t];
    pa.resize(na, nb);
    for (int in = 0; in < na; ++in) {
      for (int jn = 0; jn < nb; ++jn) {
        double best = kLogZero;
        int arg = 0;
        for (int i = 0; i < na; ++i) {
          double v = tau_b(i, jn) + a.log_transitions(i, in);
          if (v > best) {
            best = v;
            arg = i;
          }
        }
        tau(in, jn) = best;
        pa(in, jn) = arg;
      }
    }
    if (stats) {
      stats->chain_b_candidates += static_cast<uint64_t>(na) * nb * nb;
      stats->chain_a_candidates += static_cast<uint64_t>(na) * na * nb;
    }
    if (trace) {
      trace->tau_b.push_back(tau_b);
      trace->tau_a.push_back(tau);
    }
  }

  JointStatePath path;
  int best_i = 0, best_j = 0;
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      double v = tau(i, j) + a.log_final[i] + b.log_final[j];
      if (v > path.log_score) {
        path.log_score = v;
        best_i = i;
        best_j = j;
      }
    }
  }
  if (path.log_score == kLogZero || std::isnan(path.log_score))
    Fail(ErrorKind::kInfeasible, "no joint state path has finite score");
  path.states_a.resize(num_frames);
  path.states_b.resize(num_frames);
  path.states_a[num_frames - 1] = best_i;
  path.states_b[num_frames - 1] = best_j;
  for (int t = num_frames - 2; t >= 0; --t) {
    int i = psi_a[t](best_i, best_j);
    int j = psi_b[t](i, best_j);
    path.states_a[t] = best_i = i;
    path.states_b[t] = best_j = j;
  }
  return path;
}

double JointPathScore(const ChainTopology &a, const ChainTopology &b,
                      const std::vector<int> &states_a,
                      const std::vector<int> &states_b, const JointFrameScore &score) {
  const int T = static_cast<int>(states_a.size());
  double total = a.log_priors[states_a[0]] + b.log_priors[states_b[0]];
  for (int t = 0; t < T; ++t) {
    if (t > 0)
      total += a.log_transitions(states_a[t - 1], states_a[t]) +
               b.log_transitions(states_b[t - 1], states_b[t]);
    total += score(t, states_a[t], states_b[t]);
  }
  return total + a.log_final[states_a[T - 1]] + b.log_final[states_b[T - 1]];
}

JointStatePath ExhaustiveJointViterbi(const ChainTopology &a, const ChainTopology &b,
                                      int num_frames, const JointFrameScore &score) {
  if (num_frames < 1) Fail(ErrorKind::kEmptyInput, "no frames to decode");
  const int na = a.NumStates(), nb = b.NumStates();
  if (std::pow(static_cast<double>(na) * nb, num_frames) > kExhaustiveGuard)
    Fail(ErrorKind::kRefused, "exhaustive search over (" + std::to_string(na * nb) +
                                  ")^" + std::to_string(num_frames) +
                                  " joint sequences exceeds the guard");
  // Likelihoods are looked up once per (t, i, j).
  std::vector<Matrix> table(num_frames, Matrix(na, nb));
  for (int t = 0; t < num_frames; ++t)
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < nb; ++j) table[t](i, j) = score(t, i, j);

  JointStatePath best;
  std::vector<int> sa(num_frames), sb(num_frames);
  // Depth-first in lexicographic order of ((a_1, b_1), (a_2, b_2), ...).
  // Branches already at -inf cannot beat a finite maximum and are skipped.
  auto recurse = [&](auto &&self, int t, double prefix) -> void {
    for (int i = 0; i < na; ++i) {
      for (int j = 0; j < nb; ++j) {
        double v = t == 0 ? a.log_priors[i] + b.log_priors[j]
                          : prefix + a.log_transitions(sa[t - 1], i) +
                                b.log_transitions(sb[t - 1], j);
        v += table[t](i, j);
        if (v == kLogZero) continue;
        sa[t] = i;
        sb[t] = j;
        if (t + 1 == num_frames) {
          double total = v + a.log_final[i] + b.log_final[j];
          if (total > best.log_score) {
            best.log_score = total;
            best.states_a = sa;
            best.states_b = sb;
          }
        } else {
          self(self, t + 1, v);
        }
      }
    }
  };
  recurse(recurse, 0, 0.0);
  if (best.log_score == kLogZero)
    Fail(ErrorKind::kInfeasible, "no joint state path has finite score");
  return best;
}

std::vector<Matrix> JointLikelihoodTable(const GmmHmm &hmm_a, const GmmHmm &hmm_b,
                                         const FeatureSequence &features,
                                         const InteractionConfig &interaction,
                                         CompensationCache *cache) {
  auto src_a = SourceModel::FromHmm(hmm_a, features.config);
  auto src_b = SourceModel::FromHmm(hmm_b, features.config);
  JointScorer scorer(src_a, src_b, interaction, cache);
  std::vector<Matrix> table(features.NumFrames(),
                            Matrix(hmm_a.NumStates(), hmm_b.NumStates()));
  for (int t = 0; t < features.NumFrames(); ++t) {
    scorer.SetFrame(features.Frame(t));
    for (int i = 0; i < hmm_a.NumStates(); ++i)
      for (int j = 0; j < hmm_b.NumStates(); ++j) table[t](i, j) = scorer.Score(i, j);
  }
  return table;
}

namespace {

void CheckDims(const GmmHmm &hmm_a, const GmmHmm &hmm_b, const FeatureSequence &f) {
  if (hmm_a.Dim() != f.Dim() || hmm_b.Dim() != f.Dim())
    Fail(ErrorKind::kInvalidInput, "models (" + std::to_string(hmm_a.Dim()) + ", " +
                                       std::to_string(hmm_b.Dim()) +
                                       ") and features (" + std::to_string(f.Dim()) +
                                       ") disagree on dimension");
}

}  // namespace

JointStatePath TwoDimensionalViterbi(const GmmHmm &hmm_a, const GmmHmm &hmm_b,
                                     const FeatureSequence &features,
                                     const InteractionConfig &interaction,
                                     const FactorialViterbiOptions &opts,
                                     CompensationCache *cache, ViterbiStats *stats,
                                     ViterbiTrace *trace) {
  CheckDims(hmm_a, hmm_b, features);
  auto table = JointLikelihoodTable(hmm_a, hmm_b, features, interaction, cache);
  return TwoDimensionalViterbi(
      ChainTopology::FromHmm(hmm_a, opts.use_exit_weights),
      ChainTopology::FromHmm(hmm_b, opts.use_exit_weights), features.NumFrames(),
      [&](int t, int i, int j) { return table[t](i, j); }, stats, trace);
}

JointStatePath ExhaustiveJointViterbi(const GmmHmm &hmm_a, const GmmHmm &hmm_b,
                                      const FeatureSequence &features,
                                      const InteractionConfig &interaction,
                                      const FactorialViterbiOptions &opts,
                                      CompensationCache *cache) {
  CheckDims(hmm_a, hmm_b, features);
  const double count = std::pow(static_cast<double>(hmm_a.NumStates()) * hmm_b.NumStates(),
                                features.NumFrames());
  if (count > kExhaustiveGuard)
    Fail(ErrorKind::kRefused, "exhaustive search exceeds the guard");
  auto table = JointLikelihoodTable(hmm_a, hmm_b, features, interaction, cache);
  return ExhaustiveJointViterbi(
      ChainTopology::FromHmm(hmm_a, opts.use_exit_weights),
      ChainTopology::FromHmm(hmm_b, opts.use_exit_weights), features.NumFrames(),
      [&](int t, int i, int j) { return table[t](i, j); });
}

}  // namespace fasr
