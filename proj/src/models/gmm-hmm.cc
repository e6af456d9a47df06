// models/gmm-hmm.cc

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

#include "fasr/models/gmm-hmm.h"

#include <cmath>
#include <string>

#include "fasr/base/error.h"

namespace fasr {

namespace {

constexpr double kStochasticTol = 1e-9;

[[noreturn]] void Bad(const std::string &model, const std::string &field,
                      const std::string &why) {
  Fail(ErrorKind::kLoad, "model '" + model + "', field '" + field + "': " + why);
}

void ValidateGmm(const Gmm &gmm, int dim, const std::string &model,
                 const std::string &field) {
  if (gmm.empty()) Bad(model, field, "no mixture components");
  double total = 0.0;
  for (size_t m = 0; m < gmm.size(); ++m) {
    const auto &g = gmm[m];
    const std::string where = field + "[" + std::to_string(m) + "]";
    if (g.mean.size() != dim || g.variance.size() != dim)
      Bad(model, where, "dimension mismatch (expected " + std::to_string(dim) + ")");
    if (!g.mean.allFinite()) Bad(model, where + ".mean", "non-finite value");
    for (int d = 0; d < dim; ++d)
      if (!(g.variance[d] > 0.0) || !std::isfinite(g.variance[d]))
        Bad(model, where + ".variance", "nonpositive variance");
    double w = std::exp(g.log_weight);
    if (!(w > 0.0) || w > 1.0 + kStochasticTol)
      Bad(model, where + ".weight", "weight outside (0, 1]");
    total += w;
  }
  if (std::abs(total - 1.0) > kStochasticTol)
    Bad(model, field, "component weights sum to " + std::to_string(total));
}

}  // namespace

double DiagGaussianLogDensity(const GaussianComponent &g,
                              std::span<const double> x) {
  double acc = 0.0;
  for (int d = 0; d < g.Dim(); ++d) {
    double diff = x[d] - g.mean[d];
    acc += std::log(g.variance[d]) + diff * diff / g.variance[d];
  }
  return -0.5 * (g.Dim() * kLog2Pi + acc);
}

double GmmLogLikelihood(const Gmm &gmm, std::span<const double> x) {
  double total = kLogZero;
  for (const auto &g : gmm)
    total = LogAdd(total, g.log_weight + DiagGaussianLogDensity(g, x));
  return total;
}

int GmmHmm::Dim() const {
  if (states.empty() || states[0].empty()) return 0;
  return states[0][0].Dim();
}

int GmmHmm::MaxComponents() const {
  size_t m = 0;
  for (const auto &s : states) m = std::max(m, s.size());
  return static_cast<int>(m);
}

void GmmHmm::Validate() const {
  const int n = NumStates();
  if (n < 1) Bad(name, "states", "model has no states");
  if (log_transitions.rows() != n || log_transitions.cols() != n)
    Bad(name, "transitions", "must be " + std::to_string(n) + "x" + std::to_string(n));
  if (log_priors.size() != n) Bad(name, "priors", "wrong length");
  if (log_exit.size() != n) Bad(name, "exit", "wrong length");
  for (int i = 0; i < n; ++i) {
    double row = std::exp(log_exit[i]);
    for (int j = 0; j < n; ++j) {
      double p = std::exp(log_transitions(i, j));
      if (std::isnan(p)) Bad(name, "transitions", "NaN entry");
      if (j < i && p > 0.0)
        Bad(name, "transitions", "backward transition " + std::to_string(i) +
                                      "->" + std::to_string(j) +
                                      " violates left-to-right topology");
      row += p;
    }
    if (std::abs(row - 1.0) > kStochasticTol)
      Bad(name, "transitions", "non-stochastic row " + std::to_string(i) +
                                    " (sums to " + std::to_string(row) + ")");
  }
  double prior_total = 0.0;
  for (int i = 0; i < n; ++i) prior_total += std::exp(log_priors[i]);
  if (std::abs(prior_total - 1.0) > kStochasticTol)
    Bad(name, "priors", "priors sum to " + std::to_string(prior_total));
  const int dim = Dim();
  if (dim < 1) Bad(name, "states", "zero-dimensional emissions");
  for (int i = 0; i < n; ++i)
    ValidateGmm(states[i], dim, name, "states[" + std::to_string(i) + "]");
}

const SpeakerModels &SpeakerModelSet::Speaker(const std::string &id) const {
  auto it = speakers.find(id);
  if (it == speakers.end())
    Fail(ErrorKind::kInvalidInput, "unknown speaker '" + id + "'");
  return it->second;
}

std::vector<std::string> SpeakerModelSet::SpeakerIds() const {
  std::vector<std::string> ids;
  for (const auto &[id, _] : speakers) ids.push_back(id);
  return ids;
}

void SpeakerModelSet::Validate() const {
  feature_config.Validate();
  const int dim = feature_config.Dim();
  for (const auto &[id, spk] : speakers) {
    for (const auto &[label, hmm] : spk.phonemes) {
      hmm.Validate();
      if (hmm.Dim() != dim)
        Bad(id + "/" + label, "states", "dimension " + std::to_string(hmm.Dim()) +
                                            " differs from feature config " +
                                            std::to_string(dim));
    }
    if (!spk.frame_gmm.empty())
      ValidateGmm(spk.frame_gmm, feature_config.num_cepstra, id, "frame_gmm");
  }
}

}  // namespace fasr
