// models/synth.cc

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

#include "fasr/models/synth.h"

#include <cmath>

#include "fasr/base/error.h"

namespace fasr {

namespace {

int DrawIndex(std::mt19937_64 &rng, const std::vector<double> &probs) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double r = u(rng), acc = 0.0;
  int last_positive = -1;
  for (size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last_positive = static_cast<int>(i);
    acc += probs[i];
    if (r < acc) return static_cast<int>(i);
  }
  return last_positive;
}

}  // namespace

GmmHmm SynthesizeRandomModel(int num_states, int num_components, int dim,
                             double separation, uint64_t seed,
                             const SynthesisOptions &opts) {
  if (num_states < 1 || num_components < 1 || dim < 1)
    Fail(ErrorKind::kInvalidConfiguration, "synthetic model needs N, M, D >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  GmmHmm hmm;
  hmm.name = "synth" + std::to_string(seed);
  const int n = num_states;
  hmm.log_transitions = Matrix::Constant(n, n, kLogZero);
  hmm.log_exit = Vector::Constant(n, kLogZero);
  for (int i = 0; i < n; ++i) {
    double self = opts.self_loop_min +
                  (opts.self_loop_max - opts.self_loop_min) * uniform(rng);
    if (i == n - 1) {
      if (opts.final_exit) {
        hmm.log_transitions(i, i) = std::log(self);
        hmm.log_exit[i] = std::log1p(-self);
      } else {
        hmm.log_transitions(i, i) = 0.0;
      }
      continue;
    }
    double forward = 1.0 - self;
    hmm.log_transitions(i, i) = std::log(self);
    if (opts.skip_fraction > 0.0 && i + 2 < n) {
      hmm.log_transitions(i, i + 1) = std::log(forward * (1.0 - opts.skip_fraction));
      hmm.log_transitions(i, i + 2) = std::log(forward * opts.skip_fraction);
    } else {
      hmm.log_transitions(i, i + 1) = std::log(forward);
    }
  }
  hmm.log_priors = Vector::Constant(n, kLogZero);
  if (opts.random_priors) {
    std::vector<double> w(n);
    double total = 0.0;
    for (auto &x : w) total += (x = -std::log(1.0 - uniform(rng)));
    for (int i = 0; i < n; ++i) hmm.log_priors[i] = std::log(w[i] / total);
  } else {
    hmm.log_priors[0] = 0.0;
  }

  Vector direction(dim), base(dim);
  for (int d = 0; d < dim; ++d) {
    direction[d] = normal(rng);
    base[d] = normal(rng);
  }
  if (direction.norm() == 0.0) direction[0] = 1.0;
  direction.normalize();

  for (int i = 0; i < n; ++i) {
    Vector center = base + i * separation * direction;
    std::vector<double> weights(num_components);
    double total = 0.0;
    for (auto &w : weights) total += (w = 0.5 + uniform(rng));
    Gmm gmm(num_components);
    Vector mean_offset = Vector::Zero(dim);
    for (int m = 0; m < num_components; ++m) {
      weights[m] /= total;
      gmm[m].log_weight = std::log(weights[m]);
      gmm[m].mean.resize(dim);
      gmm[m].variance.resize(dim);
      for (int d = 0; d < dim; ++d) {
        gmm[m].mean[d] = num_components > 1 ? opts.component_spread * normal(rng) : 0.0;
        gmm[m].variance[d] = opts.variance_min +
                             (opts.variance_max - opts.variance_min) * uniform(rng);
      }
      mean_offset += weights[m] * gmm[m].mean;
    }
    // Centre the components so the weighted state mean is exactly `center`.
    for (int m = 0; m < num_components; ++m) gmm[m].mean += center - mean_offset;
    hmm.states.push_back(std::move(gmm));
  }
  hmm.Validate();
  return hmm;
}

Vector SampleGmm(const Gmm &gmm, std::mt19937_64 &rng, int num_dims) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> w(gmm.size());
  for (size_t m = 0; m < gmm.size(); ++m) w[m] = std::exp(gmm[m].log_weight);
  const GaussianComponent &g = gmm[DrawIndex(rng, w)];
  const int dim = num_dims < 0 ? g.Dim() : num_dims;
  Vector x(dim);
  for (int d = 0; d < dim; ++d) x[d] = g.mean[d] + std::sqrt(g.variance[d]) * normal(rng);
  return x;
}

SampledPath SampleFeaturePath(const GmmHmm &model, int max_frames,
                              std::mt19937_64 &rng, int num_dims) {
  const int n = model.NumStates();
  const int dim = num_dims < 0 ? model.Dim() : num_dims;
  SampledPath path;
  std::vector<Vector> frames;
  std::vector<double> probs(n + 1);
  for (int i = 0; i < n; ++i) probs[i] = std::exp(model.log_priors[i]);
  probs[n] = 0.0;
  int state = DrawIndex(rng, probs);
  while (static_cast<int>(path.states.size()) < max_frames) {
    path.states.push_back(state);
    frames.push_back(SampleGmm(model.states[state], rng, dim));
    for (int j = 0; j < n; ++j) probs[j] = std::exp(model.log_transitions(state, j));
    probs[n] = std::exp(model.log_exit[state]);
    int next = DrawIndex(rng, probs);
    if (next == n || next < 0) break;
    state = next;
  }
  path.frames.resize(static_cast<int>(frames.size()), dim);
  for (size_t t = 0; t < frames.size(); ++t) path.frames.row(t) = frames[t].transpose();
  return path;
}

SampledPath SampleFeaturePath(const GmmHmm &model, int max_frames, uint64_t seed,
                              int num_dims) {
  std::mt19937_64 rng(seed);
  return SampleFeaturePath(model, max_frames, rng, num_dims);
}

Vector ExpectedOccupancy(const GmmHmm &model, int max_frames) {
  const int n = model.NumStates();
  Vector dist(n), occ = Vector::Zero(n);
  for (int i = 0; i < n; ++i) dist[i] = std::exp(model.log_priors[i]);
  Matrix trans = model.log_transitions.array().exp().matrix();
  for (int t = 0; t < max_frames; ++t) {
    occ += dist;
    dist = (dist.transpose() * trans).transpose();
  }
  return occ;
}

}  // namespace fasr
