// tests/instances.h

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

#ifndef FASR_TESTS_INSTANCES_H_
#define FASR_TESTS_INSTANCES_H_

#include <cmath>
#include <random>

#include "fasr/models/synth.h"
#include "fasr/viterbi/factorial-viterbi.h"

namespace fasr::testing {

/// Two small random models and a feature sequence drawn near their mixture.
struct ViterbiInstance {
  GmmHmm a, b;
  FeatureSequence features;
};

inline FeatureConfig StaticConfig(int num_cepstra, int num_filters) {
  FeatureConfig fc;
  fc.num_cepstra = num_cepstra;
  fc.num_mel_filters = num_filters;
  fc.include_delta = false;
  fc.include_accel = false;
  return fc;
}

inline ViterbiInstance RandomViterbiInstance(uint64_t seed, int max_states = 4,
                                             int max_components = 2, int max_frames = 6,
                                             int dim = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> ns(1, max_states), nm(1, max_components),
      nt(1, max_frames);
  SynthesisOptions opts;
  opts.random_priors = true;
  opts.skip_fraction = 0.3;
  opts.variance_min = 0.3;
  opts.variance_max = 1.5;
  opts.component_spread = 0.8;
  ViterbiInstance inst;
  inst.a = SynthesizeRandomModel(ns(rng), nm(rng), dim, 1.5, rng(), opts);
  inst.b = SynthesizeRandomModel(ns(rng), nm(rng), dim, 1.5, rng(), opts);
  inst.features.config = StaticConfig(dim, dim + 2);
  const int T = nt(rng);
  inst.features.data.resize(T, dim);
  const DctPair dct = BuildDctPair(dim, dim + 2);
  std::uniform_int_distribution<int> sa(0, inst.a.NumStates() - 1),
      sb(0, inst.b.NumStates() - 1);
  for (int t = 0; t < T; ++t) {
    Vector xa = SampleGmm(inst.a.states[sa(rng)], rng);
    Vector xb = SampleGmm(inst.b.states[sb(rng)], rng);
    Vector ua = dct.inverse * xa, ub = dct.inverse * xb;
    Vector mel = (ua.array().exp() + ub.array().exp()).log().matrix();
    inst.features.data.row(t) = (dct.forward * mel).transpose();
  }
  return inst;
}

inline double JointSpaceSize(const ViterbiInstance &inst) {
  return std::pow(double(inst.a.NumStates()) * inst.b.NumStates(),
                  inst.features.NumFrames());
}

}  // namespace fasr::testing

#endif  // FASR_TESTS_INSTANCES_H_
