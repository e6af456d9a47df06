// tests/viterbi-test.cc

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

#include <cmath>
#include <random>

#include "doctest.h"
#include "fasr/models/synth.h"
#include "fasr/viterbi/factorial-viterbi.h"
#include "instances.h"
#include "test-util.h"

namespace fasr {
namespace {

using testing::KindOf;

ChainTopology Chain(const Matrix &p, const Vector &prior) {
  ChainTopology c;
  c.log_transitions = p.array().log().matrix();
  c.log_priors = prior.array().log().matrix();
  c.log_final = Vector::Zero(prior.size());
  return c;
}

Matrix RandomStochastic(int n, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Matrix p(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) p(i, j) = u(rng);
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

Vector RandomPrior(int n, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v / v.sum();
}

TEST_CASE("single joint state") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    auto inst = testing::RandomViterbiInstance(100 + trial, 1, 2, 6);
    InteractionConfig cfg;
    JointStatePath p = TwoDimensionalViterbi(inst.a, inst.b, inst.features, cfg);
    const int T = inst.features.NumFrames();
    CHECK(p.states_a == std::vector<int>(T, 0));
    CHECK(p.states_b == std::vector<int>(T, 0));
    auto table = JointLikelihoodTable(inst.a, inst.b, inst.features, cfg);
    double expect = inst.a.log_priors[0] + inst.b.log_priors[0];
    for (int t = 0; t < T; ++t) {
      expect += table[t](0, 0);
      if (t > 0) expect += inst.a.log_transitions(0, 0) + inst.b.log_transitions(0, 0);
    }
    CHECK(p.log_score == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("matches exhaustive enumeration on random tables") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> ns(1, 4), nt(1, 5);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 100; ++trial) {
    int na = ns(rng), nb = ns(rng), T = nt(rng);
    ChainTopology a = Chain(RandomStochastic(na, rng), RandomPrior(na, rng));
    ChainTopology b = Chain(RandomStochastic(nb, rng), RandomPrior(nb, rng));
    std::vector<Matrix> table(T);
    for (auto &m : table) m = Matrix::NullaryExpr(na, nb, [&] { return 3 * n01(rng); });
    auto score = [&](int t, int i, int j) { return table[t](i, j); };
    JointStatePath fast = TwoDimensionalViterbi(a, b, T, score);
    JointStatePath slow = ExhaustiveJointViterbi(a, b, T, score);
    CHECK(std::abs(fast.log_score - slow.log_score) < 1e-9);
    CHECK(fast.states_a == slow.states_a);
    CHECK(fast.states_b == slow.states_b);
    CHECK(JointPathScore(a, b, fast.states_a, fast.states_b, score) ==
          doctest::Approx(fast.log_score).epsilon(1e-12));
  }
}

TEST_CASE("ties go to the lowest index in both searches") {
  ChainTopology a = Chain(Matrix::Constant(3, 3, 1.0 / 3), Vector::Constant(3, 1.0 / 3));
  ChainTopology b = Chain(Matrix::Constant(2, 2, 0.5), Vector::Constant(2, 0.5));
  auto flat = [](int, int, int) { return -1.0; };
  for (int T : {1, 3}) {
    auto fast = TwoDimensionalViterbi(a, b, T, flat);
    auto slow = ExhaustiveJointViterbi(a, b, T, flat);
    CHECK(fast.states_a == std::vector<int>(T, 0));
    CHECK(fast.states_b == std::vector<int>(T, 0));
    CHECK(slow.states_a == fast.states_a);
    CHECK(slow.states_b == fast.states_b);
    CHECK(TwoDimensionalViterbi(a, b, T, flat).log_score == fast.log_score);
  }
}

TEST_CASE("one frame is a direct scan") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  ChainTopology a = Chain(RandomStochastic(4, rng), RandomPrior(4, rng));
  ChainTopology b = Chain(RandomStochastic(3, rng), RandomPrior(3, rng));
  Matrix m = Matrix::NullaryExpr(4, 3, [&] { return n01(rng); });
  auto score = [&](int, int i, int j) { return m(i, j); };
  double best = -INFINITY;
  int bi = -1, bj = -1;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j) {
      double v = a.log_priors[i] + b.log_priors[j] + m(i, j);
      if (v > best) best = v, bi = i, bj = j;
    }
  auto p = ExhaustiveJointViterbi(a, b, 1, score);
  CHECK(p.log_score == best);
  CHECK(p.states_a == std::vector<int>{bi});
  CHECK(p.states_b == std::vector<int>{bj});
}

TEST_CASE("permutation chains force a single path") {
  Matrix pa = Matrix::Zero(3, 3), pb = Matrix::Zero(2, 2);
  pa(0, 1) = pa(1, 2) = pa(2, 0) = 1;
  pb(0, 1) = pb(1, 0) = 1;
  Vector prior_a = Vector::Zero(3), prior_b = Vector::Zero(2);
  prior_a[1] = prior_b[0] = 1;
  ChainTopology a = Chain(pa, prior_a), b = Chain(pb, prior_b);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n01;
  std::vector<Matrix> table(5);
  for (auto &m : table) m = Matrix::NullaryExpr(3, 2, [&] { return n01(rng); });
  auto score = [&](int t, int i, int j) { return table[t](i, j); };
  for (const auto &p : {TwoDimensionalViterbi(a, b, 5, score), ExhaustiveJointViterbi(a, b, 5, score)}) {
    CHECK(p.states_a == std::vector<int>{1, 2, 0, 1, 2});
    CHECK(p.states_b == std::vector<int>{0, 1, 0, 1, 0});
  }
}

TEST_CASE("infeasible and refused") {
  Matrix p = Matrix::Identity(2, 2);
  Vector prior(2);
  prior << 1, 0;
  ChainTopology a = Chain(p, prior), b = Chain(p, prior);
  auto score = [](int t, int i, int) { return (t == 2 && i == 0) ? kLogZero : 0.0; };
  CHECK(KindOf([&] { TwoDimensionalViterbi(a, b, 4, score); }) == ErrorKind::kInfeasible);
  CHECK(KindOf([&] { ExhaustiveJointViterbi(a, b, 4, score); }) == ErrorKind::kInfeasible);
  ChainTopology big = Chain(Matrix::Constant(4, 4, 0.25), Vector::Constant(4, 0.25));
  auto zero = [](int, int, int) { return 0.0; };
  // 16^6 exceeds the guard; 16^5 does not.
  CHECK(KindOf([&] { ExhaustiveJointViterbi(big, big, 6, zero); }) == ErrorKind::kRefused);
  CHECK_NOTHROW(ExhaustiveJointViterbi(big, big, 5, zero));
}

TEST_CASE("model-level search matches the exhaustive oracle") {
  InteractionConfig cfg;
  int checked = 0;
  for (uint64_t seed = 0; checked < 30; ++seed) {
    auto inst = testing::RandomViterbiInstance(1000 + seed);
    if (testing::JointSpaceSize(inst) > kExhaustiveGuard) continue;
    ++checked;
    CompensationCache cache;
    auto fast = TwoDimensionalViterbi(inst.a, inst.b, inst.features, cfg, {}, &cache);
    auto slow = ExhaustiveJointViterbi(inst.a, inst.b, inst.features, cfg, {}, &cache);
    CHECK(std::abs(fast.log_score - slow.log_score) < 1e-9);
    CHECK(fast.states_a == slow.states_a);
    CHECK(fast.states_b == slow.states_b);
  }
}

TEST_CASE("swapping the models swaps the path") {
  InteractionConfig cfg;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    auto inst = testing::RandomViterbiInstance(2000 + seed);
    auto ab = TwoDimensionalViterbi(inst.a, inst.b, inst.features, cfg);
    auto ba = TwoDimensionalViterbi(inst.b, inst.a, inst.features, cfg);
    CHECK(std::abs(ab.log_score - ba.log_score) < 1e-9);
    CHECK(ab.states_a == ba.states_b);
    CHECK(ab.states_b == ba.states_a);
  }
}

TEST_CASE("lowering a likelihood never raises the best score") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    ChainTopology a = Chain(RandomStochastic(3, rng), RandomPrior(3, rng));
    ChainTopology b = Chain(RandomStochastic(3, rng), RandomPrior(3, rng));
    const int T = 6;
    std::vector<Matrix> table(T);
    for (auto &m : table) m = Matrix::NullaryExpr(3, 3, [&] { return n01(rng); });
    auto score = [&](int t, int i, int j) { return table[t](i, j); };
    auto before = TwoDimensionalViterbi(a, b, T, score);
    int t = trial % T, i = trial % 3, j = (trial / 3) % 3;
    table[t](i, j) -= u(rng);
    auto after = TwoDimensionalViterbi(a, b, T, score);
    CHECK(after.log_score <= before.log_score);
    if (before.states_a[t] != i || before.states_b[t] != j)
      CHECK(after.log_score == before.log_score);
  }
}

TEST_CASE("operation counters follow the factored cost") {
  for (auto [na, nb] : {std::pair{2, 3}, {4, 4}, {5, 2}}) {
    ChainTopology a = Chain(Matrix::Constant(na, na, 1.0 / na), Vector::Constant(na, 1.0 / na));
    ChainTopology b = Chain(Matrix::Constant(nb, nb, 1.0 / nb), Vector::Constant(nb, 1.0 / nb));
    const int T = 7;
    ViterbiStats stats;
    TwoDimensionalViterbi(a, b, T, [](int t, int i, int j) { return -0.1 * (t + i + j); },
                          &stats);
    const uint64_t per_frame = uint64_t(na) * nb * (na + nb);
    CHECK(stats.chain_a_candidates + stats.chain_b_candidates == per_frame * (T - 1));
    CHECK(stats.acoustic_evaluations == uint64_t(na) * nb * T);
    // Against a naive joint maximization over N_a N_b predecessors.
    const uint64_t naive = uint64_t(na) * nb * na * nb * (T - 1);
    CHECK(double(naive) / (stats.chain_a_candidates + stats.chain_b_candidates) ==
          doctest::Approx(double(na) * nb / (na + nb)));
  }
}

TEST_CASE("trace records every frame") {
  auto inst = testing::RandomViterbiInstance(7, 3, 1, 4);
  ViterbiTrace trace;
  InteractionConfig cfg;
  auto p = TwoDimensionalViterbi(inst.a, inst.b, inst.features, cfg, {}, nullptr, nullptr, &trace);
  const size_t T = inst.features.NumFrames();
  CHECK(trace.after_acoustic.size() == T);
  CHECK(trace.tau_a.size() + 1 >= T);
  CHECK(trace.after_acoustic.back().maxCoeff() == doctest::Approx(p.log_score));
}

}  // namespace
}  // namespace fasr
