// tests/models-test.cc

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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "fasr/models/grammar.h"
#include "fasr/models/model-io.h"
#include "fasr/models/synth.h"
#include "fasr/viterbi/factorial-viterbi.h"
#include "test-util.h"

#ifndef FASR_SOURCE_DIR
#define FASR_SOURCE_DIR "."
#endif

namespace fasr {
namespace {

using nlohmann::json;
using testing::KindOf;

json MinimalModelSet() {
  json comp = {{"weight", 1.0}, {"mean", {0.0, 1.0}}, {"variance", {1.0, 2.0}}};
  json phone = {{"name", "ae"},
                {"priors", {1.0, 0.0, 0.0}},
                {"transitions", {{0.6, 0.4, 0.0}, {0.0, 0.7, 0.3}, {0.0, 0.0, 0.5}}},
                {"exit", {0.0, 0.0, 0.5}},
                {"states", {{comp}, {comp}, {comp}}}};
  json fc = FeatureConfig{};
  fc["num_cepstra"] = 2;
  fc["num_mel_filters"] = 4;
  fc["include_delta"] = false;
  fc["include_accel"] = false;
  return {{"feature_config", fc},
          {"speakers", {{{"id", "s1"}, {"phonemes", {phone}}, {"frame_gmm", {comp}}}}}};
}

std::string LoadError(const json &j) {
  try {
    ModelSetFromJson(j);
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kLoad);
    return e.what();
  }
  return "";
}

TEST_CASE("minimal model set loads") {
  SpeakerModelSet set = ModelSetFromJson(MinimalModelSet());
  CHECK(set.speakers.size() == 1);
  const GmmHmm &ae = set.Speaker("s1").phonemes.at("ae");
  CHECK(ae.NumStates() == 3);
  CHECK(ae.Dim() == 2);
  CHECK(std::exp(ae.log_transitions(1, 2)) == doctest::Approx(0.3));
}

TEST_CASE("load errors name the model and the field") {
  json j = MinimalModelSet();
  j["speakers"][0]["phonemes"][0]["transitions"][0] = {0.5, 0.4, 0.0};
  std::string msg = LoadError(j);
  CHECK(msg.find("non-stochastic row") != std::string::npos);
  CHECK(msg.find("'ae'") != std::string::npos);
  CHECK(msg.find("transitions") != std::string::npos);

  json v = MinimalModelSet();
  v["speakers"][0]["phonemes"][0]["states"][1][0]["variance"] = {1.0, 0.0};
  CHECK(LoadError(v).find("variance") != std::string::npos);

  json back = MinimalModelSet();
  back["speakers"][0]["phonemes"][0]["transitions"][1] = {0.2, 0.5, 0.3};
  CHECK(!LoadError(back).empty());

  json w = MinimalModelSet();
  w["speakers"][0]["phonemes"][0]["states"][0][0]["weight"] = 0.5;
  CHECK(!LoadError(w).empty());

  json p = MinimalModelSet();
  p["speakers"][0]["phonemes"][0]["priors"] = {0.5, 0.0, 0.0};
  CHECK(!LoadError(p).empty());

  json missing = MinimalModelSet();
  missing["speakers"][0]["phonemes"][0].erase("transitions");
  CHECK(!LoadError(missing).empty());
}

TEST_CASE("model sets round trip through files") {
  SpeakerModelSet set;
  set.feature_config.num_cepstra = 3;
  set.feature_config.num_mel_filters = 5;
  SynthesisOptions opts;
  opts.final_exit = true;
  opts.variance_min = 0.5;
  opts.variance_max = 2.0;
  for (int s = 0; s < 2; ++s) {
    SpeakerModels sm;
    sm.id = "spk" + std::to_string(s);
    for (int p = 0; p < 3; ++p) {
      GmmHmm h = SynthesizeRandomModel(3, 2, set.feature_config.Dim(), 2.0, 10 * s + p, opts);
      h.name = "ph" + std::to_string(p);
      sm.phonemes[h.name] = h;
    }
    GmmHmm f = SynthesizeRandomModel(1, 4, 3, 0.0, 99 + s);
    sm.frame_gmm = f.states[0];
    set.speakers[sm.id] = sm;
  }
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "fasr-models-test.json";
  SaveModelSet(path.string(), set);
  SpeakerModelSet once = LoadModelSet(path.string());
  SaveModelSet(path.string(), once);
  SpeakerModelSet twice = LoadModelSet(path.string());
  CHECK(twice.feature_config == once.feature_config);
  CHECK(twice.SpeakerIds() == once.SpeakerIds());
  for (const auto &id : once.SpeakerIds()) {
    const auto &a = once.Speaker(id), &b = twice.Speaker(id);
    CHECK(a.frame_gmm == b.frame_gmm);
    for (const auto &[name, hmm] : a.phonemes) CHECK(hmm == b.phonemes.at(name));
  }
  // The first load matches the in-memory original to rounding.
  const GmmHmm &orig = set.Speaker("spk1").phonemes.at("ph2");
  const GmmHmm &loaded = once.Speaker("spk1").phonemes.at("ph2");
  CHECK(testing::MaxAbsDiff(orig.log_transitions.array().exp().matrix(),
                            loaded.log_transitions.array().exp().matrix()) < 1e-15);
  CHECK(orig.states[1][0].mean == loaded.states[1][0].mean);
  fs::remove(path);
}

TEST_CASE("task grammar compiles to six slots and 64000 paths") {
  WordNetwork net = ReadGrammar(std::string(FASR_SOURCE_DIR) + "/data/grid/grid.grammar");
  REQUIRE(net.slots.size() == 6);
  std::vector<size_t> sizes;
  for (const auto &s : net.slots) sizes.push_back(s.size());
  CHECK(sizes == std::vector<size_t>{4, 4, 4, 25, 10, 4});
  CHECK(net.NumPaths() == 64000u);
  CHECK(net.Accepts({"bin", "blue", "at", "f", "two", "now"}));
  CHECK(!net.Accepts({"bin", "blue", "at", "w", "two", "now"}));
  CHECK(!net.Accepts({"bin", "blue", "at", "f", "two"}));
}

TEST_CASE("slot grammars") {
  WordNetwork one = CompileGrammar("hello\n");
  CHECK(one.NumPaths() == 1u);
  CHECK(one.EnumeratePaths(10) == std::vector<std::vector<std::string>>{{"hello"}});

  std::vector<std::string> warnings;
  WordNetwork dup = CompileGrammar("a | b | a\nc\n", &warnings);
  CHECK(dup.NumPaths() == 2u);
  CHECK(warnings.size() == 1);
  WordNetwork hand = NetworkFromSlots({{"a", "b"}, {"c"}});
  CHECK(dup.EnumeratePaths(100) == hand.EnumeratePaths(100));

  CHECK(KindOf([] { CompileGrammar("a | | b\n"); }) != static_cast<ErrorKind>(-1));
  try {
    CompileGrammar("$x = a | b;\n( $x\n");
    FAIL("expected a parse error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kParse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("path language equals the slot product") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> ns(1, 4), nw(1, 3);
    std::vector<std::vector<std::string>> slots(ns(rng));
    std::string text;
    for (size_t s = 0; s < slots.size(); ++s) {
      int k = nw(rng);
      for (int w = 0; w < k; ++w) {
        slots[s].push_back("w" + std::to_string(s) + std::to_string(w));
        text += (w ? " | " : "") + slots[s].back();
      }
      text += "\n";
    }
    std::set<std::vector<std::string>> product{{}};
    for (const auto &slot : slots) {
      std::set<std::vector<std::string>> next;
      for (auto seq : product)
        for (const auto &w : slot) {
          auto s2 = seq;
          s2.push_back(w);
          next.insert(s2);
        }
      product = next;
    }
    WordNetwork net = CompileGrammar(text);
    auto paths = net.EnumeratePaths(1000);
    CHECK(std::set<std::vector<std::string>>(paths.begin(), paths.end()) == product);
    CHECK(paths.size() == product.size());
  }
}

TEST_CASE("lexicon with alternative pronunciations") {
  Lexicon lex = ParseLexicon("AGAIN ax g eh n\nagain ax g ey n\nNOW n aw\n");
  CHECK(lex.Pronunciations("again").size() == 2);
  CHECK(lex.Phonemes() == std::set<std::string>{"ax", "g", "eh", "ey", "n", "aw"});
  CHECK(KindOf([&] { lex.Pronunciations("soon"); }) == ErrorKind::kCompile);
  Lexicon grid = ReadLexicon(std::string(FASR_SOURCE_DIR) + "/data/grid/grid.lex");
  WordNetwork net = ReadGrammar(std::string(FASR_SOURCE_DIR) + "/data/grid/grid.grammar");
  for (const auto &w : net.Vocabulary()) CHECK(!grid.Pronunciations(w).empty());
}

TEST_CASE("single state synthetic model") {
  GmmHmm h = SynthesizeRandomModel(1, 1, 1, 0.0, 7);
  h.Validate();
  CHECK(h.NumStates() == 1);
  CHECK(std::exp(h.log_transitions(0, 0)) == doctest::Approx(1.0));
}

TEST_CASE("synthetic models are deterministic and separated") {
  CHECK(SynthesizeRandomModel(4, 3, 5, 2.0, 42) == SynthesizeRandomModel(4, 3, 5, 2.0, 42));
  CHECK(!(SynthesizeRandomModel(4, 3, 5, 2.0, 42) == SynthesizeRandomModel(4, 3, 5, 2.0, 43)));
  GmmHmm h = SynthesizeRandomModel(5, 2, 6, 10.0, 3);
  h.Validate();
  std::vector<Vector> means;
  for (const Gmm &g : h.states) {
    Vector m = Vector::Zero(6);
    for (const auto &c : g) m += std::exp(c.log_weight) * c.mean;
    means.push_back(m);
  }
  for (size_t i = 0; i < means.size(); ++i)
    for (size_t j = i + 1; j < means.size(); ++j)
      CHECK((means[i] - means[j]).norm() >= 10.0 - 1e-9);
}

TEST_CASE("sampling a degenerate model returns its mean") {
  GmmHmm h = SynthesizeRandomModel(1, 1, 3, 0.0, 5);
  for (double &v : h.states[0][0].variance) v = 1e-24;
  SampledPath p = SampleFeaturePath(h, 20, uint64_t{9});
  CHECK(p.frames.rows() == 20);
  for (int t = 0; t < p.frames.rows(); ++t)
    CHECK(testing::MaxAbsDiff(p.frames.row(t).transpose(), h.states[0][0].mean) < 1e-9);
  SampledPath q = SampleFeaturePath(h, 20, uint64_t{9});
  CHECK(p.frames == q.frames);
}

TEST_CASE("empirical occupancy matches the chain") {
  SynthesisOptions opts;
  opts.final_exit = true;
  GmmHmm h = SynthesizeRandomModel(2, 1, 1, 1.0, 17, opts);
  const int max_frames = 50;
  Vector expected = ExpectedOccupancy(h, max_frames);
  Vector counts = Vector::Zero(2);
  std::mt19937_64 rng(5);
  const int n = 10000;
  for (int i = 0; i < n; ++i)
    for (int s : SampleFeaturePath(h, max_frames, rng).states) counts[s] += 1.0;
  counts /= n;
  for (int s = 0; s < 2; ++s)
    CHECK(std::abs(counts[s] - expected[s]) <= 0.02 * expected[s]);
}

TEST_CASE("the best path scores at least the generating path") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    GmmHmm h = SynthesizeRandomModel(3, 2, 2, 1.5, 100 + trial);
    SampledPath p = SampleFeaturePath(h, 5, rng);
    const int T = static_cast<int>(p.frames.rows());
    // A one-state partner chain with a flat likelihood reduces the joint
    // search to a single chain.
    GmmHmm flat = SynthesizeRandomModel(1, 1, 2, 0.0, 1);
    ChainTopology a = ChainTopology::FromHmm(h, false), b = ChainTopology::FromHmm(flat, false);
    auto score = [&](int t, int i, int) {
      return GmmLogLikelihood(h.states[i], {p.frames.row(t).data(), 2});
    };
    JointStatePath best = ExhaustiveJointViterbi(a, b, T, score);
    double truth = JointPathScore(a, b, p.states, std::vector<int>(T, 0), score);
    CHECK(best.log_score >= truth - 1e-12);
  }
}

}  // namespace
}  // namespace fasr
