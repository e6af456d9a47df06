// tests/decoder-test.cc

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
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "fasr/decoder/decode-graph.h"
#include "fasr/decoder/joint-token-decoder.h"
#include "fasr/models/grammar.h"
#include "fasr/models/synth.h"
#include "fasr/viterbi/factorial-viterbi.h"
#include "instances.h"
#include "test-util.h"

#ifndef FASR_SOURCE_DIR
#define FASR_SOURCE_DIR "."
#endif

namespace fasr {
namespace {

using testing::KindOf;

constexpr int kDim = 3;

std::map<std::string, GmmHmm> PhonemeModels(const std::set<std::string> &names,
                                            uint64_t seed, int num_states = 3,
                                            int num_components = 1) {
  SynthesisOptions opts;
  opts.final_exit = true;
  opts.variance_min = 0.3;
  opts.variance_max = 1.0;
  std::map<std::string, GmmHmm> out;
  uint64_t k = 0;
  for (const auto &n : names) {
    GmmHmm h = SynthesizeRandomModel(num_states, num_components, kDim, 1.5, seed + 31 * k++, opts);
    h.name = n;
    out[n] = h;
  }
  return out;
}

FeatureConfig Static() { return testing::StaticConfig(kDim, kDim + 2); }

TEST_CASE("one word, one phoneme graph is linear") {
  WordNetwork net = CompileGrammar("go\n");
  Lexicon lex = ParseLexicon("go g\n");
  DecodeGraph g = CompileDecodeGraph(net, lex, PhonemeModels({"g"}, 1), Static());
  REQUIRE(g.NumNodes() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(g.nodes[i] == RichState{0, 0, 0, i});
    std::vector<int> targets;
    for (const auto &a : g.arcs[i]) targets.push_back(a.to);
    std::vector<int> expect{i};
    if (i < 2) expect.push_back(i + 1);
    CHECK(targets == expect);
  }
  REQUIRE(g.initial.size() == 1);
  CHECK(g.initial[0].to == 0);
  CHECK(g.log_final[0] == kLogZero);
  CHECK(g.log_final[1] == kLogZero);
  CHECK(g.log_final[2] > kLogZero);
  CHECK(g.WordsOf({0, 1, 2}) == std::vector<std::string>{"go"});
}

TEST_CASE("task graph node count matches an independent count") {
  const std::string dir = std::string(FASR_SOURCE_DIR) + "/data/grid/";
  WordNetwork net = ReadGrammar(dir + "grid.grammar");
  Lexicon lex = ReadLexicon(dir + "grid.lex");
  // Count straight from the text files.
  std::map<std::string, std::vector<int>> lengths;
  std::ifstream in(dir + "grid.lex");
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string word, ph;
    if (!(ss >> word)) continue;
    std::transform(word.begin(), word.end(), word.begin(), ::tolower);
    int n = 0;
    while (ss >> ph) ++n;
    lengths[word].push_back(n);
  }
  size_t expect = 0;
  for (const auto &slot : net.slots)
    for (const auto &w : slot)
      for (int n : lengths.at(net.words[w])) expect += 3 * n;
  DecodeGraph g = CompileDecodeGraph(net, lex, PhonemeModels(lex.Phonemes(), 2), Static());
  CHECK(size_t(g.NumNodes()) == expect);
  CHECK(std::is_sorted(g.nodes.begin(), g.nodes.end()));
}

TEST_CASE("alternative pronunciations are parallel chains") {
  WordNetwork net = CompileGrammar("with\nnow\n");
  Lexicon lex = ParseLexicon("with w ih dh\nwith w ih th\nnow n aw\n");
  DecodeGraph g = CompileDecodeGraph(net, lex, PhonemeModels(lex.Phonemes(), 3), Static());
  CHECK(g.NumNodes() == 3 * (3 + 3 + 2));
  auto first_of = [&](int word, int pron, int phone) {
    for (int i = 0; i < g.NumNodes(); ++i)
      if (g.nodes[i] == RichState{word, pron, phone, 0}) return i;
    return -1;
  };
  std::vector<int> entries;
  for (const auto &a : g.initial) entries.push_back(a.to);
  CHECK(entries == std::vector<int>{first_of(0, 0, 0), first_of(0, 1, 0)});
  // Both pronunciations leave into the first state of "now".
  const int now = first_of(1, 0, 0);
  for (int p = 0; p < 2; ++p) {
    const int last = first_of(0, p, 2) + 2;
    bool found = false;
    for (const auto &a : g.arcs[last]) found |= a.to == now;
    CHECK(found);
    // No arc crosses between the two pronunciations.
    for (int i = first_of(0, p, 0); i <= last; ++i)
      for (const auto &a : g.arcs[i])
        CHECK((g.nodes[a.to].word == 1 || g.nodes[a.to].pron == p));
  }
}

TEST_CASE("missing words and phonemes fail to compile") {
  WordNetwork net = CompileGrammar("go | stop\n");
  Lexicon lex = ParseLexicon("go g\n");
  CHECK(KindOf([&] { CompileDecodeGraph(net, lex, PhonemeModels({"g"}, 1), Static()); }) ==
        ErrorKind::kCompile);
  Lexicon lex2 = ParseLexicon("go g\nstop s t\n");
  CHECK(KindOf([&] { CompileDecodeGraph(net, lex2, PhonemeModels({"g", "s"}, 1), Static()); }) ==
        ErrorKind::kCompile);
  FeatureConfig wide = Static();
  wide.num_cepstra = 4;
  wide.num_mel_filters = 6;
  CHECK(KindOf([&] { CompileDecodeGraph(net, lex2, PhonemeModels({"g", "s", "t"}, 1), wide); }) ==
        ErrorKind::kCompile);
}

bool TokenLess(const JointToken &x, const JointToken &y) {
  if (x.log_score != y.log_score) return x.log_score > y.log_score;
  return std::pair(x.node_a, x.node_b) < std::pair(y.node_a, y.node_b);
}

TEST_CASE("pruning examples") {
  std::vector<JointToken> equal;
  for (int i = 5; i >= 0; --i) equal.push_back({i, 0, -1.0, -1});
  BeamConfig beam{3, std::nullopt};
  auto kept = PruneTokens(equal, beam);
  REQUIRE(kept.size() == 3);
  std::vector<int> nodes;
  for (const auto &t : kept) nodes.push_back(t.node_a);
  CHECK(nodes == std::vector<int>{2, 1, 0});

  std::vector<JointToken> any{{3, 1, -5, 0}, {0, 0, -1e6, 1}, {2, 2, 0, 2}};
  auto same = PruneTokens(any, BeamConfig::Disabled());
  REQUIRE(same.size() == any.size());
  for (size_t i = 0; i < any.size(); ++i) CHECK(same[i].predecessor == any[i].predecessor);
  BeamConfig inf{std::nullopt, INFINITY};
  CHECK(PruneTokens(any, inf).size() == 3);

  CHECK(KindOf([] { BeamConfig{0, std::nullopt}.Validate(); }) != static_cast<ErrorKind>(-1));
}

TEST_CASE("pruning matches a sort-and-filter reference") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> node(0, 9), count(0, 60), cap(1, 20);
  std::uniform_int_distribution<int> coarse(-8, 0);
  std::uniform_real_distribution<double> width(0.0, 6.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<JointToken> store;
    std::set<std::pair<int, int>> used;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      int a = node(rng), b = node(rng);
      if (!used.insert({a, b}).second) continue;
      store.push_back({a, b, double(coarse(rng)), int32_t(i)});
    }
    BeamConfig beam;
    beam.max_active_tokens = trial % 3 ? std::optional<int64_t>(cap(rng)) : std::nullopt;
    beam.score_beam = trial % 4 ? std::optional<double>(width(rng)) : std::nullopt;
    auto ref = store;
    std::sort(ref.begin(), ref.end(), TokenLess);
    if (beam.score_beam && !ref.empty()) {
      const double floor = ref.front().log_score - *beam.score_beam;
      ref.erase(std::remove_if(ref.begin(), ref.end(),
                               [&](const JointToken &t) { return t.log_score < floor; }),
                ref.end());
    }
    if (beam.max_active_tokens && int64_t(ref.size()) > *beam.max_active_tokens)
      ref.resize(*beam.max_active_tokens);
    auto got = PruneTokens(store, beam);
    std::set<int32_t> want, have;
    for (const auto &t : ref) want.insert(t.predecessor);
    for (const auto &t : got) have.insert(t.predecessor);
    CHECK(have == want);
    CHECK(std::is_sorted(got.begin(), got.end(), [](const JointToken &x, const JointToken &y) {
      return x.predecessor < y.predecessor;
    }));
  }
}

struct Pair {
  DecodeGraph a, b;
};

Pair RandomPair(uint64_t seed, const std::string &grammar_a, const std::string &grammar_b,
                const std::string &lexicon) {
  Lexicon lex = ParseLexicon(lexicon);
  auto models_a = PhonemeModels(lex.Phonemes(), seed, 2, 2);
  auto models_b = PhonemeModels(lex.Phonemes(), seed + 7777, 2, 2);
  return {CompileDecodeGraph(CompileGrammar(grammar_a), lex, models_a, Static(), {}, "sa"),
          CompileDecodeGraph(CompileGrammar(grammar_b), lex, models_b, Static(), {}, "sb")};
}

FeatureSequence RandomFeatures(const Pair &p, int T, uint64_t seed) {
  std::mt19937_64 rng(seed);
  FeatureSequence f;
  f.config = Static();
  f.data.resize(T, kDim);
  const DctPair dct = BuildDctPair(kDim, kDim + 2);
  std::uniform_int_distribution<int> na(0, p.a.NumNodes() - 1), nb(0, p.b.NumNodes() - 1);
  for (int t = 0; t < T; ++t) {
    Vector xa = SampleGmm(p.a.source->RawPdf(p.a.node_pdf[na(rng)]), rng);
    Vector xb = SampleGmm(p.b.source->RawPdf(p.b.node_pdf[nb(rng)]), rng);
    Vector mel = ((dct.inverse * xa).array().exp() + (dct.inverse * xb).array().exp()).log();
    f.data.row(t) = (dct.forward * mel).transpose();
  }
  return f;
}

const char *kLex = "one w ah n\ntwo t uw\nred r eh d\nsix s ih k s\n";

TEST_CASE("unpruned decoding equals the composite two-chain search") {
  DecoderConfig dc;
  dc.beam = BeamConfig::Disabled();
  for (uint64_t seed = 0; seed < 10; ++seed) {
    Pair p = RandomPair(seed, "one\nred\n", seed % 2 ? "two\n" : "six\n", kLex);
    FeatureSequence f = RandomFeatures(p, 14, seed);
    JointDecodeResult r = JointTokenDecode(f, p.a, p.b, dc);
    GmmHmm ca = ComposeGraphHmm(p.a), cb = ComposeGraphHmm(p.b);
    FactorialViterbiOptions vo;
    vo.use_exit_weights = true;
    JointStatePath v = TwoDimensionalViterbi(ca, cb, f, dc.interaction, vo);
    CHECK(std::abs(r.log_score - v.log_score) < 1e-9);
    CHECK(r.a.nodes == v.states_a);
    CHECK(r.b.nodes == v.states_b);
    CHECK(r.a.words == std::vector<std::string>{"one", "red"});
  }
}

TEST_CASE("inactive pruning changes nothing") {
  Pair p = RandomPair(11, "one | two\nred | six\n", "two | six\none\n", kLex);
  FeatureSequence f = RandomFeatures(p, 20, 11);
  DecoderConfig off, huge;
  off.beam = BeamConfig::Disabled();
  huge.beam = {int64_t(1e9), std::nullopt};
  auto r1 = JointTokenDecode(f, p.a, p.b, off);
  auto r2 = JointTokenDecode(f, p.a, p.b, huge);
  CHECK(r1.log_score == r2.log_score);
  CHECK(r1.a.nodes == r2.a.nodes);
  CHECK(r1.b.nodes == r2.b.nodes);
  auto r3 = JointTokenDecode(f, p.a, p.b, off);
  CHECK(r3.log_score == r1.log_score);
  CHECK(r3.a.words == r1.a.words);
}

TEST_CASE("tighter beams never beat the exact score") {
  Pair p = RandomPair(12, "one | two | six\nred | six\n", "two | six | red\none | two\n", kLex);
  FeatureSequence f = RandomFeatures(p, 24, 12);
  DecoderConfig dc;
  dc.beam = BeamConfig::Disabled();
  const double exact = JointTokenDecode(f, p.a, p.b, dc).log_score;
  double previous = exact;
  for (int64_t k : {400, 100, 30, 10}) {
    dc.beam = {k, std::nullopt};
    try {
      double s = JointTokenDecode(f, p.a, p.b, dc).log_score;
      CHECK(s <= exact + 1e-12);
      previous = s;
    } catch (const Error &e) {
      CHECK(e.kind() == ErrorKind::kStarvation);
    }
  }
  CHECK(previous <= exact);
}

TEST_CASE("hypotheses are grammatical and alignments are complete") {
  const std::string ga = "one | two | six\nred | six\ntwo | one\n";
  const std::string gb = "six | red\none | two | red\n";
  WordNetwork na = CompileGrammar(ga), nb = CompileGrammar(gb);
  for (uint64_t seed = 0; seed < 8; ++seed) {
    Pair p = RandomPair(20 + seed, ga, gb, kLex);
    const int T = 25;
    FeatureSequence f = RandomFeatures(p, T, seed);
    DecoderConfig dc;
    auto r = JointTokenDecode(f, p.a, p.b, dc);
    CHECK(na.Accepts(r.a.words));
    CHECK(nb.Accepts(r.b.words));
    CHECK(r.a.nodes.size() == size_t(T));
    CHECK(r.b.alignment.size() == size_t(T));
    CHECK(p.a.WordsOf(r.a.nodes) == r.a.words);
    CHECK(r.stats.frames == T);
    CHECK(r.stats.peak_active <= 2000u);
  }
}

TEST_CASE("too few frames is infeasible, over-pruning is starvation") {
  // "a" is one 1-state phoneme, "b" a 3-state phoneme.
  Lexicon lex = ParseLexicon("a p\nb q\nz p\n");
  SynthesisOptions opts;
  opts.final_exit = true;
  std::map<std::string, GmmHmm> models{
      {"p", SynthesizeRandomModel(1, 1, kDim, 1.0, 1, opts)},
      {"q", SynthesizeRandomModel(3, 1, kDim, 1.0, 2, opts)}};
  DecodeGraph ga = CompileDecodeGraph(CompileGrammar("b | a\n"), lex, models, Static());
  DecodeGraph gb = CompileDecodeGraph(CompileGrammar("b\n"), lex, models, Static());
  PairScoreFunctions fns;
  fns.begin_frame = [](int) {};
  fns.score = [&](int pa, int) { return ga.pdf_names[pa] == "q[0]" ? 0.0 : -10.0; };
  // Chain b needs three frames.
  CHECK(KindOf([&] { JointTokenDecode(2, ga, gb, fns, BeamConfig::Disabled()); }) ==
        ErrorKind::kInfeasible);
  DecodeGraph gz = CompileDecodeGraph(CompileGrammar("z\n"), lex, models, Static());
  auto ok = JointTokenDecode(2, ga, gz, fns, BeamConfig::Disabled());
  CHECK(ok.a.words == std::vector<std::string>{"a"});
  // Keeping one token keeps the better-scoring but unfinishable "b".
  CHECK(KindOf([&] { JointTokenDecode(2, ga, gz, fns, {1, std::nullopt}); }) ==
        ErrorKind::kStarvation);
}

TEST_CASE("silence words wrap the utterance") {
  Lexicon lex = ParseLexicon(kLex);
  std::set<std::string> phones = lex.Phonemes();
  phones.insert("sil");
  auto models = PhonemeModels(phones, 40, 2, 1);
  GraphOptions go;
  go.silence_phoneme = "sil";
  go.leading_silence = go.trailing_silence = true;
  DecodeGraph g = CompileDecodeGraph(CompileGrammar("one\n"), lex, models, Static(), go);
  int silent = 0;
  for (const auto &w : g.words) silent += w.is_silence;
  CHECK(silent == 2);
  CHECK(g.NumNodes() == 2 * 3 + 2 * 2);
  std::vector<int> path;
  for (int i = 0; i < g.NumNodes(); ++i)
    if (!g.words[g.nodes[i].word].is_silence) path.push_back(i);
  CHECK(g.WordsOf(path) == std::vector<std::string>{"one"});
}

}  // namespace
}  // namespace fasr
