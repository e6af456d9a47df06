// decoder/joint-token-decoder.cc

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

#include "fasr/decoder/joint-token-decoder.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "fasr/base/error.h"

namespace fasr {

void BeamConfig::Validate() const {
  if (max_active_tokens && *max_active_tokens < 1)
    Fail(ErrorKind::kInvalidConfiguration, "max_active_tokens must be at least 1");
  if (score_beam && !(*score_beam >= 0.0))
    Fail(ErrorKind::kInvalidConfiguration, "score_beam must be nonnegative");
}

std::vector<JointToken> PruneTokens(std::vector<JointToken> tokens,
                                    const BeamConfig &beam) {
  if (tokens.empty()) return tokens;
  if (beam.score_beam && std::isfinite(*beam.score_beam)) {
    double best = kLogZero;
    for (const JointToken &t : tokens) best = std::max(best, t.log_score);
    const double cutoff = best - *beam.score_beam;
    std::erase_if(tokens, [&](const JointToken &t) { return t.log_score < cutoff; });
  }
  if (beam.max_active_tokens &&
      static_cast<int64_t>(tokens.size()) > *beam.max_active_tokens) {
    std::vector<int> order(tokens.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    auto better = [&](int x, int y) {
      const JointToken &a = tokens[x], &b = tokens[y];
      if (a.log_score != b.log_score) return a.log_score > b.log_score;
      if (a.node_a != b.node_a) return a.node_a < b.node_a;
      return a.node_b < b.node_b;
    };
    const auto k = static_cast<size_t>(*beam.max_active_tokens);
    std::nth_element(order.begin(), order.begin() + (k - 1), order.end(), better);
    std::vector<bool> keep(tokens.size(), false);
    for (size_t i = 0; i < k; ++i) keep[order[i]] = true;
    std::vector<JointToken> out;
    out.reserve(k);
    for (size_t i = 0; i < tokens.size(); ++i)
      if (keep[i]) out.push_back(tokens[i]);
    return out;
  }
  return tokens;
}

namespace {

// Maps a (node_a, node_b) pair to a position in the current token list.
class PairSlots {
 public:
  PairSlots(int na, int nb) : nb_(nb) {
    const int64_t total = static_cast<int64_t>(na) * nb;
    if (total <= (int64_t{1} << 24)) dense_.assign(total, -1);
  }
  // Returns the slot for the pair, or -1 after recording `fresh` as its slot.
  int FindOrInsert(int a, int b, int fresh) {
    const int64_t key = static_cast<int64_t>(a) * nb_ + b;
    if (!dense_.empty()) {
      int &slot = dense_[key];
      if (slot >= 0) return slot;
      slot = fresh;
      touched_.push_back(key);
      return -1;
    }
    auto [it, inserted] = sparse_.try_emplace(key, fresh);
    return inserted ? -1 : it->second;
  }
  void Reset() {
    for (int64_t k : touched_) dense_[k] = -1;
    touched_.clear();
    sparse_.clear();
  }

 private:
  int64_t nb_;
  std::vector<int> dense_;
  std::vector<int64_t> touched_;
  std::unordered_map<int64_t, int> sparse_;
};

struct StoredToken {
  int node_a, node_b;
  int32_t predecessor;
};

void AddCandidate(std::vector<JointToken> &out, PairSlots &slots, int a, int b,
                  double score, int32_t pred) {
  int slot = slots.FindOrInsert(a, b, static_cast<int>(out.size()));
  if (slot < 0) {
    out.push_back({a, b, score, pred});
  } else if (score > out[slot].log_score) {
    out[slot].log_score = score;
    out[slot].predecessor = pred;
  }
}

Hypothesis MakeHypothesis(const DecodeGraph &g, std::vector<int> nodes, double score) {
  Hypothesis h;
  h.words = g.WordsOf(nodes);
  for (int n : nodes) h.alignment.push_back(g.nodes[n]);
  h.nodes = std::move(nodes);
  h.log_score = score;
  return h;
}

[[noreturn]] void FailNoPath(bool pruned, int frame) {
  if (pruned)
    Fail(ErrorKind::kStarvation, "beam pruning removed every token able to finish (frame " +
                                     std::to_string(frame) + ")");
  Fail(ErrorKind::kInfeasible,
       "no joint path through both graphs fits the utterance (frame " +
           std::to_string(frame) + ")");
}

}  // namespace

JointDecodeResult JointTokenDecode(int num_frames, const DecodeGraph &ga,
                                   const DecodeGraph &gb, const PairScoreFunctions &scores,
                                   const BeamConfig &beam) {
  beam.Validate();
  if (num_frames < 1) Fail(ErrorKind::kEmptyInput, "no frames to decode");
  JointDecodeResult result;
  DecodeStats &stats = result.stats;
  stats.frames = num_frames;

  PairSlots slots(ga.NumNodes(), gb.NumNodes());
  std::vector<StoredToken> store;
  std::vector<JointToken> active, mid;
  for (const GraphArc &ea : ga.initial)
    for (const GraphArc &eb : gb.initial)
      AddCandidate(active, slots, ea.to, eb.to, ea.log_prob + eb.log_prob, -1);
  slots.Reset();
  size_t before = active.size();
  active = PruneTokens(std::move(active), beam);
  stats.pruned += before - active.size();

  for (int t = 0; t < num_frames; ++t) {
    scores.begin_frame(t);
    size_t live = 0;
    for (JointToken &tok : active) {
      double s = scores.score(ga.node_pdf[tok.node_a], gb.node_pdf[tok.node_b]);
      double total = tok.log_score + s;
      if (!(total > kLogZero)) continue;  // drops -inf and NaN
      store.push_back({tok.node_a, tok.node_b, tok.predecessor});
      active[live++] = {tok.node_a, tok.node_b, total,
                        static_cast<int32_t>(store.size() - 1)};
    }
    active.resize(live);
    stats.peak_active = std::max(stats.peak_active, active.size());
    if (active.empty()) FailNoPath(stats.pruned > 0, t);
    if (t + 1 == num_frames) break;

    // Chain a moves, chain b stays.
    mid.clear();
    for (const JointToken &tok : active)
      for (const GraphArc &arc : ga.arcs[tok.node_a])
        AddCandidate(mid, slots, arc.to, tok.node_b, tok.log_score + arc.log_prob,
                     tok.predecessor);
    slots.Reset();
    // Chain b moves.
    active.clear();
    for (const JointToken &tok : mid)
      for (const GraphArc &arc : gb.arcs[tok.node_b])
        AddCandidate(active, slots, tok.node_a, arc.to, tok.log_score + arc.log_prob,
                     tok.predecessor);
    slots.Reset();
    if (active.empty()) FailNoPath(stats.pruned > 0, t + 1);
    before = active.size();
    active = PruneTokens(std::move(active), beam);
    stats.pruned += before - active.size();
  }

  int32_t best = -1;
  int best_a = 0, best_b = 0;
  for (const JointToken &tok : active) {
    double total = tok.log_score + ga.log_final[tok.node_a] + gb.log_final[tok.node_b];
    if (!(total > kLogZero)) continue;
    bool better = total > result.log_score ||
                  (total == result.log_score &&
                   std::pair(tok.node_a, tok.node_b) < std::pair(best_a, best_b));
    if (better) {
      result.log_score = total;
      best = tok.predecessor;
      best_a = tok.node_a;
      best_b = tok.node_b;
    }
  }
  if (best < 0) FailNoPath(stats.pruned > 0, num_frames);

  std::vector<int> path_a(num_frames), path_b(num_frames);
  int32_t idx = best;
  for (int t = num_frames - 1; t >= 0; --t) {
    if (idx < 0) Fail(ErrorKind::kNumeric, "token store chain ended early");
    path_a[t] = store[idx].node_a;
    path_b[t] = store[idx].node_b;
    idx = store[idx].predecessor;
  }
  if (idx != -1) Fail(ErrorKind::kNumeric, "token store chain longer than the utterance");
  stats.stored_tokens = store.size();
  result.a = MakeHypothesis(ga, std::move(path_a), result.log_score);
  result.b = MakeHypothesis(gb, std::move(path_b), result.log_score);
  return result;
}

JointDecodeResult JointTokenDecode(const FeatureSequence &features,
                                   const DecodeGraph &graph_a,
                                   const DecodeGraph &graph_b,
                                   const DecoderConfig &config,
                                   CompensationCache *cache) {
  if (!graph_a.source || !graph_b.source)
    Fail(ErrorKind::kInvalidConfiguration, "decode graph has no source model");
  if (graph_a.source->features().Dim() != features.Dim() ||
      graph_b.source->features().Dim() != features.Dim())
    Fail(ErrorKind::kInvalidInput, "graph and feature dimensions disagree");
  JointScorer scorer(graph_a.source, graph_b.source, config.interaction, cache);
  if (config.prefill_cache) scorer.Prefill();
  PairScoreFunctions fns;
  fns.begin_frame = [&](int t) { scorer.SetFrame(features.Frame(t)); };
  fns.score = [&](int pa, int pb) { return scorer.Score(pa, pb); };
  return JointTokenDecode(features.NumFrames(), graph_a, graph_b, fns, config.beam);
}

}  // namespace fasr
