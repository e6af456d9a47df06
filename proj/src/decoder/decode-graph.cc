// decoder/decode-graph.cc

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

#include "fasr/decoder/decode-graph.h"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "fasr/base/error.h"

namespace fasr {

int DecodeGraph::MaxPhonemeStates() const {
  std::map<std::tuple<int, int, int>, int> count;
  int best = 0;
  for (const RichState &r : nodes)
    best = std::max(best, ++count[{r.word, r.pron, r.phoneme}]);
  return best;
}

std::vector<std::string> DecodeGraph::WordsOf(const std::vector<int> &node_path) const {
  std::vector<std::string> out;
  int prev_word = -1;
  for (int n : node_path) {
    int w = nodes[n].word;
    if (w != prev_word && !words[w].is_silence) out.push_back(words[w].label);
    prev_word = w;
  }
  return out;
}

namespace {

struct PhonemeSpan {
  int first_node;
  const GmmHmm *hmm;
};

}  // namespace

DecodeGraph CompileDecodeGraph(const WordNetwork &network, const Lexicon &lexicon,
                               const std::map<std::string, GmmHmm> &phonemes,
                               const FeatureConfig &features,
                               const GraphOptions &options, const std::string &speaker) {
  network.Validate();
  DecodeGraph g;
  g.speaker = speaker;

  // Word occurrences: grammar nodes, then optional silences.
  const int num_grammar = network.NumNodes();
  for (int n = 0; n < num_grammar; ++n) {
    GraphWord w;
    w.label = network.words[n];
    w.network_node = n;
    w.prons = lexicon.Pronunciations(w.label);
    if (w.prons.empty())
      Fail(ErrorKind::kCompile, "word '" + w.label + "' has no pronunciation");
    g.words.push_back(std::move(w));
  }
  const bool use_sil = !options.silence_phoneme.empty();
  int lead = -1, trail = -1;
  auto add_silence = [&]() {
    GraphWord w;
    w.is_silence = true;
    w.prons = {{options.silence_phoneme}};
    g.words.push_back(std::move(w));
    return static_cast<int>(g.words.size()) - 1;
  };
  if (use_sil && options.leading_silence) lead = add_silence();
  if (use_sil && options.trailing_silence) trail = add_silence();

  // Word-level successors, start and end sets over the extended list.
  std::vector<std::vector<int>> succ = network.Successors();
  succ.resize(g.words.size());
  std::vector<int> starts = network.start_nodes, ends = network.end_nodes;
  if (lead >= 0) {
    succ[lead] = network.start_nodes;
    starts.push_back(lead);
  }
  if (trail >= 0) {
    for (int e : network.end_nodes) succ[e].push_back(trail);
    ends.push_back(trail);
  }
  for (auto &s : succ) std::sort(s.begin(), s.end());
  std::sort(starts.begin(), starts.end());

  // Models and pdf indices.
  std::map<std::string, int> pdf_base;
  std::vector<Gmm> pdfs;
  auto model_for = [&](const std::string &ph) -> const GmmHmm & {
    auto it = phonemes.find(ph);
    if (it == phonemes.end())
      Fail(ErrorKind::kCompile, "phoneme '" + ph + "' has no model" +
                                    (speaker.empty() ? "" : " for speaker '" + speaker + "'"));
    if (it->second.Dim() != features.Dim())
      Fail(ErrorKind::kCompile, "phoneme '" + ph + "' has dimension " +
                                    std::to_string(it->second.Dim()) + ", features have " +
                                    std::to_string(features.Dim()));
    if (!pdf_base.count(ph)) {
      pdf_base[ph] = static_cast<int>(pdfs.size());
      for (int s = 0; s < it->second.NumStates(); ++s) {
        pdfs.push_back(it->second.states[s]);
        g.pdf_names.push_back(ph + "[" + std::to_string(s) + "]");
      }
    }
    return it->second;
  };

  // Nodes, in (word, pron, phoneme, state) order.
  std::vector<std::vector<std::vector<PhonemeSpan>>> spans(g.words.size());
  for (int w = 0; w < static_cast<int>(g.words.size()); ++w) {
    spans[w].resize(g.words[w].prons.size());
    for (int p = 0; p < static_cast<int>(g.words[w].prons.size()); ++p) {
      const auto &pron = g.words[w].prons[p];
      if (pron.empty())
        Fail(ErrorKind::kCompile, "word '" + g.words[w].label + "' has an empty pronunciation");
      for (int k = 0; k < static_cast<int>(pron.size()); ++k) {
        const GmmHmm &hmm = model_for(pron[k]);
        spans[w][p].push_back({g.NumNodes(), &hmm});
        for (int s = 0; s < hmm.NumStates(); ++s) {
          g.nodes.push_back({w, p, k, s});
          g.node_pdf.push_back(pdf_base[pron[k]] + s);
        }
      }
    }
  }

  // Entry arcs into the first phoneme of every pronunciation of word w.
  auto entries = [&](int w, double base, std::vector<GraphArc> &out) {
    for (const auto &ps : spans[w]) {
      const PhonemeSpan &first = ps.front();
      for (int s = 0; s < first.hmm->NumStates(); ++s) {
        double lp = first.hmm->log_priors[s];
        if (lp != kLogZero) out.push_back({first.first_node + s, base + lp});
      }
    }
  };

  g.arcs.resize(g.NumNodes());
  g.log_final.assign(g.NumNodes(), kLogZero);
  std::vector<bool> is_end(g.words.size(), false);
  for (int e : ends) is_end[e] = true;
  for (int w = 0; w < static_cast<int>(g.words.size()); ++w) {
    for (const auto &ps : spans[w]) {
      for (size_t k = 0; k < ps.size(); ++k) {
        const GmmHmm &hmm = *ps[k].hmm;
        for (int s = 0; s < hmm.NumStates(); ++s) {
          const int node = ps[k].first_node + s;
          auto &out = g.arcs[node];
          for (int s2 = 0; s2 < hmm.NumStates(); ++s2) {
            double lp = hmm.log_transitions(s, s2);
            if (lp != kLogZero) out.push_back({ps[k].first_node + s2, lp});
          }
          const double exit = hmm.log_exit[s];
          if (exit == kLogZero) continue;
          if (k + 1 < ps.size()) {
            const PhonemeSpan &next = ps[k + 1];
            for (int s2 = 0; s2 < next.hmm->NumStates(); ++s2) {
              double lp = next.hmm->log_priors[s2];
              if (lp != kLogZero) out.push_back({next.first_node + s2, exit + lp});
            }
          } else {
            for (int w2 : succ[w]) {
              double wip = g.words[w2].is_silence ? 0.0 : options.word_insertion_penalty;
              entries(w2, exit + wip, out);
            }
            if (is_end[w]) g.log_final[node] = exit;
          }
        }
      }
    }
  }
  for (int w : starts) {
    double wip = g.words[w].is_silence ? 0.0 : options.word_insertion_penalty;
    entries(w, wip, g.initial);
  }
  auto by_target = [](const GraphArc &x, const GraphArc &y) { return x.to < y.to; };
  for (auto &out : g.arcs) std::stable_sort(out.begin(), out.end(), by_target);
  std::stable_sort(g.initial.begin(), g.initial.end(), by_target);

  g.source = std::make_shared<const SourceModel>(speaker.empty() ? "graph" : speaker,
                                                 std::move(pdfs), features);
  return g;
}

DecodeGraph CompileDecodeGraph(const WordNetwork &network, const Lexicon &lexicon,
                               const SpeakerModels &speaker,
                               const FeatureConfig &features,
                               const GraphOptions &options) {
  return CompileDecodeGraph(network, lexicon, speaker.phonemes, features, options,
                            speaker.id);
}

GmmHmm ComposeGraphHmm(const DecodeGraph &graph) {
  const int n = graph.NumNodes();
  GmmHmm hmm;
  hmm.name = "composite";
  hmm.log_transitions = Matrix::Constant(n, n, kLogZero);
  hmm.log_priors = Vector::Constant(n, kLogZero);
  hmm.log_exit = Vector::Constant(n, kLogZero);
  for (int i = 0; i < n; ++i) {
    for (const GraphArc &a : graph.arcs[i])
      hmm.log_transitions(i, a.to) = std::max(hmm.log_transitions(i, a.to), a.log_prob);
    hmm.log_exit[i] = graph.log_final[i];
    hmm.states.push_back(graph.source->RawPdf(graph.node_pdf[i]));
  }
  for (const GraphArc &a : graph.initial)
    hmm.log_priors[a.to] = std::max(hmm.log_priors[a.to], a.log_prob);
  return hmm;
}

}  // namespace fasr
