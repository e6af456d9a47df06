// decoder/decode-graph.h

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

#ifndef FASR_DECODER_DECODE_GRAPH_H_
#define FASR_DECODER_DECODE_GRAPH_H_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fasr/models/gmm-hmm.h"
#include "fasr/models/grammar.h"
#include "fasr/vts/joint-scorer.h"

namespace fasr {

/// Position of a chain inside its decoding graph.  `word` indexes
/// DecodeGraph::words (grammar nodes first, then optional silences).
struct RichState {
  int word = -1;
  int pron = -1;
  int phoneme = -1;
  int state = -1;
  bool operator==(const RichState &) const = default;
  auto operator<=>(const RichState &) const = default;
};

struct GraphArc {
  int to;
  double log_prob;
};

/// One word occurrence in the decoding graph.
struct GraphWord {
  std::string label;      // empty for silence
  int network_node = -1;  // -1 for silence
  bool is_silence = false;
  std::vector<std::vector<std::string>> prons;
};

struct GraphOptions {
  // Phoneme used for the optional leading/trailing silence; empty disables
  // both regardless of the flags below.
  std::string silence_phoneme;
  bool leading_silence = false;
  bool trailing_silence = false;
  // Added on every transition into a new grammar word.
  double word_insertion_penalty = 0.0;
};

/// Flattened phoneme-state graph of one chain.  Node ids are assigned in
/// lexicographic order of (word, pron, phoneme, state), so comparing ids
/// compares rich states.  Every node emits; all arcs consume one frame.
struct DecodeGraph {
  std::vector<GraphWord> words;
  std::vector<RichState> nodes;
  std::vector<int> node_pdf;                    // index into source pdfs
  std::vector<std::vector<GraphArc>> arcs;      // per node, sorted by target
  std::vector<GraphArc> initial;                // entry nodes and log priors
  std::vector<double> log_final;                // kLogZero if not final
  std::vector<std::string> pdf_names;           // "phoneme[state]"
  std::shared_ptr<const SourceModel> source;
  std::string speaker;

  int NumNodes() const { return static_cast<int>(nodes.size()); }
  /// Longest phoneme model, in states.
  int MaxPhonemeStates() const;
  /// Grammar words of an alignment, one per word occurrence (silences
  /// skipped).
  std::vector<std::string> WordsOf(const std::vector<int> &node_path) const;
};

/// Throws Error(kCompile) naming a missing word or phoneme model.
DecodeGraph CompileDecodeGraph(const WordNetwork &network, const Lexicon &lexicon,
                               const std::map<std::string, GmmHmm> &phonemes,
                               const FeatureConfig &features,
                               const GraphOptions &options = {},
                               const std::string &speaker = "");

DecodeGraph CompileDecodeGraph(const WordNetwork &network, const Lexicon &lexicon,
                               const SpeakerModels &speaker,
                               const FeatureConfig &features,
                               const GraphOptions &options = {});

/// The whole graph as one HMM: states are graph nodes, exit weights are the
/// final weights, parallel arcs keep their best probability.
/// Rows need not be stochastic.
GmmHmm ComposeGraphHmm(const DecodeGraph &graph);

}  // namespace fasr

#endif  // FASR_DECODER_DECODE_GRAPH_H_
