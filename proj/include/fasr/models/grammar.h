// models/grammar.h

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

#ifndef FASR_MODELS_GRAMMAR_H_
#define FASR_MODELS_GRAMMAR_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace fasr {

/// Word-level lattice.  Node ids are topologically ordered (every arc goes
/// from a lower to a higher id), which keeps the graph acyclic.
struct WordNetwork {
  std::vector<std::string> words;           // label per node
  std::vector<std::pair<int, int>> arcs;    // (from, to)
  std::vector<int> start_nodes;
  std::vector<int> end_nodes;
  // Node ids per slot when the network came from a slot list; empty for a
  // general lattice.
  std::vector<std::vector<int>> slots;

  int NumNodes() const { return static_cast<int>(words.size()); }
  std::vector<std::vector<int>> Successors() const;
  bool IsStart(int node) const;
  bool IsEnd(int node) const;

  /// Throws Error(kCompile) unless the network is non-empty, topologically
  /// ordered and every node lies on a start-to-end path.
  void Validate() const;
  uint64_t NumPaths() const;
  /// All word sequences in lexicographic node-id order, up to `limit`.
  std::vector<std::vector<std::string>> EnumeratePaths(size_t limit) const;
  bool Accepts(const std::vector<std::string> &sequence) const;
  std::set<std::string> Vocabulary() const;
};

/// Builds a network whose path language is the cross product of the slots.
/// Duplicate words in a slot are dropped with a warning.
WordNetwork NetworkFromSlots(const std::vector<std::vector<std::string>> &slots,
                             std::vector<std::string> *warnings = nullptr);

/// Accepts either one slot per line ("w1 | w2 | w3"), or the HParse subset
/// used by the GRID task grammar:
///
///   ($command $color ...)
///   $command = bin | lay | place | set ;
///
/// Words are case-folded to lower case.  '#' starts a comment.
WordNetwork CompileGrammar(const std::string &text,
                           std::vector<std::string> *warnings = nullptr);
WordNetwork ReadGrammar(const std::string &path,
                        std::vector<std::string> *warnings = nullptr);

/// word -> pronunciations, each a phoneme sequence.
struct Lexicon {
  std::map<std::string, std::vector<std::vector<std::string>>> prons;

  const std::vector<std::vector<std::string>> &Pronunciations(
      const std::string &word) const;
  std::set<std::string> Phonemes() const;
};

/// Lines "WORD ph1 ph2 ..."; repeated words add pronunciations.  Words are
/// case-folded to lower case, phonemes are kept verbatim.
Lexicon ParseLexicon(const std::string &text);
Lexicon ReadLexicon(const std::string &path);

}  // namespace fasr

#endif  // FASR_MODELS_GRAMMAR_H_
