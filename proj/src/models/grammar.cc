// models/grammar.cc

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

#include "fasr/models/grammar.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

#include "fasr/base/error.h"

namespace fasr {

namespace {

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string StripComment(const std::string &line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

std::string Trim(const std::string &s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool IsWordToken(const std::string &w) {
  if (w.empty()) return false;
  return std::all_of(w.begin(), w.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '\'' || c == '-' || c == '.';
  });
}

[[noreturn]] void ParseError(int line, const std::string &why) {
  Fail(ErrorKind::kParse, "grammar line " + std::to_string(line) + ": " + why);
}

// Splits "a | b | c" into words; an empty alternative is an error.
std::vector<std::string> ParseAlternatives(const std::string &body, int line) {
  std::vector<std::string> words;
  std::stringstream ss(body);
  std::string item;
  bool any = false;
  while (std::getline(ss, item, '|')) {
    any = true;
    std::string w = Trim(item);
    if (w.empty()) ParseError(line, "empty slot or empty alternative");
    if (w.find_first_of(" \t") != std::string::npos)
      ParseError(line, "alternative '" + w + "' contains whitespace");
    if (!IsWordToken(w)) ParseError(line, "unexpected token '" + w + "'");
    words.push_back(Lower(w));
  }
  if (!any || body.back() == '|') ParseError(line, "empty slot or empty alternative");
  return words;
}

std::string ReadFile(const std::string &path) {
  std::ifstream is(path);
  if (!is) Fail(ErrorKind::kIo, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<std::vector<int>> WordNetwork::Successors() const {
  std::vector<std::vector<int>> succ(words.size());
  for (auto [from, to] : arcs) succ[from].push_back(to);
  for (auto &s : succ) std::sort(s.begin(), s.end());
  return succ;
}

bool WordNetwork::IsStart(int node) const {
  return std::find(start_nodes.begin(), start_nodes.end(), node) != start_nodes.end();
}

bool WordNetwork::IsEnd(int node) const {
  return std::find(end_nodes.begin(), end_nodes.end(), node) != end_nodes.end();
}

void WordNetwork::Validate() const {
  const int n = NumNodes();
  if (n == 0 || start_nodes.empty() || end_nodes.empty())
    Fail(ErrorKind::kCompile, "word network is empty");
  for (auto [from, to] : arcs) {
    if (from < 0 || to < 0 || from >= n || to >= n)
      Fail(ErrorKind::kCompile, "word network arc references a missing node");
    if (from >= to)
      Fail(ErrorKind::kCompile, "word network arcs must be topologically ordered");
  }
  for (int s : start_nodes)
    if (s < 0 || s >= n) Fail(ErrorKind::kCompile, "bad start node");
  for (int e : end_nodes)
    if (e < 0 || e >= n) Fail(ErrorKind::kCompile, "bad end node");
  std::vector<char> reach(n, 0), coreach(n, 0);
  for (int s : start_nodes) reach[s] = 1;
  for (int e : end_nodes) coreach[e] = 1;
  auto sorted = arcs;
  std::sort(sorted.begin(), sorted.end());
  for (auto [from, to] : sorted)
    if (reach[from]) reach[to] = 1;
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it)
    if (coreach[it->second]) coreach[it->first] = 1;
  for (int i = 0; i < n; ++i)
    if (!reach[i] || !coreach[i])
      Fail(ErrorKind::kCompile, "word '" + words[i] + "' (node " +
                                    std::to_string(i) + ") is not on any complete path");
}

uint64_t WordNetwork::NumPaths() const {
  const int n = NumNodes();
  auto succ = Successors();
  std::vector<uint64_t> count(n, 0);
  for (int i = n - 1; i >= 0; --i) {
    count[i] = IsEnd(i) ? 1 : 0;
    for (int j : succ[i]) count[i] += count[j];
  }
  uint64_t total = 0;
  for (int s : start_nodes) total += count[s];
  return total;
}

std::vector<std::vector<std::string>> WordNetwork::EnumeratePaths(size_t limit) const {
  std::vector<std::vector<std::string>> out;
  auto succ = Successors();
  std::vector<std::string> prefix;
  std::function<void(int)> walk = [&](int node) {
    if (out.size() >= limit) return;
    prefix.push_back(words[node]);
    if (IsEnd(node)) out.push_back(prefix);
    for (int next : succ[node]) walk(next);
    prefix.pop_back();
  };
  auto starts = start_nodes;
  std::sort(starts.begin(), starts.end());
  for (int s : starts) walk(s);
  return out;
}

bool WordNetwork::Accepts(const std::vector<std::string> &sequence) const {
  if (sequence.empty()) return false;
  auto succ = Successors();
  std::vector<int> frontier;
  for (int s : start_nodes)
    if (words[s] == sequence[0]) frontier.push_back(s);
  for (size_t k = 1; k < sequence.size() && !frontier.empty(); ++k) {
    std::vector<int> next;
    for (int node : frontier)
      for (int to : succ[node])
        if (words[to] == sequence[k]) next.push_back(to);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    frontier = std::move(next);
  }
  return std::any_of(frontier.begin(), frontier.end(),
                     [&](int node) { return IsEnd(node); });
}

std::set<std::string> WordNetwork::Vocabulary() const {
  return {words.begin(), words.end()};
}

WordNetwork NetworkFromSlots(const std::vector<std::vector<std::string>> &slots,
                             std::vector<std::string> *warnings) {
  if (slots.empty()) Fail(ErrorKind::kCompile, "grammar has no slots");
  WordNetwork net;
  for (size_t k = 0; k < slots.size(); ++k) {
    if (slots[k].empty())
      Fail(ErrorKind::kCompile, "slot " + std::to_string(k + 1) + " is empty");
    std::vector<int> ids;
    std::set<std::string> seen;
    for (const auto &w : slots[k]) {
      if (!seen.insert(w).second) {
        std::string msg = "duplicate word '" + w + "' in slot " +
                          std::to_string(k + 1) + " removed";
        if (warnings) warnings->push_back(msg);
        Warn(msg);
        continue;
      }
      ids.push_back(net.NumNodes());
      net.words.push_back(w);
    }
    if (k > 0)
      for (int from : net.slots.back())
        for (int to : ids) net.arcs.emplace_back(from, to);
    net.slots.push_back(std::move(ids));
  }
  net.start_nodes = net.slots.front();
  net.end_nodes = net.slots.back();
  net.Validate();
  return net;
}

WordNetwork CompileGrammar(const std::string &text,
                           std::vector<std::string> *warnings) {
  std::vector<std::string> lines;
  {
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(Trim(StripComment(line)));
  }
  const bool hparse = std::any_of(lines.begin(), lines.end(), [](const std::string &l) {
    return !l.empty() && (l[0] == '$' || l[0] == '(');
  });

  std::vector<std::vector<std::string>> slots;
  if (!hparse) {
    for (size_t i = 0; i < lines.size(); ++i)
      if (!lines[i].empty()) slots.push_back(ParseAlternatives(lines[i], i + 1));
    if (slots.empty()) Fail(ErrorKind::kParse, "grammar has no slots");
    return NetworkFromSlots(slots, warnings);
  }

  std::map<std::string, std::vector<std::string>> vars;
  std::vector<std::pair<std::string, int>> sequence;  // token, line
  bool have_sequence = false;
  for (size_t i = 0; i < lines.size(); ++i) {
    const int lineno = static_cast<int>(i + 1);
    std::string l = lines[i];
    if (l.empty()) continue;
    if (l[0] == '(') {
      if (have_sequence) ParseError(lineno, "second top-level sequence");
      if (l.back() != ')') ParseError(lineno, "unterminated '('");
      std::stringstream body(l.substr(1, l.size() - 2));
      std::string tok;
      while (body >> tok) {
        if (!(tok[0] == '$' ? IsWordToken(tok.substr(1)) : IsWordToken(tok)))
          ParseError(lineno, "unexpected token '" + tok + "'");
        sequence.emplace_back(tok, lineno);
      }
      if (sequence.empty()) ParseError(lineno, "empty top-level sequence");
      have_sequence = true;
    } else if (l[0] == '$') {
      auto eq = l.find('=');
      if (eq == std::string::npos) ParseError(lineno, "expected '=' in definition");
      std::string name = Trim(l.substr(1, eq - 1));
      if (!IsWordToken(name)) ParseError(lineno, "bad variable name '" + name + "'");
      std::string body = Trim(l.substr(eq + 1));
      if (!body.empty() && body.back() == ';') body = Trim(body.substr(0, body.size() - 1));
      if (body.empty()) ParseError(lineno, "empty slot $" + name);
      if (vars.count(name)) ParseError(lineno, "variable $" + name + " redefined");
      vars[name] = ParseAlternatives(body, lineno);
    } else {
      ParseError(lineno, "unknown syntax '" + l + "'");
    }
  }
  if (!have_sequence) Fail(ErrorKind::kParse, "grammar has no top-level ( ... ) sequence");
  for (const auto &[tok, lineno] : sequence) {
    if (tok[0] == '$') {
      auto it = vars.find(tok.substr(1));
      if (it == vars.end()) ParseError(lineno, "undefined variable " + tok);
      slots.push_back(it->second);
    } else {
      slots.push_back({Lower(tok)});
    }
  }
  return NetworkFromSlots(slots, warnings);
}

WordNetwork ReadGrammar(const std::string &path, std::vector<std::string> *warnings) {
  return CompileGrammar(ReadFile(path), warnings);
}

const std::vector<std::vector<std::string>> &Lexicon::Pronunciations(
    const std::string &word) const {
  auto it = prons.find(word);
  if (it == prons.end()) Fail(ErrorKind::kCompile, "word '" + word + "' not in lexicon");
  return it->second;
}

std::set<std::string> Lexicon::Phonemes() const {
  std::set<std::string> out;
  for (const auto &[w, list] : prons)
    for (const auto &p : list) out.insert(p.begin(), p.end());
  return out;
}

Lexicon ParseLexicon(const std::string &text) {
  Lexicon lex;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    std::stringstream ls(StripComment(line));
    std::string word, ph;
    if (!(ls >> word)) continue;
    std::vector<std::string> pron;
    while (ls >> ph) pron.push_back(ph);
    if (pron.empty())
      Fail(ErrorKind::kParse, "lexicon line " + std::to_string(lineno) +
                                  ": word '" + word + "' has no phonemes");
    auto &list = lex.prons[Lower(word)];
    if (std::find(list.begin(), list.end(), pron) == list.end()) list.push_back(pron);
  }
  return lex;
}

Lexicon ReadLexicon(const std::string &path) { return ParseLexicon(ReadFile(path)); }

}  // namespace fasr
