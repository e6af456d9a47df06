// harness/scoring.cc

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

#include "fasr/harness/scoring.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fasr/base/error.h"

namespace fasr {

KeywordScore ScoreKeywords(const std::vector<std::string> &hypothesis,
                           const std::vector<std::string> &reference) {
  auto check = [](const std::vector<std::string> &seq, const char *what) {
    if (static_cast<int>(seq.size()) != kCommandSlots)
      Fail(ErrorKind::kScoring, std::string(what) + " has " + std::to_string(seq.size()) +
                                    " words, expected " + std::to_string(kCommandSlots));
  };
  check(hypothesis, "hypothesis");
  check(reference, "reference");
  return {hypothesis[kLetterSlot] == reference[kLetterSlot],
          hypothesis[kDigitSlot] == reference[kDigitSlot]};
}

void KeywordTally::Add(const TrialRecord &r) {
  ++trials;
  letters += r.letter_ok;
  digits += r.digit_ok;
  both += r.letter_ok && r.digit_ok;
  failures += !r.error.empty();
  if (r.speaker_id_ok) {
    ++speaker_known;
    speaker_ok += *r.speaker_id_ok;
  }
}

namespace {
double Ratio(int num, int den) { return den ? static_cast<double>(num) / den : 0.0; }
}  // namespace

double KeywordTally::KeywordAccuracy() const { return Ratio(letters + digits, 2 * trials); }
double KeywordTally::LetterAccuracy() const { return Ratio(letters, trials); }
double KeywordTally::DigitAccuracy() const { return Ratio(digits, trials); }
double KeywordTally::BothCorrect() const { return Ratio(both, trials); }
double KeywordTally::SpeakerAccuracy() const { return Ratio(speaker_ok, speaker_known); }

ScoreReport BuildReport(std::vector<TrialRecord> trials) {
  ScoreReport report;
  std::stable_sort(trials.begin(), trials.end(),
                   [](const TrialRecord &a, const TrialRecord &b) {
                     return a.trial_id < b.trial_id;
                   });
  report.trials = std::move(trials);
  for (const TrialRecord &r : report.trials) {
    report.per_tmr[r.tmr_db].Add(r);
    report.overall.Add(r);
  }
  return report;
}

namespace {

std::string FormatNumber(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string CsvField(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void WriteCsv(std::ostream &os, const ScoreReport &report) {
  os << "trial_id,tmr_db,condition,speaker_id_ok,letter_ok,digit_ok,score\n";
  for (const TrialRecord &r : report.trials) {
    os << CsvField(r.trial_id) << ',' << FormatNumber(r.tmr_db) << ','
       << CsvField(r.condition) << ','
       << (r.speaker_id_ok ? (*r.speaker_id_ok ? "1" : "0") : "") << ','
       << (r.letter_ok ? 1 : 0) << ',' << (r.digit_ok ? 1 : 0) << ','
       << FormatNumber(r.score) << '\n';
  }
}

void WriteSummary(std::ostream &os, const ScoreReport &report) {
  char line[160];
  std::snprintf(line, sizeof(line), "%8s %7s %8s %8s %8s %8s %8s %8s\n", "tmr_db", "trials",
                "keyword", "letter", "digit", "both", "spk_id", "failed");
  os << line;
  auto row = [&](const std::string &label, const KeywordTally &t) {
    std::snprintf(line, sizeof(line), "%8s %7d %8.4f %8.4f %8.4f %8.4f %8s %8d\n",
                  label.c_str(), t.trials, t.KeywordAccuracy(), t.LetterAccuracy(),
                  t.DigitAccuracy(), t.BothCorrect(),
                  t.speaker_known ? FormatNumber(t.SpeakerAccuracy()).substr(0, 6).c_str()
                                  : "-",
                  t.failures);
    os << line;
  };
  for (const auto &[tmr, tally] : report.per_tmr) {
    char label[32];
    std::snprintf(label, sizeof(label), "%g", tmr);
    row(label, tally);
  }
  row("all", report.overall);
}

}  // namespace fasr
