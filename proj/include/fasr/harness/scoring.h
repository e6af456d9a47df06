// harness/scoring.h

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

#ifndef FASR_HARNESS_SCORING_H_
#define FASR_HARNESS_SCORING_H_

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace fasr {

inline constexpr int kCommandSlots = 6;
inline constexpr int kColorSlot = 1;   // 0-based
inline constexpr int kLetterSlot = 3;
inline constexpr int kDigitSlot = 4;

struct KeywordScore {
  bool letter_ok = false;
  bool digit_ok = false;
};

/// Compares the letter and digit slots.  Throws Error(kScoring) unless both
/// sequences have six words.
KeywordScore ScoreKeywords(const std::vector<std::string> &hypothesis,
                           const std::vector<std::string> &reference);

/// One row of an experiment report.
struct TrialRecord {
  std::string trial_id;
  double tmr_db = 0.0;
  std::string condition;
  std::optional<bool> speaker_id_ok;  // unknown without reference speakers
  bool letter_ok = false;
  bool digit_ok = false;
  double score = 0.0;  // joint decode log score, NaN on failure
  std::vector<std::string> target_words;
  std::vector<std::string> masker_words;
  std::string target_speaker, masker_speaker;
  double estimated_tmr_db = 0.0;
  bool ambiguous_target = false;
  std::string error;  // empty on success
};

struct KeywordTally {
  int trials = 0;
  int letters = 0;
  int digits = 0;
  int both = 0;
  int failures = 0;
  int speaker_known = 0;
  int speaker_ok = 0;

  void Add(const TrialRecord &r);
  /// Mean of letter and digit accuracy ("per-keyword accuracy").
  double KeywordAccuracy() const;
  double LetterAccuracy() const;
  double DigitAccuracy() const;
  double BothCorrect() const;
  double SpeakerAccuracy() const;
};

struct ScoreReport {
  std::vector<TrialRecord> trials;  // sorted by trial id
  std::map<double, KeywordTally> per_tmr;
  KeywordTally overall;
};

/// Sorts the rows and recomputes all aggregates from them.
ScoreReport BuildReport(std::vector<TrialRecord> trials);

/// Columns: trial_id, tmr_db, condition, speaker_id_ok, letter_ok, digit_ok,
/// score.
void WriteCsv(std::ostream &os, const ScoreReport &report);
void WriteSummary(std::ostream &os, const ScoreReport &report);

}  // namespace fasr

#endif  // FASR_HARNESS_SCORING_H_
