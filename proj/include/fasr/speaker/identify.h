// speaker/identify.h

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

#ifndef FASR_SPEAKER_IDENTIFY_H_
#define FASR_SPEAKER_IDENTIFY_H_

#include <string>
#include <vector>

#include "fasr/decoder/joint-token-decoder.h"
#include "fasr/features/mfcc.h"
#include "fasr/models/gmm-hmm.h"

namespace fasr {

/// T x S per-frame speaker scores in [0, 1].
struct SpeakerScoreMatrix {
  Matrix z;
  std::vector<std::string> speaker_ids;  // column labels
};

/// Posterior of each speaker's frame GMM under equal priors, computed on
/// the static stream.  Columns follow SpeakerModelSet::SpeakerIds().
SpeakerScoreMatrix FrameSpeakerScores(const FeatureSequence &features,
                                      const SpeakerModelSet &models);

struct IdThresholds {
  double lambda = 0.99;  // activations below this are dropped
  double theta = 0.1;    // the runner-up must exceed this aggregate
  void Validate() const;
};

struct SpeakerVote {
  std::vector<int> accepted;      // column indices, best first; one or two
  std::vector<std::string> ids;   // matching labels when available
  Vector aggregate;               // per-speaker sums over frames
};

/// Drops activations below lambda, keeps the two largest per frame (ties to
/// the lower column), sums over frames, and accepts the best speaker plus
/// the runner-up when its sum exceeds theta.  Throws Error(kEmptyVote) if
/// nothing survives.
SpeakerVote VoteSpeakers(const Matrix &z, const IdThresholds &thresholds = {});
SpeakerVote VoteSpeakers(const SpeakerScoreMatrix &scores,
                         const IdThresholds &thresholds = {});

struct TargetResolution {
  const Hypothesis *target = nullptr;
  const Hypothesis *masker = nullptr;
  bool swapped = false;    // target came from chain b
  bool ambiguous = false;  // both or neither chain said the target word
};

/// The chain whose word at `slot` equals `target_word` is the target.  When
/// both or neither match, the higher-scoring chain is the target (chain a on
/// a tie) and the result is flagged.
TargetResolution ResolveTarget(const Hypothesis &a, const Hypothesis &b,
                               int slot = 1, const std::string &target_word = "white");

}  // namespace fasr

#endif  // FASR_SPEAKER_IDENTIFY_H_
