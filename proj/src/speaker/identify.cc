// speaker/identify.cc

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

#include "fasr/speaker/identify.h"

#include <algorithm>
#include <numeric>

#include "fasr/base/error.h"

namespace fasr {

SpeakerScoreMatrix FrameSpeakerScores(const FeatureSequence &features,
                                      const SpeakerModelSet &models) {
  SpeakerScoreMatrix out;
  out.speaker_ids = models.SpeakerIds();
  const int num_speakers = static_cast<int>(out.speaker_ids.size());
  if (num_speakers == 0) Fail(ErrorKind::kInvalidInput, "model set has no speakers");
  const int c = models.feature_config.num_cepstra;
  if (features.Dim() < c) Fail(ErrorKind::kInvalidInput, "features lack a static stream");
  out.z.resize(features.NumFrames(), num_speakers);
  std::vector<double> ll(num_speakers);
  for (int t = 0; t < features.NumFrames(); ++t) {
    auto y = features.Frame(t).first(c);
    for (int s = 0; s < num_speakers; ++s) {
      const Gmm &gmm = models.Speaker(out.speaker_ids[s]).frame_gmm;
      if (gmm.empty())
        Fail(ErrorKind::kInvalidInput, "speaker '" + out.speaker_ids[s] + "' has no frame GMM");
      ll[s] = GmmLogLikelihood(gmm, y);
    }
    const double norm = LogSumExp(ll);
    for (int s = 0; s < num_speakers; ++s) out.z(t, s) = std::exp(ll[s] - norm);
  }
  return out;
}

void IdThresholds::Validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    Fail(ErrorKind::kInvalidConfiguration, "lambda must lie in [0, 1]");
  if (!(theta >= 0.0)) Fail(ErrorKind::kInvalidConfiguration, "theta must be nonnegative");
}

SpeakerVote VoteSpeakers(const Matrix &z, const IdThresholds &thresholds) {
  thresholds.Validate();
  const int T = static_cast<int>(z.rows()), S = static_cast<int>(z.cols());
  SpeakerVote vote;
  vote.aggregate = Vector::Zero(S);
  for (int t = 0; t < T; ++t) {
    int first = -1, second = -1;
    for (int s = 0; s < S; ++s) {
      const double v = z(t, s);
      if (!(v >= thresholds.lambda) || v == 0.0) continue;
      if (first < 0 || v > z(t, first)) {
        second = first;
        first = s;
      } else if (second < 0 || v > z(t, second)) {
        second = s;
      }
    }
    if (first >= 0) vote.aggregate[first] += z(t, first);
    if (second >= 0) vote.aggregate[second] += z(t, second);
  }
  std::vector<int> order(S);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return vote.aggregate[a] > vote.aggregate[b];
  });
  if (S == 0 || !(vote.aggregate[order[0]] > 0.0))
    Fail(ErrorKind::kEmptyVote, "no speaker activation reached the threshold");
  vote.accepted.push_back(order[0]);
  if (S > 1 && vote.aggregate[order[1]] > thresholds.theta) vote.accepted.push_back(order[1]);
  return vote;
}

SpeakerVote VoteSpeakers(const SpeakerScoreMatrix &scores, const IdThresholds &thresholds) {
  SpeakerVote vote = VoteSpeakers(scores.z, thresholds);
  for (int i : vote.accepted) vote.ids.push_back(scores.speaker_ids[i]);
  return vote;
}

TargetResolution ResolveTarget(const Hypothesis &a, const Hypothesis &b, int slot,
                               const std::string &target_word) {
  auto says = [&](const Hypothesis &h) {
    return slot >= 0 && slot < static_cast<int>(h.words.size()) &&
           h.words[slot] == target_word;
  };
  const bool sa = says(a), sb = says(b);
  TargetResolution r;
  if (sa != sb) {
    r.swapped = sb;
  } else {
    r.ambiguous = true;
    r.swapped = b.log_score > a.log_score;
  }
  r.target = r.swapped ? &b : &a;
  r.masker = r.swapped ? &a : &b;
  return r;
}

}  // namespace fasr
