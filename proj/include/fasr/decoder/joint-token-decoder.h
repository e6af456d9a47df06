// decoder/joint-token-decoder.h

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

#ifndef FASR_DECODER_JOINT_TOKEN_DECODER_H_
#define FASR_DECODER_JOINT_TOKEN_DECODER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fasr/decoder/decode-graph.h"
#include "fasr/features/mfcc.h"
#include "fasr/vts/joint-scorer.h"

namespace fasr {

/// Unset fields disable the corresponding limit.
struct BeamConfig {
  std::optional<int64_t> max_active_tokens = 2000;
  std::optional<double> score_beam = 200.0;

  static BeamConfig Disabled() { return {std::nullopt, std::nullopt}; }
  void Validate() const;
};

struct JointToken {
  int node_a;
  int node_b;
  double log_score;
  int32_t predecessor;  // token store index, -1 for an initial token
};

/// Keeps tokens within score_beam of the best and then the top
/// max_active_tokens by score, ties broken by (node_a, node_b).  Survivors
/// keep their input order.
std::vector<JointToken> PruneTokens(std::vector<JointToken> tokens,
                                    const BeamConfig &beam);

struct Hypothesis {
  std::vector<std::string> words;
  std::vector<int> nodes;             // graph node per frame
  std::vector<RichState> alignment;   // rich state per frame
  double log_score = kLogZero;
};

struct DecodeStats {
  int frames = 0;
  size_t stored_tokens = 0;
  size_t peak_active = 0;
  size_t pruned = 0;
};

struct JointDecodeResult {
  Hypothesis a;
  Hypothesis b;
  double log_score = kLogZero;
  DecodeStats stats;
};

struct DecoderConfig {
  InteractionConfig interaction;
  BeamConfig beam;
  // Compensate every pdf pair of the two sources before decoding, so later
  // utterances of the same speaker pair never miss the cache.
  bool prefill_cache = false;
};

/// Frame likelihood callbacks for the generic decoder: BeginFrame(t) is
/// called once per frame before any Score(pdf_a, pdf_b) for that frame.
struct PairScoreFunctions {
  std::function<void(int)> begin_frame;
  std::function<double(int, int)> score;
};

/// Joint token passing over two decoding graphs.  Per frame: add the joint
/// likelihood, expand chain a and recombine per (node_a, node_b), expand
/// chain b and recombine, prune.  The result backtracks the best token whose
/// nodes are both final.  Throws Error(kInfeasible) when no path exists and
/// Error(kStarvation) when pruning removed every way to finish.
JointDecodeResult JointTokenDecode(int num_frames, const DecodeGraph &graph_a,
                                   const DecodeGraph &graph_b,
                                   const PairScoreFunctions &scores,
                                   const BeamConfig &beam);

JointDecodeResult JointTokenDecode(const FeatureSequence &features,
                                   const DecodeGraph &graph_a,
                                   const DecodeGraph &graph_b,
                                   const DecoderConfig &config,
                                   CompensationCache *cache = nullptr);

}  // namespace fasr

#endif  // FASR_DECODER_JOINT_TOKEN_DECODER_H_
