// harness/pipeline.h

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

#ifndef FASR_HARNESS_PIPELINE_H_
#define FASR_HARNESS_PIPELINE_H_

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fasr/decoder/joint-token-decoder.h"
#include "fasr/harness/scoring.h"
#include "fasr/speaker/gain.h"
#include "fasr/speaker/identify.h"

namespace fasr {

enum class SourceMode { kOracle, kEstimated };

struct PipelineConfig {
  SourceMode id_mode = SourceMode::kOracle;
  SourceMode gain_mode = SourceMode::kOracle;
  IdThresholds thresholds;
  // Grid and search mode for gain estimation.  The pipeline supplies the
  // grammar, cache, beam and interaction settings itself.
  GainSearchConfig gain_search;
  DecoderConfig decoder;
  GraphOptions graph;
  // When false the masker model is used at unit gain.
  bool adapt_gain = true;
};

struct TrialInput {
  std::string id;
  double tmr_db = 0.0;
  std::string condition;
  FeatureSequence features;
  std::vector<std::string> target_words;  // references, may be empty
  std::vector<std::string> masker_words;
  std::optional<std::string> target_speaker;
  std::optional<std::string> masker_speaker;
  std::optional<double> masker_gain;  // linear; defaults from tmr_db
};

/// Full recognition procedure for one mixture: speaker ids, masker gain,
/// gain adaptation, joint decoding, target resolution and scoring.
/// Thread-safe; graphs and compensated blocks are shared between trials.
class RecognitionPipeline {
 public:
  RecognitionPipeline(SpeakerModelSet models, WordNetwork network, Lexicon lexicon,
                      PipelineConfig config);

  /// Failures are reported in the record's error field.
  TrialRecord Run(const TrialInput &trial);

  const SpeakerModelSet &models() const { return models_; }
  const WordNetwork &network() const { return network_; }
  const Lexicon &lexicon() const { return lexicon_; }
  const PipelineConfig &config() const { return config_; }
  CompensationCache &cache() { return cache_; }

  /// Graph of a speaker's models adapted to masker gain g (1 = unadapted).
  std::shared_ptr<const DecodeGraph> Graph(const std::string &speaker, double gain);

 private:
  TrialRecord RunOrThrow(const TrialInput &trial);

  SpeakerModelSet models_;
  WordNetwork network_;
  Lexicon lexicon_;
  PipelineConfig config_;
  CompensationCache cache_;
  std::mutex graph_mutex_;
  std::map<std::pair<std::string, double>, std::shared_ptr<const DecodeGraph>> graphs_;
};

/// Thread count from FASR_THREADS, else the hardware concurrency.
int ConfiguredThreads();

/// Runs trials on `threads` workers; the report is sorted by trial id.
ScoreReport RunTrials(RecognitionPipeline &pipeline, const std::vector<TrialInput> &trials,
                      int threads);

}  // namespace fasr

#endif  // FASR_HARNESS_PIPELINE_H_
