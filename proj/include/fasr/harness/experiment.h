// harness/experiment.h

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

#ifndef FASR_HARNESS_EXPERIMENT_H_
#define FASR_HARNESS_EXPERIMENT_H_

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fasr/harness/mixing.h"
#include "fasr/harness/pipeline.h"

namespace fasr {

// Manifest schema (JSON; relative paths resolve against the manifest's
// directory):
//
//   {
//     "model_set": "models.json", "grammar": "grid.grammar", "lexicon": "grid.lex",
//     "id_mode": "oracle" | "estimated",  "gain_mode": "oracle" | "estimated",
//     "gain_search": "proxy" | "exact",   "tmr_grid": [-12, ..., 12],
//     "thresholds": {"lambda": 0.99, "theta": 0.1},
//     "adapt_gain": true,
//     "decode": {"alpha": 2.0, "beam_tokens": 2000, "beam_score": 200.0,
//                "full_cov": false, "components": "max" | "logsum",
//                "prefill_cache": false,
//                "silence_phoneme": "", "leading_silence": false,
//                "trailing_silence": false, "word_insertion_penalty": 0.0},
//     "trials": [
//       {"id": "t1", "tmr_db": 0, "condition": "diff",
//        "mixture": {"target_wav": "a.wav", "masker_wav": "b.wav", "out_wav": "m.wav"},
//        "wav": "premixed.wav", "features": "dump.bin",      (one of the three)
//        "target_words": [...], "masker_words": [...],
//        "target_speaker": "s1", "masker_speaker": "s2", "masker_gain": 1.0}
//     ]
//   }
//
// beam_tokens or beam_score set to null disables that limit.

struct ManifestTrial {
  std::string id;
  double tmr_db = 0.0;
  std::string condition;
  std::optional<MixtureSpec> mixture;
  std::string wav;
  std::string features;
  std::vector<std::string> target_words, masker_words;
  std::optional<std::string> target_speaker, masker_speaker;
  std::optional<double> masker_gain;
};

struct ExperimentManifest {
  std::string model_set, grammar, lexicon;
  PipelineConfig config;
  std::vector<ManifestTrial> trials;
};

/// Throws Error(kParse) for schema violations.
ExperimentManifest ManifestFromJson(const nlohmann::json &j, const std::string &base_dir);
ExperimentManifest LoadManifest(const std::string &path);

/// Decode options shared by the manifest and the command line.
void DecodeOptionsFromJson(const nlohmann::json &j, PipelineConfig &config);

/// Loads assets, runs every trial and builds the report.  Trials whose
/// audio cannot be prepared are reported as failures.
ScoreReport RunExperiment(const ExperimentManifest &manifest, int threads);

/// Features for a waveform under the model set's configuration.
FeatureSequence FeaturesForWaveform(const Waveform &wave, const FeatureConfig &config);

}  // namespace fasr

#endif  // FASR_HARNESS_EXPERIMENT_H_
