// harness/experiment.cc

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

#include "fasr/harness/experiment.h"

#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "fasr/base/error.h"
#include "fasr/features/mfcc.h"
#include "fasr/models/model-io.h"

namespace fasr {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string Resolve(const std::string &base, const std::string &path) {
  if (path.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base) / path).string();
}

SourceMode ParseMode(const json &j, const char *key) {
  if (!j.contains(key)) return SourceMode::kOracle;
  const std::string v = j.at(key).get<std::string>();
  if (v == "oracle") return SourceMode::kOracle;
  if (v == "estimated") return SourceMode::kEstimated;
  Fail(ErrorKind::kParse, std::string("manifest field '") + key + "' must be oracle or estimated");
}

std::vector<std::string> Words(const json &j, const char *key) {
  if (!j.contains(key)) return {};
  std::vector<std::string> out = j.at(key).get<std::vector<std::string>>();
  for (auto &w : out)
    for (char &c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

void DecodeOptionsFromJson(const json &d, PipelineConfig &config) {
  InteractionConfig &ic = config.decoder.interaction;
  if (d.contains("alpha")) ic.alpha = d.at("alpha").get<double>();
  if (d.contains("full_cov"))
    ic.covariance = d.at("full_cov").get<bool>() ? CovarianceMode::kFull
                                                 : CovarianceMode::kDiagonal;
  if (d.contains("components")) {
    const std::string c = d.at("components").get<std::string>();
    if (c == "max")
      ic.components = ComponentMode::kMax;
    else if (c == "logsum")
      ic.components = ComponentMode::kLogSum;
    else
      Fail(ErrorKind::kParse, "decode.components must be max or logsum");
  }
  BeamConfig &beam = config.decoder.beam;
  if (d.contains("beam_tokens")) {
    if (d.at("beam_tokens").is_null())
      beam.max_active_tokens.reset();
    else
      beam.max_active_tokens = d.at("beam_tokens").get<int64_t>();
  }
  if (d.contains("beam_score")) {
    if (d.at("beam_score").is_null())
      beam.score_beam.reset();
    else
      beam.score_beam = d.at("beam_score").get<double>();
  }
  config.decoder.prefill_cache = d.value("prefill_cache", config.decoder.prefill_cache);
  GraphOptions &g = config.graph;
  g.silence_phoneme = d.value("silence_phoneme", g.silence_phoneme);
  g.leading_silence = d.value("leading_silence", g.leading_silence);
  g.trailing_silence = d.value("trailing_silence", g.trailing_silence);
  g.word_insertion_penalty = d.value("word_insertion_penalty", g.word_insertion_penalty);
  beam.Validate();
}

ExperimentManifest ManifestFromJson(const json &j, const std::string &base_dir) {
  try {
    ExperimentManifest m;
    m.model_set = Resolve(base_dir, j.at("model_set").get<std::string>());
    m.grammar = Resolve(base_dir, j.at("grammar").get<std::string>());
    m.lexicon = Resolve(base_dir, j.at("lexicon").get<std::string>());
    PipelineConfig &pc = m.config;
    pc.id_mode = ParseMode(j, "id_mode");
    pc.gain_mode = ParseMode(j, "gain_mode");
    if (j.contains("gain_search")) {
      const std::string v = j.at("gain_search").get<std::string>();
      if (v == "proxy")
        pc.gain_search.mode = GainSearchMode::kProxy;
      else if (v == "exact")
        pc.gain_search.mode = GainSearchMode::kExact;
      else
        Fail(ErrorKind::kParse, "gain_search must be proxy or exact");
    }
    if (j.contains("tmr_grid")) pc.gain_search.tmr_grid_db = j.at("tmr_grid").get<std::vector<double>>();
    if (j.contains("thresholds")) {
      pc.thresholds.lambda = j.at("thresholds").value("lambda", pc.thresholds.lambda);
      pc.thresholds.theta = j.at("thresholds").value("theta", pc.thresholds.theta);
    }
    pc.adapt_gain = j.value("adapt_gain", true);
    if (j.contains("decode")) DecodeOptionsFromJson(j.at("decode"), pc);

    for (const json &t : j.value("trials", json::array())) {
      ManifestTrial mt;
      mt.id = t.at("id").get<std::string>();
      mt.tmr_db = t.value("tmr_db", 0.0);
      mt.condition = t.value("condition", "");
      if (t.contains("mixture")) {
        const json &mx = t.at("mixture");
        MixtureSpec spec;
        spec.target_wav = Resolve(base_dir, mx.at("target_wav").get<std::string>());
        spec.masker_wav = Resolve(base_dir, mx.at("masker_wav").get<std::string>());
        spec.tmr_db = mx.value("tmr_db", mt.tmr_db);
        spec.out_wav = Resolve(base_dir, mx.value("out_wav", ""));
        mt.mixture = spec;
      }
      mt.wav = Resolve(base_dir, t.value("wav", ""));
      mt.features = Resolve(base_dir, t.value("features", ""));
      if (!mt.mixture && mt.wav.empty() && mt.features.empty())
        Fail(ErrorKind::kParse, "trial '" + mt.id + "' has no mixture, wav or features");
      mt.target_words = Words(t, "target_words");
      mt.masker_words = Words(t, "masker_words");
      if (t.contains("target_speaker")) mt.target_speaker = t.at("target_speaker").get<std::string>();
      if (t.contains("masker_speaker")) mt.masker_speaker = t.at("masker_speaker").get<std::string>();
      if (t.contains("masker_gain")) mt.masker_gain = t.at("masker_gain").get<double>();
      m.trials.push_back(std::move(mt));
    }
    return m;
  } catch (const json::exception &e) {
    Fail(ErrorKind::kParse, std::string("manifest: ") + e.what());
  }
}

ExperimentManifest LoadManifest(const std::string &path) {
  std::ifstream is(path);
  if (!is) Fail(ErrorKind::kIo, "cannot open manifest '" + path + "'");
  json j;
  try {
    is >> j;
  } catch (const json::exception &e) {
    Fail(ErrorKind::kParse, "manifest '" + path + "': " + e.what());
  }
  return ManifestFromJson(j, fs::path(path).parent_path().string());
}

FeatureSequence FeaturesForWaveform(const Waveform &wave, const FeatureConfig &config) {
  if (wave.sample_rate != config.sample_rate)
    Fail(ErrorKind::kInvalidInput, "audio sample rate " + std::to_string(wave.sample_rate) +
                                       " differs from the model's " +
                                       std::to_string(config.sample_rate));
  return ComputeFeatures(wave.samples, config);
}

ScoreReport RunExperiment(const ExperimentManifest &manifest, int threads) {
  SpeakerModelSet models = LoadModelSet(manifest.model_set);
  WordNetwork network = ReadGrammar(manifest.grammar);
  Lexicon lexicon = ReadLexicon(manifest.lexicon);

  std::vector<TrialInput> inputs;
  std::vector<TrialRecord> failed;
  for (const ManifestTrial &mt : manifest.trials) {
    try {
      for (const auto *words : {&mt.target_words, &mt.masker_words})
        if (!words->empty() && !network.Accepts(*words))
          Fail(ErrorKind::kInvalidInput, "reference words are not in the grammar");
      TrialInput in;
      in.id = mt.id;
      in.tmr_db = mt.tmr_db;
      in.condition = mt.condition;
      if (mt.mixture) {
        in.features = FeaturesForWaveform(MixFiles(*mt.mixture).mixture, models.feature_config);
      } else if (!mt.wav.empty()) {
        in.features = FeaturesForWaveform(ReadWav(mt.wav), models.feature_config);
      } else {
        in.features = ReadFeatureDump(mt.features, &models.feature_config);
      }
      in.target_words = mt.target_words;
      in.masker_words = mt.masker_words;
      in.target_speaker = mt.target_speaker;
      in.masker_speaker = mt.masker_speaker;
      in.masker_gain = mt.masker_gain;
      inputs.push_back(std::move(in));
    } catch (const std::exception &e) {
      TrialRecord rec;
      rec.trial_id = mt.id;
      rec.tmr_db = mt.tmr_db;
      rec.condition = mt.condition;
      rec.score = std::nan("");
      rec.error = e.what();
      failed.push_back(std::move(rec));
    }
  }
  RecognitionPipeline pipeline(std::move(models), std::move(network), std::move(lexicon),
                               manifest.config);
  ScoreReport report = RunTrials(pipeline, inputs, threads);
  std::vector<TrialRecord> all = std::move(report.trials);
  for (auto &r : failed) all.push_back(std::move(r));
  return BuildReport(std::move(all));
}

}  // namespace fasr
