// harness/pipeline.cc

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

#include "fasr/harness/pipeline.h"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <set>
#include <thread>

#include "fasr/base/error.h"

namespace fasr {

RecognitionPipeline::RecognitionPipeline(SpeakerModelSet models, WordNetwork network,
                                         Lexicon lexicon, PipelineConfig config)
    : models_(std::move(models)),
      network_(std::move(network)),
      lexicon_(std::move(lexicon)),
      config_(std::move(config)) {
  models_.Validate();
  network_.Validate();
  config_.decoder.beam.Validate();
  config_.thresholds.Validate();
}

std::shared_ptr<const DecodeGraph> RecognitionPipeline::Graph(const std::string &speaker,
                                                              double gain) {
  const auto key = std::make_pair(speaker, gain);
  {
    std::lock_guard<std::mutex> lock(graph_mutex_);
    auto it = graphs_.find(key);
    if (it != graphs_.end()) return it->second;
  }
  const SpeakerModels &base = models_.Speaker(speaker);
  std::shared_ptr<const DecodeGraph> graph;
  if (gain == 1.0) {
    graph = std::make_shared<const DecodeGraph>(
        CompileDecodeGraph(network_, lexicon_, base, models_.feature_config, config_.graph));
  } else {
    SpeakerModels adapted =
        AdaptModelGain(base, GainToOffset(gain, models_.feature_config.num_mel_filters));
    graph = std::make_shared<const DecodeGraph>(CompileDecodeGraph(
        network_, lexicon_, adapted, models_.feature_config, config_.graph));
  }
  std::lock_guard<std::mutex> lock(graph_mutex_);
  return graphs_.try_emplace(key, std::move(graph)).first->second;
}

TrialRecord RecognitionPipeline::RunOrThrow(const TrialInput &trial) {
  TrialRecord rec;
  rec.trial_id = trial.id;
  rec.tmr_db = trial.tmr_db;
  rec.condition = trial.condition;
  rec.score = std::nan("");

  // Speakers: chains are (target candidate, masker candidate).
  std::vector<std::pair<std::string, std::string>> assignments;
  if (config_.id_mode == SourceMode::kOracle) {
    if (!trial.target_speaker || !trial.masker_speaker)
      Fail(ErrorKind::kInvalidInput, "oracle speaker mode needs both speaker ids");
    assignments.push_back({*trial.target_speaker, *trial.masker_speaker});
  } else {
    SpeakerVote vote = VoteSpeakers(FrameSpeakerScores(trial.features, models_),
                                    config_.thresholds);
    if (vote.ids.size() == 1) {
      assignments.push_back({vote.ids[0], vote.ids[0]});
    } else {
      assignments.push_back({vote.ids[0], vote.ids[1]});
      assignments.push_back({vote.ids[1], vote.ids[0]});
    }
    if (trial.target_speaker && trial.masker_speaker) {
      std::multiset<std::string> truth{*trial.target_speaker, *trial.masker_speaker};
      std::multiset<std::string> got{assignments[0].first, assignments[0].second};
      // A single voted id stands for the same-speaker case.
      rec.speaker_id_ok = truth == got;
    }
  }
  if (config_.id_mode == SourceMode::kOracle) rec.speaker_id_ok = true;

  auto search_config = [&]() {
    GainSearchConfig cfg = config_.gain_search;
    cfg.network = &network_;
    cfg.lexicon = &lexicon_;
    cfg.graph_options = config_.graph;
    cfg.cache = &cache_;
    cfg.beam = config_.decoder.beam;
    cfg.interaction = config_.decoder.interaction;
    return cfg;
  };

  // Masker gain: oracle, or the best over assignments x grid.
  std::string target_id = assignments[0].first, masker_id = assignments[0].second;
  double gain = 1.0;
  if (config_.gain_mode == SourceMode::kOracle) {
    gain = trial.masker_gain ? *trial.masker_gain : TmrToMaskerGain(trial.tmr_db);
    if (assignments.size() > 1) {
      // Oracle gain with estimated ids: pick the ordering the gain fits best.
      GainSearchConfig cfg = search_config();
      cfg.tmr_grid_db = {MaskerGainToTmr(gain)};
      double best = kLogZero;
      for (const auto &[t, m] : assignments) {
        GainEstimate est = EstimateGainMle(trial.features, models_.Speaker(t),
                                           models_.Speaker(m), models_.feature_config, cfg);
        if (est.scores[0] > best) {
          best = est.scores[0];
          target_id = t;
          masker_id = m;
        }
      }
    }
    rec.estimated_tmr_db = MaskerGainToTmr(gain);
  } else {
    double best = kLogZero;
    for (const auto &[t, m] : assignments) {
      GainSearchConfig cfg = search_config();
      GainEstimate est = EstimateGainMle(trial.features, models_.Speaker(t), models_.Speaker(m),
                                         models_.feature_config, cfg);
      if (est.scores[est.best_index] > best) {
        best = est.scores[est.best_index];
        target_id = t;
        masker_id = m;
        gain = est.gain;
        rec.estimated_tmr_db = est.tmr_db;
      }
    }
  }
  if (!config_.adapt_gain) gain = 1.0;

  auto graph_a = Graph(target_id, 1.0);
  auto graph_b = Graph(masker_id, gain);
  JointDecodeResult res = JointTokenDecode(trial.features, *graph_a, *graph_b,
                                           config_.decoder, &cache_);
  TargetResolution tr = ResolveTarget(res.a, res.b, kColorSlot);
  rec.score = res.log_score;
  rec.target_words = tr.target->words;
  rec.masker_words = tr.masker->words;
  rec.target_speaker = tr.swapped ? masker_id : target_id;
  rec.masker_speaker = tr.swapped ? target_id : masker_id;
  rec.ambiguous_target = tr.ambiguous;
  if (!trial.target_words.empty()) {
    KeywordScore ks = ScoreKeywords(rec.target_words, trial.target_words);
    rec.letter_ok = ks.letter_ok;
    rec.digit_ok = ks.digit_ok;
  }
  return rec;
}

TrialRecord RecognitionPipeline::Run(const TrialInput &trial) {
  try {
    return RunOrThrow(trial);
  } catch (const std::exception &e) {
    TrialRecord rec;
    rec.trial_id = trial.id;
    rec.tmr_db = trial.tmr_db;
    rec.condition = trial.condition;
    rec.score = std::nan("");
    rec.error = e.what();
    return rec;
  }
}

int ConfiguredThreads() {
  if (const char *env = std::getenv("FASR_THREADS")) {
    char *end = nullptr;
    long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1) return static_cast<int>(n);
    Warn("ignoring invalid FASR_THREADS value '" + std::string(env) + "'");
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

ScoreReport RunTrials(RecognitionPipeline &pipeline, const std::vector<TrialInput> &trials,
                      int threads) {
  std::vector<TrialRecord> records(trials.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next++; i < trials.size(); i = next++) records[i] = pipeline.Run(trials[i]);
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(trials.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto &t : pool) t.join();
  }
  return BuildReport(std::move(records));
}

}  // namespace fasr
