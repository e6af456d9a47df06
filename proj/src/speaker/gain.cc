// speaker/gain.cc

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

#include "fasr/speaker/gain.h"

#include <algorithm>
#include <cmath>

#include "fasr/base/error.h"

namespace fasr {

GainOffset GainToOffset(double g, int num_filters) {
  if (!(g > 0.0) || !std::isfinite(g))
    Fail(ErrorKind::kDomain, "gain must be positive and finite, got " + std::to_string(g));
  if (num_filters < 1) Fail(ErrorKind::kDomain, "filter count must be positive");
  return {g, 2.0 * std::log(g) * std::sqrt(static_cast<double>(num_filters)), num_filters};
}

double TmrToMaskerGain(double tmr_db) { return std::pow(10.0, -tmr_db / 20.0); }
double MaskerGainToTmr(double g) { return -20.0 * std::log10(g); }

Gmm AdaptModelGain(const Gmm &gmm, const GainOffset &offset) {
  Gmm out = gmm;
  if (offset.g0 == 0.0) return out;
  for (GaussianComponent &c : out) c.mean[0] += offset.g0;
  return out;
}

GmmHmm AdaptModelGain(const GmmHmm &model, const GainOffset &offset) {
  GmmHmm out = model;
  for (Gmm &s : out.states) s = AdaptModelGain(s, offset);
  return out;
}

SpeakerModels AdaptModelGain(const SpeakerModels &speaker, const GainOffset &offset) {
  SpeakerModels out = speaker;
  for (auto &[name, hmm] : out.phonemes) hmm = AdaptModelGain(hmm, offset);
  out.frame_gmm = AdaptModelGain(speaker.frame_gmm, offset);
  return out;
}

std::vector<double> DefaultTmrGrid() {
  std::vector<double> grid;
  for (int db = -12; db <= 12; ++db) grid.push_back(db);
  return grid;
}

GainEstimate EstimateGainMle(const std::vector<double> &tmr_grid_db,
                             const std::function<double(double)> &score) {
  if (tmr_grid_db.empty()) Fail(ErrorKind::kEstimation, "empty gain grid");
  GainEstimate est;
  est.tmr_grid_db = tmr_grid_db;
  for (double tmr : tmr_grid_db) {
    const double g = TmrToMaskerGain(tmr);
    double s = kLogZero;
    try {
      s = score(g);
    } catch (const Error &e) {
      if (e.kind() != ErrorKind::kInfeasible && e.kind() != ErrorKind::kStarvation) throw;
    }
    if (std::isnan(s)) s = kLogZero;
    est.gains.push_back(g);
    est.scores.push_back(s);
  }
  auto preferred = [&](int i, int j) {  // is grid point i better than j?
    if (est.scores[i] != est.scores[j]) return est.scores[i] > est.scores[j];
    const double ai = std::abs(tmr_grid_db[i]), aj = std::abs(tmr_grid_db[j]);
    if (ai != aj) return ai < aj;
    return tmr_grid_db[i] < tmr_grid_db[j];
  };
  for (int i = 0; i < static_cast<int>(tmr_grid_db.size()); ++i) {
    if (est.scores[i] == kLogZero) continue;
    if (est.best_index < 0 || preferred(i, est.best_index)) est.best_index = i;
  }
  if (est.best_index < 0)
    Fail(ErrorKind::kEstimation, "every gain grid point was infeasible");
  est.tmr_db = tmr_grid_db[est.best_index];
  est.gain = est.gains[est.best_index];
  return est;
}

FeatureConfig StaticStreamConfig(const FeatureConfig &features) {
  FeatureConfig cfg = features;
  cfg.include_delta = false;
  cfg.include_accel = false;
  return cfg;
}

double FactorialFrameScore(const FeatureSequence &features, const Gmm &frame_a,
                           const Gmm &frame_b, const FeatureConfig &model_features,
                           const InteractionConfig &interaction,
                           CompensationCache *cache) {
  const FeatureConfig cfg = StaticStreamConfig(model_features);
  const int c = cfg.num_cepstra;
  if (frame_a.empty() || frame_b.empty())
    Fail(ErrorKind::kInvalidInput, "speaker has no frame GMM");
  if (frame_a.front().Dim() != c || frame_b.front().Dim() != c)
    Fail(ErrorKind::kInvalidInput, "frame GMM must cover the static stream only");
  if (features.Dim() < c) Fail(ErrorKind::kInvalidInput, "features lack a static stream");
  auto a = std::make_shared<const SourceModel>("frame", std::vector<Gmm>{frame_a}, cfg);
  auto b = std::make_shared<const SourceModel>("frame", std::vector<Gmm>{frame_b}, cfg);
  JointScorer scorer(a, b, interaction, cache);
  double total = 0.0;
  for (int t = 0; t < features.NumFrames(); ++t) {
    scorer.SetFrame(features.Frame(t).first(c));
    total += scorer.Score(0, 0);
  }
  return total;
}

GainEstimate EstimateGainMle(const FeatureSequence &features,
                             const SpeakerModels &target, const SpeakerModels &masker,
                             const FeatureConfig &model_features,
                             const GainSearchConfig &config) {
  const int m = model_features.num_mel_filters;
  if (config.mode == GainSearchMode::kProxy) {
    return EstimateGainMle(config.tmr_grid_db, [&](double g) {
      Gmm adapted = AdaptModelGain(masker.frame_gmm, GainToOffset(g, m));
      return FactorialFrameScore(features, target.frame_gmm, adapted, model_features,
                                 config.interaction, config.cache);
    });
  }
  if (!config.network || !config.lexicon)
    Fail(ErrorKind::kInvalidConfiguration, "exact gain search needs a grammar and lexicon");
  const DecodeGraph graph_a = CompileDecodeGraph(*config.network, *config.lexicon, target,
                                                 model_features, config.graph_options);
  DecoderConfig dc{config.interaction, config.beam};
  return EstimateGainMle(config.tmr_grid_db, [&](double g) {
    SpeakerModels adapted = AdaptModelGain(masker, GainToOffset(g, m));
    DecodeGraph graph_b = CompileDecodeGraph(*config.network, *config.lexicon, adapted,
                                             model_features, config.graph_options);
    return JointTokenDecode(features, graph_a, graph_b, dc, config.cache).log_score;
  });
}

}  // namespace fasr
