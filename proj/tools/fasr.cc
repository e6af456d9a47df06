// tools/fasr.cc

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

// Command-line front end: feature extraction, mixing, decoding, speaker
// identification, gain estimation, batch evaluation and debug dumps.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "fasr/base/error.h"
#include "fasr/decoder/decode-graph.h"
#include "fasr/decoder/joint-token-decoder.h"
#include "fasr/features/audio-io.h"
#include "fasr/features/mfcc.h"
#include "fasr/harness/experiment.h"
#include "fasr/harness/mixing.h"
#include "fasr/harness/pipeline.h"
#include "fasr/harness/toy-task.h"
#include "fasr/models/grammar.h"
#include "fasr/models/model-io.h"
#include "fasr/speaker/gain.h"
#include "fasr/speaker/identify.h"
#include "fasr/viterbi/factorial-viterbi.h"
#include "fasr/vts/compensation.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace fasr {
namespace {

bool IsWav(const std::string &path) {
  std::string ext = fs::path(path).extension().string();
  for (char &c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == ".wav";
}

// WAV input is converted with the model set's configuration; anything else
// is read as a feature dump.
FeatureSequence LoadInput(const std::string &path, const FeatureConfig &config) {
  if (IsWav(path)) return FeaturesForWaveform(ReadWav(path), config);
  FeatureSequence f = ReadFeatureDump(path, &config);
  if (f.Dim() != config.Dim())
    Fail(ErrorKind::kInvalidInput, "feature dump '" + path + "' has dimension " +
                                       std::to_string(f.Dim()) + ", models expect " +
                                       std::to_string(config.Dim()));
  return f;
}

json ToJson(const Vector &v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json ToJson(const Matrix &m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) rows.push_back(ToJson(Vector(m.row(i).transpose())));
  return rows;
}

json ToJson(const Hypothesis &h, const DecodeGraph &g, bool align) {
  json j = {{"words", h.words}, {"score", h.log_score}};
  if (align) {
    json frames = json::array();
    for (size_t t = 0; t < h.nodes.size(); ++t) {
      const RichState &r = h.alignment[t];
      const GraphWord &w = g.words[r.word];
      frames.push_back({{"word", w.is_silence ? "<sil>" : w.label},
                        {"pron", r.pron},
                        {"phoneme", w.prons[r.pron][r.phoneme]},
                        {"state", r.state}});
    }
    j["alignment"] = frames;
  }
  return j;
}

struct DecodeFlags {
  double alpha = kDefaultAlpha;
  int64_t beam_tokens = 2000;
  double beam_score = 200.0;
  bool full_cov = false;
  bool prefill = false;
};

void AddDecodeFlags(CLI::App *cmd, DecodeFlags &f) {
  cmd->add_option("--alpha", f.alpha, "Phase factor")->capture_default_str();
  cmd->add_option("--beam-tokens", f.beam_tokens, "Max active tokens, 0 disables")
      ->capture_default_str();
  cmd->add_option("--beam-score", f.beam_score, "Score beam width, negative disables")
      ->capture_default_str();
  cmd->add_flag("--full-cov", f.full_cov, "Keep full compensated covariances");
  cmd->add_flag("--prefill-cache", f.prefill, "Compensate all pdf pairs before decoding");
}

DecoderConfig MakeDecoderConfig(const DecodeFlags &f) {
  DecoderConfig dc;
  dc.interaction.alpha = f.alpha;
  dc.interaction.covariance = f.full_cov ? CovarianceMode::kFull : CovarianceMode::kDiagonal;
  dc.beam.max_active_tokens =
      f.beam_tokens > 0 ? std::optional<int64_t>(f.beam_tokens) : std::nullopt;
  dc.beam.score_beam = f.beam_score >= 0 ? std::optional<double>(f.beam_score) : std::nullopt;
  dc.prefill_cache = f.prefill;
  dc.beam.Validate();
  return dc;
}

// Reads one component: speaker / phoneme / state / component indices.
const GaussianComponent &PickComponent(const SpeakerModelSet &set, const std::string &speaker,
                                       const std::string &phoneme, int state, int component) {
  const auto &phones = set.Speaker(speaker).phonemes;
  auto it = phones.find(phoneme);
  if (it == phones.end())
    Fail(ErrorKind::kInvalidInput, "speaker '" + speaker + "' has no phoneme '" + phoneme + "'");
  const GmmHmm &h = it->second;
  if (state < 0 || state >= h.NumStates())
    Fail(ErrorKind::kInvalidInput, "state index out of range for '" + phoneme + "'");
  if (component < 0 || component >= static_cast<int>(h.states[state].size()))
    Fail(ErrorKind::kInvalidInput, "component index out of range for '" + phoneme + "'");
  return h.states[state][component];
}

int Run(int argc, char **argv) {
  CLI::App app{"Two-talker factorial GMM-HMM recognizer"};
  app.require_subcommand(1);

  // features
  std::string feat_in, feat_out, feat_config;
  auto *features = app.add_subcommand("features", "Compute MFCC features of a WAV file");
  features->add_option("input", feat_in, "Input WAV")->required();
  features->add_option("output", feat_out, "Output feature dump")->required();
  features->add_option("--config", feat_config, "FeatureConfig JSON");

  // mix
  MixtureSpec mix_spec;
  auto *mix = app.add_subcommand("mix", "Mix target and masker at a TMR");
  mix->add_option("--target", mix_spec.target_wav)->required();
  mix->add_option("--masker", mix_spec.masker_wav)->required();
  mix->add_option("--tmr", mix_spec.tmr_db, "Target-to-masker ratio in dB")->required();
  mix->add_option("--out", mix_spec.out_wav)->required();

  // Shared model options.
  std::string model_set, grammar, lexicon, input;
  auto add_models = [&](CLI::App *cmd) {
    cmd->add_option("--model-set", model_set, "Model set JSON")->required();
  };
  auto add_grammar = [&](CLI::App *cmd, bool required) {
    auto *g = cmd->add_option("--grammar", grammar, "Grammar file");
    auto *l = cmd->add_option("--lexicon", lexicon, "Lexicon file");
    if (required) {
      g->required();
      l->required();
    }
  };

  // decode
  std::string speaker_a, speaker_b;
  double gain_b = 1.0;
  bool align = false;
  DecodeFlags dflags;
  auto *decode = app.add_subcommand("decode", "Jointly decode a two-talker mixture");
  add_models(decode);
  add_grammar(decode, true);
  decode->add_option("--speaker-a", speaker_a)->required();
  decode->add_option("--speaker-b", speaker_b)->required();
  decode->add_option("--gain-b", gain_b, "Linear gain applied to chain b's models")
      ->capture_default_str();
  decode->add_flag("--align", align, "Print per-frame alignments");
  AddDecodeFlags(decode, dflags);
  decode->add_option("input", input, "WAV or feature dump")->required();

  // identify
  IdThresholds thresholds;
  auto *identify = app.add_subcommand("identify", "Vote for the speakers of a mixture");
  add_models(identify);
  identify->add_option("--lambda", thresholds.lambda)->capture_default_str();
  identify->add_option("--theta", thresholds.theta)->capture_default_str();
  identify->add_option("input", input)->required();

  // estimate-gain
  std::string target, masker;
  bool exact = false;
  auto *estimate = app.add_subcommand("estimate-gain", "Grid search for the masker gain");
  add_models(estimate);
  add_grammar(estimate, false);
  estimate->add_option("--target", target)->required();
  estimate->add_option("--masker", masker)->required();
  estimate->add_flag("--exact", exact, "Score grid points by joint decoding");
  AddDecodeFlags(estimate, dflags);
  estimate->add_option("input", input)->required();

  // eval
  std::string manifest, csv_path, summary_path;
  int threads = 0;
  auto *eval = app.add_subcommand("eval", "Run a manifest of trials");
  eval->add_option("manifest", manifest)->required();
  eval->add_option("--csv", csv_path, "CSV report path (stdout when absent)");
  eval->add_option("--summary", summary_path, "Summary table path (stderr when absent)");
  eval->add_option("--threads", threads, "Worker threads (default from FASR_THREADS)");

  // vts-dump
  std::string phoneme_a, phoneme_b;
  int state_a = 0, state_b = 0, comp_a = 0, comp_b = 0;
  auto *vts = app.add_subcommand("vts-dump", "Print f0, G, H for a component pair");
  add_models(vts);
  vts->add_option("--speaker-a", speaker_a)->required();
  vts->add_option("--phoneme-a", phoneme_a)->required();
  vts->add_option("--state-a", state_a);
  vts->add_option("--component-a", comp_a);
  vts->add_option("--speaker-b", speaker_b)->required();
  vts->add_option("--phoneme-b", phoneme_b)->required();
  vts->add_option("--state-b", state_b);
  vts->add_option("--component-b", comp_b);
  vts->add_option("--alpha", dflags.alpha)->capture_default_str();

  // viterbi-trace
  auto *trace = app.add_subcommand("viterbi-trace",
                                   "Two-dimensional Viterbi over two phoneme models");
  add_models(trace);
  trace->add_option("--speaker-a", speaker_a)->required();
  trace->add_option("--phoneme-a", phoneme_a)->required();
  trace->add_option("--speaker-b", speaker_b)->required();
  trace->add_option("--phoneme-b", phoneme_b)->required();
  trace->add_option("--alpha", dflags.alpha)->capture_default_str();
  trace->add_option("input", input)->required();

  // make-toy
  std::string out_dir;
  uint64_t seed = 1;
  int num_trials = 10;
  auto *toy = app.add_subcommand("make-toy", "Write a synthetic task and a trial manifest");
  toy->add_option("--out-dir", out_dir)->required();
  toy->add_option("--seed", seed)->capture_default_str();
  toy->add_option("--trials", num_trials)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*features) {
    FeatureConfig cfg;
    if (!feat_config.empty()) {
      std::ifstream in(feat_config);
      if (!in) Fail(ErrorKind::kIo, "cannot open '" + feat_config + "'");
      cfg = json::parse(in).get<FeatureConfig>();
    }
    cfg.Validate();
    FeatureSequence f = FeaturesForWaveform(ReadWav(feat_in), cfg);
    WriteFeatureDump(feat_out, f);
    std::cout << json{{"frames", f.NumFrames()}, {"dim", f.Dim()}}.dump() << "\n";
  } else if (*mix) {
    MixResult r = MixFiles(mix_spec);
    std::cout << json{{"gain", r.gain},
                      {"measured_tmr_db", MeasureTmr(r)},
                      {"samples", r.mixture.samples.size()}}
                     .dump(2)
              << "\n";
  } else if (*decode) {
    SpeakerModelSet set = LoadModelSet(model_set);
    WordNetwork net = ReadGrammar(grammar);
    Lexicon lex = ReadLexicon(lexicon);
    FeatureSequence f = LoadInput(input, set.feature_config);
    DecodeGraph ga = CompileDecodeGraph(net, lex, set.Speaker(speaker_a), set.feature_config);
    SpeakerModels b = AdaptModelGain(set.Speaker(speaker_b),
                                     GainToOffset(gain_b, set.feature_config.num_mel_filters));
    DecodeGraph gb = CompileDecodeGraph(net, lex, b, set.feature_config);
    JointDecodeResult r = JointTokenDecode(f, ga, gb, MakeDecoderConfig(dflags));
    std::cout << json{{"words_a", r.a.words},
                      {"words_b", r.b.words},
                      {"score", r.log_score},
                      {"a", ToJson(r.a, ga, align)},
                      {"b", ToJson(r.b, gb, align)},
                      {"stored_tokens", r.stats.stored_tokens},
                      {"peak_active", r.stats.peak_active}}
                     .dump(2)
              << "\n";
  } else if (*identify) {
    thresholds.Validate();
    SpeakerModelSet set = LoadModelSet(model_set);
    FeatureSequence f = LoadInput(input, set.feature_config);
    SpeakerVote v = VoteSpeakers(FrameSpeakerScores(f, set), thresholds);
    json agg = json::object();
    auto ids = set.SpeakerIds();
    for (size_t i = 0; i < ids.size(); ++i) agg[ids[i]] = v.aggregate[i];
    std::cout << json{{"accepted", v.ids}, {"aggregate", agg}}.dump(2) << "\n";
  } else if (*estimate) {
    SpeakerModelSet set = LoadModelSet(model_set);
    FeatureSequence f = LoadInput(input, set.feature_config);
    GainSearchConfig cfg;
    DecoderConfig dc = MakeDecoderConfig(dflags);
    cfg.interaction = dc.interaction;
    cfg.beam = dc.beam;
    cfg.mode = exact ? GainSearchMode::kExact : GainSearchMode::kProxy;
    WordNetwork net;
    Lexicon lex;
    CompensationCache cache;
    cfg.cache = &cache;
    if (exact) {
      if (grammar.empty() || lexicon.empty())
        Fail(ErrorKind::kInvalidConfiguration, "--exact needs --grammar and --lexicon");
      net = ReadGrammar(grammar);
      lex = ReadLexicon(lexicon);
      cfg.network = &net;
      cfg.lexicon = &lex;
    }
    GainEstimate e = EstimateGainMle(f, set.Speaker(target), set.Speaker(masker),
                                     set.feature_config, cfg);
    std::cout << "tmr_db\tgain\tscore\n";
    for (size_t i = 0; i < e.tmr_grid_db.size(); ++i)
      std::cout << e.tmr_grid_db[i] << "\t" << e.gains[i] << "\t" << e.scores[i]
                << (static_cast<int>(i) == e.best_index ? "\t*" : "") << "\n";
    std::cout << "best\t" << e.tmr_db << "\t" << e.gain << "\n";
  } else if (*eval) {
    ExperimentManifest m = LoadManifest(manifest);
    ScoreReport rep = RunExperiment(m, threads > 0 ? threads : ConfiguredThreads());
    if (csv_path.empty()) {
      WriteCsv(std::cout, rep);
    } else {
      std::ofstream out(csv_path);
      if (!out) Fail(ErrorKind::kIo, "cannot write '" + csv_path + "'");
      WriteCsv(out, rep);
    }
    if (summary_path.empty()) {
      WriteSummary(std::cerr, rep);
    } else {
      std::ofstream out(summary_path);
      if (!out) Fail(ErrorKind::kIo, "cannot write '" + summary_path + "'");
      WriteSummary(out, rep);
    }
  } else if (*vts) {
    SpeakerModelSet set = LoadModelSet(model_set);
    const FeatureConfig &fc = set.feature_config;
    const DctPair dct = BuildDctPair(fc.num_cepstra, fc.num_mel_filters);
    const auto &ga = PickComponent(set, speaker_a, phoneme_a, state_a, comp_a);
    const auto &gb = PickComponent(set, speaker_b, phoneme_b, state_b, comp_b);
    InteractionConfig ic;
    ic.alpha = dflags.alpha;
    JointObservationModel jm = CompensateJointComponent(ga, gb, ic, fc, dct);
    json streams = json::array();
    for (const auto &s : jm.streams)
      streams.push_back({{"mean", ToJson(s.mean)}, {"variance", ToJson(s.variance)}});
    std::cout << json{{"alpha", ic.alpha},
                      {"f0", ToJson(jm.linearization.f0)},
                      {"G", ToJson(jm.linearization.G)},
                      {"H", ToJson(jm.linearization.H)},
                      {"streams", streams}}
                     .dump(2)
              << "\n";
  } else if (*trace) {
    SpeakerModelSet set = LoadModelSet(model_set);
    FeatureSequence f = LoadInput(input, set.feature_config);
    auto model = [&](const std::string &spk, const std::string &ph) {
      const auto &phones = set.Speaker(spk).phonemes;
      auto it = phones.find(ph);
      if (it == phones.end())
        Fail(ErrorKind::kInvalidInput, "speaker '" + spk + "' has no phoneme '" + ph + "'");
      return it->second;
    };
    InteractionConfig ic;
    ic.alpha = dflags.alpha;
    ViterbiTrace tr;
    JointStatePath p = TwoDimensionalViterbi(model(speaker_a, phoneme_a),
                                             model(speaker_b, phoneme_b), f, ic, {}, nullptr,
                                             nullptr, &tr);
    json frames = json::array();
    for (size_t t = 0; t < tr.after_acoustic.size(); ++t) {
      json fr = {{"t", t}, {"tau", ToJson(tr.after_acoustic[t])}};
      if (t < tr.tau_b.size()) fr["tau_b"] = ToJson(tr.tau_b[t]);
      if (t < tr.tau_a.size()) fr["tau_a"] = ToJson(tr.tau_a[t]);
      frames.push_back(fr);
    }
    std::cout << json{{"states_a", p.states_a},
                      {"states_b", p.states_b},
                      {"score", p.log_score},
                      {"frames", frames}}
                     .dump(2)
              << "\n";
  } else if (*toy) {
    fs::create_directories(out_dir);
    ToyTask task = BuildToyTask({}, seed);
    SaveModelSet((fs::path(out_dir) / "models.json").string(), task.models);
    std::ofstream(fs::path(out_dir) / "toy.grammar") << task.grammar_text;
    std::ofstream(fs::path(out_dir) / "toy.lex") << task.lexicon_text;
    auto ids = task.models.SpeakerIds();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, ids.size() - 1);
    std::uniform_int_distribution<int> tmr(-4, 4);
    json trials = json::array();
    for (int i = 0; i < num_trials; ++i) {
      const size_t a = pick(rng);
      size_t b = pick(rng);
      if (b == a) b = (a + 1) % ids.size();
      ToyTrial t = SynthesizeToyTrial(task, ids[a], ids[b], 3.0 * tmr(rng), rng());
      const std::string dump = "trial" + std::to_string(i) + ".feat";
      WriteFeatureDump((fs::path(out_dir) / dump).string(), t.features);
      trials.push_back({{"id", "trial" + std::to_string(i)},
                        {"tmr_db", t.tmr_db},
                        {"condition", "diff"},
                        {"features", dump},
                        {"target_words", t.target_words},
                        {"masker_words", t.masker_words},
                        {"target_speaker", t.target_speaker},
                        {"masker_speaker", t.masker_speaker}});
    }
    json m = {{"model_set", "models.json"},
              {"grammar", "toy.grammar"},
              {"lexicon", "toy.lex"},
              {"id_mode", "oracle"},
              {"gain_mode", "oracle"},
              {"decode", {{"alpha", 0.0}}},
              {"trials", trials}};
    std::ofstream(fs::path(out_dir) / "manifest.json") << m.dump(2) << "\n";
    std::cout << json{{"speakers", ids}, {"trials", num_trials}}.dump() << "\n";
  }
  return 0;
}

}  // namespace
}  // namespace fasr

int main(int argc, char **argv) {
  try {
    return fasr::Run(argc, argv);
  } catch (const fasr::Error &e) {
    std::cerr << "fasr: error (" << fasr::ErrorKindName(e.kind()) << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "fasr: " << e.what() << "\n";
    return 2;
  }
}
