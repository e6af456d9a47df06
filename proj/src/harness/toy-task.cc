// harness/toy-task.cc

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

#include "fasr/harness/toy-task.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "fasr/base/error.h"
#include "fasr/harness/scoring.h"
#include "fasr/models/synth.h"
#include "fasr/speaker/gain.h"
#include "fasr/vts/mismatch.h"

namespace fasr {

namespace {

const std::vector<std::vector<std::string>> kWordPools = {
    {"bin", "lay", "place", "set"},
    {"white", "blue", "green", "red"},
    {"at", "by", "in", "with"},
    {"a", "b", "c", "d", "e", "f"},
    {"one", "two", "three", "four", "five", "six"},
    {"again", "now", "please", "soon"},
};

std::string PhonemeName(int p) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "p%02d", p);
  return buf;
}

}  // namespace

ToyTask BuildToyTask(const ToyTaskOptions &o, uint64_t seed) {
  if (static_cast<int>(o.slot_sizes.size()) != kCommandSlots)
    Fail(ErrorKind::kInvalidConfiguration, "toy task needs six slots");
  if (o.num_speakers < 1 || o.num_phonemes < 2 || o.phonemes_per_word < 1 ||
      o.num_states < 1 || o.num_components < 1)
    Fail(ErrorKind::kInvalidConfiguration, "toy task sizes must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  ToyTask task;

  // Grammar and lexicon.
  std::vector<std::vector<std::string>> slots;
  std::ostringstream grammar;
  for (int s = 0; s < kCommandSlots; ++s) {
    const auto &pool = kWordPools[s];
    if (o.slot_sizes[s] < 1 || o.slot_sizes[s] > static_cast<int>(pool.size()))
      Fail(ErrorKind::kInvalidConfiguration,
           "slot " + std::to_string(s) + " size must lie in [1, " +
               std::to_string(pool.size()) + "]");
    slots.emplace_back(pool.begin(), pool.begin() + o.slot_sizes[s]);
    for (size_t w = 0; w < slots.back().size(); ++w)
      grammar << (w ? " | " : "") << slots.back()[w];
    grammar << "\n";
  }
  task.grammar_text = grammar.str();
  task.network = NetworkFromSlots(slots);

  std::uniform_int_distribution<int> pick_phoneme(0, o.num_phonemes - 1);
  std::set<std::vector<int>> used;
  std::ostringstream lex;
  for (const auto &slot : slots) {
    std::set<int> first_used;
    for (const std::string &word : slot) {
      std::vector<int> pron;
      for (int attempt = 0;; ++attempt) {
        pron.clear();
        for (int k = 0; k < o.phonemes_per_word; ++k) pron.push_back(pick_phoneme(rng));
        bool distinct_start = !first_used.count(pron[0]) ||
                              static_cast<int>(first_used.size()) >= o.num_phonemes;
        if (!used.count(pron) && (distinct_start || attempt > 1000)) break;
        if (attempt > 100000)
          Fail(ErrorKind::kInvalidConfiguration, "too few phonemes for distinct words");
      }
      used.insert(pron);
      first_used.insert(pron[0]);
      std::vector<std::string> names;
      lex << word;
      for (int p : pron) {
        names.push_back(PhonemeName(p));
        lex << ' ' << names.back();
      }
      lex << '\n';
      task.lexicon.prons[word].push_back(names);
    }
  }
  task.lexicon_text = lex.str();

  // Shared phoneme-state spectra in the log-mel domain.
  const int m = o.num_mel_filters, c = o.num_cepstra;
  auto peaks_at = [&](const std::vector<int> &bins, double height) {
    Vector spec = Vector::Constant(m, 0.0);
    for (int b : bins) {
      spec[b] = std::max(spec[b], height);
      if (b > 0) spec[b - 1] = std::max(spec[b - 1], 0.4 * height);
      if (b + 1 < m) spec[b + 1] = std::max(spec[b + 1], 0.4 * height);
    }
    return spec;
  };
  auto draw_peaks = [&](int count, double height) {
    std::vector<int> bins(m);
    for (int i = 0; i < m; ++i) bins[i] = i;
    std::shuffle(bins.begin(), bins.end(), rng);
    bins.resize(std::min<size_t>(count, bins.size()));
    return peaks_at(bins, height);
  };
  std::vector<std::vector<Vector>> templates(o.num_phonemes);
  for (auto &states : templates)
    for (int s = 0; s < o.num_states; ++s)
      states.push_back(draw_peaks(o.peaks_per_state, o.peak_height));

  FeatureConfig fc;
  fc.num_mel_filters = m;
  fc.num_cepstra = c;
  fc.include_delta = false;
  fc.include_accel = false;
  fc.Validate();
  task.models.feature_config = fc;
  const DctPair dct = BuildDctPair(c, m);

  const double log_self = std::log(o.self_loop), log_fwd = std::log(1.0 - o.self_loop);
  for (int spk = 0; spk < o.num_speakers; ++spk) {
    SpeakerModels sm;
    sm.id = "s" + std::to_string(spk + 1);
    // A smooth spectral shape per speaker: cosines of distinct orders are
    // orthogonal, so no speaker's shape resembles a blend of two others.
    Vector signature(m);
    const int order = spk % (c - 1) + 1;
    const double sign = (spk / (c - 1)) % 2 ? -1.0 : 1.0;
    for (int b = 0; b < m; ++b)
      signature[b] = sign * o.signature_height * std::cos(M_PI * order * (b + 0.5) / m);
    Gmm frame_gmm;
    const double frame_weight = -std::log(static_cast<double>(o.num_phonemes) * o.num_states);
    for (int p = 0; p < o.num_phonemes; ++p) {
      GmmHmm hmm;
      hmm.name = PhonemeName(p);
      const int n = o.num_states;
      hmm.log_transitions = Matrix::Constant(n, n, kLogZero);
      hmm.log_exit = Vector::Constant(n, kLogZero);
      hmm.log_priors = Vector::Constant(n, kLogZero);
      hmm.log_priors[0] = 0.0;
      for (int s = 0; s < n; ++s) {
        hmm.log_transitions(s, s) = log_self;
        if (s + 1 < n)
          hmm.log_transitions(s, s + 1) = log_fwd;
        else
          hmm.log_exit[s] = log_fwd;
        Vector log_mel = templates[p][s] + signature;
        for (int b = 0; b < m; ++b) log_mel[b] += o.floor_level + 0.3 * normal(rng);
        const Vector mean = dct.forward * log_mel;
        Gmm gmm;
        for (int k = 0; k < o.num_components; ++k) {
          GaussianComponent g;
          g.mean = mean;
          g.variance.resize(c);
          for (int d = 0; d < c; ++d) {
            g.mean[d] += o.component_spread * normal(rng);
            g.variance[d] = o.variance_min + (o.variance_max - o.variance_min) * unit(rng);
          }
          g.log_weight = -std::log(static_cast<double>(o.num_components));
          gmm.push_back(g);
          GaussianComponent f = g;
          f.log_weight += frame_weight;
          frame_gmm.push_back(std::move(f));
        }
        hmm.states.push_back(std::move(gmm));
      }
      hmm.Validate();
      sm.phonemes[hmm.name] = std::move(hmm);
    }
    sm.frame_gmm = std::move(frame_gmm);
    task.models.speakers[sm.id] = std::move(sm);
  }
  task.models.Validate();
  return task;
}

namespace {

void ExtendWithFinalState(SampledUtterance &u, const SpeakerModels &speaker,
                          int min_frames, std::mt19937_64 &rng) {
  if (u.frames.rows() >= min_frames || u.phonemes.empty()) return;
  const std::string ph = u.phonemes.back();
  const int state = u.states.back();
  const Gmm &gmm = speaker.phonemes.at(ph).states[state];
  const int old = static_cast<int>(u.frames.rows());
  RowMatrix frames(min_frames, u.frames.cols());
  frames.topRows(old) = u.frames;
  for (int t = old; t < min_frames; ++t) {
    frames.row(t) = SampleGmm(gmm, rng).transpose();
    u.phonemes.push_back(ph);
    u.states.push_back(state);
  }
  u.frames = std::move(frames);
}

}  // namespace

SampledUtterance SampleUtterance(const SpeakerModels &speaker, const Lexicon &lexicon,
                                 const std::vector<std::string> &words,
                                 std::mt19937_64 &rng, int min_frames) {
  SampledUtterance u;
  u.words = words;
  std::vector<RowMatrix> pieces;
  int total = 0, dim = -1;
  for (const std::string &w : words) {
    const auto &prons = lexicon.Pronunciations(w);
    std::uniform_int_distribution<size_t> pick(0, prons.size() - 1);
    for (const std::string &ph : prons[pick(rng)]) {
      auto it = speaker.phonemes.find(ph);
      if (it == speaker.phonemes.end())
        Fail(ErrorKind::kInvalidInput, "speaker '" + speaker.id + "' has no phoneme '" + ph + "'");
      SampledPath path = SampleFeaturePath(it->second, 1 << 20, rng);
      for (int s : path.states) {
        u.phonemes.push_back(ph);
        u.states.push_back(s);
      }
      total += static_cast<int>(path.frames.rows());
      dim = static_cast<int>(path.frames.cols());
      pieces.push_back(std::move(path.frames));
    }
  }
  u.frames.resize(total, std::max(dim, 0));
  int row = 0;
  for (const RowMatrix &p : pieces) {
    u.frames.middleRows(row, p.rows()) = p;
    row += static_cast<int>(p.rows());
  }
  ExtendWithFinalState(u, speaker, min_frames, rng);
  return u;
}

std::vector<std::string> SampleWordSequence(const WordNetwork &network, std::mt19937_64 &rng,
                                            const std::vector<std::string> &fixed,
                                            const std::vector<std::string> &forbidden) {
  if (network.slots.empty())
    Fail(ErrorKind::kInvalidInput, "word sampling needs a slot network");
  std::vector<std::string> out;
  for (size_t s = 0; s < network.slots.size(); ++s) {
    if (s < fixed.size() && !fixed[s].empty()) {
      out.push_back(fixed[s]);
      continue;
    }
    std::vector<std::string> choices;
    for (int node : network.slots[s]) {
      const std::string &w = network.words[node];
      if (s < forbidden.size() && w == forbidden[s]) continue;
      choices.push_back(w);
    }
    if (choices.empty()) Fail(ErrorKind::kInvalidInput, "slot has no allowed word");
    std::uniform_int_distribution<size_t> pick(0, choices.size() - 1);
    out.push_back(choices[pick(rng)]);
  }
  return out;
}

FeatureSequence MixCepstra(const RowMatrix &target, const RowMatrix &masker,
                           double masker_gain, double alpha, const FeatureConfig &config) {
  const int c = config.num_cepstra;
  if (target.rows() != masker.rows())
    Fail(ErrorKind::kInvalidInput, "sources must have equal length");
  if (target.cols() != c || masker.cols() != c)
    Fail(ErrorKind::kInvalidInput, "sources must be static cepstra");
  const DctPair dct = BuildDctPair(c, config.num_mel_filters);
  const double g0 = GainToOffset(masker_gain, config.num_mel_filters).g0;
  FeatureSequence out;
  out.config = StaticStreamConfig(config);
  out.data.resize(target.rows(), c);
  for (int t = 0; t < target.rows(); ++t) {
    Vector xa = target.row(t).transpose();
    Vector xb = masker.row(t).transpose();
    xb[0] += g0;
    out.data.row(t) = Mismatch(xa, xb, alpha, dct).transpose();
  }
  return out;
}

ToyTrial SynthesizeToyTrial(const ToyTask &task, const std::string &target_speaker,
                            const std::string &masker_speaker, double tmr_db,
                            uint64_t seed, double alpha) {
  std::mt19937_64 rng(seed);
  ToyTrial trial;
  trial.target_speaker = target_speaker;
  trial.masker_speaker = masker_speaker;
  trial.tmr_db = tmr_db;
  trial.masker_gain = TmrToMaskerGain(tmr_db);
  std::vector<std::string> fixed(kCommandSlots), forbidden(kCommandSlots);
  fixed[kColorSlot] = "white";
  forbidden[kColorSlot] = "white";
  trial.target_words = SampleWordSequence(task.network, rng, fixed);
  trial.masker_words = SampleWordSequence(task.network, rng, {}, forbidden);
  const SpeakerModels &ta = task.models.Speaker(target_speaker);
  const SpeakerModels &mb = task.models.Speaker(masker_speaker);
  SampledUtterance a = SampleUtterance(ta, task.lexicon, trial.target_words, rng);
  SampledUtterance b = SampleUtterance(mb, task.lexicon, trial.masker_words, rng);
  const int frames = static_cast<int>(std::max(a.frames.rows(), b.frames.rows()));
  ExtendWithFinalState(a, ta, frames, rng);
  ExtendWithFinalState(b, mb, frames, rng);
  trial.features = MixCepstra(a.frames, b.frames, trial.masker_gain, alpha,
                              task.models.feature_config);
  return trial;
}

}  // namespace fasr
