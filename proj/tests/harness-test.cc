// tests/harness-test.cc

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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fasr/features/audio-io.h"
#include "fasr/harness/experiment.h"
#include "fasr/harness/mixing.h"
#include "fasr/harness/pipeline.h"
#include "fasr/harness/scoring.h"
#include "fasr/harness/toy-task.h"
#include "fasr/models/model-io.h"
#include "test-util.h"

namespace fasr {
namespace {

namespace fs = std::filesystem;
using testing::KindOf;

Waveform Wave(std::vector<double> x, double rate = 16000.0) {
  Waveform w;
  w.sample_rate = rate;
  w.samples = std::move(x);
  return w;
}

TEST_CASE("mixing examples") {
  std::mt19937_64 rng(1);
  std::vector<double> x = testing::RandomSignal(rng, 4000);
  std::vector<double> neg(x.size());
  for (size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
  MixResult m = MixWaveforms(Wave(x), Wave(neg), 0.0);
  CHECK(m.gain == 1.0);
  for (size_t i = 0; i < x.size(); ++i) CHECK(m.mixture.samples[i] == x[i] + neg[i]);

  MixResult same = MixWaveforms(Wave(x), Wave(x), 0.0);
  for (size_t i = 0; i < x.size(); ++i) CHECK(same.mixture.samples[i] == 2 * x[i]);

  MixResult down = MixWaveforms(Wave(x), Wave(neg), -6.0);
  CHECK(down.gain == doctest::Approx(1.9952623149688795).epsilon(1e-12));
  CHECK(std::abs(MeasureTmr(down) + 6.0) < 0.01);
}

TEST_CASE("mixing pads and round trips the requested ratio") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> len(800, 6000);
  std::uniform_real_distribution<double> tmr(-12, 12), scale(0.01, 3.0);
  for (int i = 0; i < 30; ++i) {
    auto a = testing::RandomSignal(rng, len(rng));
    auto b = testing::RandomSignal(rng, len(rng));
    const double s = scale(rng);
    for (double &v : b) v *= s;
    const double want = tmr(rng);
    MixResult m = MixWaveforms(Wave(a), Wave(b), want);
    CHECK(m.mixture.samples.size() == std::max(a.size(), b.size()));
    CHECK(m.target_length == a.size());
    CHECK(m.masker_length == b.size());
    CHECK(std::abs(MeasureTmr(m) - want) < 0.01);
    for (size_t t = a.size(); t < m.target.size(); ++t) CHECK(m.target[t] == 0.0);
  }
  CHECK(KindOf([] { MixWaveforms(Wave({0.1, 0.2}), Wave({0.0, 0.0}), 0); }) == ErrorKind::kDomain);
  CHECK(KindOf([] { MixWaveforms(Wave({0.1}), Wave({0.1}, 8000), 0); }) ==
        ErrorKind::kInvalidInput);
}

TEST_CASE("mixing files writes a float wav") {
  fs::path dir = fs::temp_directory_path() / "fasr-harness-mix";
  fs::create_directories(dir);
  std::mt19937_64 rng(3);
  auto a = testing::RandomSignal(rng, 3000), b = testing::RandomSignal(rng, 2000);
  WriteWavFloat((dir / "a.wav").string(), Wave(a));
  WriteWavFloat((dir / "b.wav").string(), Wave(b));
  MixtureSpec spec{(dir / "a.wav").string(), (dir / "b.wav").string(), 3.0,
                   (dir / "m.wav").string()};
  MixResult m = MixFiles(spec);
  Waveform back = ReadWav(spec.out_wav);
  REQUIRE(back.samples.size() == m.mixture.samples.size());
  for (size_t i = 0; i < back.samples.size(); ++i)
    CHECK(back.samples[i] == doctest::Approx(m.mixture.samples[i]).epsilon(1e-6));
  fs::remove_all(dir);
}

std::vector<std::string> Cmd(const std::string &letter, const std::string &digit) {
  return {"bin", "white", "at", letter, digit, "now"};
}

TEST_CASE("keyword scoring") {
  auto ok = ScoreKeywords(Cmd("f", "two"), Cmd("f", "two"));
  CHECK(ok.letter_ok);
  CHECK(ok.digit_ok);
  auto half = ScoreKeywords(Cmd("g", "two"), Cmd("f", "two"));
  CHECK(!half.letter_ok);
  CHECK(half.digit_ok);
  TrialRecord r;
  r.letter_ok = half.letter_ok;
  r.digit_ok = half.digit_ok;
  KeywordTally tally;
  tally.Add(r);
  CHECK(tally.KeywordAccuracy() == 0.5);
  CHECK(tally.BothCorrect() == 0.0);
  CHECK(KindOf([] { ScoreKeywords({"bin"}, Cmd("f", "two")); }) == ErrorKind::kScoring);
  CHECK(KindOf([] { ScoreKeywords(Cmd("f", "two"), {}); }) == ErrorKind::kScoring);
}

// Twenty rows with hand-counted totals, split over two ratios.
std::vector<TrialRecord> TwentyTrials() {
  // letter, digit per trial; ratio -6 for the first eight, 3 otherwise.
  const int letters[20] = {1, 1, 0, 1, 0, 1, 1, 1, 0, 1, 1, 1, 1, 0, 1, 1, 0, 1, 1, 1};
  const int digits[20] = {1, 0, 0, 1, 1, 1, 1, 0, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1, 0, 1};
  std::vector<TrialRecord> rows;
  for (int i = 19; i >= 0; --i) {
    TrialRecord r;
    r.trial_id = "t" + std::string(i < 10 ? "0" : "") + std::to_string(i);
    r.tmr_db = i < 8 ? -6.0 : 3.0;
    r.condition = i % 2 ? "diff" : "same";
    r.letter_ok = letters[i];
    r.digit_ok = digits[i];
    r.speaker_id_ok = i != 5;
    r.score = -100.0 - i;
    rows.push_back(r);
  }
  return rows;
}

TEST_CASE("report tallies match a hand count") {
  ScoreReport rep = BuildReport(TwentyTrials());
  REQUIRE(rep.trials.size() == 20);
  CHECK(rep.trials.front().trial_id == "t00");
  CHECK(rep.trials.back().trial_id == "t19");
  // Letters: 15 of 20, digits 15 of 20, both 11.
  CHECK(rep.overall.letters == 15);
  CHECK(rep.overall.digits == 15);
  CHECK(rep.overall.both == 11);
  CHECK(rep.overall.KeywordAccuracy() == doctest::Approx(0.75));
  CHECK(rep.overall.SpeakerAccuracy() == doctest::Approx(19.0 / 20));
  // First eight: letters 6, digits 5, both 4.
  const KeywordTally &low = rep.per_tmr.at(-6.0);
  CHECK(low.trials == 8);
  CHECK(low.letters == 6);
  CHECK(low.digits == 5);
  CHECK(low.both == 4);
  CHECK(rep.per_tmr.at(3.0).trials == 12);
}

TEST_CASE("csv rows recompute the aggregates") {
  ScoreReport rep = BuildReport(TwentyTrials());
  std::ostringstream os;
  WriteCsv(os, rep);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "trial_id,tmr_db,condition,speaker_id_ok,letter_ok,digit_ok,score");
  int rows = 0, letters = 0, digits = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 7);
    letters += cells[4] == "1";
    digits += cells[5] == "1";
    ++rows;
  }
  CHECK(rows == 20);
  CHECK(letters == rep.overall.letters);
  CHECK(digits == rep.overall.digits);
  std::ostringstream summary;
  WriteSummary(summary, rep);
  CHECK(summary.str().find("0.75") != std::string::npos);
}

struct ToyFixture {
  ToyTask task = BuildToyTask({}, 7);
  fs::path dir;
  ToyFixture() {
    dir = fs::temp_directory_path() / "fasr-harness-toy";
    fs::remove_all(dir);
    fs::create_directories(dir);
    SaveModelSet((dir / "models.json").string(), task.models);
    std::ofstream(dir / "toy.grammar") << task.grammar_text;
    std::ofstream(dir / "toy.lex") << task.lexicon_text;
  }
  ~ToyFixture() { fs::remove_all(dir); }
  nlohmann::json Manifest(int trials, uint64_t seed) {
    nlohmann::json j = {{"model_set", "models.json"},
                        {"grammar", "toy.grammar"},
                        {"lexicon", "toy.lex"},
                        {"trials", nlohmann::json::array()}};
    auto ids = task.models.SpeakerIds();
    for (int i = 0; i < trials; ++i) {
      ToyTrial t = SynthesizeToyTrial(task, ids[i % ids.size()], ids[(i + 1) % ids.size()],
                                      (i % 5) * 3.0 - 6.0, seed + i);
      std::string dump = "t" + std::to_string(i) + ".bin";
      WriteFeatureDump((dir / dump).string(), t.features);
      j["trials"].push_back({{"id", "t" + std::to_string(i)},
                             {"tmr_db", t.tmr_db},
                             {"condition", "diff"},
                             {"features", dump},
                             {"target_words", t.target_words},
                             {"masker_words", t.masker_words},
                             {"target_speaker", t.target_speaker},
                             {"masker_speaker", t.masker_speaker}});
    }
    return j;
  }
};

TEST_CASE("empty manifest gives an empty report") {
  ToyFixture fx;
  ExperimentManifest m = ManifestFromJson(fx.Manifest(0, 1), fx.dir.string());
  ScoreReport rep = RunExperiment(m, 1);
  CHECK(rep.trials.empty());
  CHECK(rep.overall.trials == 0);
  CHECK(KindOf([&] { ManifestFromJson({{"trials", 3}}, fx.dir.string()); }) == ErrorKind::kParse);
}

TEST_CASE("batch runs are deterministic and record failures") {
  ToyFixture fx;
  nlohmann::json j = fx.Manifest(6, 10);
  j["trials"].push_back({{"id", "broken"}, {"features", "missing.bin"}});
  ExperimentManifest m = ManifestFromJson(j, fx.dir.string());
  std::ostringstream a, b;
  ScoreReport r1 = RunExperiment(m, 1);
  WriteCsv(a, r1);
  WriteCsv(b, RunExperiment(m, 2));
  CHECK(a.str() == b.str());
  CHECK(r1.trials.size() == 7);
  CHECK(r1.overall.failures == 1);
  CHECK(r1.trials.front().trial_id == "broken");
  CHECK(!r1.trials.front().error.empty());
  CHECK(r1.overall.KeywordAccuracy() >= 5.0 / 7);
}

TEST_CASE("oracle sources never do worse than estimated ones") {
  ToyFixture fx;
  std::vector<TrialInput> inputs;
  auto ids = fx.task.models.SpeakerIds();
  for (int i = 0; i < 8; ++i) {
    ToyTrial t = SynthesizeToyTrial(fx.task, ids[i % 4], ids[(i + 2) % 4], (i % 3) * 6.0 - 6.0,
                                    500 + i);
    TrialInput in;
    in.id = t.id;
    in.tmr_db = t.tmr_db;
    in.features = t.features;
    in.target_words = t.target_words;
    in.masker_words = t.masker_words;
    in.target_speaker = t.target_speaker;
    in.masker_speaker = t.masker_speaker;
    in.masker_gain = t.masker_gain;
    inputs.push_back(in);
  }
  PipelineConfig oracle_cfg;
  RecognitionPipeline oracle(fx.task.models, fx.task.network, fx.task.lexicon, oracle_cfg);
  PipelineConfig est_cfg;
  est_cfg.id_mode = est_cfg.gain_mode = SourceMode::kEstimated;
  est_cfg.gain_search.mode = GainSearchMode::kExact;
  RecognitionPipeline estimated(fx.task.models, fx.task.network, fx.task.lexicon, est_cfg);
  ScoreReport ro = RunTrials(oracle, inputs, 1);
  ScoreReport re = RunTrials(estimated, inputs, 1);
  CHECK(ro.overall.trials == 8);
  CHECK(ro.overall.KeywordAccuracy() >= 0.95);
  CHECK(re.overall.KeywordAccuracy() <= ro.overall.KeywordAccuracy() + 1e-9);
  for (const auto &r : ro.trials) CHECK(r.speaker_id_ok == true);
}

}  // namespace
}  // namespace fasr
