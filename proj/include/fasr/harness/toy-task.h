// harness/toy-task.h

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

#ifndef FASR_HARNESS_TOY_TASK_H_
#define FASR_HARNESS_TOY_TASK_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fasr/features/mfcc.h"
#include "fasr/models/gmm-hmm.h"
#include "fasr/models/grammar.h"

namespace fasr {

/// Parameters of a small synthetic command task.  Phoneme states are
/// defined as log-mel spectra with a few sharp peaks; each speaker adds its
/// own spectral signature.  Features are static cepstra only.
struct ToyTaskOptions {
  int num_speakers = 4;
  // Words per slot, six slots; the color slot always contains "white".
  std::vector<int> slot_sizes = {3, 4, 2, 4, 4, 3};
  int num_phonemes = 16;
  int phonemes_per_word = 2;
  int num_states = 3;
  int num_components = 2;
  int num_mel_filters = 27;
  int num_cepstra = 13;
  int peaks_per_state = 3;
  double peak_height = 7.0;
  double signature_height = 5.0;
  double floor_level = 0.0;
  double variance_min = 0.05;
  double variance_max = 0.15;
  double component_spread = 0.15;
  double self_loop = 0.6;
};

struct ToyTask {
  SpeakerModelSet models;
  WordNetwork network;
  Lexicon lexicon;
  std::string grammar_text;
  std::string lexicon_text;
};

ToyTask BuildToyTask(const ToyTaskOptions &options, uint64_t seed);

/// Sampled frames of one spoken word sequence.
struct SampledUtterance {
  std::vector<std::string> words;
  std::vector<std::string> phonemes;  // phoneme label per frame
  std::vector<int> states;            // phoneme state per frame
  RowMatrix frames;
};

/// Picks a pronunciation per word and samples each phoneme's state path and
/// observations.  Frames beyond the natural end (when `min_frames` asks for
/// more) come from continued self loops of the final state.
SampledUtterance SampleUtterance(const SpeakerModels &speaker, const Lexicon &lexicon,
                                 const std::vector<std::string> &words,
                                 std::mt19937_64 &rng, int min_frames = 0);

/// Uniform word per slot of a slot network; `fixed` entries (non-empty)
/// pin a slot, `forbidden` entries exclude one word from a slot.
std::vector<std::string> SampleWordSequence(const WordNetwork &network, std::mt19937_64 &rng,
                                            const std::vector<std::string> &fixed = {},
                                            const std::vector<std::string> &forbidden = {});

/// Frame-wise combination of two static cepstral streams through the
/// mismatch function, after shifting the masker's c0 by the gain offset.
FeatureSequence MixCepstra(const RowMatrix &target, const RowMatrix &masker,
                           double masker_gain, double alpha, const FeatureConfig &config);

struct ToyTrial {
  std::string id;
  std::string target_speaker, masker_speaker;
  std::vector<std::string> target_words, masker_words;
  double tmr_db = 0.0;
  double masker_gain = 1.0;
  FeatureSequence features;
};

/// Target says "white" in the color slot, the masker another color.  The
/// shorter source is extended so both cover every frame.
ToyTrial SynthesizeToyTrial(const ToyTask &task, const std::string &target_speaker,
                            const std::string &masker_speaker, double tmr_db,
                            uint64_t seed, double alpha = 0.0);

}  // namespace fasr

#endif  // FASR_HARNESS_TOY_TASK_H_
