// speaker/gain.h

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

#ifndef FASR_SPEAKER_GAIN_H_
#define FASR_SPEAKER_GAIN_H_

#include <functional>
#include <vector>

#include "fasr/decoder/joint-token-decoder.h"
#include "fasr/models/gmm-hmm.h"
#include "fasr/models/grammar.h"

namespace fasr {

/// A linear amplitude gain and the constant it adds to cepstral c0.
struct GainOffset {
  double g = 1.0;
  double g0 = 0.0;
  int num_filters = 0;
};

/// g0 = 2 ln(g) sqrt(m).  Throws Error(kDomain) unless g > 0.
GainOffset GainToOffset(double g, int num_filters);

/// Masker gain that realizes `tmr_db` between two equal-energy sources.
double TmrToMaskerGain(double tmr_db);
double MaskerGainToTmr(double g);

/// Copies with every Gaussian's static c0 mean shifted by g0.
GmmHmm AdaptModelGain(const GmmHmm &model, const GainOffset &offset);
Gmm AdaptModelGain(const Gmm &gmm, const GainOffset &offset);
/// Adapts all phoneme models and the frame GMM.
SpeakerModels AdaptModelGain(const SpeakerModels &speaker, const GainOffset &offset);

/// -12 dB to +12 dB in 1 dB steps.
std::vector<double> DefaultTmrGrid();

enum class GainSearchMode {
  kProxy,  // factorial frame-GMM likelihood on the static stream
  kExact,  // best joint decode score
};

struct GainSearchConfig {
  std::vector<double> tmr_grid_db = DefaultTmrGrid();
  GainSearchMode mode = GainSearchMode::kProxy;
  InteractionConfig interaction;
  // Exact mode only.
  const WordNetwork *network = nullptr;
  const Lexicon *lexicon = nullptr;
  GraphOptions graph_options;
  BeamConfig beam;
  CompensationCache *cache = nullptr;
};

struct GainEstimate {
  int best_index = -1;
  double tmr_db = 0.0;
  double gain = 1.0;
  std::vector<double> tmr_grid_db;
  std::vector<double> gains;
  std::vector<double> scores;  // kLogZero where the point was infeasible
};

/// Evaluates `score(g)` at each grid point and returns the argmax.  Ties go
/// to the gain closest to 1 (smallest |TMR|, then the lower TMR), so the
/// result does not depend on grid order.  A score function that throws
/// kInfeasible or kStarvation marks that point infeasible.  Throws
/// Error(kEstimation) if the grid is empty or every point is infeasible.
GainEstimate EstimateGainMle(const std::vector<double> &tmr_grid_db,
                             const std::function<double(double gain)> &score);

/// Adapts only the masker model per grid point and scores the utterance.
GainEstimate EstimateGainMle(const FeatureSequence &features,
                             const SpeakerModels &target, const SpeakerModels &masker,
                             const FeatureConfig &model_features,
                             const GainSearchConfig &config);

/// Sum over frames of the best frame-GMM component pair likelihood of the
/// static stream.
double FactorialFrameScore(const FeatureSequence &features, const Gmm &frame_a,
                           const Gmm &frame_b, const FeatureConfig &model_features,
                           const InteractionConfig &interaction,
                           CompensationCache *cache = nullptr);

/// FeatureConfig describing only the static stream of `features`.
FeatureConfig StaticStreamConfig(const FeatureConfig &features);

}  // namespace fasr

#endif  // FASR_SPEAKER_GAIN_H_
