// harness/mixing.h

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

#ifndef FASR_HARNESS_MIXING_H_
#define FASR_HARNESS_MIXING_H_

#include <string>
#include <vector>

#include "fasr/features/audio-io.h"

namespace fasr {

struct MixtureSpec {
  std::string target_wav;
  std::string masker_wav;
  double tmr_db = 0.0;
  std::string out_wav;
};

struct MixResult {
  Waveform mixture;
  // Components as they appear in the mixture (zero padded, masker scaled).
  std::vector<double> target;
  std::vector<double> masker;
  size_t target_length = 0;  // samples before padding
  size_t masker_length = 0;
  double gain = 1.0;
};

/// Mean-square sample value.
double MeanSquareEnergy(const std::vector<double> &x);

/// y = x_a + g x_b with g = sqrt(E_a / E_b) 10^(-tmr/20), energies taken
/// over each signal's own samples; the shorter input is zero padded at the
/// end.  Throws Error(kDomain) for a silent masker and kInvalidInput for
/// mismatched sample rates.
MixResult MixWaveforms(const Waveform &target, const Waveform &masker, double tmr_db);

/// 10 log10(E_a / E_b) of two signals.
double MeasureTmr(const std::vector<double> &target, const std::vector<double> &masker);
/// The same over the unpadded parts of the stored mixture components.
double MeasureTmr(const MixResult &mix);

/// Reads both inputs, mixes, and writes a float WAV to spec.out_wav.
MixResult MixFiles(const MixtureSpec &spec);

}  // namespace fasr

#endif  // FASR_HARNESS_MIXING_H_
