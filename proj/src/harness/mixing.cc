// harness/mixing.cc

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

#include "fasr/harness/mixing.h"

#include <algorithm>
#include <cmath>

#include "fasr/base/error.h"

namespace fasr {

double MeanSquareEnergy(const std::vector<double> &x) {
  if (x.empty()) return 0.0;
  double sum = 0.0;
  for (double v : x) sum += v * v;
  return sum / static_cast<double>(x.size());
}

MixResult MixWaveforms(const Waveform &target, const Waveform &masker, double tmr_db) {
  if (target.sample_rate != masker.sample_rate)
    Fail(ErrorKind::kInvalidInput, "sample rates differ (" +
                                       std::to_string(target.sample_rate) + " vs " +
                                       std::to_string(masker.sample_rate) + ")");
  if (!std::isfinite(tmr_db)) Fail(ErrorKind::kDomain, "TMR must be finite");
  const double ea = MeanSquareEnergy(target.samples);
  const double eb = MeanSquareEnergy(masker.samples);
  if (!(eb > 0.0)) Fail(ErrorKind::kDomain, "masker is silent");
  if (!(ea > 0.0)) Fail(ErrorKind::kDomain, "target is silent");

  MixResult r;
  r.gain = std::sqrt(ea / eb) * std::pow(10.0, -tmr_db / 20.0);
  const size_t n = std::max(target.samples.size(), masker.samples.size());
  r.target_length = target.samples.size();
  r.masker_length = masker.samples.size();
  r.target = target.samples;
  r.target.resize(n, 0.0);
  r.masker.assign(n, 0.0);
  for (size_t i = 0; i < masker.samples.size(); ++i) r.masker[i] = r.gain * masker.samples[i];
  r.mixture.sample_rate = target.sample_rate;
  r.mixture.samples.resize(n);
  for (size_t i = 0; i < n; ++i) r.mixture.samples[i] = r.target[i] + r.masker[i];
  return r;
}

double MeasureTmr(const std::vector<double> &target, const std::vector<double> &masker) {
  return 10.0 * std::log10(MeanSquareEnergy(target) / MeanSquareEnergy(masker));
}

double MeasureTmr(const MixResult &mix) {
  std::vector<double> a(mix.target.begin(), mix.target.begin() + mix.target_length);
  std::vector<double> b(mix.masker.begin(), mix.masker.begin() + mix.masker_length);
  return MeasureTmr(a, b);
}

MixResult MixFiles(const MixtureSpec &spec) {
  MixResult r = MixWaveforms(ReadWav(spec.target_wav), ReadWav(spec.masker_wav), spec.tmr_db);
  if (!spec.out_wav.empty()) WriteWavFloat(spec.out_wav, r.mixture);
  return r;
}

}  // namespace fasr
