// features/audio-io.h

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

#ifndef FASR_FEATURES_AUDIO_IO_H_
#define FASR_FEATURES_AUDIO_IO_H_

#include <string>
#include <vector>

#include "fasr/features/mfcc.h"

namespace fasr {

struct Waveform {
  double sample_rate = 16000.0;
  std::vector<double> samples;
};

/// Reads a mono RIFF WAV holding 16-bit PCM or 32-bit IEEE float samples.
/// PCM samples are scaled to [-1, 1).
Waveform ReadWav(const std::string &path);

/// Writes 32-bit IEEE float mono WAV; no clipping applied.
void WriteWavFloat(const std::string &path, const Waveform &wave);
/// Writes 16-bit PCM mono WAV; samples are clipped to [-1, 1).
void WriteWavPcm16(const std::string &path, const Waveform &wave);

/// Binary dump: little-endian {T: u32, D: u32} then T*D float64 row-major.
/// The FeatureConfig goes to `path + ".conf"` as JSON.
void WriteFeatureDump(const std::string &path, const FeatureSequence &seq);
/// Reads a dump and its sidecar.  When the sidecar is absent `fallback` is
/// used if supplied, otherwise a load error is raised.
FeatureSequence ReadFeatureDump(const std::string &path,
                                const FeatureConfig *fallback = nullptr);

}  // namespace fasr

#endif  // FASR_FEATURES_AUDIO_IO_H_
