// models/model-io.h

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

#ifndef FASR_MODELS_MODEL_IO_H_
#define FASR_MODELS_MODEL_IO_H_

#include <string>

#include <nlohmann/json.hpp>

#include "fasr/models/gmm-hmm.h"

namespace fasr {

// Model file schema (JSON, probabilities in the linear domain):
//
// {
//   "feature_config": { ...FeatureConfig fields... },
//   "speakers": [
//     { "id": "s1",
//       "phonemes": [
//         { "name": "ae",
//           "priors": [1, 0, 0],
//           "transitions": [[0.6, 0.4, 0], [0, 0.6, 0.4], [0, 0, 0.6]],
//           "exit": [0, 0, 0.4],
//           "states": [ [ {"weight": 1, "mean": [...], "variance": [...]} ],
//                       ... ] } ],
//       "frame_gmm": [ {"weight": 1, "mean": [...], "variance": [...]} ] } ]
// }
//
// "exit" may be omitted, meaning no exit mass.  frame_gmm covers the static
// stream only (num_cepstra dimensions).

SpeakerModelSet ModelSetFromJson(const nlohmann::json &j);
nlohmann::json ModelSetToJson(const SpeakerModelSet &set);

GmmHmm GmmHmmFromJson(const nlohmann::json &j);
nlohmann::json GmmHmmToJson(const GmmHmm &hmm);

SpeakerModelSet LoadModelSet(const std::string &path);
void SaveModelSet(const std::string &path, const SpeakerModelSet &set);

}  // namespace fasr

#endif  // FASR_MODELS_MODEL_IO_H_
