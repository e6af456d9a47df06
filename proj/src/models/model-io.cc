// models/model-io.cc

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

#include "fasr/models/model-io.h"

#include <cmath>
#include <fstream>

#include "fasr/base/error.h"

namespace fasr {

namespace {

using nlohmann::json;

Vector VectorFromJson(const json &j, const std::string &what) {
  if (!j.is_array()) Fail(ErrorKind::kLoad, what + ": expected an array");
  Vector v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) Fail(ErrorKind::kLoad, what + ": expected numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

json ProbVectorToJson(const Vector &log_values) {
  json a = json::array();
  for (double v : log_values) a.push_back(std::exp(v));
  return a;
}

Vector LogOf(const Vector &p, const std::string &what) {
  Vector out(p.size());
  for (int i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0) Fail(ErrorKind::kLoad, what + ": negative probability");
    out[i] = SafeLog(p[i]);
  }
  return out;
}

GaussianComponent ComponentFromJson(const json &j, const std::string &what) {
  if (!j.is_object()) Fail(ErrorKind::kLoad, what + ": expected an object");
  for (const char *key : {"weight", "mean", "variance"})
    if (!j.contains(key)) Fail(ErrorKind::kLoad, what + ": missing '" + key + "'");
  GaussianComponent g;
  g.mean = VectorFromJson(j["mean"], what + ".mean");
  g.variance = VectorFromJson(j["variance"], what + ".variance");
  if (!j["weight"].is_number()) Fail(ErrorKind::kLoad, what + ".weight: not a number");
  double w = j["weight"].get<double>();
  if (!(w > 0.0)) Fail(ErrorKind::kLoad, what + ".weight: weight outside (0, 1]");
  g.log_weight = std::log(w);
  return g;
}

json ComponentToJson(const GaussianComponent &g) {
  return json{{"weight", std::exp(g.log_weight)},
              {"mean", std::vector<double>(g.mean.begin(), g.mean.end())},
              {"variance", std::vector<double>(g.variance.begin(), g.variance.end())}};
}

Gmm GmmFromJson(const json &j, const std::string &what) {
  if (!j.is_array()) Fail(ErrorKind::kLoad, what + ": expected an array of components");
  Gmm gmm;
  for (size_t m = 0; m < j.size(); ++m)
    gmm.push_back(ComponentFromJson(j[m], what + "[" + std::to_string(m) + "]"));
  return gmm;
}

json GmmToJson(const Gmm &gmm) {
  json a = json::array();
  for (const auto &g : gmm) a.push_back(ComponentToJson(g));
  return a;
}

}  // namespace

GmmHmm GmmHmmFromJson(const json &j) {
  if (!j.is_object() || !j.contains("name") || !j["name"].is_string())
    Fail(ErrorKind::kLoad, "phoneme entry without a string 'name'");
  GmmHmm hmm;
  hmm.name = j["name"].get<std::string>();
  const std::string where = "model '" + hmm.name + "'";
  for (const char *key : {"priors", "transitions", "states"})
    if (!j.contains(key))
      Fail(ErrorKind::kLoad, where + ": missing field '" + key + "'");
  hmm.log_priors = LogOf(VectorFromJson(j["priors"], where + ".priors"), where + ".priors");
  const json &trans = j["transitions"];
  if (!trans.is_array()) Fail(ErrorKind::kLoad, where + ".transitions: expected matrix");
  const int n = static_cast<int>(trans.size());
  hmm.log_transitions.resize(n, n);
  for (int i = 0; i < n; ++i) {
    Vector row = VectorFromJson(trans[i], where + ".transitions");
    if (row.size() != n)
      Fail(ErrorKind::kLoad, where + ".transitions: row " + std::to_string(i) +
                                 " has wrong length");
    hmm.log_transitions.row(i) = LogOf(row, where + ".transitions").transpose();
  }
  if (j.contains("exit")) {
    hmm.log_exit = LogOf(VectorFromJson(j["exit"], where + ".exit"), where + ".exit");
  } else {
    hmm.log_exit = Vector::Constant(n, kLogZero);
  }
  const json &states = j["states"];
  if (!states.is_array()) Fail(ErrorKind::kLoad, where + ".states: expected array");
  for (size_t s = 0; s < states.size(); ++s)
    hmm.states.push_back(GmmFromJson(states[s], where + ".states[" + std::to_string(s) + "]"));
  hmm.Validate();
  return hmm;
}

json GmmHmmToJson(const GmmHmm &hmm) {
  json trans = json::array();
  for (int i = 0; i < hmm.log_transitions.rows(); ++i)
    trans.push_back(ProbVectorToJson(hmm.log_transitions.row(i).transpose()));
  json states = json::array();
  for (const auto &s : hmm.states) states.push_back(GmmToJson(s));
  return json{{"name", hmm.name},
              {"priors", ProbVectorToJson(hmm.log_priors)},
              {"transitions", trans},
              {"exit", ProbVectorToJson(hmm.log_exit)},
              {"states", states}};
}

SpeakerModelSet ModelSetFromJson(const json &j) {
  if (!j.is_object() || !j.contains("feature_config") || !j.contains("speakers"))
    Fail(ErrorKind::kLoad, "model set needs top-level 'feature_config' and 'speakers'");
  SpeakerModelSet set;
  try {
    set.feature_config = j["feature_config"].get<FeatureConfig>();
  } catch (const json::exception &e) {
    Fail(ErrorKind::kLoad, std::string("feature_config: ") + e.what());
  } catch (const Error &e) {
    Fail(ErrorKind::kLoad, std::string("feature_config: ") + e.what());
  }
  if (!j["speakers"].is_array()) Fail(ErrorKind::kLoad, "'speakers' must be an array");
  for (const json &sj : j["speakers"]) {
    if (!sj.contains("id") || !sj["id"].is_string())
      Fail(ErrorKind::kLoad, "speaker entry without a string 'id'");
    SpeakerModels spk;
    spk.id = sj["id"].get<std::string>();
    if (set.speakers.count(spk.id))
      Fail(ErrorKind::kLoad, "duplicate speaker '" + spk.id + "'");
    if (!sj.contains("phonemes") || !sj["phonemes"].is_array())
      Fail(ErrorKind::kLoad, "speaker '" + spk.id + "': missing 'phonemes' array");
    for (const json &pj : sj["phonemes"]) {
      GmmHmm hmm;
      try {
        hmm = GmmHmmFromJson(pj);
      } catch (const Error &e) {
        Fail(ErrorKind::kLoad, "speaker '" + spk.id + "': " + e.what());
      }
      if (spk.phonemes.count(hmm.name))
        Fail(ErrorKind::kLoad, "speaker '" + spk.id + "': duplicate phoneme '" +
                                   hmm.name + "'");
      spk.phonemes.emplace(hmm.name, std::move(hmm));
    }
    if (sj.contains("frame_gmm"))
      spk.frame_gmm = GmmFromJson(sj["frame_gmm"], "speaker '" + spk.id + "'.frame_gmm");
    set.speakers.emplace(spk.id, std::move(spk));
  }
  set.Validate();
  return set;
}

json ModelSetToJson(const SpeakerModelSet &set) {
  json speakers = json::array();
  for (const auto &[id, spk] : set.speakers) {
    json phonemes = json::array();
    for (const auto &[label, hmm] : spk.phonemes) phonemes.push_back(GmmHmmToJson(hmm));
    speakers.push_back(
        json{{"id", id}, {"phonemes", phonemes}, {"frame_gmm", GmmToJson(spk.frame_gmm)}});
  }
  return json{{"feature_config", set.feature_config}, {"speakers", speakers}};
}

SpeakerModelSet LoadModelSet(const std::string &path) {
  std::ifstream is(path);
  if (!is) Fail(ErrorKind::kIo, "cannot open model set '" + path + "'");
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception &e) {
    Fail(ErrorKind::kLoad, "'" + path + "': " + e.what());
  }
  return ModelSetFromJson(j);
}

void SaveModelSet(const std::string &path, const SpeakerModelSet &set) {
  std::ofstream os(path);
  if (!os) Fail(ErrorKind::kIo, "cannot write model set '" + path + "'");
  os << ModelSetToJson(set).dump(1) << '\n';
}

}  // namespace fasr
