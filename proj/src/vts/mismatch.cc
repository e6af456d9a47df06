// vts/mismatch.cc

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

#include "fasr/vts/mismatch.h"

#include <string>

#include "fasr/base/error.h"

namespace fasr {

namespace {

// Mel-bin sum y = u + v + 2 alpha s, before flooring.
Vector MelSum(const Vector &ua, const Vector &ub, double alpha, Vector *cross) {
  *cross = (0.5 * (ua + ub)).array().exp().matrix();
  return ((ua.array().exp() + ub.array().exp()) + 2.0 * alpha * cross->array()).matrix();
}

}  // namespace

Vector Mismatch(const Vector &xa, const Vector &xb, double alpha,
                const DctPair &dct, double mel_floor) {
  Vector ua = dct.inverse * xa, ub = dct.inverse * xb, cross;
  Vector mel = MelSum(ua, ub, alpha, &cross);
  return dct.forward * mel.array().max(mel_floor).log().matrix();
}

LinearizedInteraction Linearize(const Vector &xa, const Vector &xb, double alpha,
                                const DctPair &dct, double mel_floor) {
  Vector ua = dct.inverse * xa, ub = dct.inverse * xb, cross;
  Vector mel = MelSum(ua, ub, alpha, &cross);
  for (int l = 0; l < mel.size(); ++l)
    if (!(mel[l] > mel_floor))
      Fail(ErrorKind::kDegenerateJacobian,
           "mel bin " + std::to_string(l) + " of the mixture is at the floor");
  LinearizedInteraction lin;
  lin.f0 = dct.forward * mel.array().log().matrix();
  Vector da = ((ua.array().exp() + alpha * cross.array()) / mel.array()).matrix();
  Vector db = ((ub.array().exp() + alpha * cross.array()) / mel.array()).matrix();
  lin.G = dct.forward * da.asDiagonal() * dct.inverse;
  lin.H = dct.forward * db.asDiagonal() * dct.inverse;
  return lin;
}

}  // namespace fasr
