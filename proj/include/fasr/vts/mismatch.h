// vts/mismatch.h

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

#ifndef FASR_VTS_MISMATCH_H_
#define FASR_VTS_MISMATCH_H_

#include "fasr/base/math.h"
#include "fasr/features/mfcc.h"

namespace fasr {

inline constexpr double kDefaultAlpha = 2.0;
inline constexpr double kDefaultMelFloor = 1e-10;

/// Cepstral-domain interaction of two sources with a constant phase factor:
///   y = C log( e^{C' xa} + e^{C' xb} + 2 alpha e^{C'(xa + xb) / 2} )
/// where C' is the DCT inverse.  The log argument is floored at mel_floor,
/// so the function is total for any alpha.  Exactly symmetric in (xa, xb).
Vector Mismatch(const Vector &xa, const Vector &xb, double alpha,
                const DctPair &dct, double mel_floor = kDefaultMelFloor);

/// First-order expansion of Mismatch around (xa, xb).
struct LinearizedInteraction {
  Vector f0;
  Matrix G;  // d f / d xa
  Matrix H;  // d f / d xb
};

/// With u = e^{C' xa}, v = e^{C' xb}, s = e^{C'(xa + xb) / 2} and
/// y = u + v + 2 alpha s:
///   G = C diag((u + alpha s) / y) C',  H = C diag((v + alpha s) / y) C'.
/// Throws Error(kDegenerateJacobian) if any mel bin of y is at the floor.
LinearizedInteraction Linearize(const Vector &xa, const Vector &xb, double alpha,
                                const DctPair &dct,
                                double mel_floor = kDefaultMelFloor);

inline std::pair<Matrix, Matrix> Jacobians(const Vector &xa, const Vector &xb,
                                           double alpha, const DctPair &dct,
                                           double mel_floor = kDefaultMelFloor) {
  auto lin = Linearize(xa, xb, alpha, dct, mel_floor);
  return {std::move(lin.G), std::move(lin.H)};
}

}  // namespace fasr

#endif  // FASR_VTS_MISMATCH_H_
