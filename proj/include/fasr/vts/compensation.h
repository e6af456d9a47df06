// vts/compensation.h

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

#ifndef FASR_VTS_COMPENSATION_H_
#define FASR_VTS_COMPENSATION_H_

#include <span>
#include <vector>

#include "fasr/base/math.h"
#include "fasr/models/gmm-hmm.h"
#include "fasr/vts/mismatch.h"

namespace fasr {

enum class CovarianceMode { kDiagonal, kFull };
enum class ComponentMode { kMax, kLogSum };

struct InteractionConfig {
  double alpha = kDefaultAlpha;
  CovarianceMode covariance = CovarianceMode::kDiagonal;
  ComponentMode components = ComponentMode::kMax;
  double mel_floor = kDefaultMelFloor;
  double variance_floor = 1e-8;
};

/// Gaussian over one stream (static, delta or accel) of the mixture.
struct StreamGaussian {
  Vector mean;
  Vector variance;  // diagonal of the covariance (after flooring)
  Matrix covariance;  // full mode only
  Matrix cholesky;    // full mode only: lower factor of covariance
  double log_norm = 0.0;  // -0.5 (c log 2 pi + log det)
};

struct JointObservationModel {
  std::vector<StreamGaussian> streams;
  CovarianceMode mode = CovarianceMode::kDiagonal;
  LinearizedInteraction linearization;
};

/// Per-component quantities that do not depend on the partner source.
struct PreparedComponent {
  double log_weight = 0.0;
  Vector log_mel;  // C' mu_static
  Vector mel;      // exp(log_mel)
  // Mel-domain images C' mu of the dynamic streams (for G mu products).
  std::vector<Vector> dynamic_mel;
  std::vector<Vector> stream_means;
  std::vector<Vector> stream_variances;
};

PreparedComponent PrepareComponent(const GaussianComponent &g,
                                   const FeatureConfig &features,
                                   const DctPair &dct);

/// VTS compensation of a component pair, expanded at the static means.
/// Dynamic streams reuse the static-stream G and H.
JointObservationModel CompensatePrepared(const PreparedComponent &a,
                                         const PreparedComponent &b,
                                         const InteractionConfig &config,
                                         const DctPair &dct);

JointObservationModel CompensateJointComponent(const GaussianComponent &a,
                                               const GaussianComponent &b,
                                               const InteractionConfig &config,
                                               const FeatureConfig &features,
                                               const DctPair &dct);

/// Sum over streams of the stream Gaussian log densities.  Diagonal models
/// use only the covariance diagonals.
double JointLogLikelihood(std::span<const double> y,
                          const JointObservationModel &model);
double StreamLogLikelihood(std::span<const double> y_stream,
                           const StreamGaussian &g, CovarianceMode mode);

}  // namespace fasr

#endif  // FASR_VTS_COMPENSATION_H_
