// vts/compensation.cc

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

#include "fasr/vts/compensation.h"

#include <string>

#include "fasr/base/error.h"

namespace fasr {

PreparedComponent PrepareComponent(const GaussianComponent &g,
                                   const FeatureConfig &features,
                                   const DctPair &dct) {
  const int c = features.num_cepstra;
  const int streams = features.NumStreams();
  if (g.Dim() != c * streams)
    Fail(ErrorKind::kInvalidInput,
         "component dimension " + std::to_string(g.Dim()) +
             " does not match stream layout " + std::to_string(c) + "x" +
             std::to_string(streams));
  PreparedComponent p;
  p.log_weight = g.log_weight;
  p.log_mel = dct.inverse * g.mean.head(c);
  p.mel = p.log_mel.array().exp().matrix();
  for (int s = 0; s < streams; ++s) {
    p.stream_means.push_back(g.mean.segment(s * c, c));
    p.stream_variances.push_back(g.variance.segment(s * c, c));
    if (s > 0) p.dynamic_mel.push_back(dct.inverse * p.stream_means.back());
  }
  return p;
}

namespace {

void Finalize(StreamGaussian &g, CovarianceMode mode, double floor) {
  const int c = static_cast<int>(g.mean.size());
  if (mode == CovarianceMode::kDiagonal) {
    g.variance = g.variance.array().max(floor).matrix();
    g.log_norm = -0.5 * (c * kLog2Pi + g.variance.array().log().sum());
    return;
  }
  g.covariance = (0.5 * (g.covariance + g.covariance.transpose())).eval();
  for (int k = 0; k < c; ++k)
    g.covariance(k, k) = std::max(g.covariance(k, k), floor);
  g.variance = g.covariance.diagonal();
  Eigen::LLT<Matrix> llt(g.covariance);
  if (llt.info() != Eigen::Success)
    Fail(ErrorKind::kNumeric, "compensated covariance is not positive definite");
  g.cholesky = llt.matrixL();
  g.log_norm = -0.5 * c * kLog2Pi -
               g.cholesky.diagonal().array().log().sum();
}

}  // namespace

JointObservationModel CompensatePrepared(const PreparedComponent &a,
                                         const PreparedComponent &b,
                                         const InteractionConfig &config,
                                         const DctPair &dct) {
  const Vector cross = (0.5 * (a.log_mel + b.log_mel)).array().exp().matrix();
  const Vector mel = ((a.mel.array() + b.mel.array()) +
                      2.0 * config.alpha * cross.array()).matrix();
  for (int l = 0; l < mel.size(); ++l)
    if (!(mel[l] > config.mel_floor))
      Fail(ErrorKind::kDegenerateJacobian,
           "mel bin " + std::to_string(l) + " of the mixture is at the floor");

  JointObservationModel model;
  model.mode = config.covariance;
  LinearizedInteraction &lin = model.linearization;
  const Vector da = ((a.mel.array() + config.alpha * cross.array()) / mel.array()).matrix();
  const Vector db = ((b.mel.array() + config.alpha * cross.array()) / mel.array()).matrix();
  lin.f0 = dct.forward * mel.array().log().matrix();
  lin.G = dct.forward * da.asDiagonal() * dct.inverse;
  lin.H = dct.forward * db.asDiagonal() * dct.inverse;

  const size_t streams = a.stream_means.size();
  model.streams.resize(streams);
  const Matrix g2 = lin.G.array().square().matrix();
  const Matrix h2 = lin.H.array().square().matrix();
  for (size_t s = 0; s < streams; ++s) {
    StreamGaussian &out = model.streams[s];
    if (s == 0) {
      out.mean = lin.f0;
    } else {
      // G mu = C (da .* C' mu), computed in the mel domain.
      out.mean = dct.forward * (da.cwiseProduct(a.dynamic_mel[s - 1]) +
                                db.cwiseProduct(b.dynamic_mel[s - 1]));
    }
    if (config.covariance == CovarianceMode::kDiagonal) {
      out.variance = g2 * a.stream_variances[s] + h2 * b.stream_variances[s];
    } else {
      out.covariance =
          lin.G * a.stream_variances[s].asDiagonal() * lin.G.transpose() +
          lin.H * b.stream_variances[s].asDiagonal() * lin.H.transpose();
    }
    Finalize(out, config.covariance, config.variance_floor);
  }
  return model;
}

JointObservationModel CompensateJointComponent(const GaussianComponent &a,
                                               const GaussianComponent &b,
                                               const InteractionConfig &config,
                                               const FeatureConfig &features,
                                               const DctPair &dct) {
  return CompensatePrepared(PrepareComponent(a, features, dct),
                            PrepareComponent(b, features, dct), config, dct);
}

double StreamLogLikelihood(std::span<const double> y_stream,
                           const StreamGaussian &g, CovarianceMode mode) {
  const int c = static_cast<int>(g.mean.size());
  Eigen::Map<const Vector> y(y_stream.data(), c);
  if (mode == CovarianceMode::kDiagonal) {
    return g.log_norm -
           0.5 * ((y - g.mean).array().square() / g.variance.array()).sum();
  }
  Vector z = g.cholesky.triangularView<Eigen::Lower>().solve(y - g.mean);
  return g.log_norm - 0.5 * z.squaredNorm();
}

double JointLogLikelihood(std::span<const double> y,
                          const JointObservationModel &model) {
  double total = 0.0;
  size_t offset = 0;
  for (const auto &g : model.streams) {
    const size_t c = g.mean.size();
    if (offset + c > y.size())
      Fail(ErrorKind::kInvalidInput, "observation shorter than the stream layout");
    total += StreamLogLikelihood(y.subspan(offset, c), g, model.mode);
    offset += c;
  }
  return total;
}

}  // namespace fasr
