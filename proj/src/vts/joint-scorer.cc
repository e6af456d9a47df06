// vts/joint-scorer.cc

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

#include "fasr/vts/joint-scorer.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#include "fasr/base/error.h"

namespace fasr {

namespace {

class Fnv64 {
 public:
  void Add(const void *data, size_t n) {
    const auto *p = static_cast<const unsigned char *>(data);
    for (size_t i = 0; i < n; ++i) {
      h_ ^= p[i];
      h_ *= 1099511628211ULL;
    }
  }
  void Add(double v) { Add(&v, sizeof v); }
  void Add(const Vector &v) { Add(v.data(), sizeof(double) * v.size()); }
  uint64_t value() const { return h_; }

 private:
  uint64_t h_ = 1469598103934665603ULL;
};

}  // namespace

SourceModel::SourceModel(const std::string &label, std::vector<Gmm> pdfs,
                         const FeatureConfig &features)
    : pdfs_(std::move(pdfs)),
      features_(features),
      dct_(BuildDctPair(features.num_cepstra, features.num_mel_filters)) {
  Fnv64 hash;
  hash.Add(label.data(), label.size());
  for (const Gmm &gmm : pdfs_) {
    std::vector<PreparedComponent> prepared;
    for (const GaussianComponent &g : gmm) {
      hash.Add(g.log_weight);
      hash.Add(g.mean);
      hash.Add(g.variance);
      prepared.push_back(PrepareComponent(g, features_, dct_));
    }
    hash.Add(-1.0);
    prepared_.push_back(std::move(prepared));
  }
  char hex[24];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(hash.value()));
  key_ = label + "@" + hex;
}

std::shared_ptr<const SourceModel> SourceModel::FromHmm(const GmmHmm &hmm,
                                                        const FeatureConfig &features) {
  return std::make_shared<const SourceModel>(hmm.name, hmm.states, features);
}

double CompensatedBlock::Score(const double *y, ComponentMode components) const {
  const int pairs = num_a * num_b;
  double best = kLogZero, total = kLogZero;
  for (int p = 0; p < pairs; ++p) {
    double ll;
    if (mode == CovarianceMode::kDiagonal) {
      const double *mu = means.data() + static_cast<size_t>(p) * dim;
      const double *iv = inv_vars.data() + static_cast<size_t>(p) * dim;
      double acc = 0.0;
      for (int d = 0; d < dim; ++d) {
        double diff = y[d] - mu[d];
        acc += diff * diff * iv[d];
      }
      ll = constants[p] - 0.5 * acc;
    } else {
      ll = constants[p] + JointLogLikelihood({y, static_cast<size_t>(dim)}, full[p]);
    }
    if (components == ComponentMode::kMax) {
      if (ll > best) best = ll;
    } else {
      total = LogAdd(total, ll);
    }
  }
  return components == ComponentMode::kMax ? best : total;
}

namespace {

// Scratch space for the diagonal kernel, sized once per block.
struct DiagonalWorkspace {
  int c = 0, m = 0;
  std::vector<double> rows;    // forward DCT, row-major c x m
  std::vector<double> scaled;  // rows scaled by da, row-major c x m
  std::vector<double> g2, h2;  // squared jacobian entries, row-major c x c
  Vector cross, mel, da, db, mixed;

  explicit DiagonalWorkspace(const DctPair &dct)
      : c(static_cast<int>(dct.forward.rows())),
        m(static_cast<int>(dct.forward.cols())),
        rows(static_cast<size_t>(c) * m),
        scaled(rows.size()),
        g2(static_cast<size_t>(c) * c),
        h2(g2.size()) {
    for (int k = 0; k < c; ++k)
      for (int l = 0; l < m; ++l) rows[k * m + l] = dct.forward(k, l);
  }
};

// Diagonal-mode compensation of one component pair written straight into
// the block arrays.  G = C diag(da) C' is symmetric, and da + db = 1 in
// every bin, so H = I - G.
double CompensateDiagonalInto(const PreparedComponent &a, const PreparedComponent &b,
                              const InteractionConfig &config, const DctPair &dct,
                              DiagonalWorkspace &w, double *means, double *inv_vars) {
  const int c = w.c, m = w.m;
  w.cross = (0.5 * (a.log_mel + b.log_mel)).array().exp().matrix();
  w.mel = ((a.mel.array() + b.mel.array()) + 2.0 * config.alpha * w.cross.array()).matrix();
  for (int l = 0; l < m; ++l)
    if (!(w.mel[l] > config.mel_floor))
      Fail(ErrorKind::kDegenerateJacobian,
           "mel bin " + std::to_string(l) + " of the mixture is at the floor");
  w.da = ((a.mel.array() + config.alpha * w.cross.array()) / w.mel.array()).matrix();
  w.db = ((b.mel.array() + config.alpha * w.cross.array()) / w.mel.array()).matrix();
  for (int k = 0; k < c; ++k)
    for (int l = 0; l < m; ++l) w.scaled[k * m + l] = w.rows[k * m + l] * w.da[l];
  for (int k = 0; k < c; ++k) {
    const double *sk = &w.scaled[k * m];
    for (int j = k; j < c; ++j) {
      const double *rj = &w.rows[j * m];
      double g = 0.0;
      for (int l = 0; l < m; ++l) g += sk[l] * rj[l];
      const double h = (k == j ? 1.0 : 0.0) - g;
      w.g2[k * c + j] = w.g2[j * c + k] = g * g;
      w.h2[k * c + j] = w.h2[j * c + k] = h * h;
    }
  }

  double log_norm = 0.0;
  const size_t streams = a.stream_means.size();
  for (size_t s = 0; s < streams; ++s) {
    Eigen::Map<Vector> mean(means + s * c, c);
    double *iv = inv_vars + s * c;
    if (s == 0) {
      w.mixed = w.mel.array().log().matrix();
    } else {
      w.mixed = w.da.cwiseProduct(a.dynamic_mel[s - 1]) + w.db.cwiseProduct(b.dynamic_mel[s - 1]);
    }
    mean.noalias() = dct.forward * w.mixed;
    const Vector &va = a.stream_variances[s], &vb = b.stream_variances[s];
    double log_det = 0.0;
    for (int k = 0; k < c; ++k) {
      double v = 0.0;
      for (int j = 0; j < c; ++j) v += w.g2[k * c + j] * va[j] + w.h2[k * c + j] * vb[j];
      v = std::max(v, config.variance_floor);
      log_det += std::log(v);
      iv[k] = 1.0 / v;
    }
    log_norm += -0.5 * (c * kLog2Pi + log_det);
  }
  return log_norm;
}

}  // namespace

std::shared_ptr<const CompensatedBlock> BuildCompensatedBlock(
    const SourceModel &a, int pdf_a, const SourceModel &b, int pdf_b,
    const InteractionConfig &config) {
  const auto &ca = a.Pdf(pdf_a);
  const auto &cb = b.Pdf(pdf_b);
  auto block = std::make_shared<CompensatedBlock>();
  block->num_a = static_cast<int>(ca.size());
  block->num_b = static_cast<int>(cb.size());
  block->dim = a.features().Dim();
  block->mode = config.covariance;
  const int pairs = block->num_a * block->num_b;
  block->constants.resize(pairs);
  if (config.covariance == CovarianceMode::kDiagonal) {
    block->means.resize(static_cast<size_t>(pairs) * block->dim);
    block->inv_vars.resize(block->means.size());
    DiagonalWorkspace w(a.dct());
    for (int ia = 0; ia < block->num_a; ++ia) {
      for (int ib = 0; ib < block->num_b; ++ib) {
        const int p = ia * block->num_b + ib;
        const size_t offset = static_cast<size_t>(p) * block->dim;
        block->constants[p] = ca[ia].log_weight + cb[ib].log_weight +
                              CompensateDiagonalInto(ca[ia], cb[ib], config, a.dct(), w,
                                                     &block->means[offset],
                                                     &block->inv_vars[offset]);
      }
    }
    return block;
  }
  for (int ia = 0; ia < block->num_a; ++ia) {
    for (int ib = 0; ib < block->num_b; ++ib) {
      JointObservationModel model = CompensatePrepared(ca[ia], cb[ib], config, a.dct());
      block->constants[ia * block->num_b + ib] = ca[ia].log_weight + cb[ib].log_weight;
      block->full.push_back(std::move(model));
    }
  }
  return block;
}

size_t CompensationCache::KeyHash::operator()(const Key &k) const {
  uint64_t h = k.alpha_bits * 0x9E3779B97F4A7C15ULL;
  auto mix = [&](uint64_t v) { h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2); };
  mix(k.source_a);
  mix(k.pdf_a);
  mix(k.source_b);
  mix(k.pdf_b);
  mix(k.mode);
  return static_cast<size_t>(h);
}

uint32_t CompensationCache::Intern(const std::string &source_key) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] =
      source_ids_.emplace(source_key, static_cast<uint32_t>(source_ids_.size()));
  return it->second;
}

std::shared_ptr<const CompensatedBlock> CompensationCache::Get(
    const Key &key, const SourceModel &a, const SourceModel &b,
    const InteractionConfig &config) {
  std::shared_ptr<Slot> slot;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto &entry = slots_[key];
    if (!entry) entry = std::make_shared<Slot>();
    slot = entry;
  }
  lookups_.fetch_add(1, std::memory_order_relaxed);
  std::call_once(slot->once, [&] {
    misses_.fetch_add(1, std::memory_order_relaxed);
    slot->block = BuildCompensatedBlock(a, key.pdf_a, b, key.pdf_b, config);
  });
  return slot->block;
}

double CompensationCache::HitRate() const {
  uint64_t n = lookups_.load();
  return n == 0 ? 0.0 : 1.0 - static_cast<double>(misses_.load()) / n;
}

void CompensationCache::ResetStats() {
  lookups_.store(0);
  misses_.store(0);
}

size_t CompensationCache::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return slots_.size();
}

void CompensationCache::Clear() {
  std::lock_guard<std::mutex> lock(mutex_);
  slots_.clear();
}

JointScorer::JointScorer(std::shared_ptr<const SourceModel> a,
                         std::shared_ptr<const SourceModel> b,
                         const InteractionConfig &config, CompensationCache *cache)
    : a_(std::move(a)), b_(std::move(b)), config_(config), cache_(cache) {
  if (!(a_->features() == b_->features()))
    Fail(ErrorKind::kInvalidConfiguration,
         "sources '" + a_->key() + "' and '" + b_->key() +
             "' use different feature configurations");
  if (cache_ == nullptr) {
    own_cache_ = std::make_unique<CompensationCache>();
    cache_ = own_cache_.get();
  }
  id_a_ = cache_->Intern(a_->key());
  id_b_ = cache_->Intern(b_->key());
  const size_t cells = static_cast<size_t>(a_->NumPdfs()) * b_->NumPdfs();
  blocks_.resize(cells);
  memo_.resize(cells);
  stamp_.assign(cells, 0);
}

const CompensatedBlock &JointScorer::Block(int pdf_a, int pdf_b) {
  auto &slot = blocks_[static_cast<size_t>(pdf_a) * b_->NumPdfs() + pdf_b];
  if (!slot) {
    CompensationCache::Key key{id_a_, static_cast<uint32_t>(pdf_a), id_b_,
                               static_cast<uint32_t>(pdf_b),
                               std::bit_cast<uint64_t>(config_.alpha),
                               static_cast<uint32_t>(config_.covariance)};
    slot = cache_->Get(key, *a_, *b_, config_);
  }
  return *slot;
}

void JointScorer::SetFrame(std::span<const double> y) {
  if (static_cast<int>(y.size()) != a_->features().Dim())
    Fail(ErrorKind::kInvalidInput, "frame dimension " + std::to_string(y.size()) +
                                       " does not match models (" +
                                       std::to_string(a_->features().Dim()) + ")");
  frame_ = y.data();
  if (++frame_stamp_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    frame_stamp_ = 1;
  }
}

double JointScorer::Score(int pdf_a, int pdf_b) {
  const size_t cell = static_cast<size_t>(pdf_a) * b_->NumPdfs() + pdf_b;
  if (stamp_[cell] == frame_stamp_) return memo_[cell];
  ++evaluations_;
  stamp_[cell] = frame_stamp_;
  return memo_[cell] = Block(pdf_a, pdf_b).Score(frame_, config_.components);
}

void JointScorer::Prefill() {
  for (int i = 0; i < a_->NumPdfs(); ++i)
    for (int j = 0; j < b_->NumPdfs(); ++j) Block(i, j);
}

double JointScorer::ScoreObservation(int pdf_a, int pdf_b, std::span<const double> y) {
  return Block(pdf_a, pdf_b).Score(y.data(), config_.components);
}

}  // namespace fasr
