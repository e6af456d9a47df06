// vts/joint-scorer.h

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

#ifndef FASR_VTS_JOINT_SCORER_H_
#define FASR_VTS_JOINT_SCORER_H_

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "fasr/vts/compensation.h"

namespace fasr {

/// One audio source as seen by the interaction model: an indexed list of
/// emission GMMs ("pdfs") with their partner-independent data prepared.
/// The key combines a label with a hash of every parameter, so two sources
/// share compensation cache entries only if their parameters are identical
/// (a gain-adapted copy gets a fresh key).
class SourceModel {
 public:
  SourceModel(const std::string &label, std::vector<Gmm> pdfs,
              const FeatureConfig &features);

  static std::shared_ptr<const SourceModel> FromHmm(const GmmHmm &hmm,
                                                    const FeatureConfig &features);

  const std::string &key() const { return key_; }
  int NumPdfs() const { return static_cast<int>(prepared_.size()); }
  const std::vector<PreparedComponent> &Pdf(int i) const { return prepared_[i]; }
  const Gmm &RawPdf(int i) const { return pdfs_[i]; }
  const FeatureConfig &features() const { return features_; }
  const DctPair &dct() const { return dct_; }

 private:
  std::string key_;
  std::vector<Gmm> pdfs_;
  std::vector<std::vector<PreparedComponent>> prepared_;
  FeatureConfig features_;
  DctPair dct_;
};

/// All component-pair models of one pdf pair, laid out for fast scoring.
struct CompensatedBlock {
  int num_a = 0, num_b = 0, dim = 0;
  CovarianceMode mode = CovarianceMode::kDiagonal;
  // Diagonal mode, per pair p = ia * num_b + ib: means[p*dim..], inv_vars,
  // constants[p] = log w_a + log w_b + sum of stream log normalizers.
  std::vector<double> means, inv_vars, constants;
  // Full mode keeps the models themselves; constants still hold the weights.
  std::vector<JointObservationModel> full;

  double Score(const double *y, ComponentMode components) const;
};

std::shared_ptr<const CompensatedBlock> BuildCompensatedBlock(
    const SourceModel &a, int pdf_a, const SourceModel &b, int pdf_b,
    const InteractionConfig &config);

/// Process-wide store of compensated blocks.  Safe for concurrent use;
/// concurrent requests for the same key compute the block once.
class CompensationCache {
 public:
  struct Key {
    uint32_t source_a, pdf_a, source_b, pdf_b;
    uint64_t alpha_bits;
    uint32_t mode;
    bool operator==(const Key &o) const = default;
  };

  uint32_t Intern(const std::string &source_key);
  std::shared_ptr<const CompensatedBlock> Get(const Key &key, const SourceModel &a,
                                              const SourceModel &b,
                                              const InteractionConfig &config);

  uint64_t lookups() const { return lookups_.load(); }
  uint64_t misses() const { return misses_.load(); }
  double HitRate() const;
  void ResetStats();
  size_t size() const;
  void Clear();

 private:
  struct KeyHash {
    size_t operator()(const Key &k) const;
  };
  struct Slot {
    std::once_flag once;
    std::shared_ptr<const CompensatedBlock> block;
  };
  mutable std::mutex mutex_;
  std::unordered_map<std::string, uint32_t> source_ids_;
  std::unordered_map<Key, std::shared_ptr<Slot>, KeyHash> slots_;
  std::atomic<uint64_t> lookups_{0}, misses_{0};
};

/// Frame likelihoods p(y | pdf_a, pdf_b) for a source pair: max (or
/// log-sum) over component pairs of weight-scaled compensated Gaussians.
/// Blocks come from the shared cache; per-frame results are memoized.
/// One scorer belongs to one decode and is not thread-safe itself.
class JointScorer {
 public:
  JointScorer(std::shared_ptr<const SourceModel> a,
              std::shared_ptr<const SourceModel> b,
              const InteractionConfig &config, CompensationCache *cache);

  /// Starts a new frame; invalidates the per-frame memo.
  void SetFrame(std::span<const double> y);
  double Score(int pdf_a, int pdf_b);
  /// Fetches the block of every pdf pair, compensating the ones the shared
  /// cache does not hold yet.
  void Prefill();
  /// Unmemoized score of an arbitrary observation.
  double ScoreObservation(int pdf_a, int pdf_b, std::span<const double> y);

  const SourceModel &source_a() const { return *a_; }
  const SourceModel &source_b() const { return *b_; }
  const InteractionConfig &config() const { return config_; }
  uint64_t evaluations() const { return evaluations_; }

 private:
  const CompensatedBlock &Block(int pdf_a, int pdf_b);

  std::shared_ptr<const SourceModel> a_, b_;
  InteractionConfig config_;
  CompensationCache *cache_;
  std::unique_ptr<CompensationCache> own_cache_;
  uint32_t id_a_, id_b_;
  std::vector<std::shared_ptr<const CompensatedBlock>> blocks_;
  std::vector<double> memo_;
  std::vector<uint32_t> stamp_;
  uint32_t frame_stamp_ = 0;
  const double *frame_ = nullptr;
  uint64_t evaluations_ = 0;
};

}  // namespace fasr

#endif  // FASR_VTS_JOINT_SCORER_H_
