#pragma once

#include <array>
#include <string>
#include <unordered_map>
#include <vector>

#include "gwsrank/index.hpp"

namespace gwsrank {

inline constexpr std::size_t kFeatureDim = 7;

// [0] bm25 score
// [1] sum of tf over query terms present in the document
// [2] fraction of distinct query terms matched
// [3] sum of idf over matched query terms
// [4] doc_length / avg_doc_length
// [5] max over query terms of tf / doc_length
// [6] query token count
using FeatureVector = std::array<double, kFeatureDim>;

FeatureVector extract_features(const InvertedIndex& index, const Bm25Params& params,
                               const Query& query, const std::string& doc_id);

// Z-score standardization fitted once over the iteration-0 pools and frozen.
// Dimensions with zero variance pass through unscaled.
class FeatureScaler {
 public:
  static FeatureScaler fit(const std::vector<FeatureVector>& samples);
  static FeatureScaler identity();

  FeatureVector transform(const FeatureVector& raw) const;

  const FeatureVector& mean() const { return mean_; }
  const FeatureVector& stddev() const { return stddev_; }

 private:
  FeatureVector mean_{};
  FeatureVector stddev_{};
};

// Standardized feature vectors for the fixed (query, doc) re-ranking pools.
// Pools never change across iterations, so extraction happens once.
class FeatureCache {
 public:
  FeatureCache() = default;
  FeatureCache(const InvertedIndex& index, const Bm25Params& params,
               const std::vector<Query>& queries, const std::vector<RankedList>& pools,
               const FeatureScaler& scaler);

  const FeatureVector& get(const std::string& query_id, const std::string& doc_id) const;
  bool has(const std::string& query_id, const std::string& doc_id) const;
  void put(const std::string& query_id, const std::string& doc_id, const FeatureVector& f);

 private:
  std::unordered_map<std::string, std::unordered_map<std::string, FeatureVector>> features_;
};

// Raw features for every (query, pool doc) pair, for fitting a scaler.
std::vector<FeatureVector> collect_pool_features(const InvertedIndex& index,
                                                 const Bm25Params& params,
                                                 const std::vector<Query>& queries,
                                                 const std::vector<RankedList>& pools);

}  // namespace gwsrank
