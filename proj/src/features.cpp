#include "gwsrank/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gwsrank {

FeatureVector extract_features(const InvertedIndex& index, const Bm25Params& params,
                               const Query& query, const std::string& doc_id) {
  if (!index.has_doc(doc_id)) throw std::runtime_error("unknown doc_id: " + doc_id);

  std::vector<std::string> distinct;
  for (const auto& token : query.tokens) {
    if (std::find(distinct.begin(), distinct.end(), token) == distinct.end()) {
      distinct.push_back(token);
    }
  }

  double doc_len = index.doc_length(doc_id);
  double tf_sum = 0.0, idf_sum = 0.0, max_norm_tf = 0.0;
  std::size_t matched = 0;
  for (const auto& term : distinct) {
    std::uint32_t tf = index.term_frequency(term, doc_id);
    if (tf == 0) continue;
    ++matched;
    tf_sum += tf;
    idf_sum += index.idf(term);
    if (doc_len > 0) max_norm_tf = std::max(max_norm_tf, tf / doc_len);
  }

  FeatureVector f{};
  f[0] = bm25_score(index, params, query, doc_id);
  f[1] = tf_sum;
  f[2] = distinct.empty() ? 0.0 : static_cast<double>(matched) / distinct.size();
  f[3] = idf_sum;
  f[4] = doc_len / index.avg_doc_length();
  f[5] = max_norm_tf;
  f[6] = static_cast<double>(query.tokens.size());
  for (double v : f) {
    if (!std::isfinite(v)) throw std::runtime_error("non-finite feature for doc " + doc_id);
  }
  return f;
}

FeatureScaler FeatureScaler::fit(const std::vector<FeatureVector>& samples) {
  if (samples.empty()) throw std::invalid_argument("FeatureScaler::fit: no samples");
  FeatureScaler scaler;
  double n = static_cast<double>(samples.size());
  for (const auto& s : samples) {
    for (std::size_t d = 0; d < kFeatureDim; ++d) scaler.mean_[d] += s[d] / n;
  }
  FeatureVector var{};
  for (const auto& s : samples) {
    for (std::size_t d = 0; d < kFeatureDim; ++d) {
      double diff = s[d] - scaler.mean_[d];
      var[d] += diff * diff / n;
    }
  }
  for (std::size_t d = 0; d < kFeatureDim; ++d) {
    scaler.stddev_[d] = var[d] > 0.0 ? std::sqrt(var[d]) : 1.0;
  }
  return scaler;
}

FeatureScaler FeatureScaler::identity() {
  FeatureScaler scaler;
  scaler.mean_.fill(0.0);
  scaler.stddev_.fill(1.0);
  return scaler;
}

FeatureVector FeatureScaler::transform(const FeatureVector& raw) const {
  FeatureVector out;
  for (std::size_t d = 0; d < kFeatureDim; ++d) out[d] = (raw[d] - mean_[d]) / stddev_[d];
  return out;
}

FeatureCache::FeatureCache(const InvertedIndex& index, const Bm25Params& params,
                           const std::vector<Query>& queries,
                           const std::vector<RankedList>& pools, const FeatureScaler& scaler) {
  if (queries.size() != pools.size()) {
    throw std::invalid_argument("FeatureCache: queries and pools differ in length");
  }
  for (std::size_t i = 0; i < queries.size(); ++i) {
    auto& per_doc = features_[queries[i].query_id];
    for (const auto& entry : pools[i].entries) {
      per_doc.emplace(entry.doc_id,
                      scaler.transform(extract_features(index, params, queries[i], entry.doc_id)));
    }
  }
}

const FeatureVector& FeatureCache::get(const std::string& query_id,
                                       const std::string& doc_id) const {
  auto q = features_.find(query_id);
  if (q == features_.end()) throw std::runtime_error("no features for query " + query_id);
  auto d = q->second.find(doc_id);
  if (d == q->second.end()) {
    throw std::runtime_error("no features for (" + query_id + ", " + doc_id + ")");
  }
  return d->second;
}

bool FeatureCache::has(const std::string& query_id, const std::string& doc_id) const {
  auto q = features_.find(query_id);
  return q != features_.end() && q->second.count(doc_id) > 0;
}

void FeatureCache::put(const std::string& query_id, const std::string& doc_id,
                       const FeatureVector& f) {
  features_[query_id][doc_id] = f;
}

std::vector<FeatureVector> collect_pool_features(const InvertedIndex& index,
                                                 const Bm25Params& params,
                                                 const std::vector<Query>& queries,
                                                 const std::vector<RankedList>& pools) {
  std::vector<FeatureVector> all;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    for (const auto& entry : pools[i].entries) {
      all.push_back(extract_features(index, params, queries[i], entry.doc_id));
    }
  }
  return all;
}

}  // namespace gwsrank
