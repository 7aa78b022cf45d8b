#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gwsrank/index.hpp"

namespace gwsrank {

struct QppConfig {
  std::size_t top_k = 20;  // documents entering the standard deviation
  bool normalize_by_corpus_score = true;
};

// Per-query importance weights consumed by in-batch loss normalization.
struct QueryWeights {
  std::unordered_map<std::string, double> weights;

  double at(const std::string& query_id) const;
  static QueryWeights uniform(const std::vector<Query>& queries);
};

// Normalized Query Commitment: population standard deviation of the top
// min(top_k, depth) retrieval scores, optionally divided by the query's
// whole-collection score.
double nqc(const RankedList& ranked_list, std::optional<double> corpus_score,
           const QppConfig& config);

// BM25 score of the query against the pseudo-document formed by concatenating
// the whole collection: tf = collection frequency, length = total token count,
// avgdl and idf taken from the index unchanged.
double corpus_score(const InvertedIndex& index, const Bm25Params& params, const Query& query);

// w_q from NQC over the initial weak labeler's pools. Queries with degenerate
// pools (depth < 2 or zero variance) receive the mean positive weight, or 1.0
// when no positive weight exists. Computed once and reused across iterations.
QueryWeights compute_query_weights(const std::vector<Query>& queries,
                                   const std::vector<RankedList>& pools,
                                   const InvertedIndex& index, const Bm25Params& params,
                                   const QppConfig& config);

void write_weights_tsv(const QueryWeights& weights, const std::vector<Query>& queries,
                       const std::string& path);

}  // namespace gwsrank
