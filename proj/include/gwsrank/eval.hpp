#pragma once

#include <map>
#include <string>
#include <vector>

#include "gwsrank/corpus.hpp"

namespace gwsrank {

// One query's ranking for evaluation: rank 1 first, scores non-increasing.
struct RunRanking {
  std::string query_id;
  std::vector<std::string> doc_ids;
  std::vector<double> scores;
};

struct QueryMetrics {
  double ndcg_at_1 = 0.0;
  double ndcg_at_10 = 0.0;
  double map = 0.0;
  double mrr = 0.0;
};

struct MetricsRecord {
  QueryMetrics aggregate;  // arithmetic mean of per_query
  std::map<std::string, QueryMetrics> per_query;
};

// NDCG with gain 2^grade - 1 and discount log2(rank + 1). IDCG is taken over
// the ideal ordering of all judged-relevant documents for the query, retrieved
// or not. Returns 0 when the query has no judged-relevant document.
double ndcg_at(const RunRanking& ranking, const QrelSet& qrels, std::size_t cutoff);

// Average precision within the re-ranking pool: mean of precision@r over the
// ranks of relevant documents in the ranking, divided by the number of
// relevant documents present in the pool. Relevance = grade >= threshold.
double map_in_pool(const RunRanking& ranking, const QrelSet& qrels, int relevance_threshold);

// Reciprocal rank of the first document with grade >= threshold; 0 if none.
double mrr(const RunRanking& ranking, const QrelSet& qrels, int relevance_threshold);

MetricsRecord evaluate_run(const std::vector<RunRanking>& rankings, const QrelSet& qrels,
                           int relevance_threshold);

struct TTestResult {
  double t_statistic;
  double p_value;
  bool significant;  // p < 0.05 / num_comparisons
};

// Two-tailed paired t-test with Bonferroni correction. Zero-variance
// differences: p = 1 if the mean is also zero, else p = 0.
TTestResult paired_t_test(const std::vector<double>& per_query_a,
                          const std::vector<double>& per_query_b, int num_comparisons);

struct DiffCounts {
  std::size_t improved = 0;
  std::size_t degraded = 0;
  std::size_t unchanged = 0;
  double improved_fraction = 0.0;
  double degraded_fraction = 0.0;
  double unchanged_fraction = 0.0;
};

struct PerQueryDiff {
  DiffCounts ndcg_at_1;
  DiffCounts ndcg_at_10;
  DiffCounts map;
  DiffCounts mrr;
};

// Counts queries where (a - b) > bound / < -bound / else unchanged, per metric.
PerQueryDiff per_query_diff(const MetricsRecord& records_a, const MetricsRecord& records_b,
                            double bound = 0.01);

}  // namespace gwsrank
