#include "gwsrank/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gwsrank {

namespace {

double gain(int grade) { return std::exp2(static_cast<double>(grade)) - 1.0; }

double discount(std::size_t rank) { return 1.0 / std::log2(static_cast<double>(rank) + 1.0); }

// Regularized incomplete beta I_x(a, b) by continued fraction (Lentz).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 200;
  constexpr double kEps = 3e-14;
  constexpr double kFpMin = 1e-300;

  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    a * std::log(x) + b * std::log(1.0 - x);
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

// Two-tailed p for Student's t with df degrees of freedom.
double t_two_tailed_p(double t, double df) {
  return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

DiffCounts classify(std::vector<double> diffs, double bound) {
  DiffCounts counts;
  for (double d : diffs) {
    if (d > bound) {
      ++counts.improved;
    } else if (d < -bound) {
      ++counts.degraded;
    } else {
      ++counts.unchanged;
    }
  }
  double n = static_cast<double>(diffs.size());
  counts.improved_fraction = counts.improved / n;
  counts.degraded_fraction = counts.degraded / n;
  counts.unchanged_fraction = counts.unchanged / n;
  return counts;
}

}  // namespace

double ndcg_at(const RunRanking& ranking, const QrelSet& qrels, std::size_t cutoff) {
  if (cutoff < 1) throw std::invalid_argument("ndcg_at: cutoff must be >= 1");

  std::vector<int> relevant_grades;
  for (const auto& [_, grade] : qrels.judged(ranking.query_id)) {
    if (grade > 0) relevant_grades.push_back(grade);
  }
  if (relevant_grades.empty()) return 0.0;
  std::sort(relevant_grades.rbegin(), relevant_grades.rend());

  double dcg = 0.0;
  for (std::size_t r = 1; r <= std::min(cutoff, ranking.doc_ids.size()); ++r) {
    dcg += gain(qrels.grade(ranking.query_id, ranking.doc_ids[r - 1])) * discount(r);
  }
  double idcg = 0.0;
  for (std::size_t r = 1; r <= std::min(cutoff, relevant_grades.size()); ++r) {
    idcg += gain(relevant_grades[r - 1]) * discount(r);
  }
  return dcg / idcg;
}

double map_in_pool(const RunRanking& ranking, const QrelSet& qrels, int relevance_threshold) {
  if (relevance_threshold < 1) throw std::invalid_argument("map_in_pool: threshold must be >= 1");
  std::size_t relevant_in_pool = 0;
  double precision_sum = 0.0;
  for (std::size_t r = 1; r <= ranking.doc_ids.size(); ++r) {
    if (qrels.grade(ranking.query_id, ranking.doc_ids[r - 1]) >= relevance_threshold) {
      ++relevant_in_pool;
      precision_sum += static_cast<double>(relevant_in_pool) / static_cast<double>(r);
    }
  }
  if (relevant_in_pool == 0) return 0.0;
  return precision_sum / static_cast<double>(relevant_in_pool);
}

double mrr(const RunRanking& ranking, const QrelSet& qrels, int relevance_threshold) {
  if (relevance_threshold < 1) throw std::invalid_argument("mrr: threshold must be >= 1");
  for (std::size_t r = 1; r <= ranking.doc_ids.size(); ++r) {
    if (qrels.grade(ranking.query_id, ranking.doc_ids[r - 1]) >= relevance_threshold) {
      return 1.0 / static_cast<double>(r);
    }
  }
  return 0.0;
}

MetricsRecord evaluate_run(const std::vector<RunRanking>& rankings, const QrelSet& qrels,
                           int relevance_threshold) {
  if (rankings.empty()) throw std::invalid_argument("evaluate_run: no rankings");
  MetricsRecord record;
  for (const auto& ranking : rankings) {
    QueryMetrics m;
    m.ndcg_at_1 = ndcg_at(ranking, qrels, 1);
    m.ndcg_at_10 = ndcg_at(ranking, qrels, 10);
    m.map = map_in_pool(ranking, qrels, relevance_threshold);
    m.mrr = mrr(ranking, qrels, relevance_threshold);
    record.per_query.emplace(ranking.query_id, m);
  }
  double n = static_cast<double>(record.per_query.size());
  for (const auto& [_, m] : record.per_query) {
    record.aggregate.ndcg_at_1 += m.ndcg_at_1 / n;
    record.aggregate.ndcg_at_10 += m.ndcg_at_10 / n;
    record.aggregate.map += m.map / n;
    record.aggregate.mrr += m.mrr / n;
  }
  return record;
}

TTestResult paired_t_test(const std::vector<double>& per_query_a,
                          const std::vector<double>& per_query_b, int num_comparisons) {
  if (per_query_a.size() != per_query_b.size()) {
    throw std::invalid_argument("paired_t_test: vectors differ in length");
  }
  if (per_query_a.size() < 2) throw std::invalid_argument("paired_t_test: need >= 2 pairs");
  if (num_comparisons < 1) throw std::invalid_argument("paired_t_test: num_comparisons >= 1");

  std::size_t n = per_query_a.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += (per_query_a[i] - per_query_b[i]) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = per_query_a[i] - per_query_b[i] - mean;
    ss += d * d;
  }
  double sd = std::sqrt(ss / static_cast<double>(n - 1));
  double alpha = 0.05 / num_comparisons;

  TTestResult result{};
  if (sd == 0.0) {
    if (mean == 0.0) {
      result.t_statistic = 0.0;
      result.p_value = 1.0;
      result.significant = false;
    } else {
      result.t_statistic = mean > 0 ? std::numeric_limits<double>::infinity()
                                    : -std::numeric_limits<double>::infinity();
      result.p_value = 0.0;
      result.significant = true;
    }
    return result;
  }
  result.t_statistic = mean / (sd / std::sqrt(static_cast<double>(n)));
  result.p_value = t_two_tailed_p(result.t_statistic, static_cast<double>(n - 1));
  result.significant = result.p_value < alpha;
  return result;
}

PerQueryDiff per_query_diff(const MetricsRecord& records_a, const MetricsRecord& records_b,
                            double bound) {
  if (records_a.per_query.size() != records_b.per_query.size()) {
    throw std::invalid_argument("per_query_diff: query sets differ");
  }
  std::vector<double> d_ndcg1, d_ndcg10, d_map, d_mrr;
  for (const auto& [qid, a] : records_a.per_query) {
    auto it = records_b.per_query.find(qid);
    if (it == records_b.per_query.end()) {
      throw std::invalid_argument("per_query_diff: query sets differ: " + qid);
    }
    const QueryMetrics& b = it->second;
    d_ndcg1.push_back(a.ndcg_at_1 - b.ndcg_at_1);
    d_ndcg10.push_back(a.ndcg_at_10 - b.ndcg_at_10);
    d_map.push_back(a.map - b.map);
    d_mrr.push_back(a.mrr - b.mrr);
  }
  PerQueryDiff diff;
  diff.ndcg_at_1 = classify(d_ndcg1, bound);
  diff.ndcg_at_10 = classify(d_ndcg10, bound);
  diff.map = classify(d_map, bound);
  diff.mrr = classify(d_mrr, bound);
  return diff;
}

}  // namespace gwsrank
