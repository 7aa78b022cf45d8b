#include "doctest.h"

#include <cmath>

#include "gwsrank/eval.hpp"
#include "gwsrank/rng.hpp"
#include "test_util.hpp"

using namespace gwsrank;

namespace {

RunRanking make_ranking(const std::string& qid, const std::vector<std::string>& docs) {
  RunRanking r;
  r.query_id = qid;
  r.doc_ids = docs;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    r.scores.push_back(static_cast<double>(docs.size() - i));
  }
  return r;
}

}  // namespace

TEST_SUITE_BEGIN("eval");

TEST_CASE("ndcg worked examples") {
  QrelSet qrels;
  qrels.set("q", "good", 3);
  qrels.set("q", "meh", 0);
  qrels.set("q", "other", 0);  // judged non-relevant, unretrieved

  // ranked grades [0, 3], cutoff 2: DCG = 7/log2(3), IDCG = 7 -> log2(2)/log2(3)
  RunRanking r = make_ranking("q", {"meh", "good"});
  CHECK(ndcg_at(r, qrels, 2) == doctest::Approx(0.6309297535714575).epsilon(1e-12));

  // ideal order -> 1.0
  RunRanking ideal = make_ranking("q", {"good", "meh"});
  CHECK(ndcg_at(ideal, qrels, 2) == doctest::Approx(1.0));

  // no relevant doc anywhere -> 0
  QrelSet empty_qrels;
  empty_qrels.set("q", "meh", 0);
  CHECK(ndcg_at(r, empty_qrels, 10) == 0.0);
}

TEST_CASE("ndcg ideal ordering uses all judged relevant docs, not just retrieved") {
  QrelSet qrels;
  qrels.set("q", "a", 3);
  qrels.set("q", "missing", 3);  // never retrieved, still in the ideal
  RunRanking r = make_ranking("q", {"a"});
  double idcg = 7.0 / std::log2(2.0) + 7.0 / std::log2(3.0);
  CHECK(ndcg_at(r, qrels, 10) == doctest::Approx(7.0 / idcg).epsilon(1e-12));
}

TEST_CASE("map worked examples") {
  QrelSet qrels;
  qrels.set("q", "r1", 2);
  qrels.set("q", "r2", 3);

  CHECK(map_in_pool(make_ranking("q", {"r1", "r2"}), qrels, 2) == doctest::Approx(1.0));
  CHECK(map_in_pool(make_ranking("q", {"x", "y", "r1"}), qrels, 2) ==
        doctest::Approx(1.0 / 3.0));
  // binary pattern [1, 0, 1] -> (1/1 + 2/3) / 2 = 5/6
  CHECK(map_in_pool(make_ranking("q", {"r1", "x", "r2"}), qrels, 2) ==
        doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  CHECK(map_in_pool(make_ranking("q", {"x", "y"}), qrels, 2) == 0.0);
}

TEST_CASE("mrr worked examples") {
  QrelSet qrels;
  qrels.set("q", "rel", 2);
  CHECK(mrr(make_ranking("q", {"rel", "x"}), qrels, 2) == doctest::Approx(1.0));
  CHECK(mrr(make_ranking("q", {"x", "y", "rel"}), qrels, 2) == doctest::Approx(1.0 / 3.0));
  CHECK(mrr(make_ranking("q", {"x", "y"}), qrels, 2) == 0.0);
  // grade below threshold does not count
  QrelSet weak;
  weak.set("q", "almost", 1);
  CHECK(mrr(make_ranking("q", {"almost"}), weak, 2) == 0.0);
}

TEST_CASE("metrics match brute-force references on random instances") {
  Rng rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t pool = 1 + rng.next_index(10);
    std::vector<std::string> docs;
    std::map<std::string, int> judged;
    QrelSet qrels;
    for (std::size_t d = 0; d < pool; ++d) {
      std::string id = "d" + std::to_string(d);
      docs.push_back(id);
      int grade = static_cast<int>(rng.next_index(4));
      judged[id] = grade;
      qrels.set("q", id, grade);
    }
    // a few judged-but-unretrieved docs
    std::size_t extra = rng.next_index(3);
    for (std::size_t e = 0; e < extra; ++e) {
      std::string id = "x" + std::to_string(e);
      int grade = static_cast<int>(rng.next_index(4));
      judged[id] = grade;
      qrels.set("q", id, grade);
    }
    rng.shuffle(docs);
    RunRanking r = make_ranking("q", docs);

    for (std::size_t cutoff : {std::size_t{1}, std::size_t{10}}) {
      double expected = testutil::ref_ndcg(docs, judged, cutoff);
      CHECK(ndcg_at(r, qrels, cutoff) == doctest::Approx(expected).epsilon(1e-9));
    }
    CHECK(map_in_pool(r, qrels, 2) ==
          doctest::Approx(testutil::ref_ap(docs, judged, 2)).epsilon(1e-9));
    CHECK(mrr(r, qrels, 2) == doctest::Approx(testutil::ref_rr(docs, judged, 2)).epsilon(1e-9));
  }
}

TEST_CASE("ndcg never decreases when fixing an adjacent inversion") {
  Rng rng(405);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t pool = 3 + rng.next_index(6);
    QrelSet qrels;
    std::vector<std::string> docs;
    std::vector<int> grades;
    for (std::size_t d = 0; d < pool; ++d) {
      docs.push_back("d" + std::to_string(d));
      grades.push_back(static_cast<int>(rng.next_index(4)));
      qrels.set("q", docs.back(), grades.back());
    }
    std::size_t i = rng.next_index(pool - 1);
    if (grades[i] >= grades[i + 1]) continue;  // need lower-grade above higher-grade
    RunRanking before = make_ranking("q", docs);
    std::swap(docs[i], docs[i + 1]);
    RunRanking after = make_ranking("q", docs);
    for (std::size_t cutoff = i + 2; cutoff <= pool; ++cutoff) {
      CHECK(ndcg_at(after, qrels, cutoff) >= ndcg_at(before, qrels, cutoff) - 1e-12);
    }
  }
}

TEST_CASE("permuting non-relevant docs below the last relevant never decreases mrr") {
  QrelSet qrels;
  qrels.set("q", "rel", 3);
  RunRanking a = make_ranking("q", {"x", "rel", "n1", "n2", "n3"});
  RunRanking b = make_ranking("q", {"x", "rel", "n3", "n1", "n2"});
  CHECK(mrr(b, qrels, 2) == mrr(a, qrels, 2));
}

TEST_CASE("evaluate_run aggregate equals the per-query mean") {
  QrelSet qrels;
  qrels.set("q1", "a", 3);
  qrels.set("q2", "b", 1);
  qrels.set("q3", "c", 2);
  std::vector<RunRanking> runs = {make_ranking("q1", {"a", "z"}),
                                  make_ranking("q2", {"z", "b"}),
                                  make_ranking("q3", {"c"})};
  MetricsRecord record = evaluate_run(runs, qrels, 2);
  REQUIRE(record.per_query.size() == 3);
  double mean = 0.0;
  for (const auto& [_, m] : record.per_query) mean += m.ndcg_at_10;
  mean /= 3.0;
  CHECK(std::fabs(record.aggregate.ndcg_at_10 - mean) < 1e-12);
  for (const auto& [_, m] : record.per_query) {
    for (double v : {m.ndcg_at_1, m.ndcg_at_10, m.map, m.mrr}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("paired t-test worked examples") {
  // identical vectors: p = 1, not significant
  std::vector<double> a = {0.5, 0.25, 0.75};
  auto same = paired_t_test(a, a, 1);
  CHECK(same.p_value == doctest::Approx(1.0));
  CHECK_FALSE(same.significant);

  // constant nonzero differences: p = 0 by convention, significant
  std::vector<double> ones = {1.0, 1.0, 1.0, 1.0};
  std::vector<double> zeros = {0.0, 0.0, 0.0, 0.0};
  auto constant = paired_t_test(ones, zeros, 1);
  CHECK(constant.p_value == 0.0);
  CHECK(constant.significant);

  // differences [1, 2, 3]: t = 2*sqrt(3), df = 2, two-tailed p ~ 0.0742
  std::vector<double> diffs = {1.0, 2.0, 3.0};
  std::vector<double> zero3 = {0.0, 0.0, 0.0};
  auto result = paired_t_test(diffs, zero3, 1);
  CHECK(result.t_statistic == doctest::Approx(3.464101615137754).epsilon(1e-9));
  CHECK(result.p_value == doctest::Approx(0.0741799002274486).epsilon(1e-3));
  CHECK_FALSE(result.significant);
}

TEST_CASE("bonferroni correction tightens the threshold") {
  // p ~ 0.0742 is not significant even uncorrected; use a stronger example
  std::vector<double> a = {1.0, 1.1, 0.9, 1.05, 0.95};
  std::vector<double> b = {0.0, 0.0, 0.0, 0.0, 0.0};
  auto one = paired_t_test(a, b, 1);
  CHECK(one.significant);  // p well under 0.05
  auto many = paired_t_test(a, b, 1000000);
  CHECK_FALSE(many.significant);
}

TEST_CASE("per_query_diff counts and boundary rule") {
  auto make_records = [](const std::vector<double>& values) {
    MetricsRecord rec;
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      QueryMetrics m;
      m.ndcg_at_1 = m.ndcg_at_10 = m.map = m.mrr = values[i];
      rec.per_query["q" + std::to_string(i)] = m;
      sum += values[i];
    }
    rec.aggregate.ndcg_at_10 = sum / values.size();
    return rec;
  };

  MetricsRecord base = make_records(std::vector<double>(10, 0.5));
  auto identical = per_query_diff(base, base, 0.01);
  CHECK(identical.ndcg_at_10.unchanged == 10);
  CHECK(identical.ndcg_at_10.unchanged_fraction == doctest::Approx(1.0));

  std::vector<double> one_up(10, 0.5);
  one_up[3] = 1.0;
  auto improved = per_query_diff(make_records(one_up), base, 0.01);
  CHECK(improved.ndcg_at_10.improved == 1);
  CHECK(improved.ndcg_at_10.improved_fraction == doctest::Approx(0.1));

  // diffs of exactly +-0.01 are unchanged (strict inequality); a zero base
  // keeps the differences exactly representable
  MetricsRecord zero_base = make_records(std::vector<double>(10, 0.0));
  std::vector<double> boundary(10, 0.0);
  boundary[0] = 0.01;
  boundary[1] = -0.01;
  auto edge = per_query_diff(make_records(boundary), zero_base, 0.01);
  CHECK(edge.ndcg_at_10.unchanged == 10);

  MetricsRecord mismatched = make_records({0.5});
  CHECK_THROWS_AS(per_query_diff(base, mismatched, 0.01), std::invalid_argument);
}

TEST_SUITE_END();
