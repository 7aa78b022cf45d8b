#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "gwsrank/index.hpp"
#include "gwsrank/rng.hpp"
#include "test_util.hpp"

using namespace gwsrank;

namespace {

// Hand-computed on {d1: "a b", d2: "b b"}, query "b", k1 = 0.9, b = 0.4:
// idf(b) = ln(1 + 0.5/2.5) = ln(1.2); tf-part d1 = 1*1.9/1.9 = 1,
// tf-part d2 = 2*1.9/2.9.
constexpr double kIdfB = 0.1823215567939546;
constexpr double kScoreD1 = 0.1823215567939546;
constexpr double kScoreD2 = 0.23890410890242328;

Corpus two_doc_corpus() { return testutil::make_corpus({{"d1", "a b"}, {"d2", "b b"}}); }

// Exhaustive reference retrieval: score every document via bm25_score.
std::vector<ScoredDoc> brute_force_topk(const InvertedIndex& index, const Bm25Params& params,
                                        const Query& query, std::size_t k,
                                        const std::vector<std::string>& all_docs) {
  std::vector<ScoredDoc> scored;
  for (const auto& doc_id : all_docs) {
    double s = bm25_score(index, params, query, doc_id);
    if (s > 0.0) scored.push_back({doc_id, s});
  }
  std::sort(scored.begin(), scored.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
  if (scored.size() > k) scored.resize(k);
  return scored;
}

Corpus random_corpus(Rng& rng, std::size_t max_docs, std::size_t vocab) {
  std::size_t n = 1 + rng.next_index(max_docs);
  std::vector<std::pair<std::string, std::string>> docs;
  for (std::size_t d = 0; d < n; ++d) {
    std::string text;
    std::size_t len = 1 + rng.next_index(12);
    for (std::size_t t = 0; t < len; ++t) {
      text += "w" + std::to_string(rng.next_index(vocab)) + " ";
    }
    docs.emplace_back("doc" + std::to_string(d), text);
  }
  return testutil::make_corpus(docs);
}

}  // namespace

TEST_SUITE_BEGIN("index");

TEST_CASE("build_index statistics") {
  Corpus corpus = testutil::make_corpus({{"d1", "a b"}, {"d2", "b"}});
  InvertedIndex index = InvertedIndex::build(corpus);
  CHECK(index.document_frequency("a") == 1);
  CHECK(index.document_frequency("b") == 2);
  CHECK(index.avg_doc_length() == doctest::Approx(1.5));
  CHECK(index.doc_count() == 2);

  Corpus single = testutil::make_corpus({{"d1", "x x x"}});
  InvertedIndex single_index = InvertedIndex::build(single);
  CHECK(single_index.term_frequency("x", "d1") == 3);
  CHECK(single_index.document_frequency("x") == 1);

  CHECK_THROWS_AS(InvertedIndex::build(Corpus{}), std::runtime_error);
}

TEST_CASE("bm25_score matches the hand-computed two-doc corpus") {
  InvertedIndex index = InvertedIndex::build(two_doc_corpus());
  Bm25Params params;  // k1=0.9, b=0.4
  Query q = testutil::make_query("q", "b");
  CHECK(bm25_score(index, params, q, "d1") == doctest::Approx(kScoreD1).epsilon(1e-6));
  CHECK(bm25_score(index, params, q, "d2") == doctest::Approx(kScoreD2).epsilon(1e-6));
  CHECK(index.idf("b") == doctest::Approx(kIdfB).epsilon(1e-9));
}

TEST_CASE("absent terms contribute zero; unknown doc errors") {
  InvertedIndex index = InvertedIndex::build(two_doc_corpus());
  Bm25Params params;
  Query qa = testutil::make_query("q", "a");
  // d2 does not contain "a": the query scores 0 on it
  CHECK(bm25_score(index, params, qa, "d2") == 0.0);
  // adding an absent term to the query leaves the score unchanged
  Query qmix = testutil::make_query("q", "a zzz");
  CHECK(bm25_score(index, params, qmix, "d1") ==
        doctest::Approx(bm25_score(index, params, qa, "d1")));
  CHECK_THROWS_AS(bm25_score(index, params, qa, "nope"), std::runtime_error);
}

TEST_CASE("identical token multisets score identically") {
  Corpus corpus = testutil::make_corpus(
      {{"d1", "x y x z"}, {"d2", "z x y x"}, {"d3", "x y"}});
  InvertedIndex index = InvertedIndex::build(corpus);
  Bm25Params params;
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::string text;
    for (int t = 0; t < 3; ++t) {
      const char* vocab[] = {"x", "y", "z", "w"};
      text += vocab[rng.next_index(4)];
      text += " ";
    }
    Query q = testutil::make_query("q", text);
    CHECK(bm25_score(index, params, q, "d1") ==
          doctest::Approx(bm25_score(index, params, q, "d2")).epsilon(1e-12));
  }
}

TEST_CASE("repeated query terms count with multiplicity") {
  InvertedIndex index = InvertedIndex::build(two_doc_corpus());
  Bm25Params params;
  Query qb = testutil::make_query("q", "b");
  Query qbb = testutil::make_query("q", "b b");
  CHECK(bm25_score(index, params, qbb, "d1") ==
        doctest::Approx(2.0 * bm25_score(index, params, qb, "d1")));
}

TEST_CASE("retrieve_topk ordering and boundaries") {
  InvertedIndex index = InvertedIndex::build(two_doc_corpus());
  Bm25Params params;
  Query q = testutil::make_query("q", "b");

  RankedList top = retrieve_topk(index, params, q, 10);
  REQUIRE(top.depth() == 2);  // k larger than matches
  CHECK(top.entries[0].doc_id == "d2");  // hand-computed order
  CHECK(top.entries[1].doc_id == "d1");
  CHECK(top.entries[0].score == doctest::Approx(kScoreD2));

  // no matching document -> empty list
  CHECK(retrieve_topk(index, params, testutil::make_query("q", "zzz"), 5).depth() == 0);

  // equal scores break ties by ascending doc_id
  Corpus tie_corpus = testutil::make_corpus({{"dB", "t"}, {"dA", "t"}});
  InvertedIndex tie_index = InvertedIndex::build(tie_corpus);
  RankedList tied = retrieve_topk(tie_index, params, testutil::make_query("q", "t"), 2);
  REQUIRE(tied.depth() == 2);
  CHECK(tied.entries[0].doc_id == "dA");
  CHECK(tied.entries[1].doc_id == "dB");

  CHECK_THROWS_AS(retrieve_topk(index, params, q, 0), std::invalid_argument);
}

TEST_CASE("retrieve_topk equals exhaustive scoring on random corpora") {
  Rng rng(202);
  Bm25Params params;
  for (int trial = 0; trial < 100; ++trial) {
    Corpus corpus = random_corpus(rng, 50, 9);
    InvertedIndex index = InvertedIndex::build(corpus);
    std::vector<std::string> all_docs;
    for (const auto& d : corpus.documents()) all_docs.push_back(d.doc_id);

    std::string text;
    std::size_t qlen = 1 + rng.next_index(3);
    for (std::size_t t = 0; t < qlen; ++t) text += "w" + std::to_string(rng.next_index(9)) + " ";
    Query q = testutil::make_query("q", text);
    std::size_t k = 1 + rng.next_index(8);

    RankedList fast = retrieve_topk(index, params, q, k);
    auto slow = brute_force_topk(index, params, q, k, all_docs);
    REQUIRE(fast.depth() == slow.size());
    for (std::size_t i = 0; i < slow.size(); ++i) {
      CHECK(fast.entries[i].doc_id == slow[i].doc_id);
      CHECK(fast.entries[i].score == doctest::Approx(slow[i].score).epsilon(1e-12));
    }
    // adjacent entries are non-increasing
    for (std::size_t i = 1; i < fast.depth(); ++i) {
      CHECK(fast.entries[i - 1].score >= fast.entries[i].score);
    }
  }
}

TEST_CASE("adding an avgdl-length doc without query terms preserves order") {
  // The added document leaves avgdl unchanged and shares no term with the
  // query, so only the (per-term constant) idf factor moves.
  Rng rng(303);
  Bm25Params params;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 2 + rng.next_index(8);
    std::size_t doc_len = 2 + rng.next_index(5);  // equal lengths => integer avgdl
    std::vector<std::pair<std::string, std::string>> docs;
    for (std::size_t d = 0; d < n; ++d) {
      std::string text;
      for (std::size_t t = 0; t < doc_len; ++t) {
        text += "w" + std::to_string(rng.next_index(5)) + " ";
      }
      docs.emplace_back("doc" + std::to_string(d), text);
    }
    Query q = testutil::make_query("q", "w" + std::to_string(rng.next_index(5)));

    InvertedIndex before = InvertedIndex::build(testutil::make_corpus(docs));
    RankedList list_before = retrieve_topk(before, params, q, n);

    std::string filler;
    for (std::size_t t = 0; t < doc_len; ++t) filler += "zfill ";
    docs.emplace_back("zz_new", filler);
    InvertedIndex after = InvertedIndex::build(testutil::make_corpus(docs));
    RankedList list_after = retrieve_topk(after, params, q, n + 1);

    REQUIRE(list_before.depth() == list_after.depth());
    for (std::size_t i = 0; i < list_before.depth(); ++i) {
      CHECK(list_before.entries[i].doc_id == list_after.entries[i].doc_id);
    }
  }
}

TEST_CASE("index serialization round-trip") {
  testutil::TempDir dir("index_io");
  Corpus corpus = testutil::make_corpus({{"d1", "a b"}, {"d2", "b b"}, {"d3", "c"}});
  InvertedIndex index = InvertedIndex::build(corpus);
  index.save(dir.file("idx.txt"));
  InvertedIndex loaded = InvertedIndex::load(dir.file("idx.txt"));

  CHECK(loaded.doc_count() == index.doc_count());
  CHECK(loaded.avg_doc_length() == index.avg_doc_length());
  CHECK(loaded.document_frequency("b") == 2);
  Bm25Params params;
  Query q = testutil::make_query("q", "b c");
  for (const auto& doc : corpus.documents()) {
    CHECK(bm25_score(loaded, params, q, doc.doc_id) ==
          doctest::Approx(bm25_score(index, params, q, doc.doc_id)).epsilon(1e-15));
  }

  testutil::write_file(dir.file("bogus.txt"), "not an index\n");
  CHECK_THROWS_AS(InvertedIndex::load(dir.file("bogus.txt")), std::runtime_error);
}

TEST_SUITE_END();
