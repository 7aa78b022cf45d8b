#include "doctest.h"

#include <sstream>

#include "gwsrank/corpus.hpp"
#include "gwsrank/rng.hpp"
#include "test_util.hpp"

using namespace gwsrank;

TEST_SUITE_BEGIN("corpus");

TEST_CASE("tokenize lowercases and splits on non-alphanumeric runs") {
  CHECK(tokenize("What is BM25?") == std::vector<std::string>{"what", "is", "bm25"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("e-mail  42") == std::vector<std::string>{"e", "mail", "42"});
  CHECK(tokenize("???").empty());
}

TEST_CASE("tokenize is idempotent on its joined output") {
  Rng rng(7);
  const std::string alphabet = "abZ0 9?.-_\t!x";
  for (int trial = 0; trial < 50; ++trial) {
    std::string text;
    std::size_t len = rng.next_index(30);
    for (std::size_t i = 0; i < len; ++i) text += alphabet[rng.next_index(alphabet.size())];
    auto tokens = tokenize(text);
    std::string joined;
    for (const auto& t : tokens) joined += t + " ";
    CHECK(tokenize(joined) == tokens);
  }
}

TEST_CASE("ingest_documents counts docs and tokens") {
  testutil::TempDir dir("corpus_tsv");
  testutil::write_file(dir.file("docs.tsv"), "d1\thello world\nd2\thello\n");
  Corpus corpus = ingest_documents(dir.file("docs.tsv"), CorpusFormat::tsv);
  CHECK(corpus.doc_count() == 2);
  CHECK(corpus.total_token_count() == 3);
  CHECK(corpus.at(0).doc_id == "d1");
  CHECK(corpus.at(1).tokens == std::vector<std::string>{"hello"});
}

TEST_CASE("ingest_documents rejects duplicate ids and malformed records") {
  testutil::TempDir dir("corpus_bad");
  testutil::write_file(dir.file("dup.tsv"), "d1\ta\nd1\tb\n");
  CHECK_THROWS_WITH_AS(ingest_documents(dir.file("dup.tsv"), CorpusFormat::tsv),
                       doctest::Contains("duplicate doc_id"), std::runtime_error);

  testutil::write_file(dir.file("broken.tsv"), "d1\ta\njust-one-field\n");
  CHECK_THROWS_WITH_AS(ingest_documents(dir.file("broken.tsv"), CorpusFormat::tsv),
                       doctest::Contains(":2"), std::runtime_error);

  testutil::write_file(dir.file("docs.jsonl"),
                       "{\"id\": \"d1\", \"text\": \"a b\"}\n{\"id\": \"d2\"}\n");
  CHECK_THROWS_WITH_AS(ingest_documents(dir.file("docs.jsonl"), CorpusFormat::jsonl),
                       doctest::Contains(":2"), std::runtime_error);
}

TEST_CASE("ingest_documents jsonl happy path preserves order") {
  testutil::TempDir dir("corpus_jsonl");
  testutil::write_file(dir.file("docs.jsonl"),
                       "{\"id\": \"a\", \"text\": \"X y\"}\n{\"id\": \"b\", \"text\": \"z\"}\n");
  Corpus corpus = ingest_documents(dir.file("docs.jsonl"), CorpusFormat::jsonl);
  CHECK(corpus.doc_count() == 2);
  CHECK(corpus.at(0).doc_id == "a");
  CHECK(corpus.at(0).tokens == std::vector<std::string>{"x", "y"});
}

TEST_CASE("queries and qrels ingestion") {
  testutil::TempDir dir("queries");
  testutil::write_file(dir.file("queries.tsv"), "q1\twhat is bm25\nq2\t???\nq3\tranking\n");
  testutil::write_file(dir.file("qrels.txt"), "q1 0 d7 3\nq9 0 d1 1\n");
  auto [queries, qrels] = ingest_queries_and_qrels(dir.file("queries.tsv"),
                                                   dir.file("qrels.txt"));
  // q2 tokenizes to nothing and is dropped
  REQUIRE(queries.size() == 2);
  CHECK(queries[0].query_id == "q1");
  CHECK(queries[1].query_id == "q3");
  CHECK(qrels.grade("q1", "d7") == 3);
  // unknown query kept
  CHECK(qrels.grade("q9", "d1") == 1);
  // unjudged pairs are grade 0
  CHECK(qrels.grade("q1", "nope") == 0);
  CHECK(qrels.grade("zzz", "d7") == 0);
}

TEST_CASE("qrels grade outside [0,3] is a load error") {
  testutil::TempDir dir("qrels_range");
  testutil::write_file(dir.file("queries.tsv"), "q1\ta\n");
  testutil::write_file(dir.file("qrels.txt"), "q1 0 d7 9\n");
  CHECK_THROWS_AS(ingest_queries_and_qrels(dir.file("queries.tsv"), dir.file("qrels.txt")),
                  std::runtime_error);

  testutil::write_file(dir.file("qrels2.txt"), "q1 0 d7 x\n");
  CHECK_THROWS_AS(ingest_queries_and_qrels(dir.file("queries.tsv"), dir.file("qrels2.txt")),
                  std::runtime_error);
}

TEST_CASE("corpus TSV round-trip preserves ids, tokens, counts") {
  testutil::TempDir dir("roundtrip");
  Corpus original = testutil::make_corpus({{"d1", "Alpha beta-GAMMA"},
                                           {"d2", "one\ttwo\nthree"},
                                           {"d3", "42"}});
  write_corpus_tsv(original, dir.file("out.tsv"));
  Corpus again = ingest_documents(dir.file("out.tsv"), CorpusFormat::tsv);
  REQUIRE(again.doc_count() == original.doc_count());
  CHECK(again.total_token_count() == original.total_token_count());
  for (std::size_t i = 0; i < original.doc_count(); ++i) {
    CHECK(again.at(i).doc_id == original.at(i).doc_id);
    CHECK(again.at(i).tokens == original.at(i).tokens);
  }
}

TEST_SUITE_END();
