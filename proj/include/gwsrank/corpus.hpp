#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace gwsrank {

struct Document {
  std::string doc_id;
  std::string text;
  std::vector<std::string> tokens;

  std::size_t length() const { return tokens.size(); }
};

struct Query {
  std::string query_id;
  std::string text;
  std::vector<std::string> tokens;
};

// TREC-style relevance judgments. Unjudged pairs are grade 0.
class QrelSet {
 public:
  void set(const std::string& query_id, const std::string& doc_id, int grade);
  int grade(const std::string& query_id, const std::string& doc_id) const;
  bool has_query(const std::string& query_id) const;
  // All judged (doc_id, grade) entries for a query; empty if none.
  const std::unordered_map<std::string, int>& judged(const std::string& query_id) const;
  std::size_t size() const;

 private:
  std::unordered_map<std::string, std::unordered_map<std::string, int>> judgments_;
};

class Corpus {
 public:
  void add(Document doc);  // throws on duplicate doc_id
  const std::vector<Document>& documents() const { return docs_; }
  const Document& at(std::size_t i) const { return docs_[i]; }
  const Document* find(const std::string& doc_id) const;
  std::size_t doc_count() const { return docs_.size(); }
  std::size_t total_token_count() const { return total_tokens_; }

 private:
  std::vector<Document> docs_;
  std::unordered_map<std::string, std::size_t> id_to_index_;
  std::size_t total_tokens_ = 0;
};

enum class CorpusFormat { tsv, jsonl };

// Lowercases and splits on maximal runs of non-alphanumeric characters.
// No stemming or stopword removal; empty input yields an empty list.
std::vector<std::string> tokenize(const std::string& text);

Corpus ingest_documents(const std::string& path, CorpusFormat format);

// Queries: TSV "query_id\ttext". Queries that tokenize to nothing are dropped
// with a warning on stderr. Qrels (optional): TREC "qid 0 docid grade" with
// grades in [0, 3].
std::pair<std::vector<Query>, QrelSet> ingest_queries_and_qrels(
    const std::string& query_path, const std::optional<std::string>& qrels_path);

// Writes "doc_id\ttext" per line, sanitizing tabs/newlines in text to spaces
// so the file re-ingests to identical doc_ids and tokens.
void write_corpus_tsv(const Corpus& corpus, const std::string& path);

}  // namespace gwsrank
