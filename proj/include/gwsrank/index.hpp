#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "gwsrank/corpus.hpp"

namespace gwsrank {

struct Bm25Params {
  double k1 = 0.9;
  double b = 0.4;
};

struct ScoredDoc {
  std::string doc_id;
  double score;
};

// Per-query ordered (doc, score) pool; the fixed re-ranking scope.
struct RankedList {
  std::string query_id;
  std::vector<ScoredDoc> entries;  // descending score, ties by ascending doc_id

  std::size_t depth() const { return entries.size(); }
};

struct Posting {
  std::uint32_t doc;  // internal doc number
  std::uint32_t tf;
};

// Inverted index over a Corpus; serves BM25 scoring and top-k retrieval.
// Immutable after build; scoring functions are pure.
class InvertedIndex {
 public:
  static InvertedIndex build(const Corpus& corpus);

  std::size_t doc_count() const { return doc_ids_.size(); }
  std::uint64_t total_token_count() const { return total_tokens_; }
  double avg_doc_length() const { return avg_doc_length_; }
  std::size_t document_frequency(const std::string& term) const;
  std::uint64_t collection_frequency(const std::string& term) const;
  std::uint32_t doc_length(const std::string& doc_id) const;
  std::uint32_t term_frequency(const std::string& term, const std::string& doc_id) const;
  bool has_doc(const std::string& doc_id) const { return id_to_doc_.count(doc_id) > 0; }
  const std::vector<std::string>& doc_ids() const { return doc_ids_; }

  // Lucene-style idf: ln(1 + (N - df + 0.5) / (df + 0.5)); 0 for unseen terms.
  double idf(const std::string& term) const;

  void save(const std::string& path) const;
  static InvertedIndex load(const std::string& path);

 private:
  friend double bm25_score(const InvertedIndex&, const Bm25Params&, const Query&,
                           const std::string&);
  friend RankedList retrieve_topk(const InvertedIndex&, const Bm25Params&, const Query&,
                                  std::size_t);

  std::uint32_t doc_number(const std::string& doc_id) const;

  std::vector<std::string> doc_ids_;          // corpus order
  std::vector<std::uint32_t> doc_lengths_;    // by doc number
  std::unordered_map<std::string, std::uint32_t> id_to_doc_;
  std::unordered_map<std::string, std::vector<Posting>> postings_;  // sorted by doc_id
  double avg_doc_length_ = 0.0;
  std::uint64_t total_tokens_ = 0;
};

// Sum over query tokens (with multiplicity) of
// idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * |d| / avgdl)).
double bm25_score(const InvertedIndex& index, const Bm25Params& params, const Query& query,
                  const std::string& doc_id);

// The k highest-scoring documents with score > 0 (fewer if fewer match);
// ties broken by ascending doc_id.
RankedList retrieve_topk(const InvertedIndex& index, const Bm25Params& params,
                         const Query& query, std::size_t k);

}  // namespace gwsrank
