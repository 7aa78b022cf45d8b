#include "gwsrank/index.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace gwsrank {

namespace {

constexpr const char* kIndexMagic = "GWSIDX 1";

// Query tokens collapsed to (term, multiplicity) in first-occurrence order.
std::vector<std::pair<std::string, std::uint32_t>> term_counts(const Query& query) {
  std::vector<std::pair<std::string, std::uint32_t>> counts;
  for (const auto& token : query.tokens) {
    auto it = std::find_if(counts.begin(), counts.end(),
                           [&](const auto& p) { return p.first == token; });
    if (it == counts.end()) {
      counts.emplace_back(token, 1);
    } else {
      ++it->second;
    }
  }
  return counts;
}

double term_score(double idf, double tf, double doc_len, double avgdl, const Bm25Params& p) {
  return idf * tf * (p.k1 + 1.0) / (tf + p.k1 * (1.0 - p.b + p.b * doc_len / avgdl));
}

}  // namespace

InvertedIndex InvertedIndex::build(const Corpus& corpus) {
  if (corpus.doc_count() == 0) throw std::runtime_error("cannot build index over empty corpus");

  InvertedIndex index;
  index.doc_ids_.reserve(corpus.doc_count());
  index.doc_lengths_.reserve(corpus.doc_count());
  for (const auto& doc : corpus.documents()) {
    auto number = static_cast<std::uint32_t>(index.doc_ids_.size());
    index.id_to_doc_.emplace(doc.doc_id, number);
    index.doc_ids_.push_back(doc.doc_id);
    index.doc_lengths_.push_back(static_cast<std::uint32_t>(doc.length()));
    index.total_tokens_ += doc.length();

    std::map<std::string, std::uint32_t> tf;
    for (const auto& token : doc.tokens) ++tf[token];
    for (const auto& [term, count] : tf) {
      index.postings_[term].push_back({number, count});
    }
  }
  index.avg_doc_length_ =
      static_cast<double>(index.total_tokens_) / static_cast<double>(corpus.doc_count());

  for (auto& [term, list] : index.postings_) {
    std::sort(list.begin(), list.end(), [&](const Posting& a, const Posting& b) {
      return index.doc_ids_[a.doc] < index.doc_ids_[b.doc];
    });
  }
  return index;
}

std::uint32_t InvertedIndex::doc_number(const std::string& doc_id) const {
  auto it = id_to_doc_.find(doc_id);
  if (it == id_to_doc_.end()) throw std::runtime_error("unknown doc_id: " + doc_id);
  return it->second;
}

std::size_t InvertedIndex::document_frequency(const std::string& term) const {
  auto it = postings_.find(term);
  return it == postings_.end() ? 0 : it->second.size();
}

std::uint64_t InvertedIndex::collection_frequency(const std::string& term) const {
  auto it = postings_.find(term);
  if (it == postings_.end()) return 0;
  std::uint64_t total = 0;
  for (const auto& posting : it->second) total += posting.tf;
  return total;
}

std::uint32_t InvertedIndex::doc_length(const std::string& doc_id) const {
  return doc_lengths_[doc_number(doc_id)];
}

std::uint32_t InvertedIndex::term_frequency(const std::string& term,
                                            const std::string& doc_id) const {
  auto it = postings_.find(term);
  if (it == postings_.end()) return 0;
  std::uint32_t number = doc_number(doc_id);
  for (const auto& posting : it->second) {
    if (posting.doc == number) return posting.tf;
  }
  return 0;
}

double InvertedIndex::idf(const std::string& term) const {
  std::size_t df = document_frequency(term);
  if (df == 0) return 0.0;
  double n = static_cast<double>(doc_count());
  return std::log(1.0 + (n - static_cast<double>(df) + 0.5) / (static_cast<double>(df) + 0.5));
}

double bm25_score(const InvertedIndex& index, const Bm25Params& params, const Query& query,
                  const std::string& doc_id) {
  double doc_len = index.doc_lengths_[index.doc_number(doc_id)];
  double score = 0.0;
  for (const auto& [term, count] : term_counts(query)) {
    std::uint32_t tf = index.term_frequency(term, doc_id);
    if (tf == 0) continue;
    score += count * term_score(index.idf(term), tf, doc_len, index.avg_doc_length_, params);
  }
  return score;
}

RankedList retrieve_topk(const InvertedIndex& index, const Bm25Params& params,
                         const Query& query, std::size_t k) {
  if (k < 1) throw std::invalid_argument("retrieve_topk: k must be >= 1");

  std::unordered_map<std::uint32_t, double> accumulators;
  for (const auto& [term, count] : term_counts(query)) {
    auto it = index.postings_.find(term);
    if (it == index.postings_.end()) continue;
    double idf = index.idf(term);
    for (const Posting& posting : it->second) {
      accumulators[posting.doc] += count * term_score(idf, posting.tf,
                                                      index.doc_lengths_[posting.doc],
                                                      index.avg_doc_length_, params);
    }
  }

  RankedList result;
  result.query_id = query.query_id;
  result.entries.reserve(accumulators.size());
  for (const auto& [doc, score] : accumulators) {
    if (score > 0.0) result.entries.push_back({index.doc_ids_[doc], score});
  }
  std::sort(result.entries.begin(), result.entries.end(),
            [](const ScoredDoc& a, const ScoredDoc& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.doc_id < b.doc_id;
            });
  if (result.entries.size() > k) result.entries.resize(k);
  return result;
}

void InvertedIndex::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write index file: " + path);
  out << kIndexMagic << '\n';
  out << doc_ids_.size() << '\n';
  for (std::size_t i = 0; i < doc_ids_.size(); ++i) {
    out << doc_ids_[i] << '\t' << doc_lengths_[i] << '\n';
  }
  std::vector<std::string> terms;
  terms.reserve(postings_.size());
  for (const auto& [term, _] : postings_) terms.push_back(term);
  std::sort(terms.begin(), terms.end());
  out << terms.size() << '\n';
  for (const auto& term : terms) {
    const auto& list = postings_.at(term);
    out << term << '\t' << list.size();
    for (const Posting& posting : list) out << '\t' << posting.doc << ':' << posting.tf;
    out << '\n';
  }
}

InvertedIndex InvertedIndex::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open index file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kIndexMagic) {
    throw std::runtime_error("not a gwsrank index file: " + path);
  }

  InvertedIndex index;
  std::size_t doc_count = 0;
  in >> doc_count;
  in.ignore();
  for (std::size_t i = 0; i < doc_count; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("truncated index file: " + path);
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw std::runtime_error("corrupt index doc table: " + path);
    std::string doc_id = line.substr(0, tab);
    auto length = static_cast<std::uint32_t>(std::stoul(line.substr(tab + 1)));
    index.id_to_doc_.emplace(doc_id, static_cast<std::uint32_t>(index.doc_ids_.size()));
    index.doc_ids_.push_back(doc_id);
    index.doc_lengths_.push_back(length);
    index.total_tokens_ += length;
  }
  if (doc_count == 0) throw std::runtime_error("index file holds no documents: " + path);
  index.avg_doc_length_ =
      static_cast<double>(index.total_tokens_) / static_cast<double>(doc_count);

  std::size_t term_count = 0;
  in >> term_count;
  in.ignore();
  for (std::size_t i = 0; i < term_count; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("truncated index file: " + path);
    std::size_t pos = line.find('\t');
    if (pos == std::string::npos) throw std::runtime_error("corrupt postings line: " + path);
    std::string term = line.substr(0, pos);
    std::size_t next = line.find('\t', pos + 1);
    std::size_t entries = std::stoul(line.substr(pos + 1, next - pos - 1));
    std::vector<Posting> list;
    list.reserve(entries);
    pos = next;
    while (pos != std::string::npos) {
      next = line.find('\t', pos + 1);
      std::string cell = line.substr(pos + 1, next == std::string::npos ? next : next - pos - 1);
      auto colon = cell.find(':');
      if (colon == std::string::npos) throw std::runtime_error("corrupt posting cell: " + path);
      list.push_back({static_cast<std::uint32_t>(std::stoul(cell.substr(0, colon))),
                      static_cast<std::uint32_t>(std::stoul(cell.substr(colon + 1)))});
      pos = next;
    }
    if (list.size() != entries) throw std::runtime_error("corrupt postings count: " + path);
    index.postings_.emplace(std::move(term), std::move(list));
  }
  return index;
}

}  // namespace gwsrank
