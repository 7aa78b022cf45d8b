#include "gwsrank/qpp.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace gwsrank {

double QueryWeights::at(const std::string& query_id) const {
  auto it = weights.find(query_id);
  if (it == weights.end()) throw std::invalid_argument("no weight for query " + query_id);
  return it->second;
}

QueryWeights QueryWeights::uniform(const std::vector<Query>& queries) {
  QueryWeights w;
  for (const auto& q : queries) w.weights[q.query_id] = 1.0;
  return w;
}

double nqc(const RankedList& ranked_list, std::optional<double> corpus_score,
           const QppConfig& config) {
  if (ranked_list.depth() < 2) throw std::invalid_argument("nqc: ranked list depth < 2");
  if (config.top_k < 2) throw std::invalid_argument("nqc: top_k must be >= 2");

  std::size_t n = std::min(config.top_k, ranked_list.depth());
  double mu = 0.0;
  for (std::size_t i = 0; i < n; ++i) mu += ranked_list.entries[i].score / n;
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = ranked_list.entries[i].score - mu;
    var += d * d / n;
  }
  double sd = std::sqrt(var);
  if (!config.normalize_by_corpus_score) return sd;
  if (!corpus_score || *corpus_score <= 0.0) {
    throw std::invalid_argument("nqc: normalization requires a positive corpus score");
  }
  return sd / *corpus_score;
}

double corpus_score(const InvertedIndex& index, const Bm25Params& params, const Query& query) {
  // Collapse query tokens to (term, count), preserving multiplicity.
  std::vector<std::pair<std::string, double>> counts;
  for (const auto& token : query.tokens) {
    bool found = false;
    for (auto& [term, count] : counts) {
      if (term == token) {
        count += 1.0;
        found = true;
        break;
      }
    }
    if (!found) counts.emplace_back(token, 1.0);
  }

  double pseudo_len = static_cast<double>(index.total_token_count());
  double score = 0.0;
  for (const auto& [term, count] : counts) {
    double tf = static_cast<double>(index.collection_frequency(term));
    if (tf == 0.0) continue;
    score += count * index.idf(term) * tf * (params.k1 + 1.0) /
             (tf + params.k1 * (1.0 - params.b + params.b * pseudo_len / index.avg_doc_length()));
  }
  return score;
}

QueryWeights compute_query_weights(const std::vector<Query>& queries,
                                   const std::vector<RankedList>& pools,
                                   const InvertedIndex& index, const Bm25Params& params,
                                   const QppConfig& config) {
  if (queries.empty()) throw std::invalid_argument("compute_query_weights: empty query set");
  if (queries.size() != pools.size()) {
    throw std::invalid_argument("compute_query_weights: queries and pools differ in length");
  }

  std::vector<double> raw(queries.size(), -1.0);  // -1 marks a degenerate pool
  for (std::size_t i = 0; i < queries.size(); ++i) {
    if (pools[i].depth() < 2) continue;
    std::optional<double> cs;
    if (config.normalize_by_corpus_score) cs = corpus_score(index, params, queries[i]);
    raw[i] = nqc(pools[i], cs, config);
  }

  double positive_sum = 0.0;
  std::size_t positive_count = 0;
  for (double w : raw) {
    if (w > 0.0) {
      positive_sum += w;
      ++positive_count;
    }
  }
  double fallback = positive_count > 0 ? positive_sum / positive_count : 1.0;

  QueryWeights result;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    result.weights[queries[i].query_id] = raw[i] > 0.0 ? raw[i] : fallback;
  }
  return result;
}

void write_weights_tsv(const QueryWeights& weights, const std::vector<Query>& queries,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write weights file: " + path);
  char buf[64];
  for (const auto& q : queries) {
    std::snprintf(buf, sizeof(buf), "%.17g", weights.at(q.query_id));
    out << q.query_id << '\t' << buf << '\n';
  }
}

}  // namespace gwsrank
