#include "gwsrank/synthetic.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "gwsrank/rng.hpp"

namespace gwsrank {

namespace {

std::string padded(std::size_t value, std::size_t width) {
  std::string s = std::to_string(value);
  return std::string(width > s.size() ? width - s.size() : 0, '0') + s;
}

}  // namespace

SyntheticPaths gen_synthetic(const SyntheticSpec& spec, const std::string& out_dir) {
  if (spec.num_queries < 1 || spec.docs_per_query_pool < 2) {
    throw std::invalid_argument("gen_synthetic: need >= 1 query and >= 2 docs per pool");
  }
  if (spec.relevant_per_query < 1 || spec.relevant_per_query >= spec.docs_per_query_pool) {
    throw std::invalid_argument("gen_synthetic: relevant_per_query must be in [1, pool)");
  }
  if (spec.vocab_size <= spec.topic_terms_per_query) {
    throw std::invalid_argument("gen_synthetic: vocab_size must exceed topic_terms_per_query");
  }
  std::size_t topic_region = spec.num_queries * spec.topic_terms_per_query;
  if (spec.vocab_size < topic_region + 2) {
    throw std::invalid_argument(
        "gen_synthetic: vocab_size too small for disjoint per-query topic terms");
  }
  if (spec.noise_rate < 0.0 || spec.noise_rate > 1.0) {
    throw std::invalid_argument("gen_synthetic: noise_rate must be in [0, 1]");
  }

  std::size_t term_width = std::to_string(spec.vocab_size - 1).size();
  std::vector<std::string> vocab;
  vocab.reserve(spec.vocab_size);
  for (std::size_t i = 0; i < spec.vocab_size; ++i) vocab.push_back("t" + padded(i, term_width));
  std::size_t background_count = spec.vocab_size - topic_region;

  std::filesystem::create_directories(out_dir);
  SyntheticPaths paths;
  paths.corpus = out_dir + "/corpus.tsv";
  paths.queries = out_dir + "/queries.tsv";
  paths.qrels = out_dir + "/qrels.txt";

  std::ofstream corpus(paths.corpus), queries(paths.queries), qrels(paths.qrels);
  if (!corpus || !queries || !qrels) {
    throw std::runtime_error("gen_synthetic: cannot write under " + out_dir);
  }

  Rng rng(spec.seed);
  std::size_t q_width = std::to_string(spec.num_queries - 1).size();
  std::size_t d_width = std::to_string(spec.docs_per_query_pool - 1).size();

  for (std::size_t q = 0; q < spec.num_queries; ++q) {
    std::string query_id = "q" + padded(q, q_width);
    std::vector<std::string> topics;
    for (std::size_t t = 0; t < spec.topic_terms_per_query; ++t) {
      topics.push_back(vocab[q * spec.topic_terms_per_query + t]);
    }

    queries << query_id << '\t';
    for (std::size_t t = 0; t < topics.size(); ++t) {
      if (t > 0) queries << ' ';
      queries << topics[t];
    }
    queries << '\n';

    for (std::size_t d = 0; d < spec.docs_per_query_pool; ++d) {
      std::string doc_id = "d" + padded(q, q_width) + "_" + padded(d, d_width);
      bool relevant = d < spec.relevant_per_query;

      std::vector<std::string> tokens;
      for (const auto& topic : topics) {
        bool present = relevant || rng.next_double() < spec.noise_rate;
        if (!present) continue;
        std::size_t repeats = 1 + rng.next_index(2);
        for (std::size_t r = 0; r < repeats; ++r) tokens.push_back(topic);
      }
      std::size_t filler = 8 + rng.next_index(8);
      for (std::size_t f = 0; f < filler; ++f) {
        tokens.push_back(vocab[topic_region + rng.next_index(background_count)]);
      }

      corpus << doc_id << '\t';
      for (std::size_t t = 0; t < tokens.size(); ++t) {
        if (t > 0) corpus << ' ';
        corpus << tokens[t];
      }
      corpus << '\n';
      if (relevant) qrels << query_id << " 0 " << doc_id << " 1\n";
    }
  }
  return paths;
}

}  // namespace gwsrank
