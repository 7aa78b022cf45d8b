#pragma once

#include <cstdint>
#include <string>

namespace gwsrank {

// Deterministic synthetic retrieval collection. Each query owns a disjoint
// block of topic terms; its planted relevant documents contain every topic
// term, other documents in its pool carry each topic term with probability
// noise_rate. Background terms come from a vocabulary region no query uses.
struct SyntheticSpec {
  std::size_t num_queries = 50;
  std::size_t docs_per_query_pool = 20;
  std::size_t vocab_size = 500;
  std::size_t topic_terms_per_query = 3;
  double noise_rate = 0.35;
  std::size_t relevant_per_query = 4;
  std::uint64_t seed = 0;
};

struct SyntheticPaths {
  std::string corpus;
  std::string queries;
  std::string qrels;
};

// Writes corpus TSV, query TSV, and TREC qrels (grade 1 for planted relevant
// documents) under out_dir. Byte-identical output for identical specs.
SyntheticPaths gen_synthetic(const SyntheticSpec& spec, const std::string& out_dir);

}  // namespace gwsrank
