#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gwsrank/gws.hpp"

namespace gwsrank {

// Whole-experiment configuration; round-trips losslessly through its
// key/section text format. The defaults below are desk-scale; the values used
// by large transformer setups (learning_rate 5e-5, max_steps 10000) remain a
// config edit away.
struct ExperimentConfig {
  struct Paths {
    std::string corpus;
    std::string corpus_format = "tsv";  // tsv | jsonl
    std::string queries;
    std::string qrels;
    std::string validation_queries;  // empty: seeded split of training queries
    std::string test_queries;        // optional held-out evaluation split
    std::string out_dir = "gws_run";

    bool operator==(const Paths&) const = default;
  };

  Paths paths;
  Bm25Params bm25;
  GwsConfig gws;
  OptimizerConfig optimizer;
  LossConfig loss;
  QppConfig qpp;
  int relevance_threshold = 1;
  double validation_fraction = 0.1;
  std::uint64_t seed = 0;
  int threads = 1;

  bool operator==(const ExperimentConfig&) const = default;
};

inline bool operator==(const Bm25Params& a, const Bm25Params& b) {
  return a.k1 == b.k1 && a.b == b.b;
}
inline bool operator==(const GwsConfig& a, const GwsConfig& b) {
  return a.pool_depth == b.pool_depth && a.pairs_per_query == b.pairs_per_query &&
         a.algorithm == b.algorithm && a.model_count == b.model_count &&
         a.architectures == b.architectures && a.max_iterations == b.max_iterations &&
         a.patience == b.patience && a.inner_self_iterations == b.inner_self_iterations &&
         a.base_seed == b.base_seed && a.qpp_enabled == b.qpp_enabled &&
         a.random_teacher_matching == b.random_teacher_matching;
}
inline bool operator==(const OptimizerConfig& a, const OptimizerConfig& b) {
  return a.learning_rate == b.learning_rate && a.beta1 == b.beta1 && a.beta2 == b.beta2 &&
         a.weight_decay == b.weight_decay && a.batch_size == b.batch_size &&
         a.max_steps == b.max_steps && a.validation_every == b.validation_every &&
         a.seed == b.seed;
}
inline bool operator==(const LossConfig& a, const LossConfig& b) {
  return a.epsilon == b.epsilon;
}
inline bool operator==(const QppConfig& a, const QppConfig& b) {
  return a.top_k == b.top_k && a.normalize_by_corpus_score == b.normalize_by_corpus_score;
}

void save_config(const ExperimentConfig& config, const std::string& path);
ExperimentConfig load_config(const std::string& path);

// Seeded split of `queries` into (train, validation) by fraction (at least
// one query on each side when possible).
std::pair<std::vector<Query>, std::vector<Query>> split_validation(
    const std::vector<Query>& queries, double fraction, std::uint64_t seed);

}  // namespace gwsrank
