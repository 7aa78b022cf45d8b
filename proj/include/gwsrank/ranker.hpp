#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gwsrank/eval.hpp"
#include "gwsrank/features.hpp"
#include "gwsrank/qpp.hpp"

namespace gwsrank {

enum class Architecture { linear, mlp };

std::string architecture_name(Architecture arch);
Architecture architecture_from_name(const std::string& name);

inline constexpr std::size_t kMlpHidden = 16;

// Parameters of a trainable scoring model. linear: 7 weights + bias.
// mlp: 7 -> 16 (tanh) -> 1. Weights are a deterministic function of
// (architecture, seed); see init_params.
struct RankerParams {
  Architecture architecture = Architecture::linear;
  std::uint64_t seed = 0;
  std::vector<double> weights;  // flat; layout per architecture

  std::size_t parameter_count() const { return weights.size(); }
  bool operator==(const RankerParams&) const = default;
};

// Glorot-uniform initialization: uniform(-sqrt(6/(fan_in+fan_out)), +...),
// biases zero. Identical seeds give bitwise-identical parameters.
RankerParams init_params(Architecture architecture, std::uint64_t seed);

double score(const RankerParams& params, const FeatureVector& features);

// Gradient of score w.r.t. the flat parameter vector, scaled by `coeff` and
// accumulated into `grad`.
void accumulate_score_gradient(const RankerParams& params, const FeatureVector& features,
                               double coeff, std::vector<double>& grad);

void save_params(const RankerParams& params, const std::string& path);
RankerParams load_params(const std::string& path);
std::string params_to_string(const RankerParams& params);

// A pairwise training instance. preference is the sign of the teacher score
// difference M'(q, d1) - M'(q, d2).
struct TrainPair {
  std::string query_id;
  std::string doc_id_1;
  std::string doc_id_2;
  int preference = +1;  // +1 or -1
};

struct LossConfig {
  double epsilon = 1.0;  // hinge margin
};

struct OptimizerConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.99;
  double weight_decay = 0.01;
  std::size_t batch_size = 16;
  std::size_t max_steps = 2000;
  std::size_t validation_every = 1000;
  std::uint64_t seed = 0;
};

struct PairLossResult {
  double loss = 0.0;
  std::vector<double> contributions;  // normalized weight x hinge term, per pair
};

// Weighted pairwise hinge loss with in-batch weight normalization:
//   sum_i (w_{q_i} / sum_j w_{q_j}) * max(0, eps - pref_i * (s1_i - s2_i)).
PairLossResult pair_loss(const std::vector<TrainPair>& batch,
                         const std::vector<std::pair<double, double>>& student_scores,
                         const QueryWeights& weights, const LossConfig& config);

// Fixed validation context: labeled queries with frozen re-ranking pools.
struct ValidationContext {
  std::vector<Query> queries;
  QrelSet qrels;
  std::vector<RankedList> pools;
  const FeatureCache* cache = nullptr;
  int relevance_threshold = 1;
};

// Re-ranks the fixed pools by model score (ties by ascending doc_id).
std::vector<RunRanking> rerank_pools(const RankerParams& params,
                                     const std::vector<RankedList>& pools,
                                     const FeatureCache& cache);

double validation_ndcg10(const RankerParams& params, const ValidationContext& validation);
MetricsRecord validation_metrics(const RankerParams& params, const ValidationContext& validation);

// Trains a fresh model (init_params(architecture, opt.seed)) with moment-based
// gradient descent and decoupled weight decay over max_steps batches drawn by
// a seeded shuffler. With a validation context, returns the checkpoint with
// the highest validation NDCG@10 among evaluations every validation_every
// steps (and at the final step); otherwise returns the final parameters.
RankerParams train(const std::vector<TrainPair>& pairs, const QueryWeights& weights,
                   const FeatureCache& cache, Architecture architecture,
                   const OptimizerConfig& opt, const LossConfig& loss,
                   const ValidationContext* validation = nullptr);

}  // namespace gwsrank
