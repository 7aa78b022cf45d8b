#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gwsrank/ranker.hpp"

namespace gwsrank {

enum class Algorithm { self, cross, jcs, multi };

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct GwsConfig {
  std::size_t pool_depth = 20;
  std::size_t pairs_per_query = 20;
  Algorithm algorithm = Algorithm::self;
  std::size_t model_count = 1;
  std::vector<Architecture> architectures;  // length model_count
  std::size_t max_iterations = 8;
  std::size_t patience = 2;
  std::size_t inner_self_iterations = 3;  // jcs; 0 degenerates to cross-labeling
  std::uint64_t base_seed = 0;
  bool qpp_enabled = true;
  bool random_teacher_matching = false;  // cross/jcs with m > 2: seeded derangement
};

// Validates and fills defaults (architectures for the chosen model count).
void finalize_gws_config(GwsConfig& config);

struct Triplet {
  std::string doc_id;
  double score;
};

struct QueryTriplets {
  std::string query_id;
  std::vector<Triplet> entries;
};

// The weak-supervision dataset T = {(q, d, score)}. The (query, doc) pools are
// fixed at iteration 0; only scores change across iterations.
struct TripletSet {
  std::vector<QueryTriplets> queries;
  std::string source_tag;
};

// Top-k BM25 pools become the training pools with BM25 scores. Queries with
// empty pools are dropped with a warning.
TripletSet initial_weak_labels(const InvertedIndex& index, const Bm25Params& params,
                               const std::vector<Query>& queries, std::size_t k,
                               int threads = 1);

// Same (query, doc) pairs, scores replaced by the model's; tag records the
// producing model.
TripletSet relabel(const RankerParams& params, const TripletSet& triplet_set,
                   const FeatureCache& cache, const std::string& source_tag);

// Per query: sort the pool by teacher score (ties by ascending doc_id), take
// the top half as positives and the rest as negatives, and draw
// pairs_per_query (positive, negative) pairs uniformly. Pairs whose teacher
// scores differ by less than 1e-9 are discarded and redrawn.
std::vector<TrainPair> sample_pairs(const TripletSet& triplet_set, std::size_t pairs_per_query,
                                    std::uint64_t seed);

// 1 - NDCG@10 of the params re-ranking the fixed validation pools.
double validation_error(const RankerParams& params, const ValidationContext& validation);

void write_triplets_tsv(const TripletSet& set, const std::string& path);
TripletSet read_triplets_tsv(const std::string& path);

// One curve point: a model's validation metrics at an iteration.
// iteration 0 / model -1 is the weak labeler.
struct CurveRow {
  int iteration = 0;
  int model = -1;
  QueryMetrics metrics;
  std::string teacher_tag;  // source of the training data ("" for iteration 0)
};

// One completed training run, for bookkeeping and audits.
struct TrainingRun {
  int iteration = 0;
  int model = 0;    // student model / architecture index
  int teacher = 0;  // teacher triplet-set slot; teacher_tag names its producer
  std::string teacher_tag;
  std::string kind;  // "train", "exchange", "inner", "candidate"
  std::uint64_t init_seed = 0;
  std::uint64_t sample_seed = 0;
  std::size_t pair_count = 0;
  double val_ndcg10 = 0.0;
  bool selected = true;
};

struct Selection {
  int iteration = 0;
  int model = 0;
  int teacher = 0;
};

struct GwsReport {
  std::vector<CurveRow> curve_rows;
  std::vector<TrainingRun> training_log;
  std::vector<Selection> selections;  // greedy multi only
};

struct GwsOutcome {
  std::vector<RankerParams> models;  // best checkpoint per model
  std::vector<int> best_iteration;
  std::vector<double> best_validation;  // NDCG@10
  std::size_t iterations_run = 0;
  FeatureScaler scaler;  // frozen iteration-0 standardization
  GwsReport report;
};

struct GwsInputs {
  const InvertedIndex* index = nullptr;
  Bm25Params bm25;
  std::vector<Query> train_queries;
  std::vector<Query> validation_queries;
  const QrelSet* validation_qrels = nullptr;
  OptimizerConfig optimizer;
  LossConfig loss;
  int relevance_threshold = 1;
  std::string artifact_dir;  // empty disables artifact dumps
  int threads = 1;
};

GwsOutcome run_self_labeling(const GwsConfig& config, const GwsInputs& inputs);
GwsOutcome run_cross_labeling(const GwsConfig& config, const GwsInputs& inputs);
GwsOutcome run_jcs(const GwsConfig& config, const GwsInputs& inputs);
GwsOutcome run_greedy_multi(const GwsConfig& config, const GwsInputs& inputs);

// Dispatches on config.algorithm.
GwsOutcome run_gws(const GwsConfig& config, const GwsInputs& inputs);

// BM25 pools as rankings (queries with empty pools are skipped).
std::vector<RunRanking> bm25_rankings(const InvertedIndex& index, const Bm25Params& params,
                                      const std::vector<Query>& queries, std::size_t k,
                                      int threads = 1);

// Retrieves fresh BM25 pools for `queries` and re-ranks them with the model,
// standardizing features with the scaler frozen at training time.
std::vector<RunRanking> rerank_with_model(const InvertedIndex& index, const Bm25Params& params,
                                          const RankerParams& model,
                                          const FeatureScaler& scaler,
                                          const std::vector<Query>& queries, std::size_t k,
                                          int threads = 1);

}  // namespace gwsrank
