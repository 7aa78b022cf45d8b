#include "gwsrank/gws.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "gwsrank/parallel.hpp"
#include "gwsrank/report_io.hpp"
#include "gwsrank/rng.hpp"
#include "gwsrank/run_io.hpp"

namespace gwsrank {

namespace {

constexpr double kTieEpsilon = 1e-9;

std::string model_tag(int model, int iteration) {
  return "m" + std::to_string(model) + "_iter" + std::to_string(iteration);
}

std::vector<Triplet> to_triplets(const RankedList& pool) {
  std::vector<Triplet> entries;
  entries.reserve(pool.entries.size());
  for (const auto& e : pool.entries) entries.push_back({e.doc_id, e.score});
  return entries;
}

RankedList to_ranked_list(const QueryTriplets& qt) {
  RankedList pool;
  pool.query_id = qt.query_id;
  for (const auto& t : qt.entries) pool.entries.push_back({t.doc_id, t.score});
  return pool;
}

}  // namespace

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::self: return "self";
    case Algorithm::cross: return "cross";
    case Algorithm::jcs: return "jcs";
    case Algorithm::multi: return "multi";
  }
  throw std::invalid_argument("unknown algorithm");
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "self") return Algorithm::self;
  if (name == "cross") return Algorithm::cross;
  if (name == "jcs") return Algorithm::jcs;
  if (name == "multi") return Algorithm::multi;
  throw std::invalid_argument("unknown algorithm: " + name);
}

void finalize_gws_config(GwsConfig& config) {
  if (config.algorithm == Algorithm::self) config.model_count = 1;
  if (config.model_count < 1) throw std::invalid_argument("model_count must be >= 1");
  if ((config.algorithm == Algorithm::cross || config.algorithm == Algorithm::jcs) &&
      config.model_count < 2) {
    throw std::invalid_argument("cross and jcs need model_count >= 2");
  }
  if (config.architectures.empty()) {
    if (config.model_count == 1) {
      config.architectures = {Architecture::mlp};
    } else {
      for (std::size_t i = 0; i < config.model_count; ++i) {
        config.architectures.push_back(i % 2 == 0 ? Architecture::linear : Architecture::mlp);
      }
    }
  }
  if (config.architectures.size() != config.model_count) {
    throw std::invalid_argument("architectures list must have model_count entries");
  }
  if (config.pool_depth < 1 || config.pairs_per_query < 1 || config.max_iterations < 1 ||
      config.patience < 1) {
    throw std::invalid_argument(
        "pool_depth, pairs_per_query, max_iterations, patience must be >= 1");
  }
}

TripletSet initial_weak_labels(const InvertedIndex& index, const Bm25Params& params,
                               const std::vector<Query>& queries, std::size_t k, int threads) {
  if (queries.empty()) throw std::invalid_argument("initial_weak_labels: no queries");
  std::vector<RankedList> pools(queries.size());
  parallel_for(queries.size(), threads,
               [&](std::size_t i) { pools[i] = retrieve_topk(index, params, queries[i], k); });

  TripletSet set;
  set.source_tag = "bm25";
  for (std::size_t i = 0; i < queries.size(); ++i) {
    if (pools[i].entries.empty()) {
      std::cerr << "warning: query " << queries[i].query_id
                << " retrieved no documents, dropped\n";
      continue;
    }
    set.queries.push_back({queries[i].query_id, to_triplets(pools[i])});
  }
  if (set.queries.empty()) {
    throw std::runtime_error("initial_weak_labels: every query retrieved an empty pool");
  }
  return set;
}

TripletSet relabel(const RankerParams& params, const TripletSet& triplet_set,
                   const FeatureCache& cache, const std::string& source_tag) {
  TripletSet out;
  out.source_tag = source_tag;
  out.queries.reserve(triplet_set.queries.size());
  for (const auto& qt : triplet_set.queries) {
    QueryTriplets rescored;
    rescored.query_id = qt.query_id;
    rescored.entries.reserve(qt.entries.size());
    for (const auto& t : qt.entries) {
      rescored.entries.push_back({t.doc_id, score(params, cache.get(qt.query_id, t.doc_id))});
    }
    out.queries.push_back(std::move(rescored));
  }
  return out;
}

std::vector<TrainPair> sample_pairs(const TripletSet& triplet_set, std::size_t pairs_per_query,
                                    std::uint64_t seed) {
  if (pairs_per_query < 1) throw std::invalid_argument("sample_pairs: pairs_per_query >= 1");
  Rng rng(seed);
  std::vector<TrainPair> pairs;
  for (const auto& qt : triplet_set.queries) {
    if (qt.entries.size() < 2) {
      std::cerr << "warning: query " << qt.query_id << " has a pool of "
                << qt.entries.size() << ", skipped in pair sampling\n";
      continue;
    }
    std::vector<Triplet> sorted = qt.entries;
    std::sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.doc_id < b.doc_id;
    });
    std::size_t n = sorted.size();
    std::size_t positives = (n + 1) / 2;  // ceil(n/2)

    std::size_t emitted = 0;
    std::size_t attempts = 0;
    std::size_t max_attempts = 10 * pairs_per_query;
    while (emitted < pairs_per_query && attempts < max_attempts) {
      ++attempts;
      const Triplet& pos = sorted[rng.next_index(positives)];
      const Triplet& neg = sorted[positives + rng.next_index(n - positives)];
      if (std::fabs(pos.score - neg.score) < kTieEpsilon) continue;  // tied teacher, redraw
      pairs.push_back({qt.query_id, pos.doc_id, neg.doc_id, +1});
      ++emitted;
    }
    if (emitted < pairs_per_query) {
      std::cerr << "warning: query " << qt.query_id << " produced " << emitted << " of "
                << pairs_per_query << " pairs (tied teacher scores)\n";
    }
  }
  return pairs;
}

double validation_error(const RankerParams& params, const ValidationContext& validation) {
  return 1.0 - validation_ndcg10(params, validation);
}

void write_triplets_tsv(const TripletSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write triplets file: " + path);
  char buf[64];
  for (const auto& qt : set.queries) {
    for (const auto& t : qt.entries) {
      std::snprintf(buf, sizeof(buf), "%.17g", t.score);
      out << qt.query_id << '\t' << t.doc_id << '\t' << buf << '\t' << set.source_tag << '\n';
    }
  }
}

TripletSet read_triplets_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open triplets file: " + path);
  TripletSet set;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string qid, docid, score_str, tag;
    if (!std::getline(fields, qid, '\t') || !std::getline(fields, docid, '\t') ||
        !std::getline(fields, score_str, '\t') || !std::getline(fields, tag)) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": corrupt triplet line");
    }
    set.source_tag = tag;
    if (set.queries.empty() || set.queries.back().query_id != qid) {
      set.queries.push_back({qid, {}});
    }
    set.queries.back().entries.push_back({docid, std::stod(score_str)});
  }
  return set;
}

namespace {

// Shared state for one GWS run: fixed pools, frozen scaler and weights,
// validation context, artifact sink, per-model bookkeeping.
class Session {
 public:
  Session(const GwsConfig& config, const GwsInputs& inputs)
      : cfg_(config), in_(inputs) {
    if (!in_.index) throw std::invalid_argument("gws: no index supplied");
    if (in_.validation_queries.empty() || !in_.validation_qrels) {
      throw std::invalid_argument("gws: validation queries and qrels are required");
    }

    t0_ = initial_weak_labels(*in_.index, in_.bm25, in_.train_queries, cfg_.pool_depth,
                              in_.threads);
    for (const auto& qt : t0_.queries) train_pools_.push_back(to_ranked_list(qt));
    for (const auto& q : in_.train_queries) {
      if (std::any_of(t0_.queries.begin(), t0_.queries.end(),
                      [&](const QueryTriplets& qt) { return qt.query_id == q.query_id; })) {
        kept_queries_.push_back(q);
      }
    }

    scaler_ = FeatureScaler::fit(
        collect_pool_features(*in_.index, in_.bm25, kept_queries_, train_pools_));
    train_cache_ = std::make_unique<FeatureCache>(*in_.index, in_.bm25, kept_queries_,
                                                  train_pools_, scaler_);

    std::vector<RankedList> val_pools(in_.validation_queries.size());
    parallel_for(in_.validation_queries.size(), in_.threads, [&](std::size_t i) {
      val_pools[i] = retrieve_topk(*in_.index, in_.bm25, in_.validation_queries[i],
                                   cfg_.pool_depth);
    });
    for (std::size_t i = 0; i < val_pools.size(); ++i) {
      if (val_pools[i].entries.empty()) {
        std::cerr << "warning: validation query " << in_.validation_queries[i].query_id
                  << " retrieved no documents, dropped\n";
        continue;
      }
      val_.queries.push_back(in_.validation_queries[i]);
      val_.pools.push_back(std::move(val_pools[i]));
    }
    if (val_.pools.empty()) throw std::runtime_error("gws: empty validation pool set");
    val_.qrels = *in_.validation_qrels;
    val_.relevance_threshold = in_.relevance_threshold;
    val_cache_ = std::make_unique<FeatureCache>(*in_.index, in_.bm25, val_.queries, val_.pools,
                                                scaler_);
    val_.cache = val_cache_.get();

    QppConfig qpp_config;
    qpp_config.top_k = std::max<std::size_t>(2, cfg_.pool_depth);
    qpp_config.normalize_by_corpus_score = true;
    weights_ = cfg_.qpp_enabled
                   ? compute_query_weights(kept_queries_, train_pools_, *in_.index, in_.bm25,
                                           qpp_config)
                   : QueryWeights::uniform(kept_queries_);

    if (!in_.artifact_dir.empty()) {
      std::filesystem::create_directories(in_.artifact_dir);
    }
    dump_triplets(t0_);
    weak_labeler_row();
  }

  const TripletSet& initial_set() const { return t0_; }
  GwsReport& report() { return report_; }

  // One training event: fresh init, seeded pair sample, train, evaluate.
  RankerParams train_event(int iteration, int model, Architecture arch,
                           const TripletSet& teacher_set, int teacher_index,
                           const std::string& kind, std::uint64_t init_seed,
                           TrainingRun* entry_out = nullptr) {
    std::uint64_t sample_seed = mix_seed(cfg_.base_seed, static_cast<std::uint64_t>(model),
                                         ++event_counter_[model]);
    auto pairs = sample_pairs(teacher_set, cfg_.pairs_per_query, sample_seed);
    if (pairs.empty()) throw std::runtime_error("gws: pair sampling produced no pairs");

    OptimizerConfig opt = in_.optimizer;
    opt.seed = init_seed;
    RankerParams params = train(pairs, weights_, *train_cache_, arch, opt, in_.loss, &val_);

    TrainingRun entry;
    entry.iteration = iteration;
    entry.model = model;
    entry.teacher = teacher_index;
    entry.teacher_tag = teacher_set.source_tag;
    entry.kind = kind;
    entry.init_seed = init_seed;
    entry.sample_seed = sample_seed;
    entry.pair_count = pairs.size();
    entry.val_ndcg10 = validation_ndcg10(params, val_);
    report_.training_log.push_back(entry);
    if (entry_out) *entry_out = entry;
    return params;
  }

  MetricsRecord evaluate(const RankerParams& params) const {
    return validation_metrics(params, val_);
  }

  // Greedy multi: flag which candidate survived selection.
  void mark_selection(int iteration, int model, int chosen_teacher) {
    for (auto& entry : report_.training_log) {
      if (entry.iteration == iteration && entry.model == model && entry.kind == "candidate") {
        entry.selected = entry.teacher == chosen_teacher;
      }
    }
    report_.selections.push_back({iteration, model, chosen_teacher});
  }

  // Tracks the globally best checkpoint per model.
  void track_best(int model, int iteration, const RankerParams& params, double val) {
    if (best_val_.size() <= static_cast<std::size_t>(model)) {
      best_val_.resize(model + 1, -1.0);
      best_params_.resize(model + 1);
      best_iter_.resize(model + 1, 0);
    }
    if (val > best_val_[model]) {
      best_val_[model] = val;
      best_params_[model] = params;
      best_iter_[model] = iteration;
    }
  }

  void add_curve_row(int iteration, int model, const MetricsRecord& metrics,
                     const std::string& teacher_tag) {
    report_.curve_rows.push_back({iteration, model, metrics.aggregate, teacher_tag});
  }

  void dump_triplets(const TripletSet& set) {
    if (in_.artifact_dir.empty()) return;
    write_triplets_tsv(set, in_.artifact_dir + "/triplets_" + set.source_tag + ".tsv");
  }

  void dump_checkpoint(const RankerParams& params, const std::string& name) {
    if (in_.artifact_dir.empty()) return;
    save_params(params, in_.artifact_dir + "/checkpoint_" + name + ".txt");
  }

  GwsOutcome finish(std::size_t iterations_run) {
    GwsOutcome outcome;
    outcome.models = best_params_;
    outcome.best_iteration = best_iter_;
    outcome.best_validation = best_val_;
    outcome.iterations_run = iterations_run;
    outcome.scaler = scaler_;
    outcome.report = std::move(report_);
    for (std::size_t i = 0; i < outcome.models.size(); ++i) {
      dump_checkpoint(outcome.models[i], "best_m" + std::to_string(i));
    }
    write_summary_artifacts(outcome);
    return outcome;
  }

  const ValidationContext& validation() const { return val_; }
  const QueryWeights& weights() const { return weights_; }
  const FeatureCache& train_cache() const { return *train_cache_; }

 private:
  std::vector<RunRanking> bm25_validation_rankings() const {
    std::vector<RunRanking> rankings;
    for (const auto& pool : val_.pools) {
      RunRanking r;
      r.query_id = pool.query_id;
      for (const auto& e : pool.entries) {
        r.doc_ids.push_back(e.doc_id);
        r.scores.push_back(e.score);
      }
      rankings.push_back(std::move(r));
    }
    return rankings;
  }

  void weak_labeler_row() {
    auto metrics =
        evaluate_run(bm25_validation_rankings(), val_.qrels, val_.relevance_threshold);
    add_curve_row(0, -1, metrics, "");
  }

  void write_summary_artifacts(const GwsOutcome& outcome);

  const GwsConfig& cfg_;
  const GwsInputs& in_;
  TripletSet t0_;
  std::vector<RankedList> train_pools_;
  std::vector<Query> kept_queries_;
  FeatureScaler scaler_;
  std::unique_ptr<FeatureCache> train_cache_;
  std::unique_ptr<FeatureCache> val_cache_;
  ValidationContext val_;
  QueryWeights weights_;
  GwsReport report_;
  std::unordered_map<int, std::uint64_t> event_counter_;
  std::vector<double> best_val_;
  std::vector<RankerParams> best_params_;
  std::vector<int> best_iter_;
};

void Session::write_summary_artifacts(const GwsOutcome& outcome) {
  if (in_.artifact_dir.empty()) return;
  const std::string& dir = in_.artifact_dir;
  write_report_tsv(outcome.report, dir + "/report.tsv");
  write_iterations_tsv(outcome.report, dir + "/iterations.tsv");
  export_iteration_curves(outcome.report, dir + "/curves.csv");
  write_training_log_tsv(outcome.report, dir + "/training_log.tsv");
  write_weights_tsv(weights_, kept_queries_, dir + "/weights.tsv");
  write_run(bm25_validation_rankings(), dir + "/run_bm25_val.trec", "bm25");
  for (std::size_t i = 0; i < outcome.models.size(); ++i) {
    std::string tag = "m" + std::to_string(i);
    write_run(rerank_pools(outcome.models[i], val_.pools, *val_cache_),
              dir + "/run_best_" + tag + "_val.trec", tag);
  }
}

// Early stopping on validation NDCG@10: stop after `patience` consecutive
// non-improving iterations.
struct PatienceTracker {
  double best = -1.0;
  std::size_t fails = 0;

  // Returns true when the model has converged.
  bool observe(double value, std::size_t patience) {
    if (value > best) {
      best = value;
      fails = 0;
    } else {
      ++fails;
    }
    return fails >= patience;
  }
};

// Teacher index per model: cyclic shift by default, seeded derangement when
// random matching is enabled.
std::vector<std::size_t> teacher_assignment(const GwsConfig& cfg, int iteration) {
  std::size_t m = cfg.model_count;
  std::vector<std::size_t> teachers(m);
  if (!cfg.random_teacher_matching || m == 2) {
    for (std::size_t i = 0; i < m; ++i) teachers[i] = (i + m - 1) % m;
    return teachers;
  }
  Rng rng(mix_seed(cfg.base_seed, 0x7eac4e85ULL, static_cast<std::uint64_t>(iteration)));
  for (std::size_t i = 0; i < m; ++i) teachers[i] = i;
  do {
    rng.shuffle(teachers);
  } while ([&] {
    for (std::size_t i = 0; i < m; ++i) {
      if (teachers[i] == i) return true;
    }
    return false;
  }());
  return teachers;
}

}  // namespace

GwsOutcome run_self_labeling(const GwsConfig& config, const GwsInputs& inputs) {
  GwsConfig cfg = config;
  finalize_gws_config(cfg);
  if (cfg.algorithm != Algorithm::self) throw std::invalid_argument("config.algorithm != self");

  Session session(cfg, inputs);
  TripletSet current = session.initial_set();
  PatienceTracker tracker;
  std::size_t t = 0;
  while (t < cfg.max_iterations) {
    ++t;
    TrainingRun entry;
    RankerParams params = session.train_event(static_cast<int>(t), 0, cfg.architectures[0],
                                              current, 0, "train", cfg.base_seed, &entry);
    auto metrics = session.evaluate(params);
    session.add_curve_row(static_cast<int>(t), 0, metrics, entry.teacher_tag);
    session.track_best(0, static_cast<int>(t), params, entry.val_ndcg10);
    session.dump_checkpoint(params, model_tag(0, static_cast<int>(t)));

    current = relabel(params, current, session.train_cache(), model_tag(0, static_cast<int>(t)));
    session.dump_triplets(current);

    if (tracker.observe(entry.val_ndcg10, cfg.patience)) break;
  }
  return session.finish(t);
}

GwsOutcome run_cross_labeling(const GwsConfig& config, const GwsInputs& inputs) {
  GwsConfig cfg = config;
  finalize_gws_config(cfg);

  Session session(cfg, inputs);
  std::size_t m = cfg.model_count;
  std::vector<TripletSet> sets(m, session.initial_set());
  std::vector<PatienceTracker> trackers(m);
  std::vector<bool> converged(m, false);

  std::size_t t = 0;
  while (t < cfg.max_iterations &&
         std::any_of(converged.begin(), converged.end(), [](bool c) { return !c; })) {
    ++t;
    auto teachers = teacher_assignment(cfg, static_cast<int>(t));
    std::vector<TripletSet> previous = sets;
    for (std::size_t i = 0; i < m; ++i) {
      if (converged[i]) continue;
      const TripletSet& teacher_set = previous[teachers[i]];
      TrainingRun entry;
      RankerParams params = session.train_event(
          static_cast<int>(t), static_cast<int>(i), cfg.architectures[i], teacher_set,
          static_cast<int>(teachers[i]), "train", cfg.base_seed + i, &entry);
      auto metrics = session.evaluate(params);
      session.add_curve_row(static_cast<int>(t), static_cast<int>(i), metrics,
                            entry.teacher_tag);
      session.track_best(static_cast<int>(i), static_cast<int>(t), params, entry.val_ndcg10);
      session.dump_checkpoint(params, model_tag(static_cast<int>(i), static_cast<int>(t)));

      sets[i] = relabel(params, previous[i], session.train_cache(),
                        model_tag(static_cast<int>(i), static_cast<int>(t)));
      session.dump_triplets(sets[i]);

      if (trackers[i].observe(entry.val_ndcg10, cfg.patience)) converged[i] = true;
    }
  }
  return session.finish(t);
}

GwsOutcome run_jcs(const GwsConfig& config, const GwsInputs& inputs) {
  GwsConfig cfg = config;
  finalize_gws_config(cfg);

  Session session(cfg, inputs);
  std::size_t m = cfg.model_count;
  std::vector<TripletSet> sets(m, session.initial_set());
  std::vector<PatienceTracker> trackers(m);
  std::vector<bool> converged(m, false);

  std::size_t t = 0;
  while (t < cfg.max_iterations &&
         std::any_of(converged.begin(), converged.end(), [](bool c) { return !c; })) {
    ++t;
    auto teachers = teacher_assignment(cfg, static_cast<int>(t));
    std::vector<TripletSet> previous = sets;
    for (std::size_t i = 0; i < m; ++i) {
      if (converged[i]) continue;

      // Cross-exchange step: train on the partner's latest set.
      const TripletSet& teacher_set = previous[teachers[i]];
      TrainingRun entry;
      RankerParams params = session.train_event(
          static_cast<int>(t), static_cast<int>(i), cfg.architectures[i], teacher_set,
          static_cast<int>(teachers[i]), "exchange", cfg.base_seed + i, &entry);
      session.track_best(static_cast<int>(i), static_cast<int>(t), params, entry.val_ndcg10);
      session.dump_checkpoint(params, model_tag(static_cast<int>(i), static_cast<int>(t)));
      sets[i] = relabel(params, previous[i], session.train_cache(),
                        model_tag(static_cast<int>(i), static_cast<int>(t)));
      session.dump_triplets(sets[i]);

      double iteration_best = entry.val_ndcg10;
      MetricsRecord iteration_metrics = session.evaluate(params);
      std::string iteration_teacher = entry.teacher_tag;

      // Inner self-labeling on the model's own relabeled set, patience 1.
      double inner_best = entry.val_ndcg10;
      for (std::size_t s = 1; s <= cfg.inner_self_iterations; ++s) {
        std::string tag =
            model_tag(static_cast<int>(i), static_cast<int>(t)) + "s" + std::to_string(s);
        TrainingRun inner_entry;
        RankerParams inner_params = session.train_event(
            static_cast<int>(t), static_cast<int>(i), cfg.architectures[i], sets[i],
            static_cast<int>(i), "inner", cfg.base_seed + i, &inner_entry);
        session.track_best(static_cast<int>(i), static_cast<int>(t), inner_params,
                           inner_entry.val_ndcg10);
        session.dump_checkpoint(inner_params, tag);
        sets[i] = relabel(inner_params, sets[i], session.train_cache(), tag);
        session.dump_triplets(sets[i]);

        if (inner_entry.val_ndcg10 > iteration_best) {
          iteration_best = inner_entry.val_ndcg10;
          iteration_metrics = session.evaluate(inner_params);
          iteration_teacher = inner_entry.teacher_tag;
        }
        if (inner_entry.val_ndcg10 > inner_best) {
          inner_best = inner_entry.val_ndcg10;
        } else {
          break;  // patience 1
        }
      }

      session.add_curve_row(static_cast<int>(t), static_cast<int>(i), iteration_metrics,
                            iteration_teacher);
      if (trackers[i].observe(iteration_best, cfg.patience)) converged[i] = true;
    }
  }
  return session.finish(t);
}

GwsOutcome run_greedy_multi(const GwsConfig& config, const GwsInputs& inputs) {
  GwsConfig cfg = config;
  finalize_gws_config(cfg);

  Session session(cfg, inputs);
  std::size_t m = cfg.model_count;
  std::vector<TripletSet> sets(m, session.initial_set());
  std::vector<PatienceTracker> trackers(m);
  std::vector<bool> converged(m, false);

  std::size_t t = 0;
  while (t < cfg.max_iterations &&
         std::any_of(converged.begin(), converged.end(), [](bool c) { return !c; })) {
    ++t;
    std::vector<TripletSet> previous = sets;
    for (std::size_t i = 0; i < m; ++i) {
      if (converged[i]) continue;

      // Train every (architecture i, teacher j) candidate.
      std::vector<RankerParams> candidates(m);
      std::vector<TrainingRun> entries(m);
      for (std::size_t j = 0; j < m; ++j) {
        const TripletSet& teacher_set = previous[j];
        candidates[j] = session.train_event(
            static_cast<int>(t), static_cast<int>(i), cfg.architectures[i], teacher_set,
            static_cast<int>(j), "candidate", cfg.base_seed + i * m + j, &entries[j]);
      }

      // Lowest validation error wins; the self-taught candidate breaks ties,
      // then the smallest teacher index.
      std::size_t chosen = 0;
      for (std::size_t j = 1; j < m; ++j) {
        if (entries[j].val_ndcg10 > entries[chosen].val_ndcg10) {
          chosen = j;
        } else if (entries[j].val_ndcg10 == entries[chosen].val_ndcg10 && j == i) {
          chosen = j;
        }
      }
      session.mark_selection(static_cast<int>(t), static_cast<int>(i),
                             static_cast<int>(chosen));

      auto metrics = session.evaluate(candidates[chosen]);
      session.add_curve_row(static_cast<int>(t), static_cast<int>(i), metrics,
                            entries[chosen].teacher_tag);
      session.track_best(static_cast<int>(i), static_cast<int>(t), candidates[chosen],
                         entries[chosen].val_ndcg10);
      session.dump_checkpoint(candidates[chosen],
                              model_tag(static_cast<int>(i), static_cast<int>(t)));

      sets[i] = relabel(candidates[chosen], previous[i], session.train_cache(),
                        model_tag(static_cast<int>(i), static_cast<int>(t)));
      session.dump_triplets(sets[i]);

      if (trackers[i].observe(entries[chosen].val_ndcg10, cfg.patience)) converged[i] = true;
    }
  }
  return session.finish(t);
}

GwsOutcome run_gws(const GwsConfig& config, const GwsInputs& inputs) {
  switch (config.algorithm) {
    case Algorithm::self: return run_self_labeling(config, inputs);
    case Algorithm::cross: return run_cross_labeling(config, inputs);
    case Algorithm::jcs: return run_jcs(config, inputs);
    case Algorithm::multi: return run_greedy_multi(config, inputs);
  }
  throw std::invalid_argument("unknown algorithm");
}

std::vector<RunRanking> bm25_rankings(const InvertedIndex& index, const Bm25Params& params,
                                      const std::vector<Query>& queries, std::size_t k,
                                      int threads) {
  std::vector<RankedList> pools(queries.size());
  parallel_for(queries.size(), threads,
               [&](std::size_t i) { pools[i] = retrieve_topk(index, params, queries[i], k); });
  std::vector<RunRanking> rankings;
  for (const auto& pool : pools) {
    if (pool.entries.empty()) continue;
    RunRanking r;
    r.query_id = pool.query_id;
    for (const auto& e : pool.entries) {
      r.doc_ids.push_back(e.doc_id);
      r.scores.push_back(e.score);
    }
    rankings.push_back(std::move(r));
  }
  return rankings;
}

std::vector<RunRanking> rerank_with_model(const InvertedIndex& index, const Bm25Params& params,
                                          const RankerParams& model,
                                          const FeatureScaler& scaler,
                                          const std::vector<Query>& queries, std::size_t k,
                                          int threads) {
  std::vector<RankedList> pools(queries.size());
  parallel_for(queries.size(), threads,
               [&](std::size_t i) { pools[i] = retrieve_topk(index, params, queries[i], k); });
  std::vector<Query> kept;
  std::vector<RankedList> kept_pools;
  for (std::size_t i = 0; i < pools.size(); ++i) {
    if (pools[i].entries.empty()) continue;
    kept.push_back(queries[i]);
    kept_pools.push_back(std::move(pools[i]));
  }
  if (kept_pools.empty()) return {};
  FeatureCache cache(index, params, kept, kept_pools, scaler);
  return rerank_pools(model, kept_pools, cache);
}

}  // namespace gwsrank
