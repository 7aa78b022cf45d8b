#include "gwsrank/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gwsrank/rng.hpp"

namespace gwsrank {

namespace {

constexpr const char* kParamsMagic = "GWSPARAMS 1";
constexpr double kAdamEpsilon = 1e-8;

std::size_t param_count(Architecture arch) {
  switch (arch) {
    case Architecture::linear:
      return kFeatureDim + 1;
    case Architecture::mlp:
      return kMlpHidden * kFeatureDim + kMlpHidden + kMlpHidden + 1;
  }
  throw std::invalid_argument("unknown architecture");
}

// mlp layout: W1 (16x7, row-major) | b1 (16) | W2 (16) | b2 (1)
struct MlpView {
  static std::size_t w1(std::size_t h, std::size_t d) { return h * kFeatureDim + d; }
  static std::size_t b1(std::size_t h) { return kMlpHidden * kFeatureDim + h; }
  static std::size_t w2(std::size_t h) { return kMlpHidden * kFeatureDim + kMlpHidden + h; }
  static std::size_t b2() { return kMlpHidden * kFeatureDim + 2 * kMlpHidden; }
};

void glorot_fill(Rng& rng, std::vector<double>& w, std::size_t offset, std::size_t count,
                 std::size_t fan_in, std::size_t fan_out) {
  double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (std::size_t i = 0; i < count; ++i) w[offset + i] = rng.uniform(-limit, limit);
}

}  // namespace

std::string architecture_name(Architecture arch) {
  return arch == Architecture::linear ? "linear" : "mlp";
}

Architecture architecture_from_name(const std::string& name) {
  if (name == "linear") return Architecture::linear;
  if (name == "mlp") return Architecture::mlp;
  throw std::invalid_argument("unknown architecture: " + name);
}

RankerParams init_params(Architecture architecture, std::uint64_t seed) {
  RankerParams params;
  params.architecture = architecture;
  params.seed = seed;
  params.weights.assign(param_count(architecture), 0.0);

  Rng rng(seed);
  if (architecture == Architecture::linear) {
    glorot_fill(rng, params.weights, 0, kFeatureDim, kFeatureDim, 1);
    // bias at index kFeatureDim stays 0
  } else {
    glorot_fill(rng, params.weights, 0, kMlpHidden * kFeatureDim, kFeatureDim, kMlpHidden);
    glorot_fill(rng, params.weights, MlpView::w2(0), kMlpHidden, kMlpHidden, 1);
    // b1 and b2 stay 0
  }
  return params;
}

double score(const RankerParams& params, const FeatureVector& features) {
  if (params.weights.size() != param_count(params.architecture)) {
    throw std::invalid_argument("score: parameter vector does not match architecture");
  }
  if (params.architecture == Architecture::linear) {
    double s = params.weights[kFeatureDim];
    for (std::size_t d = 0; d < kFeatureDim; ++d) s += params.weights[d] * features[d];
    return s;
  }
  double s = params.weights[MlpView::b2()];
  for (std::size_t h = 0; h < kMlpHidden; ++h) {
    double z = params.weights[MlpView::b1(h)];
    for (std::size_t d = 0; d < kFeatureDim; ++d) {
      z += params.weights[MlpView::w1(h, d)] * features[d];
    }
    s += params.weights[MlpView::w2(h)] * std::tanh(z);
  }
  return s;
}

void accumulate_score_gradient(const RankerParams& params, const FeatureVector& features,
                               double coeff, std::vector<double>& grad) {
  if (params.architecture == Architecture::linear) {
    for (std::size_t d = 0; d < kFeatureDim; ++d) grad[d] += coeff * features[d];
    grad[kFeatureDim] += coeff;
    return;
  }
  for (std::size_t h = 0; h < kMlpHidden; ++h) {
    double z = params.weights[MlpView::b1(h)];
    for (std::size_t d = 0; d < kFeatureDim; ++d) {
      z += params.weights[MlpView::w1(h, d)] * features[d];
    }
    double a = std::tanh(z);
    grad[MlpView::w2(h)] += coeff * a;
    double dz = coeff * params.weights[MlpView::w2(h)] * (1.0 - a * a);
    grad[MlpView::b1(h)] += dz;
    for (std::size_t d = 0; d < kFeatureDim; ++d) {
      grad[MlpView::w1(h, d)] += dz * features[d];
    }
  }
  grad[MlpView::b2()] += coeff;
}

PairLossResult pair_loss(const std::vector<TrainPair>& batch,
                         const std::vector<std::pair<double, double>>& student_scores,
                         const QueryWeights& weights, const LossConfig& config) {
  if (batch.empty()) throw std::invalid_argument("pair_loss: empty batch");
  if (batch.size() != student_scores.size()) {
    throw std::invalid_argument("pair_loss: batch and scores differ in length");
  }
  if (config.epsilon <= 0.0) throw std::invalid_argument("pair_loss: epsilon must be > 0");

  double weight_sum = 0.0;
  for (const auto& pair : batch) {
    double w = weights.at(pair.query_id);
    if (w < 0.0 || !std::isfinite(w)) {
      throw std::invalid_argument("pair_loss: invalid weight for query " + pair.query_id);
    }
    weight_sum += w;
  }
  if (weight_sum <= 0.0) throw std::invalid_argument("pair_loss: all weights are zero");

  PairLossResult result;
  result.contributions.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    double normalized = weights.at(batch[i].query_id) / weight_sum;
    double margin = batch[i].preference * (student_scores[i].first - student_scores[i].second);
    double hinge = std::max(0.0, config.epsilon - margin);
    result.contributions.push_back(normalized * hinge);
    result.loss += normalized * hinge;
  }
  return result;
}

std::vector<RunRanking> rerank_pools(const RankerParams& params,
                                     const std::vector<RankedList>& pools,
                                     const FeatureCache& cache) {
  std::vector<RunRanking> rankings;
  rankings.reserve(pools.size());
  for (const auto& pool : pools) {
    std::vector<ScoredDoc> scored;
    scored.reserve(pool.entries.size());
    for (const auto& entry : pool.entries) {
      scored.push_back({entry.doc_id, score(params, cache.get(pool.query_id, entry.doc_id))});
    }
    std::sort(scored.begin(), scored.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.doc_id < b.doc_id;
    });
    RunRanking ranking;
    ranking.query_id = pool.query_id;
    for (const auto& sd : scored) {
      ranking.doc_ids.push_back(sd.doc_id);
      ranking.scores.push_back(sd.score);
    }
    rankings.push_back(std::move(ranking));
  }
  return rankings;
}

double validation_ndcg10(const RankerParams& params, const ValidationContext& validation) {
  if (validation.pools.empty()) throw std::invalid_argument("empty validation set");
  auto rankings = rerank_pools(params, validation.pools, *validation.cache);
  double sum = 0.0;
  for (const auto& ranking : rankings) sum += ndcg_at(ranking, validation.qrels, 10);
  return sum / static_cast<double>(rankings.size());
}

MetricsRecord validation_metrics(const RankerParams& params,
                                 const ValidationContext& validation) {
  auto rankings = rerank_pools(params, validation.pools, *validation.cache);
  return evaluate_run(rankings, validation.qrels, validation.relevance_threshold);
}

RankerParams train(const std::vector<TrainPair>& pairs, const QueryWeights& weights,
                   const FeatureCache& cache, Architecture architecture,
                   const OptimizerConfig& opt, const LossConfig& loss,
                   const ValidationContext* validation) {
  if (pairs.empty()) throw std::invalid_argument("train: no training pairs");
  if (opt.batch_size < 1 || opt.max_steps < 1 || opt.validation_every < 1) {
    throw std::invalid_argument("train: batch_size, max_steps, validation_every must be >= 1");
  }

  // Normalized weight needs the batch weight sum; pre-resolve per-pair weights.
  std::vector<double> pair_weight(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) pair_weight[i] = weights.at(pairs[i].query_id);

  RankerParams params = init_params(architecture, opt.seed);
  std::size_t n_params = params.weights.size();
  std::vector<double> m(n_params, 0.0), v(n_params, 0.0), grad(n_params, 0.0);

  Rng rng(opt.seed);
  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  std::size_t cursor = 0;

  RankerParams best = params;
  double best_val = -1.0;
  bool have_checkpoint = false;

  for (std::size_t step = 1; step <= opt.max_steps; ++step) {
    // Assemble the batch from the epoch-style pass, reshuffling on wrap.
    std::vector<std::size_t> batch;
    batch.reserve(opt.batch_size);
    for (std::size_t i = 0; i < opt.batch_size; ++i) {
      if (cursor == order.size()) {
        rng.shuffle(order);
        cursor = 0;
      }
      batch.push_back(order[cursor++]);
    }

    double weight_sum = 0.0;
    for (std::size_t idx : batch) weight_sum += pair_weight[idx];
    if (weight_sum <= 0.0) {
      throw std::runtime_error("train: zero batch weight at step " + std::to_string(step));
    }

    std::fill(grad.begin(), grad.end(), 0.0);
    double batch_loss = 0.0;
    for (std::size_t idx : batch) {
      const TrainPair& pair = pairs[idx];
      const FeatureVector& f1 = cache.get(pair.query_id, pair.doc_id_1);
      const FeatureVector& f2 = cache.get(pair.query_id, pair.doc_id_2);
      double s1 = score(params, f1);
      double s2 = score(params, f2);
      double normalized = pair_weight[idx] / weight_sum;
      double violation = loss.epsilon - pair.preference * (s1 - s2);
      if (violation > 0.0) {  // subgradient 0 exactly at the kink
        batch_loss += normalized * violation;
        double coeff = normalized * pair.preference;
        accumulate_score_gradient(params, f1, -coeff, grad);
        accumulate_score_gradient(params, f2, coeff, grad);
      }
    }
    if (!std::isfinite(batch_loss)) {
      throw std::runtime_error("train: non-finite loss at step " + std::to_string(step));
    }

    double bc1 = 1.0 - std::pow(opt.beta1, static_cast<double>(step));
    double bc2 = 1.0 - std::pow(opt.beta2, static_cast<double>(step));
    for (std::size_t i = 0; i < n_params; ++i) {
      if (!std::isfinite(grad[i])) {
        throw std::runtime_error("train: non-finite gradient at step " + std::to_string(step));
      }
      m[i] = opt.beta1 * m[i] + (1.0 - opt.beta1) * grad[i];
      v[i] = opt.beta2 * v[i] + (1.0 - opt.beta2) * grad[i] * grad[i];
      double update = (m[i] / bc1) / (std::sqrt(v[i] / bc2) + kAdamEpsilon);
      params.weights[i] -= opt.learning_rate * (update + opt.weight_decay * params.weights[i]);
    }

    if (validation && (step % opt.validation_every == 0 || step == opt.max_steps)) {
      double val = validation_ndcg10(params, *validation);
      if (!have_checkpoint || val > best_val) {
        best_val = val;
        best = params;
        have_checkpoint = true;
      }
    }
  }
  return validation ? best : params;
}

void save_params(const RankerParams& params, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write params file: " + path);
  out << params_to_string(params);
}

std::string params_to_string(const RankerParams& params) {
  std::ostringstream out;
  out << kParamsMagic << '\n'
      << "architecture " << architecture_name(params.architecture) << '\n'
      << "seed " << params.seed << '\n'
      << "count " << params.weights.size() << '\n';
  char buf[64];
  for (double w : params.weights) {
    std::snprintf(buf, sizeof(buf), "%.17g", w);
    out << buf << '\n';
  }
  return out.str();
}

RankerParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open params file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kParamsMagic) {
    throw std::runtime_error("not a gwsrank params file: " + path);
  }
  RankerParams params;
  std::string key, value;
  in >> key >> value;
  if (key != "architecture") throw std::runtime_error("corrupt params file: " + path);
  params.architecture = architecture_from_name(value);
  in >> key >> params.seed;
  if (key != "seed") throw std::runtime_error("corrupt params file: " + path);
  std::size_t count = 0;
  in >> key >> count;
  if (key != "count" || count != param_count(params.architecture)) {
    throw std::runtime_error("corrupt params file: " + path);
  }
  params.weights.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!(in >> params.weights[i])) throw std::runtime_error("truncated params file: " + path);
  }
  return params;
}

}  // namespace gwsrank
