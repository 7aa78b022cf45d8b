#include "gwsrank/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "gwsrank/rng.hpp"

namespace gwsrank {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string join_architectures(const std::vector<Architecture>& archs) {
  std::string out;
  for (std::size_t i = 0; i < archs.size(); ++i) {
    if (i > 0) out += ",";
    out += architecture_name(archs[i]);
  }
  return out;
}

std::vector<Architecture> parse_architectures(const std::string& value) {
  std::vector<Architecture> archs;
  std::istringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) archs.push_back(architecture_from_name(item));
  }
  return archs;
}

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

class KeyValueReader {
 public:
  explicit KeyValueReader(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::string line, section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::string t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      if (t.front() == '[' && t.back() == ']') {
        section = t.substr(1, t.size() - 2);
        continue;
      }
      auto eq = t.find('=');
      if (eq == std::string::npos) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": expected \"key = value\"");
      }
      values_[section + "." + trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
  }

  std::string str(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }
  double real(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : std::stod(it->second);
  }
  std::uint64_t integer(const std::string& key, std::uint64_t fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : std::stoull(it->second);
  }
  bool boolean(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw std::runtime_error("config: boolean expected for " + key);
  }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace

void save_config(const ExperimentConfig& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config file: " + path);
  out << "[paths]\n"
      << "corpus = " << c.paths.corpus << "\n"
      << "corpus_format = " << c.paths.corpus_format << "\n"
      << "queries = " << c.paths.queries << "\n"
      << "qrels = " << c.paths.qrels << "\n"
      << "validation_queries = " << c.paths.validation_queries << "\n"
      << "test_queries = " << c.paths.test_queries << "\n"
      << "out_dir = " << c.paths.out_dir << "\n\n";
  out << "[bm25]\n"
      << "k1 = " << fmt_double(c.bm25.k1) << "\n"
      << "b = " << fmt_double(c.bm25.b) << "\n\n";
  out << "[gws]\n"
      << "algorithm = " << algorithm_name(c.gws.algorithm) << "\n"
      << "pool_depth = " << c.gws.pool_depth << "\n"
      << "pairs_per_query = " << c.gws.pairs_per_query << "\n"
      << "model_count = " << c.gws.model_count << "\n"
      << "architectures = " << join_architectures(c.gws.architectures) << "\n"
      << "max_iterations = " << c.gws.max_iterations << "\n"
      << "patience = " << c.gws.patience << "\n"
      << "inner_self_iterations = " << c.gws.inner_self_iterations << "\n"
      << "base_seed = " << c.gws.base_seed << "\n"
      << "qpp_enabled = " << (c.gws.qpp_enabled ? "true" : "false") << "\n"
      << "random_teacher_matching = " << (c.gws.random_teacher_matching ? "true" : "false")
      << "\n\n";
  out << "[optimizer]\n"
      << "# transformer-scale reference values: learning_rate 5e-05, max_steps 10000\n"
      << "learning_rate = " << fmt_double(c.optimizer.learning_rate) << "\n"
      << "beta1 = " << fmt_double(c.optimizer.beta1) << "\n"
      << "beta2 = " << fmt_double(c.optimizer.beta2) << "\n"
      << "weight_decay = " << fmt_double(c.optimizer.weight_decay) << "\n"
      << "batch_size = " << c.optimizer.batch_size << "\n"
      << "max_steps = " << c.optimizer.max_steps << "\n"
      << "validation_every = " << c.optimizer.validation_every << "\n\n";
  out << "[loss]\n"
      << "epsilon = " << fmt_double(c.loss.epsilon) << "\n\n";
  out << "[qpp]\n"
      << "top_k = " << c.qpp.top_k << "\n"
      << "normalize_by_corpus_score = " << (c.qpp.normalize_by_corpus_score ? "true" : "false")
      << "\n\n";
  out << "[run]\n"
      << "relevance_threshold = " << c.relevance_threshold << "\n"
      << "validation_fraction = " << fmt_double(c.validation_fraction) << "\n"
      << "seed = " << c.seed << "\n"
      << "threads = " << c.threads << "\n";
}

ExperimentConfig load_config(const std::string& path) {
  KeyValueReader reader(path);
  ExperimentConfig c;
  c.paths.corpus = reader.str("paths.corpus", c.paths.corpus);
  c.paths.corpus_format = reader.str("paths.corpus_format", c.paths.corpus_format);
  c.paths.queries = reader.str("paths.queries", c.paths.queries);
  c.paths.qrels = reader.str("paths.qrels", c.paths.qrels);
  c.paths.validation_queries = reader.str("paths.validation_queries", "");
  c.paths.test_queries = reader.str("paths.test_queries", "");
  c.paths.out_dir = reader.str("paths.out_dir", c.paths.out_dir);
  c.bm25.k1 = reader.real("bm25.k1", c.bm25.k1);
  c.bm25.b = reader.real("bm25.b", c.bm25.b);
  c.gws.algorithm = algorithm_from_name(reader.str("gws.algorithm", "self"));
  c.gws.pool_depth = reader.integer("gws.pool_depth", c.gws.pool_depth);
  c.gws.pairs_per_query = reader.integer("gws.pairs_per_query", c.gws.pairs_per_query);
  c.gws.model_count = reader.integer("gws.model_count", c.gws.model_count);
  c.gws.architectures = parse_architectures(reader.str("gws.architectures", ""));
  c.gws.max_iterations = reader.integer("gws.max_iterations", c.gws.max_iterations);
  c.gws.patience = reader.integer("gws.patience", c.gws.patience);
  c.gws.inner_self_iterations =
      reader.integer("gws.inner_self_iterations", c.gws.inner_self_iterations);
  c.gws.base_seed = reader.integer("gws.base_seed", c.gws.base_seed);
  c.gws.qpp_enabled = reader.boolean("gws.qpp_enabled", c.gws.qpp_enabled);
  c.gws.random_teacher_matching =
      reader.boolean("gws.random_teacher_matching", c.gws.random_teacher_matching);
  c.optimizer.learning_rate = reader.real("optimizer.learning_rate", c.optimizer.learning_rate);
  c.optimizer.beta1 = reader.real("optimizer.beta1", c.optimizer.beta1);
  c.optimizer.beta2 = reader.real("optimizer.beta2", c.optimizer.beta2);
  c.optimizer.weight_decay = reader.real("optimizer.weight_decay", c.optimizer.weight_decay);
  c.optimizer.batch_size = reader.integer("optimizer.batch_size", c.optimizer.batch_size);
  c.optimizer.max_steps = reader.integer("optimizer.max_steps", c.optimizer.max_steps);
  c.optimizer.validation_every =
      reader.integer("optimizer.validation_every", c.optimizer.validation_every);
  c.loss.epsilon = reader.real("loss.epsilon", c.loss.epsilon);
  c.qpp.top_k = reader.integer("qpp.top_k", c.qpp.top_k);
  c.qpp.normalize_by_corpus_score =
      reader.boolean("qpp.normalize_by_corpus_score", c.qpp.normalize_by_corpus_score);
  c.relevance_threshold =
      static_cast<int>(reader.integer("run.relevance_threshold", c.relevance_threshold));
  c.validation_fraction = reader.real("run.validation_fraction", c.validation_fraction);
  c.seed = reader.integer("run.seed", c.seed);
  c.threads = static_cast<int>(reader.integer("run.threads", c.threads));
  return c;
}

std::pair<std::vector<Query>, std::vector<Query>> split_validation(
    const std::vector<Query>& queries, double fraction, std::uint64_t seed) {
  if (queries.size() < 2) throw std::invalid_argument("split_validation: need >= 2 queries");
  if (fraction <= 0.0 || fraction >= 1.0) {
    throw std::invalid_argument("split_validation: fraction must be in (0, 1)");
  }
  std::vector<std::size_t> order(queries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(mix_seed(seed, 0x5e7f5ffULL));
  rng.shuffle(order);

  std::size_t val_count = static_cast<std::size_t>(fraction * queries.size());
  val_count = std::max<std::size_t>(1, std::min(val_count, queries.size() - 1));
  std::vector<bool> is_val(queries.size(), false);
  for (std::size_t i = 0; i < val_count; ++i) is_val[order[i]] = true;

  std::vector<Query> train, validation;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    (is_val[i] ? validation : train).push_back(queries[i]);
  }
  return {std::move(train), std::move(validation)};
}

}  // namespace gwsrank
