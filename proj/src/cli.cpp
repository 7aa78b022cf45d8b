#include "gwsrank/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "gwsrank/config.hpp"
#include "gwsrank/gws.hpp"
#include "gwsrank/report_io.hpp"
#include "gwsrank/run_io.hpp"
#include "gwsrank/synthetic.hpp"

namespace gwsrank {

namespace {

struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

CorpusFormat parse_format(const std::string& format) {
  if (format == "tsv") return CorpusFormat::tsv;
  if (format == "jsonl") return CorpusFormat::jsonl;
  throw CLI::ValidationError("--format", "expected tsv or jsonl");
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void write_metrics_tsv(const MetricsRecord& record, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write metrics file: " + path);
  out << "metric\tvalue\n"
      << "ndcg_at_1\t" << fmt6(record.aggregate.ndcg_at_1) << '\n'
      << "ndcg_at_10\t" << fmt6(record.aggregate.ndcg_at_10) << '\n'
      << "map\t" << fmt6(record.aggregate.map) << '\n'
      << "mrr\t" << fmt6(record.aggregate.mrr) << '\n'
      << "queries\t" << record.per_query.size() << '\n';
}

void write_metrics_text(const MetricsRecord& record, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write metrics file: " + path);
  char line[128];
  out << "metric        value\n";
  std::snprintf(line, sizeof(line), "%-12s %8s\n", "ndcg_at_1",
                fmt6(record.aggregate.ndcg_at_1).c_str());
  out << line;
  std::snprintf(line, sizeof(line), "%-12s %8s\n", "ndcg_at_10",
                fmt6(record.aggregate.ndcg_at_10).c_str());
  out << line;
  std::snprintf(line, sizeof(line), "%-12s %8s\n", "map", fmt6(record.aggregate.map).c_str());
  out << line;
  std::snprintf(line, sizeof(line), "%-12s %8s\n", "mrr", fmt6(record.aggregate.mrr).c_str());
  out << line;
}

void write_per_query_tsv(const MetricsRecord& record, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write per-query file: " + path);
  for (const auto& [qid, m] : record.per_query) {
    out << qid << "\tndcg_at_1\t" << fmt6(m.ndcg_at_1) << '\n';
    out << qid << "\tndcg_at_10\t" << fmt6(m.ndcg_at_10) << '\n';
    out << qid << "\tmap\t" << fmt6(m.map) << '\n';
    out << qid << "\tmrr\t" << fmt6(m.mrr) << '\n';
  }
}

std::vector<double> metric_vector(const MetricsRecord& record, const std::string& metric) {
  std::vector<double> values;
  for (const auto& [_, m] : record.per_query) {
    if (metric == "ndcg1") values.push_back(m.ndcg_at_1);
    else if (metric == "ndcg10") values.push_back(m.ndcg_at_10);
    else if (metric == "map") values.push_back(m.map);
    else if (metric == "mrr") values.push_back(m.mrr);
    else throw CLI::ValidationError("--metric", "expected ndcg1|ndcg10|map|mrr");
  }
  return values;
}

MetricsRecord evaluate_run_file(const std::string& run_path, const std::string& qrels_path,
                                int threshold) {
  auto rankings = parse_run(run_path);
  QrelSet qrels;
  {  // qrels loader shared with ingest_queries_and_qrels needs a query file; parse directly
    std::ifstream in(qrels_path);
    if (!in) throw std::runtime_error("cannot open qrels file: " + qrels_path);
    std::string qid, zero, docid;
    int grade;
    while (in >> qid >> zero >> docid >> grade) {
      if (grade < 0 || grade > 3) {
        throw std::runtime_error("qrels grade out of range [0,3] for " + qid + " " + docid);
      }
      qrels.set(qid, docid, grade);
    }
  }
  return evaluate_run(rankings, qrels, threshold);
}

struct GwsCli {
  ExperimentConfig staged;  // flag values land here during parsing
  std::string config_path;
  std::string algorithm = "self";
  bool no_qpp = false;
  bool ws_mode = false;
};

// Final config = file config (or defaults) with explicitly-passed flags on top.
int run_gws_command(GwsCli& cli, CLI::App* cmd) {
  ExperimentConfig c;
  if (!cli.config_path.empty()) c = load_config(cli.config_path);
  auto override_if_set = [&](const char* flag, auto& dst, const auto& staged) {
    if (cmd->count(flag) > 0) dst = staged;
  };
  override_if_set("--docs", c.paths.corpus, cli.staged.paths.corpus);
  override_if_set("--format", c.paths.corpus_format, cli.staged.paths.corpus_format);
  override_if_set("--queries", c.paths.queries, cli.staged.paths.queries);
  override_if_set("--qrels", c.paths.qrels, cli.staged.paths.qrels);
  override_if_set("--validation-queries", c.paths.validation_queries,
                  cli.staged.paths.validation_queries);
  override_if_set("--test-queries", c.paths.test_queries, cli.staged.paths.test_queries);
  override_if_set("--out-dir", c.paths.out_dir, cli.staged.paths.out_dir);
  override_if_set("--threads", c.threads, cli.staged.threads);
  override_if_set("--pool-depth", c.gws.pool_depth, cli.staged.gws.pool_depth);
  override_if_set("--max-steps", c.optimizer.max_steps, cli.staged.optimizer.max_steps);
  override_if_set("--relevance-threshold", c.relevance_threshold,
                  cli.staged.relevance_threshold);
  if (cmd->count("--seed") > 0) {
    c.seed = cli.staged.seed;
    c.gws.base_seed = cli.staged.seed;
  }
  if (!cli.ws_mode) {
    override_if_set("--algorithm", c.gws.algorithm, algorithm_from_name(cli.algorithm));
    override_if_set("--models", c.gws.model_count, cli.staged.gws.model_count);
    override_if_set("--max-iterations", c.gws.max_iterations, cli.staged.gws.max_iterations);
    override_if_set("--patience", c.gws.patience, cli.staged.gws.patience);
    override_if_set("--inner-self-iterations", c.gws.inner_self_iterations,
                    cli.staged.gws.inner_self_iterations);
  } else {
    c.gws.algorithm = Algorithm::self;
    c.gws.max_iterations = 1;
  }
  if (cli.no_qpp) c.gws.qpp_enabled = false;

  if (c.paths.corpus.empty() || c.paths.queries.empty() || c.paths.qrels.empty()) {
    throw CLI::ValidationError("gws", "--docs, --queries and --qrels are required");
  }

  std::cerr << "loading corpus from " << c.paths.corpus << "\n";
  Corpus corpus = ingest_documents(c.paths.corpus, parse_format(c.paths.corpus_format));
  InvertedIndex index = InvertedIndex::build(corpus);

  auto [queries, qrels] = ingest_queries_and_qrels(c.paths.queries, c.paths.qrels);

  std::vector<Query> train_queries, validation_queries;
  if (!c.paths.validation_queries.empty()) {
    auto [vq, _] = ingest_queries_and_qrels(c.paths.validation_queries, std::nullopt);
    train_queries = queries;
    validation_queries = vq;
  } else {
    std::tie(train_queries, validation_queries) =
        split_validation(queries, c.validation_fraction, c.seed);
  }
  std::cerr << "train queries: " << train_queries.size()
            << ", validation queries: " << validation_queries.size() << "\n";

  GwsInputs inputs;
  inputs.index = &index;
  inputs.bm25 = c.bm25;
  inputs.train_queries = train_queries;
  inputs.validation_queries = validation_queries;
  inputs.validation_qrels = &qrels;
  inputs.optimizer = c.optimizer;
  inputs.loss = c.loss;
  inputs.relevance_threshold = c.relevance_threshold;
  inputs.artifact_dir = c.paths.out_dir;
  inputs.threads = c.threads;

  GwsConfig gws_config = c.gws;
  gws_config.base_seed = c.gws.base_seed;

  std::filesystem::create_directories(c.paths.out_dir);
  save_config(c, c.paths.out_dir + "/config.txt");

  GwsOutcome outcome;
  try {
    outcome = run_gws(gws_config, inputs);
  } catch (const std::runtime_error& e) {
    throw TrainingError(e.what());
  }
  for (std::size_t i = 0; i < outcome.models.size(); ++i) {
    std::cerr << "model " << i << ": best iteration " << outcome.best_iteration[i]
              << ", validation ndcg@10 " << fmt6(outcome.best_validation[i]) << "\n";
  }

  if (!c.paths.test_queries.empty()) {
    auto [test_queries, _] = ingest_queries_and_qrels(c.paths.test_queries, std::nullopt);
    auto bm25_run = bm25_rankings(index, c.bm25, test_queries, c.gws.pool_depth, c.threads);
    write_run(bm25_run, c.paths.out_dir + "/run_bm25_test.trec", "bm25");
    write_metrics_tsv(evaluate_run(bm25_run, qrels, c.relevance_threshold),
                      c.paths.out_dir + "/metrics_bm25_test.tsv");
    for (std::size_t i = 0; i < outcome.models.size(); ++i) {
      std::string tag = "m" + std::to_string(i);
      auto rankings = rerank_with_model(index, c.bm25, outcome.models[i], outcome.scaler,
                                        test_queries, c.gws.pool_depth, c.threads);
      write_run(rankings, c.paths.out_dir + "/run_best_" + tag + "_test.trec", tag);
      write_metrics_tsv(evaluate_run(rankings, qrels, c.relevance_threshold),
                        c.paths.out_dir + "/metrics_" + tag + "_test.tsv");
    }
  }
  std::cerr << "artifacts written to " << c.paths.out_dir << "\n";
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
  CLI::App app{"weakly-supervised learning-to-rank toolkit"};
  app.require_subcommand(1);

  // index
  auto* cmd_index = app.add_subcommand("index", "build and save an inverted index");
  std::string docs_path, docs_format = "tsv", index_out;
  cmd_index->add_option("--docs", docs_path, "document file")->required();
  cmd_index->add_option("--format", docs_format, "tsv|jsonl");
  cmd_index->add_option("--out", index_out, "output index file")->required();

  // search
  auto* cmd_search = app.add_subcommand("search", "BM25 top-k retrieval to a TREC run file");
  std::string s_index, s_docs, s_docs_format = "tsv", s_queries, s_out, s_tag = "bm25";
  std::size_t s_k = 20;
  double s_k1 = 0.9, s_b = 0.4;
  int s_threads = 1;
  cmd_search->add_option("--index", s_index, "saved index file");
  cmd_search->add_option("--docs", s_docs, "document file (builds the index in memory)");
  cmd_search->add_option("--format", s_docs_format, "tsv|jsonl");
  cmd_search->add_option("--queries", s_queries, "query TSV")->required();
  cmd_search->add_option("--k", s_k, "retrieval depth");
  cmd_search->add_option("--k1", s_k1, "BM25 k1");
  cmd_search->add_option("--b", s_b, "BM25 b");
  cmd_search->add_option("--tag", s_tag, "run tag");
  cmd_search->add_option("--threads", s_threads, "worker threads");
  cmd_search->add_option("--out", s_out, "output run file")->required();

  // gws / ws
  GwsCli gws_cli;
  auto add_gws_options = [&](CLI::App* cmd, bool with_algorithm) {
    cmd->add_option("--config", gws_cli.config_path, "experiment config file");
    cmd->add_option("--docs", gws_cli.staged.paths.corpus, "document file");
    cmd->add_option("--format", gws_cli.staged.paths.corpus_format, "tsv|jsonl");
    cmd->add_option("--queries", gws_cli.staged.paths.queries, "training query TSV");
    cmd->add_option("--qrels", gws_cli.staged.paths.qrels, "qrels (validation labels)");
    cmd->add_option("--validation-queries", gws_cli.staged.paths.validation_queries,
                    "explicit validation query TSV (default: seeded split)");
    cmd->add_option("--test-queries", gws_cli.staged.paths.test_queries,
                    "held-out query TSV evaluated with the final models");
    cmd->add_option("--out-dir", gws_cli.staged.paths.out_dir, "run artifact directory");
    cmd->add_option("--seed", gws_cli.staged.seed, "global seed");
    cmd->add_option("--threads", gws_cli.staged.threads, "worker threads");
    cmd->add_option("--pool-depth", gws_cli.staged.gws.pool_depth, "re-ranking pool depth");
    cmd->add_option("--max-steps", gws_cli.staged.optimizer.max_steps, "training steps");
    cmd->add_option("--relevance-threshold", gws_cli.staged.relevance_threshold,
                    "binarization threshold for MAP/MRR");
    cmd->add_flag("--no-qpp", gws_cli.no_qpp, "uniform query weights (ablation)");
    if (with_algorithm) {
      cmd->add_option("--algorithm", gws_cli.algorithm, "self|cross|jcs|multi");
      cmd->add_option("--models", gws_cli.staged.gws.model_count, "model count m");
      cmd->add_option("--max-iterations", gws_cli.staged.gws.max_iterations, "iteration cap");
      cmd->add_option("--patience", gws_cli.staged.gws.patience, "early-stop patience");
      cmd->add_option("--inner-self-iterations", gws_cli.staged.gws.inner_self_iterations,
                      "jcs inner self-labeling budget");
    }
  };
  auto* cmd_gws = app.add_subcommand("gws", "iterative weak supervision training");
  add_gws_options(cmd_gws, true);
  auto* cmd_ws = app.add_subcommand("ws", "one-iteration weak supervision baseline");
  add_gws_options(cmd_ws, false);

  // eval
  auto* cmd_eval = app.add_subcommand("eval", "evaluate a run file against qrels");
  std::string e_run, e_qrels, e_out, e_per_query, e_text;
  int e_threshold = 2;
  cmd_eval->add_option("--run", e_run, "TREC run file")->required();
  cmd_eval->add_option("--qrels", e_qrels, "qrels file")->required();
  cmd_eval->add_option("--threshold", e_threshold, "binary relevance threshold");
  cmd_eval->add_option("--out", e_out, "summary TSV")->required();
  cmd_eval->add_option("--per-query", e_per_query, "per-query TSV");
  cmd_eval->add_option("--text", e_text, "aligned text summary");

  // sig
  auto* cmd_sig = app.add_subcommand("sig", "paired t-test between two run files");
  std::string g_run_a, g_run_b, g_qrels, g_metric = "ndcg10", g_out;
  int g_threshold = 2, g_comparisons = 1;
  cmd_sig->add_option("--run-a", g_run_a)->required();
  cmd_sig->add_option("--run-b", g_run_b)->required();
  cmd_sig->add_option("--qrels", g_qrels)->required();
  cmd_sig->add_option("--metric", g_metric, "ndcg1|ndcg10|map|mrr");
  cmd_sig->add_option("--threshold", g_threshold, "binary relevance threshold");
  cmd_sig->add_option("--num-comparisons", g_comparisons, "Bonferroni correction count");
  cmd_sig->add_option("--out", g_out, "result TSV")->required();

  // diff
  auto* cmd_diff = app.add_subcommand("diff", "per-query improvement/degradation counts");
  std::string d_run_a, d_run_b, d_qrels, d_out;
  int d_threshold = 2;
  double d_bound = 0.01;
  cmd_diff->add_option("--run-a", d_run_a)->required();
  cmd_diff->add_option("--run-b", d_run_b)->required();
  cmd_diff->add_option("--qrels", d_qrels)->required();
  cmd_diff->add_option("--threshold", d_threshold, "binary relevance threshold");
  cmd_diff->add_option("--bound", d_bound, "notable-change bound");
  cmd_diff->add_option("--out", d_out, "result TSV")->required();

  // gen-synthetic
  auto* cmd_gen = app.add_subcommand("gen-synthetic", "write a synthetic test collection");
  SyntheticSpec spec;
  std::string gen_out_dir;
  cmd_gen->add_option("--queries", spec.num_queries, "query count");
  cmd_gen->add_option("--pool", spec.docs_per_query_pool, "documents per query");
  cmd_gen->add_option("--vocab", spec.vocab_size, "vocabulary size");
  cmd_gen->add_option("--topic-terms", spec.topic_terms_per_query, "topic terms per query");
  cmd_gen->add_option("--noise", spec.noise_rate, "topic-term leak probability");
  cmd_gen->add_option("--relevant", spec.relevant_per_query, "relevant documents per query");
  cmd_gen->add_option("--seed", spec.seed, "generator seed");
  cmd_gen->add_option("--out-dir", gen_out_dir, "output directory")->required();

  // curves
  auto* cmd_curves = app.add_subcommand("curves", "export per-iteration metric curves");
  std::string c_run_dir, c_out;
  cmd_curves->add_option("--run-dir", c_run_dir, "gws run directory")->required();
  cmd_curves->add_option("--out", c_out, "output CSV")->required();

  std::vector<const char*> argv;
  argv.push_back("gwsrank");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_index->parsed()) {
      Corpus corpus = ingest_documents(docs_path, parse_format(docs_format));
      InvertedIndex::build(corpus).save(index_out);
      std::cerr << "indexed " << corpus.doc_count() << " documents\n";
      return 0;
    }
    if (cmd_search->parsed()) {
      std::optional<InvertedIndex> index;
      if (!s_index.empty()) {
        index = InvertedIndex::load(s_index);
      } else if (!s_docs.empty()) {
        index = InvertedIndex::build(ingest_documents(s_docs, parse_format(s_docs_format)));
      } else {
        throw CLI::ValidationError("search", "either --index or --docs is required");
      }
      auto [queries, _] = ingest_queries_and_qrels(s_queries, std::nullopt);
      Bm25Params params{s_k1, s_b};
      write_run(bm25_rankings(*index, params, queries, s_k, s_threads), s_out, s_tag);
      return 0;
    }
    if (cmd_gws->parsed()) {
      gws_cli.ws_mode = false;
      return run_gws_command(gws_cli, cmd_gws);
    }
    if (cmd_ws->parsed()) {
      gws_cli.ws_mode = true;
      return run_gws_command(gws_cli, cmd_ws);
    }
    if (cmd_eval->parsed()) {
      auto record = evaluate_run_file(e_run, e_qrels, e_threshold);
      write_metrics_tsv(record, e_out);
      if (!e_per_query.empty()) write_per_query_tsv(record, e_per_query);
      if (!e_text.empty()) write_metrics_text(record, e_text);
      return 0;
    }
    if (cmd_sig->parsed()) {
      auto record_a = evaluate_run_file(g_run_a, g_qrels, g_threshold);
      auto record_b = evaluate_run_file(g_run_b, g_qrels, g_threshold);
      auto result = paired_t_test(metric_vector(record_a, g_metric),
                                  metric_vector(record_b, g_metric), g_comparisons);
      std::ofstream out(g_out);
      if (!out) throw std::runtime_error("cannot write sig file: " + g_out);
      out << "metric\t" << g_metric << "\nt_statistic\t" << fmt6(result.t_statistic)
          << "\np_value\t" << fmt6(result.p_value) << "\nsignificant\t"
          << (result.significant ? 1 : 0) << "\n";
      return 0;
    }
    if (cmd_diff->parsed()) {
      auto record_a = evaluate_run_file(d_run_a, d_qrels, d_threshold);
      auto record_b = evaluate_run_file(d_run_b, d_qrels, d_threshold);
      auto diff = per_query_diff(record_a, record_b, d_bound);
      std::ofstream out(d_out);
      if (!out) throw std::runtime_error("cannot write diff file: " + d_out);
      out << "metric\timproved\tdegraded\tunchanged\timproved_frac\tdegraded_frac\t"
             "unchanged_frac\n";
      auto row = [&](const char* name, const DiffCounts& c) {
        out << name << '\t' << c.improved << '\t' << c.degraded << '\t' << c.unchanged << '\t'
            << fmt6(c.improved_fraction) << '\t' << fmt6(c.degraded_fraction) << '\t'
            << fmt6(c.unchanged_fraction) << '\n';
      };
      row("ndcg_at_1", diff.ndcg_at_1);
      row("ndcg_at_10", diff.ndcg_at_10);
      row("map", diff.map);
      row("mrr", diff.mrr);
      return 0;
    }
    if (cmd_gen->parsed()) {
      auto paths = gen_synthetic(spec, gen_out_dir);
      std::cerr << "wrote " << paths.corpus << ", " << paths.queries << ", " << paths.qrels
                << "\n";
      return 0;
    }
    if (cmd_curves->parsed()) {
      auto report = read_iterations_tsv(c_run_dir + "/iterations.tsv");
      export_iteration_curves(report, c_out);
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const TrainingError& e) {
    std::cerr << "training error: " << e.what() << "\n";
    return 5;
  } catch (const std::invalid_argument& e) {
    std::cerr << "contract error: " << e.what() << "\n";
    return 4;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace gwsrank
