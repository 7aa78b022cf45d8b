#include "gwsrank/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gwsrank {

namespace {

std::string fmt(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

std::string model_label(int model) {
  return model < 0 ? "bm25" : "m" + std::to_string(model);
}

}  // namespace

std::string iteration_curves_csv(const GwsReport& report) {
  if (report.curve_rows.empty()) throw std::invalid_argument("empty report");
  std::ostringstream out;
  out << "iteration,model,ndcg_at_1,ndcg_at_10,map,mrr\n";
  for (const auto& row : report.curve_rows) {
    out << row.iteration << ',' << model_label(row.model) << ',' << fmt(row.metrics.ndcg_at_1)
        << ',' << fmt(row.metrics.ndcg_at_10) << ',' << fmt(row.metrics.map) << ','
        << fmt(row.metrics.mrr) << '\n';
  }
  return out.str();
}

void export_iteration_curves(const GwsReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write curves file: " + path);
  out << iteration_curves_csv(report);
}

std::string report_tsv(const GwsReport& report) {
  if (report.curve_rows.empty()) throw std::invalid_argument("empty report");
  std::ostringstream out;
  out << "iteration\tmodel\tval_ndcg_at_10\tteacher_tag\n";
  for (const auto& row : report.curve_rows) {
    out << row.iteration << '\t' << model_label(row.model) << '\t'
        << fmt(row.metrics.ndcg_at_10) << '\t' << row.teacher_tag << '\n';
  }
  return out.str();
}

void write_report_tsv(const GwsReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report file: " + path);
  out << report_tsv(report);
}

void write_training_log_tsv(const GwsReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write training log: " + path);
  out << "iteration\tmodel\tkind\tteacher\tteacher_tag\tinit_seed\tsample_seed\tpairs\t"
         "val_ndcg_at_10\tselected\n";
  for (const auto& run : report.training_log) {
    out << run.iteration << '\t' << run.model << '\t' << run.kind << '\t' << run.teacher << '\t'
        << run.teacher_tag << '\t' << run.init_seed << '\t' << run.sample_seed << '\t'
        << run.pair_count << '\t' << fmt(run.val_ndcg10) << '\t' << (run.selected ? 1 : 0)
        << '\n';
  }
}

void write_iterations_tsv(const GwsReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write iterations file: " + path);
  out << "iteration\tmodel\tndcg_at_1\tndcg_at_10\tmap\tmrr\tteacher_tag\n";
  char buf[64];
  for (const auto& row : report.curve_rows) {
    out << row.iteration << '\t' << model_label(row.model);
    for (double v : {row.metrics.ndcg_at_1, row.metrics.ndcg_at_10, row.metrics.map,
                     row.metrics.mrr}) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << '\t' << buf;
    }
    out << '\t' << row.teacher_tag << '\n';
  }
}

GwsReport read_iterations_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open iterations file: " + path);
  GwsReport report;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty()) continue;  // header
    std::istringstream fields(line);
    std::string model, cell;
    CurveRow row;
    if (!std::getline(fields, cell, '\t')) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": corrupt row");
    }
    row.iteration = std::stoi(cell);
    std::getline(fields, model, '\t');
    row.model = model == "bm25" ? -1 : std::stoi(model.substr(1));
    for (double* v : {&row.metrics.ndcg_at_1, &row.metrics.ndcg_at_10, &row.metrics.map,
                      &row.metrics.mrr}) {
      if (!std::getline(fields, cell, '\t')) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": corrupt row");
      }
      *v = std::stod(cell);
    }
    std::getline(fields, row.teacher_tag);
    report.curve_rows.push_back(row);
  }
  return report;
}

}  // namespace gwsrank
