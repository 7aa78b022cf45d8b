#pragma once

#include <string>

#include "gwsrank/gws.hpp"

namespace gwsrank {

// CSV "iteration,model,ndcg_at_1,ndcg_at_10,map,mrr"; the iteration-0 row
// holds the weak labeler's metrics, then one row per (iteration, model).
void export_iteration_curves(const GwsReport& report, const std::string& path);
std::string iteration_curves_csv(const GwsReport& report);

// TSV "iteration\tmodel\tval_ndcg_at_10\tteacher_tag".
void write_report_tsv(const GwsReport& report, const std::string& path);
std::string report_tsv(const GwsReport& report);

// Full training-run audit (iteration, model, teacher slot + tag, seeds,
// pair count, validation NDCG@10, selected flag).
void write_training_log_tsv(const GwsReport& report, const std::string& path);

// Full-fidelity curve rows, the input format of the `curves` subcommand.
void write_iterations_tsv(const GwsReport& report, const std::string& path);
GwsReport read_iterations_tsv(const std::string& path);

}  // namespace gwsrank
