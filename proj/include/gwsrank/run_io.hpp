#pragma once

#include <string>
#include <vector>

#include "gwsrank/eval.hpp"

namespace gwsrank {

// 6-column TREC run format: "qid Q0 docid rank score tag", rank from 1,
// scores with 6 decimal places.
void write_run(const std::vector<RunRanking>& rankings, const std::string& path,
               const std::string& tag);

// Lines with a rank/score order violating non-increasing scores trigger a
// warning and a re-sort by score.
std::vector<RunRanking> parse_run(const std::string& path);

}  // namespace gwsrank
