#include "gwsrank/run_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace gwsrank {

void write_run(const std::vector<RunRanking>& rankings, const std::string& path,
               const std::string& tag) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write run file: " + path);
  char buf[64];
  for (const auto& ranking : rankings) {
    if (ranking.doc_ids.size() != ranking.scores.size()) {
      throw std::invalid_argument("write_run: doc_ids and scores differ in length");
    }
    for (std::size_t r = 0; r < ranking.doc_ids.size(); ++r) {
      std::snprintf(buf, sizeof(buf), "%.6f", ranking.scores[r]);
      out << ranking.query_id << " Q0 " << ranking.doc_ids[r] << ' ' << (r + 1) << ' ' << buf
          << ' ' << tag << '\n';
    }
  }
}

std::vector<RunRanking> parse_run(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open run file: " + path);

  std::vector<RunRanking> rankings;
  std::size_t current = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string qid, q0, docid, tag;
    std::size_t rank = 0;
    double score = 0.0;
    if (!(fields >> qid >> q0 >> docid >> rank >> score >> tag)) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected \"qid Q0 docid rank score tag\"");
    }
    if (rankings.empty() || rankings.back().query_id != qid) {
      rankings.push_back({qid, {}, {}});
      current = rankings.size() - 1;
    }
    rankings[current].doc_ids.push_back(docid);
    rankings[current].scores.push_back(score);
  }

  for (auto& ranking : rankings) {
    bool sorted = true;
    for (std::size_t r = 1; r < ranking.scores.size(); ++r) {
      if (ranking.scores[r] > ranking.scores[r - 1]) {
        sorted = false;
        break;
      }
    }
    if (sorted) continue;
    std::cerr << "warning: run file " << path << " query " << ranking.query_id
              << " has non-monotone scores, re-sorting\n";
    std::vector<std::size_t> order(ranking.doc_ids.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return ranking.scores[a] > ranking.scores[b];
    });
    RunRanking fixed{ranking.query_id, {}, {}};
    for (std::size_t i : order) {
      fixed.doc_ids.push_back(ranking.doc_ids[i]);
      fixed.scores.push_back(ranking.scores[i]);
    }
    ranking = std::move(fixed);
  }
  return rankings;
}

}  // namespace gwsrank
