#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "gwsrank/corpus.hpp"
#include "gwsrank/eval.hpp"
#include "gwsrank/index.hpp"

namespace testutil {

// Scratch directory removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& name) {
    path_ = (std::filesystem::temp_directory_path() / ("gwsrank_" + name)).string();
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::string& path() const { return path_; }
  std::string file(const std::string& name) const { return path_ + "/" + name; }

 private:
  std::string path_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline gwsrank::Corpus make_corpus(const std::vector<std::pair<std::string, std::string>>& docs) {
  gwsrank::Corpus corpus;
  for (const auto& [id, text] : docs) {
    gwsrank::Document d;
    d.doc_id = id;
    d.text = text;
    d.tokens = gwsrank::tokenize(text);
    corpus.add(std::move(d));
  }
  return corpus;
}

inline gwsrank::Query make_query(const std::string& id, const std::string& text) {
  gwsrank::Query q;
  q.query_id = id;
  q.text = text;
  q.tokens = gwsrank::tokenize(text);
  return q;
}

// --- Independent metric references (brute force, kept separate from the
// --- implementations they check).

inline double ref_ndcg(const std::vector<std::string>& ranked_docs,
                       const std::map<std::string, int>& judged, std::size_t cutoff) {
  std::vector<int> all_relevant;
  for (const auto& [_, g] : judged) {
    if (g > 0) all_relevant.push_back(g);
  }
  if (all_relevant.empty()) return 0.0;
  std::sort(all_relevant.begin(), all_relevant.end(), std::greater<>());

  double dcg = 0.0;
  for (std::size_t r = 0; r < ranked_docs.size() && r < cutoff; ++r) {
    auto it = judged.find(ranked_docs[r]);
    int g = it == judged.end() ? 0 : it->second;
    dcg += (std::pow(2.0, g) - 1.0) / (std::log(r + 2.0) / std::log(2.0));
  }
  double idcg = 0.0;
  for (std::size_t r = 0; r < all_relevant.size() && r < cutoff; ++r) {
    idcg += (std::pow(2.0, all_relevant[r]) - 1.0) / (std::log(r + 2.0) / std::log(2.0));
  }
  return dcg / idcg;
}

inline double ref_ap(const std::vector<std::string>& ranked_docs,
                     const std::map<std::string, int>& judged, int threshold) {
  double sum = 0.0;
  int rel_seen = 0;
  for (std::size_t r = 0; r < ranked_docs.size(); ++r) {
    auto it = judged.find(ranked_docs[r]);
    if (it != judged.end() && it->second >= threshold) {
      ++rel_seen;
      sum += static_cast<double>(rel_seen) / static_cast<double>(r + 1);
    }
  }
  return rel_seen == 0 ? 0.0 : sum / rel_seen;
}

inline double ref_rr(const std::vector<std::string>& ranked_docs,
                     const std::map<std::string, int>& judged, int threshold) {
  for (std::size_t r = 0; r < ranked_docs.size(); ++r) {
    auto it = judged.find(ranked_docs[r]);
    if (it != judged.end() && it->second >= threshold) return 1.0 / (r + 1);
  }
  return 0.0;
}

}  // namespace testutil
