#include "gwsrank/corpus.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace gwsrank {

namespace {

bool is_token_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

char to_lower_ascii(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (is_token_char(c)) {
      current.push_back(to_lower_ascii(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

void QrelSet::set(const std::string& query_id, const std::string& doc_id, int grade) {
  judgments_[query_id][doc_id] = grade;
}

int QrelSet::grade(const std::string& query_id, const std::string& doc_id) const {
  auto q = judgments_.find(query_id);
  if (q == judgments_.end()) return 0;
  auto d = q->second.find(doc_id);
  return d == q->second.end() ? 0 : d->second;
}

bool QrelSet::has_query(const std::string& query_id) const {
  return judgments_.count(query_id) > 0;
}

const std::unordered_map<std::string, int>& QrelSet::judged(const std::string& query_id) const {
  static const std::unordered_map<std::string, int> empty;
  auto q = judgments_.find(query_id);
  return q == judgments_.end() ? empty : q->second;
}

std::size_t QrelSet::size() const {
  std::size_t n = 0;
  for (const auto& [_, docs] : judgments_) n += docs.size();
  return n;
}

void Corpus::add(Document doc) {
  if (doc.doc_id.empty()) throw std::runtime_error("document with empty doc_id");
  auto [it, inserted] = id_to_index_.emplace(doc.doc_id, docs_.size());
  if (!inserted) throw std::runtime_error("duplicate doc_id: " + doc.doc_id);
  total_tokens_ += doc.tokens.size();
  docs_.push_back(std::move(doc));
}

const Document* Corpus::find(const std::string& doc_id) const {
  auto it = id_to_index_.find(doc_id);
  return it == id_to_index_.end() ? nullptr : &docs_[it->second];
}

namespace {

Document make_document(std::string id, std::string text) {
  Document doc;
  doc.doc_id = std::move(id);
  doc.tokens = tokenize(text);
  doc.text = std::move(text);
  return doc;
}

Corpus ingest_tsv(std::istream& in, const std::string& path) {
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected \"doc_id\\ttext\"");
    }
    corpus.add(make_document(line.substr(0, tab), line.substr(tab + 1)));
  }
  return corpus;
}

Corpus ingest_jsonl(std::istream& in, const std::string& path) {
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object() || !record.contains("id") ||
        !record.contains("text") || !record["id"].is_string() || !record["text"].is_string()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected {\"id\": ..., \"text\": ...}");
    }
    corpus.add(make_document(record["id"].get<std::string>(), record["text"].get<std::string>()));
  }
  return corpus;
}

}  // namespace

Corpus ingest_documents(const std::string& path, CorpusFormat format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open document file: " + path);
  return format == CorpusFormat::tsv ? ingest_tsv(in, path) : ingest_jsonl(in, path);
}

std::pair<std::vector<Query>, QrelSet> ingest_queries_and_qrels(
    const std::string& query_path, const std::optional<std::string>& qrels_path) {
  std::ifstream in(query_path);
  if (!in) throw std::runtime_error("cannot open query file: " + query_path);

  std::vector<Query> queries;
  std::unordered_map<std::string, bool> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw std::runtime_error(query_path + ":" + std::to_string(line_no) +
                               ": expected \"query_id\\ttext\"");
    }
    Query q;
    q.query_id = line.substr(0, tab);
    q.text = line.substr(tab + 1);
    q.tokens = tokenize(q.text);
    if (seen.count(q.query_id)) {
      throw std::runtime_error(query_path + ":" + std::to_string(line_no) +
                               ": duplicate query_id: " + q.query_id);
    }
    seen[q.query_id] = true;
    if (q.tokens.empty()) {
      std::cerr << "warning: query " << q.query_id << " has no tokens, dropped\n";
      continue;
    }
    queries.push_back(std::move(q));
  }

  QrelSet qrels;
  if (qrels_path) {
    std::ifstream qin(*qrels_path);
    if (!qin) throw std::runtime_error("cannot open qrels file: " + *qrels_path);
    line_no = 0;
    while (std::getline(qin, line)) {
      ++line_no;
      if (line.empty()) continue;
      std::istringstream fields(line);
      std::string qid, unused, docid, grade_str;
      if (!(fields >> qid >> unused >> docid >> grade_str)) {
        throw std::runtime_error(*qrels_path + ":" + std::to_string(line_no) +
                                 ": expected \"qid 0 docid grade\"");
      }
      int grade = 0;
      try {
        std::size_t pos = 0;
        grade = std::stoi(grade_str, &pos);
        if (pos != grade_str.size()) throw std::invalid_argument(grade_str);
      } catch (const std::exception&) {
        throw std::runtime_error(*qrels_path + ":" + std::to_string(line_no) +
                                 ": cannot parse grade: " + grade_str);
      }
      if (grade < 0 || grade > 3) {
        throw std::runtime_error(*qrels_path + ":" + std::to_string(line_no) +
                                 ": grade out of range [0,3]: " + grade_str);
      }
      if (!seen.count(qid)) {
        std::cerr << "warning: qrels reference unknown query " << qid << " (kept)\n";
        seen[qid] = false;  // warn once per query
      }
      qrels.set(qid, docid, grade);
    }
  }
  return {std::move(queries), std::move(qrels)};
}

void write_corpus_tsv(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write corpus file: " + path);
  for (const auto& doc : corpus.documents()) {
    std::string text = doc.text;
    for (char& c : text) {
      if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    }
    out << doc.doc_id << '\t' << text << '\n';
  }
}

}  // namespace gwsrank
