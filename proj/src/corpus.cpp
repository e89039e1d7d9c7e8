#include "microfilter/corpus.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace microfilter {

using nlohmann::json;

void RelevanceJudgments::set(const std::string& query_id,
                             const std::string& post_id, int grade) {
  by_query_[query_id][post_id] = grade;
}

std::optional<int> RelevanceJudgments::grade(const std::string& query_id,
                                             const std::string& post_id) const {
  auto q = by_query_.find(query_id);
  if (q == by_query_.end()) return std::nullopt;
  auto p = q->second.find(post_id);
  if (p == q->second.end()) return std::nullopt;
  return p->second;
}

std::size_t RelevanceJudgments::size() const {
  std::size_t n = 0;
  for (const auto& [_, posts] : by_query_) n += posts.size();
  return n;
}

std::vector<std::string> scan_urls(const std::string& text) {
  std::vector<std::string> urls;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t http = text.find("http://", pos);
    std::size_t https = text.find("https://", pos);
    std::size_t start = std::min(http, https);
    if (start == std::string::npos) break;
    std::size_t end = start;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end])))
      ++end;
    urls.push_back(text.substr(start, end - start));
    pos = end;
  }
  return urls;
}

std::vector<Micropost> parse_corpus(std::istream& in) {
  std::vector<Micropost> posts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw CorpusError("corpus line " + std::to_string(line_no) +
                        ": invalid JSON: " + e.what());
    }
    Micropost p;
    try {
      p.id = obj.at("id").get<std::string>();
      p.timestamp = obj.at("ts").get<std::int64_t>();
      p.text = obj.at("text").get<std::string>();
      if (obj.contains("urls")) p.urls = obj["urls"].get<std::vector<std::string>>();
      if (obj.contains("titles"))
        p.url_titles = obj["titles"].get<std::vector<std::string>>();
    } catch (const json::exception& e) {
      throw CorpusError("corpus line " + std::to_string(line_no) +
                        ": missing or mistyped field: " + e.what());
    }
    if (p.id.empty())
      throw CorpusError("corpus line " + std::to_string(line_no) + ": empty id");
    for (auto& u : scan_urls(p.text)) {
      if (std::find(p.urls.begin(), p.urls.end(), u) == p.urls.end())
        p.urls.push_back(std::move(u));
    }
    if (!posts.empty() && p.timestamp < posts.back().timestamp) {
      throw CorpusError("corpus not timestamp-ordered: post '" + p.id +
                        "' (ts " + std::to_string(p.timestamp) +
                        ") follows '" + posts.back().id + "' (ts " +
                        std::to_string(posts.back().timestamp) + ")");
    }
    posts.push_back(std::move(p));
  }
  return posts;
}

void write_corpus(std::ostream& out, const std::vector<Micropost>& posts) {
  for (const auto& p : posts) {
    json obj;
    obj["id"] = p.id;
    obj["ts"] = p.timestamp;
    obj["text"] = p.text;
    if (!p.urls.empty()) obj["urls"] = p.urls;
    if (!p.url_titles.empty()) obj["titles"] = p.url_titles;
    out << obj.dump() << '\n';
  }
}

RelevanceJudgments parse_qrels(std::istream& in,
                               std::vector<std::string>* warnings) {
  RelevanceJudgments judgments;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string topic, unused, docid, grade_str;
    if (!(fields >> topic >> unused >> docid >> grade_str))
      throw CorpusError("qrels line " + std::to_string(line_no) +
                        ": expected `topic 0 docid grade`");
    int grade = 0;
    try {
      std::size_t consumed = 0;
      grade = std::stoi(grade_str, &consumed);
      if (consumed != grade_str.size()) throw std::invalid_argument(grade_str);
    } catch (const std::exception&) {
      throw CorpusError("qrels line " + std::to_string(line_no) +
                        ": non-integer grade '" + grade_str + "'");
    }
    if (judgments.grade(topic, docid) && warnings) {
      warnings->push_back("qrels line " + std::to_string(line_no) +
                          ": duplicate pair (" + topic + ", " + docid +
                          "), last grade wins");
    }
    judgments.set(topic, docid, grade);
  }
  return judgments;
}

std::vector<FilterQuery> parse_topics(std::istream& in) {
  std::vector<FilterQuery> topics;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw CorpusError("topics line " + std::to_string(line_no) +
                        ": invalid JSON: " + e.what());
    }
    FilterQuery q;
    try {
      q.query_id = obj.at("query_id").get<std::string>();
      q.text = obj.at("text").get<std::string>();
      q.first_relevant_id = obj.at("first_relevant_id").get<std::string>();
      q.start_timestamp = obj.at("start_ts").get<std::int64_t>();
    } catch (const json::exception& e) {
      throw CorpusError("topics line " + std::to_string(line_no) +
                        ": missing or mistyped field: " + e.what());
    }
    if (q.first_relevant_id.empty())
      throw CorpusError("topics line " + std::to_string(line_no) +
                        ": empty first_relevant_id");
    topics.push_back(std::move(q));
  }
  return topics;
}

}  // namespace microfilter
