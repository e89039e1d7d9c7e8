#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace microfilter {

// One stream item. Timestamps are milliseconds since epoch and are
// mandatory: stream order is part of the task semantics.
struct Micropost {
  std::string id;
  std::int64_t timestamp = 0;
  std::string text;
  std::vector<std::string> urls;
  std::vector<std::string> url_titles;

  bool has_url() const { return !urls.empty(); }
};

// A standing filtering topic. The profile cannot be initialized without
// the id of the first relevant post, so it is a required field.
struct FilterQuery {
  std::string query_id;
  std::string text;
  std::string first_relevant_id;
  std::int64_t start_timestamp = 0;
};

struct CorpusError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// (query_id, post_id) -> grade. Absent pairs are explicitly unjudged.
class RelevanceJudgments {
 public:
  void set(const std::string& query_id, const std::string& post_id, int grade);

  // nullopt means unjudged, never a default grade.
  std::optional<int> grade(const std::string& query_id,
                           const std::string& post_id) const;

  std::size_t size() const;

 private:
  std::unordered_map<std::string, std::unordered_map<std::string, int>> by_query_;
};

// Detects URLs in raw text by scheme prefix ("http://", "https://").
std::vector<std::string> scan_urls(const std::string& text);

// JSON Lines corpus, one object per line: id, ts, text, urls?, titles?.
// Posts must arrive in non-decreasing timestamp order. URLs found in the
// text by scheme scan are merged into each post's url list.
std::vector<Micropost> parse_corpus(std::istream& in);

void write_corpus(std::ostream& out, const std::vector<Micropost>& posts);

// TREC qrels: `topic 0 docid grade`. Duplicate pairs: last wins, with a
// warning appended to `warnings` when provided.
RelevanceJudgments parse_qrels(std::istream& in,
                               std::vector<std::string>* warnings = nullptr);

// JSON Lines topics: query_id, text, first_relevant_id, start_ts.
std::vector<FilterQuery> parse_topics(std::istream& in);

}  // namespace microfilter
