#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace microfilter {

struct KbError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mention/entity link statistics answering link probability lp(m),
// commonness cm(m, e), and surface-form sets SF(e). Immutable once
// built; concurrent readers are fine.
class KnowledgeBase {
 public:
  struct Record {
    std::string mention;
    std::string entity;
    std::int64_t pair_link_count = 0;
    std::int64_t occurrence_count = 0;
  };

  struct Stats {
    std::size_t mentions = 0;
    std::size_t entities = 0;
    std::size_t pairs = 0;
  };

  static KnowledgeBase build(const std::vector<Record>& records);

  // TSV: mention<TAB>entity<TAB>pair_link_count<TAB>mention_occurrence_count
  static KnowledgeBase from_tsv(std::istream& in);

  // Versioned binary snapshot for fast reload.
  void save_snapshot(std::ostream& out) const;
  static KnowledgeBase load_snapshot(std::istream& in);

  // Lowercase, whitespace collapsed to single spaces, trimmed.
  static std::string normalize(const std::string& mention);

  // link_count(m) / occurrence_count(m); 0 for unknown mentions.
  double link_probability(const std::string& mention) const;

  // pair_link_count(m, e) / link_count(m); 0 if unknown or never linked.
  double commonness(const std::string& mention, const std::string& entity) const;

  // Entities of a mention with their pair link counts, unordered.
  const std::vector<std::pair<std::string, std::int64_t>>* entities_of(
      const std::string& mention) const;

  // {(m, cm(m, e)) : cm(m, e) > 0}, sorted by mention.
  std::vector<std::pair<std::string, double>> surface_forms(
      const std::string& entity) const;

  bool has_mention(const std::string& mention) const;
  std::vector<std::string> mentions() const;
  Stats stats() const;

  // Longest mention measured in whitespace-separated words; bounds the
  // spotter's n-gram window.
  std::size_t max_mention_words() const { return max_mention_words_; }

 private:
  struct MentionInfo {
    std::int64_t occurrence = 0;
    std::int64_t linked = 0;
    std::vector<std::pair<std::string, std::int64_t>> entity_links;
  };

  std::unordered_map<std::string, MentionInfo> mentions_;
  std::unordered_map<std::string, std::vector<std::string>> entity_index_;
  std::size_t max_mention_words_ = 0;
};

}  // namespace microfilter
