#pragma once

#include <istream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "microfilter/corpus.hpp"

namespace microfilter {

// Multiset of namespaced feature strings ("word:", "stem:", "bigram:",
// "hashtag:", and linker-added "ment:", "ent:", "sf:"). Counts are
// strictly positive; a feature at count zero is absent.
class FeatureBag {
 public:
  void add(const std::string& feature, int n = 1);
  void merge(const FeatureBag& other);
  int count(const std::string& feature) const;
  std::size_t distinct() const { return counts_.size(); }
  bool empty() const { return counts_.empty(); }

  auto begin() const { return counts_.begin(); }
  auto end() const { return counts_.end(); }

  bool operator==(const FeatureBag&) const = default;

 private:
  std::unordered_map<std::string, int> counts_;
};

// Lowercased tokens: maximal runs of letters/digits. Hashtags come out
// as "#"-prefixed tokens, URLs are removed before tokenization, and a
// leading "@" on user mentions is stripped.
std::vector<std::string> tokenize(const std::string& text);

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const std::unordered_set<std::string>& stopwords);

std::unordered_set<std::string> load_stopwords(std::istream& in);

// Paice/Husk rule-table stemmer. Rules load from the published one-rule-
// per-line format (reversed ending, optional '*' intact marker, digit to
// remove, optional append string, '.' stop / '>' continue).
class LancasterStemmer {
 public:
  static LancasterStemmer from_stream(std::istream& in);

  // Non-alphabetic tokens are returned unchanged.
  std::string stem(const std::string& token) const;

  std::size_t rule_count() const { return rule_count_; }

 private:
  struct Rule {
    std::string ending;  // in natural order
    bool intact_only = false;
    int remove = 0;
    std::string append;
    bool continue_after = false;
  };
  // Indexed by last letter of the ending.
  std::unordered_map<char, std::vector<Rule>> rules_;
  std::size_t rule_count_ = 0;
};

// "bigram:a_b" for each adjacent token pair. Callers pass tokens with
// stopwords retained.
std::vector<std::string> bigram_features(const std::vector<std::string>& tokens);

// Word frequency model backing hashtag segmentation.
class UnigramModel {
 public:
  static UnigramModel from_stream(std::istream& in);  // TSV word<TAB>count

  void add(const std::string& word, std::int64_t count);
  // log p(word); unknown words get the length-penalized floor
  // (1/total) * 10^-len.
  double log_prob(const std::string& word) const;
  bool known(const std::string& word) const;
  std::int64_t total() const { return total_; }

 private:
  std::unordered_map<std::string, std::int64_t> counts_;
  std::int64_t total_ = 0;
};

// Splits a hashtag (no leading '#') into the word sequence maximizing
// the sum of unigram log probabilities, by dynamic programming over
// split points. Ties: fewest words, then lexicographically smallest.
// Tags longer than 30 characters are returned unsegmented.
std::vector<std::string> segment_hashtag(const std::string& tag,
                                         const UnigramModel& model);

// Bundled text resources plus the feature extraction over them.
struct TextAnalyzer {
  std::unordered_set<std::string> stopwords;
  UnigramModel unigrams;
  LancasterStemmer stemmer;
};

// Namespaced features of one post: words/stems from stopword-filtered
// tokens of text and url titles, bigrams from unfiltered tokens, and
// hashtags in both original and segmented form.
FeatureBag extract_features(const Micropost& post, const TextAnalyzer& analyzer);

// Same extraction over a bare piece of text (used for query vectors).
FeatureBag extract_features_text(const std::string& text,
                                 const TextAnalyzer& analyzer);

}  // namespace microfilter
