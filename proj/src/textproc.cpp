#include "microfilter/textproc.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace microfilter {

namespace {

bool is_token_char(unsigned char c) {
  // Bytes >= 0x80 keep multi-byte UTF-8 sequences inside one token.
  return std::isalnum(c) || c >= 0x80;
}

char lower(unsigned char c) {
  return static_cast<char>(std::tolower(c));
}

std::string strip_urls(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    bool at_url = text.compare(pos, 7, "http://") == 0 ||
                  text.compare(pos, 8, "https://") == 0;
    if (at_url) {
      while (pos < text.size() &&
             !std::isspace(static_cast<unsigned char>(text[pos])))
        ++pos;
    } else {
      out.push_back(text[pos++]);
    }
  }
  return out;
}

}  // namespace

void FeatureBag::add(const std::string& feature, int n) {
  if (n == 0) return;
  auto it = counts_.find(feature);
  if (it == counts_.end()) {
    if (n > 0) counts_.emplace(feature, n);
    return;
  }
  it->second += n;
  if (it->second <= 0) counts_.erase(it);
}

void FeatureBag::merge(const FeatureBag& other) {
  for (const auto& [f, n] : other.counts_) add(f, n);
}

int FeatureBag::count(const std::string& feature) const {
  auto it = counts_.find(feature);
  return it == counts_.end() ? 0 : it->second;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::string clean = strip_urls(text);
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < clean.size()) {
    unsigned char c = clean[i];
    if (c == '#' && i + 1 < clean.size() &&
        is_token_char(static_cast<unsigned char>(clean[i + 1]))) {
      std::string tok = "#";
      ++i;
      while (i < clean.size() && is_token_char(clean[i]))
        tok.push_back(lower(clean[i++]));
      tokens.push_back(std::move(tok));
    } else if (is_token_char(c)) {
      std::string tok;
      while (i < clean.size() && is_token_char(clean[i]))
        tok.push_back(lower(clean[i++]));
      tokens.push_back(std::move(tok));
    } else {
      // '@' and all other punctuation separate tokens and are dropped.
      ++i;
    }
  }
  return tokens;
}

std::vector<std::string> remove_stopwords(
    const std::vector<std::string>& tokens,
    const std::unordered_set<std::string>& stopwords) {
  std::vector<std::string> kept;
  kept.reserve(tokens.size());
  for (const auto& t : tokens)
    if (!stopwords.count(t)) kept.push_back(t);
  return kept;
}

std::unordered_set<std::string> load_stopwords(std::istream& in) {
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
      line.pop_back();
    if (!line.empty()) words.insert(line);
  }
  return words;
}

LancasterStemmer LancasterStemmer::from_stream(std::istream& in) {
  LancasterStemmer stemmer;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t i = 0;
    std::string reversed_ending;
    while (i < line.size() && std::isalpha(static_cast<unsigned char>(line[i])))
      reversed_ending.push_back(line[i++]);
    if (reversed_ending.empty() || i >= line.size())
      throw std::runtime_error("bad stemmer rule: " + line);
    Rule rule;
    rule.ending.assign(reversed_ending.rbegin(), reversed_ending.rend());
    if (line[i] == '*') {
      rule.intact_only = true;
      ++i;
    }
    if (i >= line.size() || !std::isdigit(static_cast<unsigned char>(line[i])))
      throw std::runtime_error("bad stemmer rule: " + line);
    rule.remove = line[i++] - '0';
    while (i < line.size() && std::isalpha(static_cast<unsigned char>(line[i])))
      rule.append.push_back(line[i++]);
    if (i >= line.size() || (line[i] != '.' && line[i] != '>'))
      throw std::runtime_error("bad stemmer rule: " + line);
    rule.continue_after = line[i] == '>';
    stemmer.rules_[rule.ending.back()].push_back(std::move(rule));
    ++stemmer.rule_count_;
  }
  return stemmer;
}

namespace {

bool is_vowel(char c) { return c && std::strchr("aeiou", c) != nullptr; }
bool is_vowel_or_y(char c) { return c && std::strchr("aeiouy", c) != nullptr; }

// A candidate stem is kept only if enough of the word survives: two
// letters when it starts with a vowel, otherwise three letters of which
// the second or third is a vowel (y counts).
bool acceptable(const std::string& stem) {
  if (stem.empty()) return false;
  if (is_vowel(stem[0])) return stem.size() >= 2;
  return stem.size() >= 3 && (is_vowel_or_y(stem[1]) || is_vowel_or_y(stem[2]));
}

}  // namespace

std::string LancasterStemmer::stem(const std::string& token) const {
  for (unsigned char c : token)
    if (!std::isalpha(c) || std::isupper(c)) return token;

  std::string word = token;
  bool intact = true;
  while (!word.empty()) {
    auto bucket = rules_.find(word.back());
    if (bucket == rules_.end()) break;
    bool applied = false;
    for (const Rule& rule : bucket->second) {
      if (rule.ending.size() > word.size()) continue;
      if (word.compare(word.size() - rule.ending.size(), rule.ending.size(),
                       rule.ending) != 0)
        continue;
      if (rule.intact_only && !intact) continue;
      if (static_cast<std::size_t>(rule.remove) > word.size()) continue;
      std::string candidate = word.substr(0, word.size() - rule.remove);
      candidate += rule.append;
      if (!acceptable(candidate)) continue;
      word = std::move(candidate);
      intact = false;
      applied = true;
      if (!rule.continue_after) return word;
      break;
    }
    if (!applied) break;
  }
  return word;
}

std::vector<std::string> bigram_features(const std::vector<std::string>& tokens) {
  std::vector<std::string> features;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i)
    features.push_back("bigram:" + tokens[i] + "_" + tokens[i + 1]);
  return features;
}

UnigramModel UnigramModel::from_stream(std::istream& in) {
  UnigramModel model;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("unigram model line " + std::to_string(line_no) +
                               ": expected word<TAB>count");
    std::string word = line.substr(0, tab);
    std::int64_t count = std::stoll(line.substr(tab + 1));
    if (count <= 0)
      throw std::runtime_error("unigram model line " + std::to_string(line_no) +
                               ": non-positive count");
    model.add(word, count);
  }
  return model;
}

void UnigramModel::add(const std::string& word, std::int64_t count) {
  counts_[word] += count;
  total_ += count;
}

double UnigramModel::log_prob(const std::string& word) const {
  // total == 0 degenerates to the unknown-word floor with total = 1.
  double log_total = std::log(static_cast<double>(std::max<std::int64_t>(total_, 1)));
  auto it = counts_.find(word);
  if (it != counts_.end())
    return std::log(static_cast<double>(it->second)) - log_total;
  return -log_total - static_cast<double>(word.size()) * std::log(10.0);
}

bool UnigramModel::known(const std::string& word) const {
  return counts_.count(word) > 0;
}

std::vector<std::string> segment_hashtag(const std::string& tag,
                                         const UnigramModel& model) {
  if (tag.empty()) return {};
  if (tag.size() > 30) return {tag};

  struct Best {
    double score;
    std::vector<std::string> words;
    bool set = false;
  };
  std::vector<Best> best(tag.size() + 1);
  best[0] = {0.0, {}, true};
  for (std::size_t end = 1; end <= tag.size(); ++end) {
    for (std::size_t start = 0; start < end; ++start) {
      if (!best[start].set) continue;
      std::string word = tag.substr(start, end - start);
      double score = best[start].score + model.log_prob(word);
      Best& slot = best[end];
      bool better = false;
      if (!slot.set || score > slot.score) {
        better = true;
      } else if (score == slot.score) {
        std::vector<std::string> candidate = best[start].words;
        candidate.push_back(word);
        if (candidate.size() < slot.words.size() ||
            (candidate.size() == slot.words.size() && candidate < slot.words))
          better = true;
      }
      if (better) {
        slot.score = score;
        slot.words = best[start].words;
        slot.words.push_back(std::move(word));
        slot.set = true;
      }
    }
  }
  return best[tag.size()].words;
}

namespace {

void extract_from_source(const std::string& source, const TextAnalyzer& analyzer,
                         FeatureBag& bag) {
  std::vector<std::string> tokens = tokenize(source);
  for (const auto& b : bigram_features(tokens)) bag.add(b);
  for (const auto& tok : tokens) {
    if (tok.size() > 1 && tok[0] == '#') {
      std::string tag = tok.substr(1);
      bag.add("hashtag:" + tag);
      for (const auto& w : segment_hashtag(tag, analyzer.unigrams)) {
        bag.add("word:" + w);
        bag.add("stem:" + analyzer.stemmer.stem(w));
      }
    } else if (!analyzer.stopwords.count(tok)) {
      bag.add("word:" + tok);
      bag.add("stem:" + analyzer.stemmer.stem(tok));
    }
  }
}

}  // namespace

FeatureBag extract_features(const Micropost& post, const TextAnalyzer& analyzer) {
  FeatureBag bag;
  extract_from_source(post.text, analyzer, bag);
  for (const auto& title : post.url_titles)
    extract_from_source(title, analyzer, bag);
  return bag;
}

FeatureBag extract_features_text(const std::string& text,
                                 const TextAnalyzer& analyzer) {
  FeatureBag bag;
  extract_from_source(text, analyzer, bag);
  return bag;
}

}  // namespace microfilter
