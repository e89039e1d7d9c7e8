#include "microfilter/config.hpp"

#include <fstream>
#include <sstream>

namespace microfilter {

FilterParams EngineConfig::filter_params() const {
  return {alpha, beta, eta, url_gate};
}

ExpansionConfig EngineConfig::expansion_config() const {
  ExpansionConfig c;
  c.method = parse_expansion_method(method);
  c.rho = rho;
  c.min_lp = min_lp;
  return c;
}

UnjudgedPolicy EngineConfig::unjudged_policy() const {
  if (unjudged == "fp") return UnjudgedPolicy::count_fp;
  if (unjudged == "skip") return UnjudgedPolicy::skip;
  throw ConfigError("unjudged policy must be 'fp' or 'skip', got '" + unjudged + "'");
}

namespace {

void check_probability(const char* name, double value) {
  if (!(value >= 0.0 && value <= 1.0))
    throw ConfigError(std::string(name) + " must be in [0, 1], got " +
                      std::to_string(value));
}

void check_readable(const char* name, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in)
    throw ConfigError(std::string(name) + " path not readable: " + path);
}

}  // namespace

void EngineConfig::validate() const {
  check_probability("eta", eta);
  check_probability("rho", rho);
  check_probability("min_lp", min_lp);
  parse_expansion_method(method);
  unjudged_policy();
  check_readable("corpus", corpus_path);
  check_readable("topics", topics_path);
  check_readable("qrels", qrels_path);
  check_readable("kb", kb_path);
  check_readable("stopwords", stopwords_path);
  check_readable("unigrams", unigram_path);
  check_readable("rules", rules_path);
}

std::string EngineConfig::canonical() const {
  std::ostringstream out;
  out.precision(17);
  out << "alpha=" << alpha << "\nbeta=" << beta << "\neta=" << eta
      << "\nmethod=" << method << "\nrho=" << rho << "\nmin_lp=" << min_lp
      << "\nurl_gate=" << (url_gate ? 1 : 0) << "\ncorpus=" << corpus_path
      << "\ntopics=" << topics_path << "\nqrels=" << qrels_path
      << "\nkb=" << kb_path << "\nstopwords=" << stopwords_path
      << "\nunigrams=" << unigram_path << "\nrules=" << rules_path
      << "\nunjudged=" << unjudged << "\nworkers=" << workers
      << "\nseed=" << seed << "\n";
  return out.str();
}

std::string EngineConfig::fingerprint() const {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : canonical()) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << hash;
  return out.str();
}

void load_config_file(std::istream& in, EngineConfig& config) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    auto trim = [](std::string s) {
      std::size_t b = s.find_first_not_of(" \t\r");
      std::size_t e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string entry = trim(line);
    if (entry.empty()) continue;
    std::size_t eq = entry.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    std::string key = trim(entry.substr(0, eq));
    std::string value = trim(entry.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    try {
      if (key == "alpha") config.alpha = std::stod(value);
      else if (key == "beta") config.beta = std::stod(value);
      else if (key == "eta") config.eta = std::stod(value);
      else if (key == "method") config.method = value;
      else if (key == "rho") config.rho = std::stod(value);
      else if (key == "min_lp") config.min_lp = std::stod(value);
      else if (key == "url_gate") config.url_gate = value == "true" || value == "1";
      else if (key == "corpus") config.corpus_path = value;
      else if (key == "topics") config.topics_path = value;
      else if (key == "qrels") config.qrels_path = value;
      else if (key == "kb") config.kb_path = value;
      else if (key == "stopwords") config.stopwords_path = value;
      else if (key == "unigrams") config.unigram_path = value;
      else if (key == "rules") config.rules_path = value;
      else if (key == "unjudged") config.unjudged = value;
      else if (key == "workers") config.workers = std::stoul(value);
      else if (key == "seed") config.seed = std::stoull(value);
      else
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": unknown key '" + key + "'");
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": bad value for '" + key + "'");
    }
  }
}

}  // namespace microfilter
