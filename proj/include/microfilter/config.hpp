#pragma once

#include <cstdint>
#include <istream>
#include <string>

#include "microfilter/evalharness.hpp"
#include "microfilter/linker.hpp"

namespace microfilter {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fully resolved run configuration. Defaults are the tuned operating
// point: alpha=1, beta=0, expansion exp2 with rho=0.1, min_lp=0.2.
struct EngineConfig {
  double alpha = 1.0;
  double beta = 0.0;
  double eta = 0.5;
  std::string method = "exp2";
  double rho = 0.1;
  double min_lp = 0.2;
  bool url_gate = true;

  std::string corpus_path;
  std::string topics_path;
  std::string qrels_path;
  std::string kb_path;
  std::string stopwords_path;
  std::string unigram_path;
  std::string rules_path;

  std::string unjudged = "fp";  // fp | skip
  std::size_t workers = 1;
  std::uint64_t seed = 42;

  FilterParams filter_params() const;
  ExpansionConfig expansion_config() const;
  UnjudgedPolicy unjudged_policy() const;

  // Probabilities in range, referenced files readable.
  void validate() const;

  // Canonical key=value serialization; file paths included.
  std::string canonical() const;

  // FNV-1a hash of the canonical form, hex. Equal fingerprints mean
  // behaviorally identical runs.
  std::string fingerprint() const;
};

// key = value file, one pair per line, '#' comments. Unknown keys are
// rejected. Only keys present in the file are overwritten.
void load_config_file(std::istream& in, EngineConfig& config);

}  // namespace microfilter
