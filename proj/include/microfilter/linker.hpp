#pragma once

#include <string>
#include <utility>
#include <vector>

#include "microfilter/kb.hpp"
#include "microfilter/textproc.hpp"

namespace microfilter {

struct LinkerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A mention matched in a token sequence; spans never overlap within one
// spotting result.
struct SpottedMention {
  std::string surface;       // normalized, space-joined
  std::size_t token_begin = 0;
  std::size_t token_end = 0;  // exclusive
  double lp = 0.0;
};

enum class ExpansionMethod { none, exp1, exp2, exp2_1ent, exp3 };

ExpansionMethod parse_expansion_method(const std::string& name);
std::string to_string(ExpansionMethod method);

struct ExpansionConfig {
  ExpansionMethod method = ExpansionMethod::exp2;
  double rho = 0.1;      // candidate features kept when p > rho, strictly
  double min_lp = 0.2;   // minimum link probability to spot a mention
  // Surface forms considered per entity in exp3, top by commonness.
  std::size_t max_surface_forms = 1000;
};

// Greedy left-to-right longest match of token n-grams (n up to 6)
// against KB mentions with lp >= min_lp. Matched spans are consumed.
std::vector<SpottedMention> spot(const KnowledgeBase& kb,
                                 const std::vector<std::string>& tokens,
                                 double min_lp);

// Candidate entities of a mention ranked by p_en = lp * cm, descending,
// ties by entity id.
std::vector<std::pair<std::string, double>> candidates(
    const KnowledgeBase& kb, const std::string& mention);

// Adds expansion features ("ment:", "ent:", "sf:") to the bag in place.
// Never removes or decrements anything already present.
void expand(FeatureBag& bag, const std::vector<SpottedMention>& spots,
            const KnowledgeBase& kb, const ExpansionConfig& config);

// Full per-post pipeline: text features plus expansion from mentions
// spotted in the text, each url title, and each segmented hashtag (each
// source spotted independently).
struct Pipeline {
  const TextAnalyzer* analyzer = nullptr;
  const KnowledgeBase* kb = nullptr;  // may be null when method == none
  ExpansionConfig expansion;

  FeatureBag process(const Micropost& post) const;
  FeatureBag process_text(const std::string& text) const;
};

}  // namespace microfilter
