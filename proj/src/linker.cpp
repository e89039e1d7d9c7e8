#include "microfilter/linker.hpp"

#include <algorithm>

namespace microfilter {

ExpansionMethod parse_expansion_method(const std::string& name) {
  if (name == "none") return ExpansionMethod::none;
  if (name == "exp1") return ExpansionMethod::exp1;
  if (name == "exp2") return ExpansionMethod::exp2;
  if (name == "exp2-1ent" || name == "exp2_1ent") return ExpansionMethod::exp2_1ent;
  if (name == "exp3") return ExpansionMethod::exp3;
  throw LinkerError("unknown expansion method '" + name + "'");
}

std::string to_string(ExpansionMethod method) {
  switch (method) {
    case ExpansionMethod::none: return "none";
    case ExpansionMethod::exp1: return "exp1";
    case ExpansionMethod::exp2: return "exp2";
    case ExpansionMethod::exp2_1ent: return "exp2-1ent";
    case ExpansionMethod::exp3: return "exp3";
  }
  throw LinkerError("unknown expansion method tag");
}

namespace {

std::string join_tokens(const std::vector<std::string>& tokens,
                        std::size_t begin, std::size_t end) {
  std::string joined;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) joined.push_back(' ');
    joined += tokens[i];
  }
  return joined;
}

std::string underscored(const std::string& surface) {
  std::string out = surface;
  std::replace(out.begin(), out.end(), ' ', '_');
  return out;
}

}  // namespace

std::vector<SpottedMention> spot(const KnowledgeBase& kb,
                                 const std::vector<std::string>& tokens,
                                 double min_lp) {
  std::vector<SpottedMention> spots;
  const std::size_t max_n = std::min<std::size_t>(6, kb.max_mention_words());
  std::size_t i = 0;
  while (i < tokens.size()) {
    bool matched = false;
    std::size_t window = std::min(max_n, tokens.size() - i);
    for (std::size_t len = window; len >= 1 && !matched; --len) {
      std::string surface = join_tokens(tokens, i, i + len);
      if (!kb.has_mention(surface)) continue;
      double lp = kb.link_probability(surface);
      if (lp < min_lp) continue;
      spots.push_back({std::move(surface), i, i + len, lp});
      i += len;
      matched = true;
    }
    if (!matched) ++i;
  }
  return spots;
}

std::vector<std::pair<std::string, double>> candidates(
    const KnowledgeBase& kb, const std::string& mention) {
  std::vector<std::pair<std::string, double>> ranked;
  const auto* links = kb.entities_of(mention);
  if (!links) return ranked;
  double lp = kb.link_probability(mention);
  ranked.reserve(links->size());
  for (const auto& [entity, _] : *links)
    ranked.emplace_back(entity, lp * kb.commonness(mention, entity));
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return ranked;
}

namespace {

void expand_exp3(FeatureBag& bag, const SpottedMention& spot,
                 const KnowledgeBase& kb, const ExpansionConfig& config) {
  const auto* links = kb.entities_of(spot.surface);
  if (!links) return;
  for (const auto& [entity, _] : *links) {
    double base = spot.lp * kb.commonness(spot.surface, entity);
    if (base <= 0.0) continue;
    auto forms = kb.surface_forms(entity);
    if (forms.size() > config.max_surface_forms) {
      std::sort(forms.begin(), forms.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
      });
      forms.resize(config.max_surface_forms);
    }
    for (const auto& [form, cm_form] : forms) {
      if (form == spot.surface) continue;
      double p_sf = base * kb.link_probability(form) * cm_form;
      if (p_sf > config.rho) bag.add("sf:" + underscored(form));
    }
  }
}

}  // namespace

void expand(FeatureBag& bag, const std::vector<SpottedMention>& spots,
            const KnowledgeBase& kb, const ExpansionConfig& config) {
  switch (config.method) {
    case ExpansionMethod::none:
      return;
    case ExpansionMethod::exp1:
      for (const auto& spot : spots) bag.add("ment:" + underscored(spot.surface));
      return;
    case ExpansionMethod::exp2:
      for (const auto& spot : spots)
        for (const auto& [entity, p_en] : candidates(kb, spot.surface))
          if (p_en > config.rho) bag.add("ent:" + entity);
      return;
    case ExpansionMethod::exp2_1ent:
      for (const auto& spot : spots) {
        const auto* links = kb.entities_of(spot.surface);
        if (!links) continue;
        const std::string* best_entity = nullptr;
        double best_cm = 0.0;
        for (const auto& [entity, _] : *links) {
          double cm = kb.commonness(spot.surface, entity);
          if (cm > best_cm || (cm == best_cm && best_entity && entity < *best_entity)) {
            best_cm = cm;
            best_entity = &entity;
          }
        }
        if (best_entity && spot.lp * best_cm > config.rho)
          bag.add("ent:" + *best_entity);
      }
      return;
    case ExpansionMethod::exp3:
      for (const auto& spot : spots) expand_exp3(bag, spot, kb, config);
      return;
  }
  throw LinkerError("unknown expansion method tag");
}

namespace {

// Spots one source's token list plus each of its hashtags' segmentations
// as independent sources.
void spot_source(const Pipeline& pipeline, const std::string& source,
                 std::vector<SpottedMention>& all) {
  std::vector<std::string> tokens = tokenize(source);
  auto spots = spot(*pipeline.kb, tokens, pipeline.expansion.min_lp);
  all.insert(all.end(), spots.begin(), spots.end());
  for (const auto& tok : tokens) {
    if (tok.size() > 1 && tok[0] == '#') {
      auto words = segment_hashtag(tok.substr(1), pipeline.analyzer->unigrams);
      auto tag_spots = spot(*pipeline.kb, words, pipeline.expansion.min_lp);
      all.insert(all.end(), tag_spots.begin(), tag_spots.end());
    }
  }
}

}  // namespace

FeatureBag Pipeline::process(const Micropost& post) const {
  FeatureBag bag = extract_features(post, *analyzer);
  if (expansion.method != ExpansionMethod::none && kb) {
    std::vector<SpottedMention> spots;
    spot_source(*this, post.text, spots);
    for (const auto& title : post.url_titles) spot_source(*this, title, spots);
    expand(bag, spots, *kb, expansion);
  }
  return bag;
}

FeatureBag Pipeline::process_text(const std::string& text) const {
  FeatureBag bag = extract_features_text(text, *analyzer);
  if (expansion.method != ExpansionMethod::none && kb) {
    std::vector<SpottedMention> spots;
    spot_source(*this, text, spots);
    expand(bag, spots, *kb, expansion);
  }
  return bag;
}

}  // namespace microfilter
