#pragma once

#include <cstdint>
#include <vector>

#include "microfilter/corpus.hpp"
#include "microfilter/kb.hpp"

namespace microfilter {

// Seeded synthetic dataset: a time-ordered corpus, topics split into
// validation and test, full judgments, and a fixture KB.
struct SyntheticDataset {
  std::vector<Micropost> corpus;
  std::vector<FilterQuery> validation_topics;
  std::vector<FilterQuery> test_topics;
  RelevanceJudgments judgments;
  std::vector<KnowledgeBase::Record> kb_records;

  KnowledgeBase kb() const { return KnowledgeBase::build(kb_records); }
};

struct ElBenefitOptions {
  std::size_t test_queries = 5;
  std::size_t validation_queries = 2;
  std::size_t relevant_per_query = 40;
  std::size_t nonrelevant_per_query = 400;
  std::size_t surface_forms_per_entity = 5;
};

// Each query targets one entity mentioned through several disjoint
// surface forms; entity expansion is what ties the forms together.
SyntheticDataset make_el_benefit(std::uint64_t seed,
                                 const ElBenefitOptions& options = {});

// Two entities sharing an ambiguous surface form; surface-form expansion
// bleeds features across them while entity expansion does not.
SyntheticDataset make_ambiguous(std::uint64_t seed);

// Plain random-text stream with one query, fully judged.
SyntheticDataset make_basic(std::uint64_t seed, std::size_t posts);

// Large stream plus a large KB for throughput measurement.
SyntheticDataset make_bench(std::uint64_t seed, std::size_t posts,
                            std::size_t mentions);

}  // namespace microfilter
