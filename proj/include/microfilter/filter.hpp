#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "microfilter/corpus.hpp"
#include "microfilter/linker.hpp"
#include "microfilter/textproc.hpp"

namespace microfilter {

// Sparse feature -> weight map with a lazily cached L2 norm. Zero
// weights are never stored.
class SparseVector {
 public:
  void set(const std::string& feature, double weight);
  void add(const std::string& feature, double delta);
  double get(const std::string& feature) const;
  std::size_t nnz() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }
  double norm() const;

  auto begin() const { return weights_.begin(); }
  auto end() const { return weights_.end(); }

  static double dot(const SparseVector& a, const SparseVector& b);

 private:
  std::unordered_map<std::string, double> weights_;
  mutable double cached_norm_ = -1.0;
};

// 1 - cos(a, b); 1 when either vector has zero norm.
double cosine_distance(const SparseVector& a, const SparseVector& b);

// Document frequencies for idf weighting.
struct IdfStore {
  std::int64_t doc_count = 0;
  std::unordered_map<std::string, std::int64_t> df;
};

// Counts one document: each distinct feature of the bag once.
void update_idf(IdfStore& store, const FeatureBag& bag);

// weight(f) = tf(f) * ln(N / max(df(f), 1)); zero weights omitted.
SparseVector vectorize(const FeatureBag& bag, const IdfStore& store);

struct FilterParams {
  double alpha = 1.0;
  double beta = 0.0;
  double eta = 0.5;   // distance threshold; relevant iff distance < eta
  bool url_gate = true;
};

// Per-query filter state. Single writer: one stream pass at a time.
struct QueryProfile {
  SparseVector centroid;
  std::vector<SparseVector> relevant;
  std::vector<SparseVector> nonrelevant;
  FilterParams params;
  IdfStore idf;

  // Map entries touched by the last centroid_update, for cost checks.
  std::size_t last_update_ops = 0;

 private:
  SparseVector sum_relevant_;
  SparseVector sum_nonrelevant_;
  friend void centroid_update(QueryProfile&, SparseVector, bool);
};

// Appends v to the relevant or non-relevant set and recomputes the
// centroid from the running sums (cost linear in the touched features,
// not in the number of stored vectors).
void centroid_update(QueryProfile& profile, SparseVector v, bool is_relevant);

enum class Decision { relevant, nonrelevant };

// URL gate first (no URL -> nonrelevant when enabled), then the
// distance threshold.
Decision classify(const QueryProfile& profile, const Micropost& post,
                  const SparseVector& v);

// Seeds the idf store from the (up to 1000) posts preceding the first
// relevant one and initializes the profile from the query vector and
// the first relevant post's vector.
QueryProfile init_profile(const FilterQuery& query,
                          const Micropost& first_relevant,
                          const std::vector<Micropost>& preceding,
                          const Pipeline& pipeline, const FilterParams& params);

}  // namespace microfilter
