#include "microfilter/filter.hpp"

#include <algorithm>
#include <cmath>

namespace microfilter {

void SparseVector::set(const std::string& feature, double weight) {
  cached_norm_ = -1.0;
  if (weight == 0.0)
    weights_.erase(feature);
  else
    weights_[feature] = weight;
}

void SparseVector::add(const std::string& feature, double delta) {
  if (delta == 0.0) return;
  cached_norm_ = -1.0;
  auto it = weights_.find(feature);
  if (it == weights_.end()) {
    weights_.emplace(feature, delta);
    return;
  }
  it->second += delta;
  if (it->second == 0.0) weights_.erase(it);
}

double SparseVector::get(const std::string& feature) const {
  auto it = weights_.find(feature);
  return it == weights_.end() ? 0.0 : it->second;
}

double SparseVector::norm() const {
  if (cached_norm_ < 0.0) {
    double sq = 0.0;
    for (const auto& [_, w] : weights_) sq += w * w;
    cached_norm_ = std::sqrt(sq);
  }
  return cached_norm_;
}

double SparseVector::dot(const SparseVector& a, const SparseVector& b) {
  const SparseVector& small = a.nnz() <= b.nnz() ? a : b;
  const SparseVector& large = a.nnz() <= b.nnz() ? b : a;
  double sum = 0.0;
  for (const auto& [f, w] : small) sum += w * large.get(f);
  return sum;
}

double cosine_distance(const SparseVector& a, const SparseVector& b) {
  double na = a.norm();
  double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 1.0;
  return 1.0 - SparseVector::dot(a, b) / (na * nb);
}

void update_idf(IdfStore& store, const FeatureBag& bag) {
  ++store.doc_count;
  for (const auto& [feature, _] : bag) ++store.df[feature];
}

SparseVector vectorize(const FeatureBag& bag, const IdfStore& store) {
  SparseVector v;
  double n = static_cast<double>(std::max<std::int64_t>(store.doc_count, 1));
  for (const auto& [feature, tf] : bag) {
    auto it = store.df.find(feature);
    std::int64_t df = it == store.df.end() ? 1 : std::max<std::int64_t>(it->second, 1);
    double weight = static_cast<double>(tf) * std::log(n / static_cast<double>(df));
    if (weight != 0.0) v.set(feature, weight);
  }
  return v;
}

void centroid_update(QueryProfile& profile, SparseVector v, bool is_relevant) {
  std::size_t ops = 0;
  SparseVector& sum = is_relevant ? profile.sum_relevant_ : profile.sum_nonrelevant_;
  for (const auto& [f, w] : v) {
    sum.add(f, w);
    ++ops;
  }
  if (is_relevant)
    profile.relevant.push_back(std::move(v));
  else
    profile.nonrelevant.push_back(std::move(v));

  SparseVector centroid;
  if (!profile.relevant.empty() && profile.params.alpha != 0.0) {
    double scale = profile.params.alpha / static_cast<double>(profile.relevant.size());
    for (const auto& [f, w] : profile.sum_relevant_) {
      centroid.set(f, scale * w);
      ++ops;
    }
  }
  if (!profile.nonrelevant.empty() && profile.params.beta != 0.0) {
    double scale = profile.params.beta / static_cast<double>(profile.nonrelevant.size());
    for (const auto& [f, w] : profile.sum_nonrelevant_) {
      centroid.add(f, -scale * w);
      ++ops;
    }
  }
  profile.centroid = std::move(centroid);
  profile.last_update_ops = ops;
}

Decision classify(const QueryProfile& profile, const Micropost& post,
                  const SparseVector& v) {
  if (profile.params.url_gate && !post.has_url()) return Decision::nonrelevant;
  return cosine_distance(profile.centroid, v) < profile.params.eta
             ? Decision::relevant
             : Decision::nonrelevant;
}

QueryProfile init_profile(const FilterQuery& query,
                          const Micropost& first_relevant,
                          const std::vector<Micropost>& preceding,
                          const Pipeline& pipeline, const FilterParams& params) {
  QueryProfile profile;
  profile.params = params;

  std::size_t skip = preceding.size() > 1000 ? preceding.size() - 1000 : 0;
  for (std::size_t i = skip; i < preceding.size(); ++i)
    update_idf(profile.idf, pipeline.process(preceding[i]));

  FeatureBag query_bag = pipeline.process_text(query.text);
  FeatureBag first_bag = pipeline.process(first_relevant);
  centroid_update(profile, vectorize(query_bag, profile.idf), true);
  centroid_update(profile, vectorize(first_bag, profile.idf), true);
  return profile;
}

}  // namespace microfilter
