#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "microfilter/corpus.hpp"
#include "microfilter/filter.hpp"
#include "microfilter/linker.hpp"

namespace microfilter {

struct HarnessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Counts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;
};

struct DecisionRecord {
  std::string post_id;
  Decision decision = Decision::nonrelevant;
  std::optional<int> grade;  // nullopt = unjudged
};

struct RunResult {
  std::string query_id;
  Counts counts;
  std::vector<DecisionRecord> decision_log;
};

enum class UnjudgedPolicy { count_fp, skip };

struct HarnessConfig {
  FilterParams filter;
  UnjudgedPolicy unjudged = UnjudgedPolicy::count_fp;
  // Queries with no relevant judged posts (MaxU = 0) are excluded from
  // the T11SU macro average when true.
  bool t11su_exclude_zero_max = true;
  std::size_t workers = 1;
};

// Replays the stream for one query under the feedback protocol: posts up
// to and including the first relevant one seed idf and the profile; each
// later post is featurized, vectorized, idf-counted, and classified;
// oracle feedback arrives only for posts classified relevant.
RunResult run_stream(const FilterQuery& query,
                     const std::vector<Micropost>& stream,
                     const RelevanceJudgments& judgments,
                     const Pipeline& pipeline, const HarnessConfig& config);

// All queries over the same stream, parallel across config.workers.
std::vector<RunResult> run_all(const std::vector<FilterQuery>& queries,
                               const std::vector<Micropost>& stream,
                               const RelevanceJudgments& judgments,
                               const Pipeline& pipeline,
                               const HarnessConfig& config);

Counts counts_from_log(const std::vector<DecisionRecord>& log,
                       UnjudgedPolicy unjudged);

double precision(const Counts& c);
double recall(const Counts& c);
double f_beta(const Counts& c, double beta);
// TREC-11 scaled linear utility with MinNU = -0.5.
double t11su(const Counts& c);

struct QueryMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f05 = 0.0;
  double t11su = 0.0;
};

struct MetricSummary {
  std::vector<std::pair<std::string, QueryMetrics>> per_query;
  QueryMetrics macro;
  std::size_t t11su_queries = 0;  // queries included in the T11SU mean
};

MetricSummary macro_average(const std::vector<RunResult>& results,
                            bool t11su_exclude_zero_max = true);

// One grid point: the filter and expansion parameters that vary.
struct GridPoint {
  FilterParams filter;
  ExpansionConfig expansion;
  QueryMetrics macro;
};

struct ParamGrid {
  std::vector<double> alpha{1.0};
  std::vector<double> beta{0.0};
  std::vector<double> eta{0.5};
  std::vector<double> rho{0.1};
  std::vector<double> min_lp{0.2};
  std::vector<ExpansionMethod> method{ExpansionMethod::exp2};
  std::vector<bool> url_gate{true};

  std::size_t size() const;
};

struct GridResult {
  std::vector<GridPoint> table;
  std::size_t best_index = 0;
};

// Exhaustive deterministic sweep; best = argmax macro F0.5, ties broken
// by higher T11SU, then by grid enumeration order.
GridResult grid_search(const std::vector<FilterQuery>& queries,
                       const std::vector<Micropost>& stream,
                       const RelevanceJudgments& judgments,
                       const TextAnalyzer& analyzer, const KnowledgeBase* kb,
                       const ParamGrid& grid, const HarnessConfig& base_config);

// Results TSV (per-query rows plus a macro row) and JSONL decision logs.
void write_results_tsv(std::ostream& out, const MetricSummary& summary,
                       const std::string& fingerprint);
void write_decision_log(std::ostream& out, const RunResult& result,
                        const std::string& fingerprint);
RunResult read_decision_log(std::istream& in, UnjudgedPolicy unjudged);

}  // namespace microfilter
