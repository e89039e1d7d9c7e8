#include "microfilter/evalharness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <thread>

#include <json.hpp>

namespace microfilter {

using nlohmann::json;

RunResult run_stream(const FilterQuery& query,
                     const std::vector<Micropost>& stream,
                     const RelevanceJudgments& judgments,
                     const Pipeline& pipeline, const HarnessConfig& config) {
  std::size_t first_idx = stream.size();
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (stream[i].id == query.first_relevant_id) {
      first_idx = i;
      break;
    }
  }
  if (first_idx == stream.size())
    throw HarnessError("query " + query.query_id + ": first relevant post '" +
                       query.first_relevant_id + "' not found in stream");

  std::vector<Micropost> preceding(stream.begin(),
                                   stream.begin() + static_cast<std::ptrdiff_t>(first_idx));
  QueryProfile profile =
      init_profile(query, stream[first_idx], preceding, pipeline, config.filter);

  RunResult result;
  result.query_id = query.query_id;
  for (std::size_t i = first_idx + 1; i < stream.size(); ++i) {
    const Micropost& post = stream[i];
    FeatureBag bag = pipeline.process(post);
    SparseVector v = vectorize(bag, profile.idf);
    update_idf(profile.idf, bag);
    Decision decision = classify(profile, post, v);
    std::optional<int> grade = judgments.grade(query.query_id, post.id);
    result.decision_log.push_back({post.id, decision, grade});
    // Oracle feedback only for posts marked relevant, and only when the
    // oracle actually has a judgment.
    if (decision == Decision::relevant && grade)
      centroid_update(profile, std::move(v), *grade >= 1);
  }
  result.counts = counts_from_log(result.decision_log, config.unjudged);
  return result;
}

std::vector<RunResult> run_all(const std::vector<FilterQuery>& queries,
                               const std::vector<Micropost>& stream,
                               const RelevanceJudgments& judgments,
                               const Pipeline& pipeline,
                               const HarnessConfig& config) {
  std::vector<RunResult> results(queries.size());
  std::size_t workers = std::max<std::size_t>(config.workers, 1);
  workers = std::min(workers, queries.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < queries.size(); ++i)
      results[i] = run_stream(queries[i], stream, judgments, pipeline, config);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < queries.size();
           i = next.fetch_add(1))
        results[i] = run_stream(queries[i], stream, judgments, pipeline, config);
    });
  }
  for (auto& t : pool) t.join();
  return results;
}

Counts counts_from_log(const std::vector<DecisionRecord>& log,
                       UnjudgedPolicy unjudged) {
  Counts c;
  for (const auto& rec : log) {
    bool marked = rec.decision == Decision::relevant;
    if (!rec.grade) {
      if (marked && unjudged == UnjudgedPolicy::count_fp) ++c.fp;
      continue;
    }
    bool relevant = *rec.grade >= 1;
    if (relevant)
      marked ? ++c.tp : ++c.fn;
    else
      marked ? ++c.fp : ++c.tn;
  }
  return c;
}

double precision(const Counts& c) {
  std::int64_t denom = c.tp + c.fp;
  return denom == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

double recall(const Counts& c) {
  std::int64_t denom = c.tp + c.fn;
  return denom == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

double f_beta(const Counts& c, double beta) {
  double p = precision(c);
  double r = recall(c);
  double denom = beta * beta * p + r;
  return denom == 0.0 ? 0.0 : (1.0 + beta * beta) * p * r / denom;
}

double t11su(const Counts& c) {
  constexpr double kMinNU = -0.5;
  double max_u = 2.0 * static_cast<double>(c.tp + c.fn);
  if (max_u == 0.0) return 0.0;
  double t11u = 2.0 * static_cast<double>(c.tp) - static_cast<double>(c.fp);
  double t11nu = t11u / max_u;
  return (std::max(t11nu, kMinNU) - kMinNU) / (1.0 - kMinNU);
}

MetricSummary macro_average(const std::vector<RunResult>& results,
                            bool t11su_exclude_zero_max) {
  if (results.empty())
    throw HarnessError("macro_average over zero queries");
  MetricSummary summary;
  double sum_p = 0, sum_r = 0, sum_f = 0, sum_u = 0;
  for (const auto& res : results) {
    QueryMetrics m;
    m.precision = precision(res.counts);
    m.recall = recall(res.counts);
    m.f05 = f_beta(res.counts, 0.5);
    m.t11su = t11su(res.counts);
    summary.per_query.emplace_back(res.query_id, m);
    sum_p += m.precision;
    sum_r += m.recall;
    sum_f += m.f05;
    bool zero_max = res.counts.tp + res.counts.fn == 0;
    if (!(t11su_exclude_zero_max && zero_max)) {
      sum_u += m.t11su;
      ++summary.t11su_queries;
    }
  }
  double n = static_cast<double>(results.size());
  summary.macro.precision = sum_p / n;
  summary.macro.recall = sum_r / n;
  summary.macro.f05 = sum_f / n;
  summary.macro.t11su = summary.t11su_queries == 0
                            ? 0.0
                            : sum_u / static_cast<double>(summary.t11su_queries);
  return summary;
}

std::size_t ParamGrid::size() const {
  return alpha.size() * beta.size() * eta.size() * rho.size() * min_lp.size() *
         method.size() * url_gate.size();
}

GridResult grid_search(const std::vector<FilterQuery>& queries,
                       const std::vector<Micropost>& stream,
                       const RelevanceJudgments& judgments,
                       const TextAnalyzer& analyzer, const KnowledgeBase* kb,
                       const ParamGrid& grid, const HarnessConfig& base_config) {
  if (grid.size() == 0) throw HarnessError("empty parameter grid");
  GridResult out;
  for (double alpha : grid.alpha)
    for (double beta : grid.beta)
      for (double eta : grid.eta)
        for (double rho : grid.rho)
          for (double min_lp : grid.min_lp)
            for (ExpansionMethod method : grid.method)
              for (bool url_gate : grid.url_gate) {
                GridPoint point;
                point.filter = {alpha, beta, eta, url_gate};
                point.expansion.method = method;
                point.expansion.rho = rho;
                point.expansion.min_lp = min_lp;
                Pipeline pipeline{&analyzer, kb, point.expansion};
                HarnessConfig config = base_config;
                config.filter = point.filter;
                auto results = run_all(queries, stream, judgments, pipeline, config);
                point.macro =
                    macro_average(results, config.t11su_exclude_zero_max).macro;
                out.table.push_back(std::move(point));
              }
  for (std::size_t i = 1; i < out.table.size(); ++i) {
    const QueryMetrics& best = out.table[out.best_index].macro;
    const QueryMetrics& cand = out.table[i].macro;
    if (cand.f05 > best.f05 ||
        (cand.f05 == best.f05 && cand.t11su > best.t11su))
      out.best_index = i;
  }
  return out;
}

namespace {

void write_metric_row(std::ostream& out, const std::string& id,
                      const QueryMetrics& m) {
  out << id << '\t' << std::fixed << std::setprecision(6) << m.precision << '\t'
      << m.recall << '\t' << m.f05 << '\t' << m.t11su << '\n';
}

}  // namespace

void write_results_tsv(std::ostream& out, const MetricSummary& summary,
                       const std::string& fingerprint) {
  out << "# config_fingerprint=" << fingerprint << '\n';
  out << "query\tprecision\trecall\tf05\tt11su\n";
  for (const auto& [id, m] : summary.per_query) write_metric_row(out, id, m);
  write_metric_row(out, "MACRO", summary.macro);
}

void write_decision_log(std::ostream& out, const RunResult& result,
                        const std::string& fingerprint) {
  json header;
  header["query_id"] = result.query_id;
  header["config_fingerprint"] = fingerprint;
  out << header.dump() << '\n';
  for (const auto& rec : result.decision_log) {
    json row;
    row["post"] = rec.post_id;
    row["decision"] = rec.decision == Decision::relevant ? "relevant" : "nonrelevant";
    if (rec.grade)
      row["grade"] = *rec.grade;
    else
      row["grade"] = nullptr;
    out << row.dump() << '\n';
  }
}

RunResult read_decision_log(std::istream& in, UnjudgedPolicy unjudged) {
  RunResult result;
  std::string line;
  if (!std::getline(in, line))
    throw HarnessError("empty decision log");
  result.query_id = json::parse(line).at("query_id").get<std::string>();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json row = json::parse(line);
    DecisionRecord rec;
    rec.post_id = row.at("post").get<std::string>();
    rec.decision = row.at("decision").get<std::string>() == "relevant"
                       ? Decision::relevant
                       : Decision::nonrelevant;
    if (!row.at("grade").is_null()) rec.grade = row["grade"].get<int>();
    result.decision_log.push_back(std::move(rec));
  }
  result.counts = counts_from_log(result.decision_log, unjudged);
  return result;
}

}  // namespace microfilter
