#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "microfilter/config.hpp"
#include "microfilter/corpus.hpp"
#include "microfilter/evalharness.hpp"
#include "microfilter/filter.hpp"
#include "microfilter/kb.hpp"
#include "microfilter/linker.hpp"
#include "microfilter/synthetic.hpp"
#include "microfilter/textproc.hpp"

namespace fs = std::filesystem;
using namespace microfilter;

namespace {

std::ifstream open_or_die(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return in;
}

TextAnalyzer load_analyzer(const EngineConfig& config) {
  TextAnalyzer analyzer;
  {
    auto in = open_or_die(config.stopwords_path);
    analyzer.stopwords = load_stopwords(in);
  }
  {
    auto in = open_or_die(config.unigram_path);
    analyzer.unigrams = UnigramModel::from_stream(in);
  }
  {
    auto in = open_or_die(config.rules_path);
    analyzer.stemmer = LancasterStemmer::from_stream(in);
  }
  return analyzer;
}

// Accepts either a binary snapshot or the TSV source, by magic bytes.
KnowledgeBase load_kb(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open KB file: " + path);
  char magic[4] = {};
  in.read(magic, 4);
  in.seekg(0);
  if (in.gcount() == 4 && std::string(magic, 4) == "MFKB")
    return KnowledgeBase::load_snapshot(in);
  return KnowledgeBase::from_tsv(in);
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> values;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) values.push_back(std::stod(item));
  return values;
}

void add_param_flags(CLI::App* cmd, EngineConfig& config) {
  // Actual loading happens in a pre-parse scan of argv; this just makes
  // the flag valid at subcommand position too.
  static std::string config_path_sink;
  cmd->add_option("--config", config_path_sink, "key = value config file");
  cmd->add_option("--alpha", config.alpha, "Relevant-set weight in the centroid");
  cmd->add_option("--beta", config.beta, "Non-relevant-set weight in the centroid");
  cmd->add_option("--eta", config.eta, "Cosine distance threshold for relevance");
  cmd->add_option("--method", config.method,
                  "Expansion method: none|exp1|exp2|exp2-1ent|exp3");
  cmd->add_option("--rho", config.rho, "Expansion feature threshold (strict >)");
  cmd->add_option("--min-lp", config.min_lp, "Minimum link probability to spot");
  cmd->add_option("--url-gate", config.url_gate,
                  "Mark URL-less posts non-relevant");
  cmd->add_option("--unjudged", config.unjudged,
                  "Unjudged posts classified relevant: fp|skip");
  cmd->add_option("--workers", config.workers, "Parallel query workers");
  cmd->add_option("--seed", config.seed, "Seed for synthetic generators");
}

void add_resource_flags(CLI::App* cmd, EngineConfig& config, bool with_kb = true) {
  cmd->add_option("--corpus", config.corpus_path, "Corpus JSONL path");
  cmd->add_option("--topics", config.topics_path, "Topics JSONL path");
  cmd->add_option("--qrels", config.qrels_path, "Qrels path");
  if (with_kb) cmd->add_option("--kb", config.kb_path, "KB snapshot or TSV path");
  cmd->add_option("--stopwords", config.stopwords_path, "Stopword list");
  cmd->add_option("--unigrams", config.unigram_path, "Unigram model TSV");
  cmd->add_option("--rules", config.rules_path, "Stemmer rule table");
}

struct LoadedRun {
  TextAnalyzer analyzer;
  std::unique_ptr<KnowledgeBase> kb;
  std::vector<Micropost> corpus;
  std::vector<FilterQuery> topics;
  RelevanceJudgments judgments;
  Pipeline pipeline;
  HarnessConfig harness;
};

LoadedRun load_run(const EngineConfig& config) {
  LoadedRun run;
  run.analyzer = load_analyzer(config);
  if (!config.kb_path.empty())
    run.kb = std::make_unique<KnowledgeBase>(load_kb(config.kb_path));
  {
    auto in = open_or_die(config.corpus_path);
    run.corpus = parse_corpus(in);
  }
  {
    auto in = open_or_die(config.topics_path);
    run.topics = parse_topics(in);
  }
  {
    auto in = open_or_die(config.qrels_path);
    std::vector<std::string> warnings;
    run.judgments = parse_qrels(in, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  }
  run.pipeline = {&run.analyzer, run.kb.get(), config.expansion_config()};
  run.harness.filter = config.filter_params();
  run.harness.unjudged = config.unjudged_policy();
  run.harness.workers = config.workers;
  return run;
}

int cmd_build_kb(const std::string& input, const std::string& output) {
  auto in = open_or_die(input);
  KnowledgeBase kb = KnowledgeBase::from_tsv(in);
  auto stats = kb.stats();
  if (stats.mentions == 0)
    std::cerr << "warning: input TSV is empty, writing an empty KB\n";
  std::ofstream out(output, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write KB snapshot: " + output);
  kb.save_snapshot(out);
  std::cout << "mentions=" << stats.mentions << " entities=" << stats.entities
            << " pairs=" << stats.pairs << '\n';
  return 0;
}

int cmd_run(EngineConfig config, const std::string& out_dir) {
  config.validate();
  LoadedRun run = load_run(config);
  std::string fingerprint = config.fingerprint();

  auto results = run_all(run.topics, run.corpus, run.judgments, run.pipeline,
                         run.harness);
  MetricSummary summary =
      macro_average(results, run.harness.t11su_exclude_zero_max);

  if (!out_dir.empty()) {
    fs::create_directories(fs::path(out_dir) / "decisions");
    std::ofstream tsv(fs::path(out_dir) / "results.tsv");
    write_results_tsv(tsv, summary, fingerprint);
    for (const auto& res : results) {
      std::ofstream log(fs::path(out_dir) / "decisions" /
                        (res.query_id + ".jsonl"));
      write_decision_log(log, res, fingerprint);
    }
  }
  write_results_tsv(std::cout, summary, fingerprint);
  return 0;
}

int cmd_evaluate(const std::string& decisions_dir, const std::string& unjudged) {
  UnjudgedPolicy policy =
      unjudged == "skip" ? UnjudgedPolicy::skip : UnjudgedPolicy::count_fp;
  std::vector<RunResult> results;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(decisions_dir))
    if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    std::ifstream in(file);
    results.push_back(read_decision_log(in, policy));
  }
  if (results.empty()) throw std::runtime_error("no decision logs found in " + decisions_dir);
  write_results_tsv(std::cout, macro_average(results), "recomputed");
  return 0;
}

int cmd_tune(EngineConfig config, const ParamGrid& grid,
             const std::string& out_dir) {
  config.validate();
  if (grid.size() == 0) throw std::runtime_error("empty parameter grid");
  LoadedRun run = load_run(config);

  GridResult result = grid_search(run.topics, run.corpus, run.judgments,
                                  run.analyzer, run.kb.get(), grid, run.harness);

  std::ostringstream table;
  table << "alpha\tbeta\teta\trho\tmin_lp\tmethod\turl_gate\tprecision\trecall"
           "\tf05\tt11su\tbest\n";
  for (std::size_t i = 0; i < result.table.size(); ++i) {
    const GridPoint& p = result.table[i];
    table << p.filter.alpha << '\t' << p.filter.beta << '\t' << p.filter.eta
          << '\t' << p.expansion.rho << '\t' << p.expansion.min_lp << '\t'
          << to_string(p.expansion.method) << '\t' << p.filter.url_gate << '\t'
          << p.macro.precision << '\t' << p.macro.recall << '\t' << p.macro.f05
          << '\t' << p.macro.t11su << '\t' << (i == result.best_index ? "*" : "")
          << '\n';
  }
  std::cout << table.str();

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream tsv(fs::path(out_dir) / "grid.tsv");
    tsv << table.str();
    const GridPoint& best = result.table[result.best_index];
    std::ofstream cfg(fs::path(out_dir) / "best_config.toml");
    cfg << "alpha = " << best.filter.alpha << "\nbeta = " << best.filter.beta
        << "\neta = " << best.filter.eta << "\nmethod = "
        << to_string(best.expansion.method) << "\nrho = " << best.expansion.rho
        << "\nmin_lp = " << best.expansion.min_lp << "\nurl_gate = "
        << (best.filter.url_gate ? "true" : "false") << '\n';
  }
  return 0;
}

int cmd_gen_synthetic(const std::string& kind, std::uint64_t seed,
                      std::size_t posts, std::size_t mentions,
                      const std::string& out_dir) {
  SyntheticDataset ds;
  if (kind == "el")
    ds = make_el_benefit(seed);
  else if (kind == "ambiguous")
    ds = make_ambiguous(seed);
  else if (kind == "basic")
    ds = make_basic(seed, posts);
  else if (kind == "bench")
    ds = make_bench(seed, posts, mentions);
  else
    throw std::runtime_error("unknown synthetic kind '" + kind +
                             "' (el|ambiguous|basic|bench)");

  fs::create_directories(out_dir);
  {
    std::ofstream out(fs::path(out_dir) / "corpus.jsonl");
    write_corpus(out, ds.corpus);
  }
  auto write_topics = [&](const std::string& name,
                          const std::vector<FilterQuery>& topics) {
    if (topics.empty()) return;
    std::ofstream out(fs::path(out_dir) / name);
    for (const auto& t : topics) {
      nlohmann::json obj;
      obj["query_id"] = t.query_id;
      obj["text"] = t.text;
      obj["first_relevant_id"] = t.first_relevant_id;
      obj["start_ts"] = t.start_timestamp;
      out << obj.dump() << '\n';
    }
  };
  write_topics("topics_test.jsonl", ds.test_topics);
  write_topics("topics_validation.jsonl", ds.validation_topics);
  {
    std::ofstream out(fs::path(out_dir) / "qrels.txt");
    std::vector<FilterQuery> all = ds.validation_topics;
    all.insert(all.end(), ds.test_topics.begin(), ds.test_topics.end());
    for (const auto& t : all)
      for (const auto& post : ds.corpus)
        if (auto g = ds.judgments.grade(t.query_id, post.id))
          out << t.query_id << " 0 " << post.id << ' ' << *g << '\n';
  }
  if (!ds.kb_records.empty()) {
    std::ofstream out(fs::path(out_dir) / "kb.tsv");
    for (const auto& r : ds.kb_records)
      out << r.mention << '\t' << r.entity << '\t' << r.pair_link_count << '\t'
          << r.occurrence_count << '\n';
  }
  std::cout << "wrote " << ds.corpus.size() << " posts, "
            << ds.validation_topics.size() + ds.test_topics.size()
            << " topics, " << ds.kb_records.size() << " KB records to "
            << out_dir << '\n';
  return 0;
}

int cmd_bench(EngineConfig config, std::size_t posts, std::size_t mentions) {
  TextAnalyzer analyzer = load_analyzer(config);
  SyntheticDataset ds = make_bench(config.seed, posts, mentions);
  KnowledgeBase kb = ds.kb();
  Pipeline pipeline{&analyzer, &kb, config.expansion_config()};
  HarnessConfig harness;
  harness.filter = config.filter_params();
  harness.workers = 1;

  auto start = std::chrono::steady_clock::now();
  RunResult result =
      run_stream(ds.test_topics[0], ds.corpus, ds.judgments, pipeline, harness);
  auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                               start).count();
  double rate = static_cast<double>(result.decision_log.size()) / elapsed;
  std::cout << "classified " << result.decision_log.size() << " posts in "
            << elapsed << " s (" << static_cast<std::int64_t>(rate)
            << " posts/s, single-threaded, method "
            << to_string(pipeline.expansion.method) << ", "
            << mentions << "-mention KB)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real-time micropost filtering engine"};
  app.require_subcommand(1);

  EngineConfig config;
  config.stopwords_path = "data/stopwords_en.txt";
  config.unigram_path = "data/unigram_model.tsv";
  config.rules_path = "data/lancaster_rules.txt";

  // Config file values must lose to explicit CLI flags, so the file is
  // loaded before CLI11 writes parsed flags into `config`.
  std::string config_path;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc)
      config_path = argv[i + 1];
    else if (arg.rfind("--config=", 0) == 0)
      config_path = arg.substr(9);
  }
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot open config file: " << config_path << '\n';
      return 1;
    }
    try {
      load_config_file(in, config);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  }
  std::string config_path_unused;
  app.add_option("--config", config_path_unused, "key = value config file");

  auto* build_kb = app.add_subcommand("build-kb", "Compile a KB TSV into a snapshot");
  std::string kb_input, kb_output;
  build_kb->add_option("--input", kb_input, "KB source TSV")->required();
  build_kb->add_option("--output", kb_output, "Snapshot path")->required();

  auto* run = app.add_subcommand("run", "Run filtering over a corpus");
  std::string out_dir;
  add_resource_flags(run, config);
  add_param_flags(run, config);
  run->add_option("--out-dir", out_dir, "Directory for results and decision logs");

  auto* evaluate = app.add_subcommand("evaluate", "Recompute metrics from decision logs");
  std::string decisions_dir, eval_unjudged = "fp";
  evaluate->add_option("--decisions", decisions_dir, "Decision log directory")->required();
  evaluate->add_option("--unjudged", eval_unjudged, "fp|skip");

  auto* tune = app.add_subcommand("tune", "Grid search on a validation set");
  ParamGrid grid;
  std::string tune_out, g_alpha, g_beta, g_eta, g_rho, g_min_lp, g_method, g_url;
  add_resource_flags(tune, config);
  add_param_flags(tune, config);
  tune->add_option("--grid-alpha", g_alpha, "Comma-separated alpha values");
  tune->add_option("--grid-beta", g_beta, "Comma-separated beta values");
  tune->add_option("--grid-eta", g_eta, "Comma-separated eta values");
  tune->add_option("--grid-rho", g_rho, "Comma-separated rho values");
  tune->add_option("--grid-min-lp", g_min_lp, "Comma-separated min_lp values");
  tune->add_option("--grid-method", g_method, "Comma-separated methods");
  tune->add_option("--grid-url-gate", g_url, "Comma-separated 0/1 values");
  tune->add_option("--out-dir", tune_out, "Directory for grid table and best config");

  auto* gen = app.add_subcommand("gen-synthetic", "Emit a seeded synthetic dataset");
  std::string gen_kind = "el", gen_out;
  std::size_t gen_posts = 500, gen_mentions = 100;
  gen->add_option("--kind", gen_kind, "el|ambiguous|basic|bench");
  gen->add_option("--out-dir", gen_out, "Output directory")->required();
  gen->add_option("--posts", gen_posts, "Posts (basic/bench kinds)");
  gen->add_option("--mentions", gen_mentions, "KB mentions (bench kind)");
  gen->add_option("--seed", config.seed, "Generator seed");

  auto* bench = app.add_subcommand("bench", "Single-threaded throughput benchmark");
  std::size_t bench_posts = 100000, bench_mentions = 10000;
  add_resource_flags(bench, config, /*with_kb=*/false);
  add_param_flags(bench, config);
  bench->add_option("--posts", bench_posts, "Stream length");
  bench->add_option("--mentions", bench_mentions, "KB size");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build_kb->parsed()) return cmd_build_kb(kb_input, kb_output);
    if (run->parsed()) return cmd_run(config, out_dir);
    if (evaluate->parsed()) return cmd_evaluate(decisions_dir, eval_unjudged);
    if (tune->parsed()) {
      if (!g_alpha.empty()) grid.alpha = parse_list(g_alpha);
      if (!g_beta.empty()) grid.beta = parse_list(g_beta);
      if (!g_eta.empty()) grid.eta = parse_list(g_eta);
      if (!g_rho.empty()) grid.rho = parse_list(g_rho);
      if (!g_min_lp.empty()) grid.min_lp = parse_list(g_min_lp);
      if (!g_method.empty()) {
        grid.method.clear();
        std::stringstream ss(g_method);
        std::string item;
        while (std::getline(ss, item, ','))
          if (!item.empty()) grid.method.push_back(parse_expansion_method(item));
      }
      if (!g_url.empty()) {
        grid.url_gate.clear();
        for (double v : parse_list(g_url)) grid.url_gate.push_back(v != 0.0);
      }
      return cmd_tune(config, grid, tune_out);
    }
    if (gen->parsed())
      return cmd_gen_synthetic(gen_kind, config.seed, gen_posts, gen_mentions,
                               gen_out);
    if (bench->parsed()) return cmd_bench(config, bench_posts, bench_mentions);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
