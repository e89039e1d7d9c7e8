#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("microfilter_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

CliResult run_cli(const std::string& args, const fs::path& scratch) {
  fs::path out = scratch / "stdout.txt";
  fs::path err = scratch / "stderr.txt";
  std::string cmd = std::string(MICROFILTER_CLI_PATH) + " " + args + " > " +
                    out.string() + " 2> " + err.string();
  CliResult result;
  result.exit_code = std::system(cmd.c_str());
  result.out = slurp(out);
  result.err = slurp(err);
  return result;
}

std::string data_dir() { return MICROFILTER_DATA_DIR; }

std::string resource_flags() {
  return " --stopwords " + data_dir() + "/stopwords_en.txt" +
         " --unigrams " + data_dir() + "/unigram_model.tsv" +
         " --rules " + data_dir() + "/lancaster_rules.txt";
}

std::string fixture_flags() {
  return " --corpus " + data_dir() + "/fixtures/corpus_small.jsonl" +
         " --topics " + data_dir() + "/fixtures/topics_small.jsonl" +
         " --qrels " + data_dir() + "/fixtures/qrels_small.txt" +
         " --kb " + data_dir() + "/fixtures/kb_maradona.tsv" + resource_flags();
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("the CLI requires a subcommand") {
  auto dir = fresh_dir("nosub");
  CHECK(run_cli("", dir).exit_code != 0);
}

TEST_CASE("build-kb reports fixture statistics and writes a snapshot") {
  auto dir = fresh_dir("buildkb");
  fs::path snapshot = dir / "kb.bin";
  auto r = run_cli("build-kb --input " + data_dir() +
                       "/fixtures/kb_maradona.tsv --output " + snapshot.string(),
                   dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("mentions=4 entities=3 pairs=5") != std::string::npos);
  std::string blob = slurp(snapshot);
  REQUIRE(blob.size() >= 4);
  CHECK(blob.substr(0, 4) == "MFKB");
}

TEST_CASE("build-kb with a three-line TSV reports two mentions") {
  auto dir = fresh_dir("buildkb3");
  fs::path tsv = dir / "kb.tsv";
  std::ofstream(tsv) << "m one\te1\t10\t40\nm one\te2\t10\t40\nm two\te1\t5\t9\n";
  auto r = run_cli("build-kb --input " + tsv.string() + " --output " +
                       (dir / "kb.bin").string(),
                   dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("mentions=2") != std::string::npos);
}

TEST_CASE("build-kb on a missing file fails and names the path") {
  auto dir = fresh_dir("buildkb_missing");
  auto r = run_cli("build-kb --input " + (dir / "absent.tsv").string() +
                       " --output " + (dir / "kb.bin").string(),
                   dir);
  CHECK(r.exit_code != 0);
  CHECK(r.err.find("absent.tsv") != std::string::npos);
}

TEST_CASE("build-kb on an empty TSV warns and writes an empty snapshot") {
  auto dir = fresh_dir("buildkb_empty");
  fs::path tsv = dir / "empty.tsv";
  std::ofstream(tsv) << "";
  auto r = run_cli("build-kb --input " + tsv.string() + " --output " +
                       (dir / "kb.bin").string(),
                   dir);
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("empty") != std::string::npos);
  CHECK(r.out.find("mentions=0") != std::string::npos);
}

TEST_CASE("run emits a metrics table and decision logs") {
  auto dir = fresh_dir("run");
  fs::path out_dir = dir / "out";
  auto r = run_cli("run" + fixture_flags() + " --out-dir " + out_dir.string(),
                   dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("query\tprecision\trecall\tf05\tt11su") != std::string::npos);
  CHECK(r.out.find("MACRO\t") != std::string::npos);
  CHECK(r.out.find("# config_fingerprint=") != std::string::npos);
  CHECK(fs::exists(out_dir / "results.tsv"));
  CHECK(fs::exists(out_dir / "decisions" / "MB01.jsonl"));
  CHECK(slurp(out_dir / "results.tsv") == r.out);
}

TEST_CASE("run with eta 0 retrieves nothing") {
  auto dir = fresh_dir("run_eta0");
  auto r = run_cli("run" + fixture_flags() + " --eta 0", dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("MB01\t0.000000\t0.000000\t0.000000") != std::string::npos);
}

TEST_CASE("run fails fast on an unreadable corpus path") {
  auto dir = fresh_dir("run_badpath");
  auto r = run_cli("run --corpus /no/such/corpus.jsonl --topics " + data_dir() +
                       "/fixtures/topics_small.jsonl --qrels " + data_dir() +
                       "/fixtures/qrels_small.txt" + resource_flags(),
                   dir);
  CHECK(r.exit_code != 0);
  CHECK(r.err.find("corpus.jsonl") != std::string::npos);
}

TEST_CASE("evaluate reproduces the metrics recorded at run time") {
  auto dir = fresh_dir("evaluate");
  fs::path out_dir = dir / "out";
  auto ran = run_cli("run" + fixture_flags() + " --out-dir " + out_dir.string(),
                     dir);
  REQUIRE(ran.exit_code == 0);
  auto eval = run_cli("evaluate --decisions " + (out_dir / "decisions").string(),
                      dir);
  CHECK(eval.exit_code == 0);

  // Identical metric rows, only the fingerprint header differs.
  auto rows = [](const std::string& text) {
    std::string kept;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
      if (!line.empty() && line[0] != '#') kept += line + "\n";
    return kept;
  };
  CHECK(rows(eval.out) == rows(ran.out));
}

TEST_CASE("identical configurations produce byte-identical output") {
  auto dir = fresh_dir("determinism");
  auto a = run_cli("run" + fixture_flags(), dir);
  auto b = run_cli("run" + fixture_flags(), dir);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("tune with a single-point grid prints one starred row") {
  auto dir = fresh_dir("tune1");
  auto r = run_cli("tune" + fixture_flags() +
                       " --grid-eta 0.5 --grid-method none",
                   dir);
  CHECK(r.exit_code == 0);
  CHECK(count_lines(r.out) == 2);  // header plus one row
  CHECK(r.out.find("*") != std::string::npos);
}

TEST_CASE("tune enumerates a 2x2 grid and marks one best row") {
  auto dir = fresh_dir("tune4");
  fs::path out_dir = dir / "out";
  auto r = run_cli("tune" + fixture_flags() +
                       " --grid-eta 0.3,0.7 --grid-rho 0.1,0.3 --out-dir " +
                       out_dir.string(),
                   dir);
  CHECK(r.exit_code == 0);
  CHECK(count_lines(r.out) == 5);  // header plus four rows
  int stars = 0;
  std::istringstream in(r.out);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line.back() == '*') ++stars;
  CHECK(stars == 1);
  CHECK(fs::exists(out_dir / "grid.tsv"));
  CHECK(fs::exists(out_dir / "best_config.toml"));
  auto best = slurp(out_dir / "best_config.toml");
  CHECK(best.find("eta = ") != std::string::npos);
  CHECK(best.find("method = ") != std::string::npos);
}

TEST_CASE("tune output is identical across invocations") {
  auto dir = fresh_dir("tune_det");
  std::string args = "tune" + fixture_flags() + " --grid-eta 0.3,0.7";
  auto a = run_cli(args, dir);
  auto b = run_cli(args, dir);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("a best tuning config is reusable through --config") {
  auto dir = fresh_dir("tune_reuse");
  fs::path out_dir = dir / "out";
  auto tuned = run_cli("tune" + fixture_flags() +
                           " --grid-eta 0.3,0.7 --out-dir " + out_dir.string(),
                       dir);
  REQUIRE(tuned.exit_code == 0);
  auto r = run_cli("run" + fixture_flags() + " --config " +
                       (out_dir / "best_config.toml").string(),
                   dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("MACRO\t") != std::string::npos);
}

TEST_CASE("command-line flags override config file values") {
  auto dir = fresh_dir("config_precedence");
  fs::path cfg = dir / "cfg.toml";
  // The config pins eta to 0 (nothing retrieved); the flag restores it.
  std::ofstream(cfg) << "eta = 0.0\n";
  auto gated = run_cli("run" + fixture_flags() + " --config " + cfg.string(),
                       dir);
  CHECK(gated.exit_code == 0);
  CHECK(gated.out.find("MB01\t0.000000\t0.000000") != std::string::npos);
  auto overridden = run_cli("run" + fixture_flags() + " --config " +
                                cfg.string() + " --eta 0.9",
                            dir);
  CHECK(overridden.exit_code == 0);
  CHECK(overridden.out.find("MB01\t0.000000\t0.000000") == std::string::npos);
}

TEST_CASE("rejected config values stop the run before any processing") {
  auto dir = fresh_dir("badconfig");
  auto r = run_cli("run" + fixture_flags() + " --eta 1.5", dir);
  CHECK(r.exit_code != 0);
  CHECK(r.err.find("eta") != std::string::npos);
}

TEST_CASE("gen-synthetic writes a complete dataset") {
  auto dir = fresh_dir("gen");
  fs::path out_dir = dir / "ds";
  auto r = run_cli("gen-synthetic --kind basic --posts 50 --seed 9 --out-dir " +
                       out_dir.string(),
                   dir);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(out_dir / "corpus.jsonl"));
  CHECK(fs::exists(out_dir / "topics_test.jsonl"));
  CHECK(fs::exists(out_dir / "qrels.txt"));
  CHECK(count_lines(slurp(out_dir / "corpus.jsonl")) == 50);
}

TEST_CASE("gen-synthetic el datasets are reproducible per seed") {
  auto dir = fresh_dir("gen_seed");
  fs::path a = dir / "a";
  fs::path b = dir / "b";
  fs::path c = dir / "c";
  REQUIRE(run_cli("gen-synthetic --kind el --seed 7 --out-dir " + a.string(),
                  dir).exit_code == 0);
  REQUIRE(run_cli("gen-synthetic --kind el --seed 7 --out-dir " + b.string(),
                  dir).exit_code == 0);
  REQUIRE(run_cli("gen-synthetic --kind el --seed 8 --out-dir " + c.string(),
                  dir).exit_code == 0);
  CHECK(slurp(a / "corpus.jsonl") == slurp(b / "corpus.jsonl"));
  CHECK(slurp(a / "kb.tsv") == slurp(b / "kb.tsv"));
  CHECK(slurp(a / "corpus.jsonl") != slurp(c / "corpus.jsonl"));
}

TEST_CASE("a generated dataset feeds straight back into run") {
  auto dir = fresh_dir("gen_run");
  fs::path ds = dir / "ds";
  REQUIRE(run_cli("gen-synthetic --kind el --seed 7 --out-dir " + ds.string(),
                  dir).exit_code == 0);
  auto r = run_cli("run --corpus " + (ds / "corpus.jsonl").string() +
                       " --topics " + (ds / "topics_test.jsonl").string() +
                       " --qrels " + (ds / "qrels.txt").string() + " --kb " +
                       (ds / "kb.tsv").string() + resource_flags() +
                       " --eta 0.9 --workers 4",
                   dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("MACRO\t") != std::string::npos);
}
