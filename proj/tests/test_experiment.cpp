#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "morphgen/errors.hpp"
#include "morphgen/experiment.hpp"
#include "morphgen/table_io.hpp"
#include "support/oracles.hpp"

using namespace morphgen;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "morphgen_experiment" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ExperimentConfig small_config(const fs::path& out) {
  ExperimentConfig config;
  config.lexicon.prefix = ClassConfig{2, 1.0, 2, 3};
  config.lexicon.root = ClassConfig{3, 1.2, 3, 5};
  config.lexicon.deriv = ClassConfig{2, 1.1, 2, 4};
  config.lexicon.infl = ClassConfig{2, 1.0, 1, 2};
  config.n_tokens = 20000;
  config.seed = 5;
  config.out_dir = out;
  return config;
}

}  // namespace

TEST_CASE("config files parse dotted keys and comments") {
  const fs::path dir = fresh_dir("parse");
  const fs::path path = dir / "exp.conf";
  std::ofstream(path) << "# comment\n"
                         "activations.a_P = 0.25\n"
                         "lexicon.root.count = 42\n"
                         "filter.kind = logistic\n"
                         "filter.direction = favor_long\n"
                         "n_tokens = 1234\n"
                         "svg = true\n";
  ExperimentConfig config;
  apply_config_file(config, path);
  CHECK(config.activations.prefix == 0.25);
  CHECK(config.lexicon.root.count == 42);
  CHECK(config.filter.kind == "logistic");
  CHECK(config.filter.direction == "favor_long");
  CHECK(config.n_tokens == 1234);
  CHECK(config.svg);
}

TEST_CASE("unknown keys and bad values name the field") {
  ExperimentConfig config;
  CHECK_THROWS_WITH_AS(apply_setting(config, "no.such.key", "1"),
                       doctest::Contains("no.such.key"), ValidationError);
  CHECK_THROWS_WITH_AS(apply_setting(config, "n_tokens", "abc"),
                       doctest::Contains("n_tokens"), ValidationError);
  CHECK_THROWS_AS(apply_override(config, "missing-equals"), ValidationError);
}

TEST_CASE("validation failures carry field names") {
  ExperimentConfig config;
  config.lexicon.root.count = 0;
  CHECK_THROWS_WITH_AS(validate_config(config), doctest::Contains("lexicon.root.count"),
                       ValidationError);
  config = ExperimentConfig{};
  config.activations.infl = 1.5;
  CHECK_THROWS_WITH_AS(validate_config(config), doctest::Contains("activations.a_E"),
                       ValidationError);
  config = ExperimentConfig{};
  config.n_tokens = 0;
  CHECK_THROWS_WITH_AS(validate_config(config), doctest::Contains("n_tokens"),
                       ValidationError);
  config = ExperimentConfig{};
  config.lexicon_file = "/no/such/lexicon.tsv";
  CHECK_THROWS_WITH_AS(validate_config(config), doctest::Contains("lexicon.file"),
                       ValidationError);
}

TEST_CASE("gen-lexicon writes the reference-scale lexicon") {
  const fs::path dir = fresh_dir("genlex");
  ExperimentConfig config;
  config.out_dir = dir;
  std::ostringstream log;
  run_gen_lexicon(config, log);
  CHECK(log.str().find("615 morphemes") != std::string::npos);
  const Lexicon lex = load_lexicon(dir / "lexicon.tsv");
  CHECK(lex.total_morphemes() == 615);

  // Re-running with the same seed reproduces the file byte for byte.
  const std::string first = slurp(dir / "lexicon.tsv");
  std::ostringstream log2;
  run_gen_lexicon(config, log2);
  CHECK(slurp(dir / "lexicon.tsv") == first);
}

TEST_CASE("generate writes deterministic outputs and a summary") {
  const fs::path dir = fresh_dir("gen1");
  const ExperimentConfig config = small_config(dir);
  std::ostringstream log;
  const GenerateSummary summary = run_generate(config, log);
  CHECK(summary.tokens_requested == 20000);
  CHECK(summary.tokens_surviving == 20000);
  CHECK(summary.types > 10);

  for (const char* name : {"counts.tsv", "lengths.tsv", "ranks.tsv", "fit.txt", "loglog.csv"}) {
    CHECK(fs::exists(dir / name));
  }
  const std::string counts_a = slurp(dir / "counts.tsv");
  const std::string ranks_a = slurp(dir / "ranks.tsv");

  run_generate(config, log);
  CHECK(slurp(dir / "counts.tsv") == counts_a);
  CHECK(slurp(dir / "ranks.tsv") == ranks_a);

  // The rank table on disk round-trips through the reader.
  const RankFrequencyTable table = read_rank_table(dir / "ranks.tsv");
  CHECK(table.total_tokens == 20000);
  CHECK(table.size() == summary.types);
}

TEST_CASE("generate with a survive-never filter warns and succeeds") {
  const fs::path dir = fresh_dir("gen0");
  ExperimentConfig config = small_config(dir);
  config.filter.kind = "constant";
  config.filter.c = 0.0;
  std::ostringstream log;
  const GenerateSummary summary = run_generate(config, log);
  CHECK(summary.tokens_surviving == 0);
  CHECK(summary.types == 0);
  CHECK(log.str().find("warning") != std::string::npos);
  CHECK(fs::exists(dir / "counts.tsv"));
}

TEST_CASE("always-survive filter output matches the default run byte for byte") {
  const fs::path dir_a = fresh_dir("ident_a");
  const fs::path dir_b = fresh_dir("ident_b");
  ExperimentConfig a = small_config(dir_a);
  ExperimentConfig b = small_config(dir_b);
  b.filter.kind = "constant";
  b.filter.c = 1.0;
  b.filter.mode = "per_token";
  std::ostringstream log;
  run_generate(a, log);
  run_generate(b, log);
  CHECK(slurp(dir_a / "counts.tsv") == slurp(dir_b / "counts.tsv"));
}

TEST_CASE("exact on a small lexicon enumerates and writes word files") {
  const fs::path dir = fresh_dir("exact");
  const ExperimentConfig config = small_config(dir);
  std::ostringstream log;
  const ExactSummary summary = run_exact(config, log);
  CHECK(summary.enumerated);
  CHECK(summary.total_analyses == 3 * 3 * 3 * 3);
  CHECK(summary.admissible_analyses == 81);
  CHECK(std::abs(summary.probability_sum - 1.0) <= 1e-12);
  CHECK(summary.words_written);
  CHECK(fs::exists(dir / "exact_words.tsv"));
  CHECK(fs::exists(dir / "exact_analyses.tsv"));
  CHECK(fs::exists(dir / "exact_lengths.tsv"));
  CHECK(fs::exists(dir / "moments.txt"));
  CHECK(fs::exists(dir / "n_morphemes.tsv"));
  CHECK(log.str().find("81 admissible analyses") != std::string::npos);
}

TEST_CASE("exact with zero activations prints the root-length pmf") {
  const fs::path dir = fresh_dir("exact0");
  ExperimentConfig config = small_config(dir);
  config.activations = SlotActivations{0, 0, 0};
  std::ostringstream log;
  const ExactSummary summary = run_exact(config, log);
  REQUIRE(summary.length_pmf.has_value());
  const Lexicon lex = resolve_lexicon(config);
  const LengthPmf root = class_length_pmf(lex.roots);
  CHECK(summary.length_pmf->min_length() == root.min_length());
  CHECK(summary.length_pmf->max_length() == root.max_length());
  CHECK(summary.moments.mean == doctest::Approx(root.mean()).epsilon(1e-12));
}

TEST_CASE("exact under a rules constraint derives the length pmf from the analyses") {
  const fs::path dir = fresh_dir("exact_rules");
  ExperimentConfig config = small_config(dir);
  const Lexicon lex = resolve_lexicon(config);
  const fs::path rules = dir / "rules.tsv";
  std::ofstream(rules) << lex.roots.item(0).surface << "\t-\t-\n";
  config.constraint_rules = rules;
  std::ostringstream log;
  const ExactSummary summary = run_exact(config, log);
  REQUIRE(summary.enumerated);
  CHECK(summary.admissible_analyses < summary.total_analyses);
  REQUIRE(summary.length_pmf.has_value());

  // Independent check: brute-force length mean over admissible analyses.
  const Constraint constraint = Constraint::rules_from_file(rules, lex);
  const auto analyses = testsupport::enumerate_all_analyses(
      lex, config.activations.prefix, config.activations.deriv,
      config.activations.infl, constraint);
  double total = 0.0, mean = 0.0;
  for (const auto& a : analyses) total += a.unnormalized;
  for (const auto& a : analyses) mean += a.length * a.unnormalized / total;
  CHECK(summary.moments.mean == doctest::Approx(mean).epsilon(1e-9));
}

TEST_CASE("exact beyond the enumeration budget still writes the pmf with a notice") {
  const fs::path dir = fresh_dir("exact_budget");
  ExperimentConfig config = small_config(dir);
  config.enum_budget = 10;  // 81 analyses exceed this
  std::ostringstream log;
  const ExactSummary summary = run_exact(config, log);
  CHECK_FALSE(summary.enumerated);
  CHECK(log.str().find("notice") != std::string::npos);
  CHECK(fs::exists(dir / "exact_lengths.tsv"));
  CHECK(fs::exists(dir / "moments.txt"));
  CHECK_FALSE(fs::exists(dir / "exact_words.tsv"));
}

TEST_CASE("generate agrees with the exact merged distribution end to end") {
  const fs::path dir = fresh_dir("agree");
  ExperimentConfig config = small_config(dir);
  config.n_tokens = 500000;
  std::ostringstream log;
  run_generate(config, log);
  const ExactSummary exact = run_exact(config, log);
  REQUIRE(exact.enumerated);

  // Read both distributions back from the written artifacts.
  const RankFrequencyTable observed = read_rank_table(dir / "ranks.tsv");
  std::ifstream words(dir / "exact_words.tsv");
  REQUIRE(words);
  std::string line;
  std::getline(words, line);  // header
  std::unordered_map<std::string, double> expected;
  while (std::getline(words, line)) {
    const auto tab = line.find('\t');
    REQUIRE(tab != std::string::npos);
    expected[line.substr(0, tab)] = std::stod(line.substr(tab + 1));
  }
  for (const RankRecord& rec : observed.records) {
    REQUIRE(expected.count(rec.surface));
    CHECK(std::abs(rec.frequency - expected[rec.surface]) < 0.005);
  }
}

TEST_CASE("compare of a directory with itself is all zeros") {
  const fs::path dir = fresh_dir("cmp");
  const ExperimentConfig config = small_config(dir);
  std::ostringstream log;
  run_generate(config, log);
  ExperimentConfig cmp_config;
  cmp_config.out_dir = dir / "cmp_out";
  const ComparisonReport report = run_compare(cmp_config, dir, dir, log);
  CHECK(report.length_tv_distance == doctest::Approx(0.0));
  CHECK(report.model_mode == report.corpus_mode);
  CHECK(fs::exists(cmp_config.out_dir / "report.txt"));
}

TEST_CASE("compare with a missing file is an actionable error") {
  const fs::path dir = fresh_dir("cmp_missing");
  ExperimentConfig config;
  config.out_dir = dir;
  std::ostringstream log;
  CHECK_THROWS_WITH_AS(run_compare(config, dir / "nope", dir / "nope", log),
                       doctest::Contains("lengths.tsv"), ValidationError);
}

TEST_CASE("sweep: single point matches a plain generate run") {
  const fs::path dir_sweep = fresh_dir("sweep1");
  const fs::path dir_gen = fresh_dir("sweep1_gen");
  ExperimentConfig config = small_config(dir_sweep);
  config.sweep_lists["n_tokens"] = "20000";
  std::ostringstream log;
  run_sweep(config, log);

  ExperimentConfig gen = small_config(dir_gen);
  const GenerateSummary summary = run_generate(gen, log);

  const std::string csv = slurp(dir_sweep / "sweep.csv");
  std::istringstream lines(csv);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(header == "point,n_tokens,types,tokens_surviving,alpha,length_mode,mean_length");
  // point 0 runs at the base seed, so types/tokens match the direct run.
  std::stringstream ss(row);
  std::string field;
  std::getline(ss, field, ',');  // point
  std::getline(ss, field, ',');  // n_tokens
  CHECK(field == "20000");
  std::getline(ss, field, ',');
  CHECK(std::stoull(field) == summary.types);
  std::getline(ss, field, ',');
  CHECK(std::stoull(field) == summary.tokens_surviving);
}

TEST_CASE("sweep: inflection activation shifts the mean by the inflection length") {
  const fs::path dir = fresh_dir("sweep_ae");
  ExperimentConfig config;
  config.lexicon.prefix = ClassConfig{1, 1.0, 2, 2};
  config.lexicon.root = ClassConfig{1, 1.0, 3, 3};
  config.lexicon.deriv = ClassConfig{1, 1.0, 2, 2};
  config.lexicon.infl = ClassConfig{1, 1.0, 2, 2};
  config.activations = SlotActivations{0, 0, 0};
  config.n_tokens = 100;
  config.out_dir = dir;
  config.sweep_lists["activations.a_E"] = "0,1";
  std::ostringstream log;
  run_sweep(config, log);

  std::istringstream lines(slurp(dir / "sweep.csv"));
  std::string header, row0, row1;
  std::getline(lines, header);
  std::getline(lines, row0);
  std::getline(lines, row1);
  const auto mean_of = [](const std::string& row) {
    const auto pos = row.rfind(',');
    return std::stod(row.substr(pos + 1));
  };
  // Singleton classes: fully-off vs fully-on inflection differs by its
  // exact length (2 letters).
  CHECK(mean_of(row1) - mean_of(row0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("sweep refuses oversized grids with the point count") {
  ExperimentConfig config = small_config(fresh_dir("sweep_big"));
  config.sweep_lists["activations.a_P"] = "0,0.25,0.5,0.75,1";
  config.sweep_lists["activations.a_S"] = "0,0.25,0.5,0.75,1";
  config.sweep_max_points = 10;
  std::ostringstream log;
  CHECK_THROWS_WITH_AS(run_sweep(config, log), doctest::Contains("25"), ValidationError);
}

TEST_CASE("non-sweepable keys are rejected") {
  ExperimentConfig config;
  CHECK_THROWS_WITH_AS(apply_setting(config, "sweep.seed", "1,2"),
                       doctest::Contains("not sweepable"), ValidationError);
}

TEST_CASE("generate with a single token yields a single-type table") {
  const fs::path dir = fresh_dir("gen_one");
  ExperimentConfig config = small_config(dir);
  config.n_tokens = 1;
  std::ostringstream log;
  const GenerateSummary summary = run_generate(config, log);
  CHECK(summary.tokens_surviving == 1);
  CHECK(summary.types == 1);
  const RankFrequencyTable table = read_rank_table(dir / "ranks.tsv");
  REQUIRE(table.size() == 1);
  CHECK(table.records[0].frequency == doctest::Approx(1.0));
}

TEST_CASE("reference-scale run lands in the expected frequency regime") {
  const fs::path dir = fresh_dir("gen_ref");
  ExperimentConfig config;  // built-in reference configuration
  config.out_dir = dir;
  std::ostringstream log;
  const GenerateSummary summary = run_generate(config, log);
  CHECK(summary.types > 1000);  // combinatorially rich type inventory
  const RankFrequencyTable table = read_rank_table(dir / "ranks.tsv");
  // Order-of-magnitude bands; exact values move with the seed.
  CHECK(table.records[0].frequency > 0.005);
  CHECK(table.records[0].frequency < 0.05);
  REQUIRE(table.size() >= 30);
  CHECK(table.records[29].frequency > 0.0005);
  CHECK(table.records[29].frequency < 0.005);
}

TEST_CASE("rules-file constraint threads through generate") {
  const fs::path dir = fresh_dir("rules");
  ExperimentConfig config = small_config(dir);
  const Lexicon lex = resolve_lexicon(config);
  const fs::path rules = dir / "rules.tsv";
  std::ofstream(rules) << lex.roots.item(0).surface << "\t-\t-\n";
  config.constraint_rules = rules;
  std::ostringstream log;
  const GenerateSummary summary = run_generate(config, log);
  CHECK(summary.tokens_surviving == 20000);
  // Root 0 may only appear bare (no suffix, no inflection): with other
  // roots present the corpus still flows, so just sanity-check totals.
  const RankFrequencyTable table = read_rank_table(dir / "ranks.tsv");
  CHECK(table.total_tokens == 20000);
}
