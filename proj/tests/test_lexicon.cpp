#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "morphgen/alias_table.hpp"
#include "morphgen/errors.hpp"
#include "morphgen/lexicon.hpp"
#include "morphgen/numeric.hpp"
#include "morphgen/rng.hpp"

using namespace morphgen;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "morphgen_lexicon_tests";
  fs::create_directories(dir);
  return dir / name;
}

SyntheticLexiconConfig tiny_config() {
  SyntheticLexiconConfig cfg;
  cfg.prefix = ClassConfig{2, 1.0, 2, 3};
  cfg.root = ClassConfig{3, 1.2, 3, 5};
  cfg.deriv = ClassConfig{2, 1.0, 2, 4};
  cfg.infl = ClassConfig{2, 1.0, 1, 2};
  return cfg;
}

}  // namespace

TEST_CASE("power-law weights: single element") {
  const auto w = build_zipf_weights(1, 1.2);
  REQUIRE(w.size() == 1);
  CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("power-law weights: zero exponent gives uniform") {
  const auto w = build_zipf_weights(3, 0.0);
  for (double x : w) CHECK(x == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("power-law weights: n=2 s=1") {
  const auto w = build_zipf_weights(2, 1.0);
  CHECK(w[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("power-law weights: rejects n=0") {
  CHECK_THROWS_AS(build_zipf_weights(0, 1.0), std::invalid_argument);
}

TEST_CASE("power-law weights: normalized and non-increasing for random n, s") {
  Rng rng(1001);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.next_below(5000);
    const double s = rng.next_unit() * 3.0;
    const auto w = build_zipf_weights(n, s);
    CHECK(std::abs(neumaier_sum(w) - 1.0) <= 1e-12);
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      CHECK(w[i] >= w[i + 1]);
      CHECK(w[i + 1] > 0.0);
    }
  }
}

TEST_CASE("synthesis: singleton class with fixed length") {
  SyntheticLexiconConfig cfg = tiny_config();
  cfg.root = ClassConfig{1, 1.0, 3, 3};
  const Lexicon lex = synth_lexicon(cfg, 7);
  REQUIRE(lex.roots.size() == 1);
  CHECK(lex.roots.item(0).length == 3);
  CHECK(lex.roots.weight(0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("synthesis: reference-scale counts and bounds") {
  const Lexicon lex = synth_lexicon(SyntheticLexiconConfig{}, 42);
  CHECK(lex.prefixes.size() == 20);
  CHECK(lex.roots.size() == 500);
  CHECK(lex.derivs.size() == 80);
  CHECK(lex.inflections.size() == 15);
  CHECK(lex.total_morphemes() == 615);
  for (std::size_t i = 0; i < lex.roots.size(); ++i) {
    CHECK(lex.roots.item(i).length >= 3);
    CHECK(lex.roots.item(i).length <= 8);
  }
  CHECK(lex.prefixes.min_length() >= 2);
  CHECK(lex.prefixes.max_length() <= 4);
  CHECK(lex.inflections.max_length() <= 3);
}

TEST_CASE("synthesis: surfaces are distinct within a class") {
  SyntheticLexiconConfig cfg = tiny_config();
  cfg.root = ClassConfig{200, 1.0, 3, 4};
  const Lexicon lex = synth_lexicon(cfg, 11);
  std::set<std::string> seen;
  for (const Morpheme& m : lex.roots.items()) {
    CHECK(seen.insert(m.surface).second);
  }
}

TEST_CASE("synthesis: deterministic for a fixed seed") {
  const Lexicon a = synth_lexicon(SyntheticLexiconConfig{}, 99);
  const Lexicon b = synth_lexicon(SyntheticLexiconConfig{}, 99);
  for (MorphemeClass cls : kMorphemeClasses) {
    const auto& ia = a.inventory(cls);
    const auto& ib = b.inventory(cls);
    REQUIRE(ia.size() == ib.size());
    for (std::size_t i = 0; i < ia.size(); ++i) {
      CHECK(ia.item(i).surface == ib.item(i).surface);
      CHECK(ia.weight(i) == ib.weight(i));
    }
  }
  const Lexicon c = synth_lexicon(SyntheticLexiconConfig{}, 100);
  CHECK(a.roots.item(0).surface != c.roots.item(0).surface);
}

TEST_CASE("synthesis: alphabet exhaustion fails cleanly") {
  SyntheticLexiconConfig cfg = tiny_config();
  cfg.infl = ClassConfig{30, 1.0, 1, 1};  // only 26 single letters exist
  CHECK_THROWS_AS(synth_lexicon(cfg, 5), ConstructionError);
}

TEST_CASE("inventory sampling matches the weights (multinomial band)") {
  const Lexicon lex = synth_lexicon(tiny_config(), 13);
  AliasTable table(lex.roots.weights());
  Rng rng(77);
  constexpr std::uint64_t n = 1000000;
  std::vector<std::uint64_t> hits(lex.roots.size(), 0);
  for (std::uint64_t i = 0; i < n; ++i) ++hits[table.sample(rng)];
  for (std::size_t i = 0; i < hits.size(); ++i) {
    const double p = lex.roots.weight(i);
    const double se = std::sqrt(p * (1 - p) * n);
    CHECK(std::abs(static_cast<double>(hits[i]) - p * n) <= 4 * se);
  }
}

TEST_CASE("inventory invariants are enforced") {
  std::vector<Morpheme> items = {{"ab", 2, MorphemeClass::Root},
                                 {"cd", 2, MorphemeClass::Root}};
  CHECK_THROWS_AS(MorphemeInventory(MorphemeClass::Root, items, {0.5, 0.6}),
                  ValidationError);  // sum != 1
  CHECK_THROWS_AS(MorphemeInventory(MorphemeClass::Root, items, {1.0}),
                  ValidationError);  // cardinality mismatch
  items[1].surface = "ab";
  CHECK_THROWS_AS(MorphemeInventory(MorphemeClass::Root, items, {0.5, 0.5}),
                  ValidationError);  // duplicate surface
  items[1] = {"xyz", 2, MorphemeClass::Root};
  CHECK_THROWS_AS(MorphemeInventory(MorphemeClass::Root, items, {0.5, 0.5}),
                  ValidationError);  // length mismatch
}

TEST_CASE("load: singleton root file") {
  const fs::path path = temp_file("single.tsv");
  std::ofstream(path) << "R\tact\t1.0\n";
  const Lexicon lex = load_lexicon(path);
  CHECK(lex.roots.size() == 1);
  CHECK(lex.roots.item(0).surface == "act");
  CHECK(lex.prefixes.is_empty());
}

TEST_CASE("load: weight sum far from 1 is rejected by default") {
  const fs::path path = temp_file("sum09.tsv");
  std::ofstream(path) << "R\tact\t0.5\nR\trun\t0.4\n";
  CHECK_THROWS_WITH_AS(load_lexicon(path),
                       doctest::Contains("weights sum to"), ValidationError);
}

TEST_CASE("load: normalizing mode accepts raw counts and reports it") {
  const fs::path path = temp_file("counts.tsv");
  std::ofstream(path) << "# raw frequencies\nR\tact\t6\nR\trun\t3\nR\tsee\t1\n";
  LoadReport report;
  const Lexicon lex = load_lexicon(path, WeightPolicy::Normalize, &report);
  CHECK(lex.roots.weight(0) == doctest::Approx(0.6).epsilon(1e-14));
  const auto& cr = report.per_class[static_cast<std::size_t>(MorphemeClass::Root)];
  CHECK(cr.rescaled);
  CHECK(cr.raw_weight_sum == doctest::Approx(10.0));
  CHECK(cr.count == 3);
}

TEST_CASE("load: parse errors carry line numbers") {
  const fs::path path = temp_file("bad.tsv");
  std::ofstream(path) << "R\tact\t1.0\nX\tfoo\t1.0\n";
  try {
    load_lexicon(path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }

  std::ofstream(path) << "R\tact\t1.0\nR act 1.0\n";
  CHECK_THROWS_AS(load_lexicon(path), ParseError);

  std::ofstream(path) << "R\tact\tnotanumber\n";
  CHECK_THROWS_AS(load_lexicon(path), ParseError);

  std::ofstream(path) << "R\tact\t0.5\nR\tact\t0.5\n";
  try {
    load_lexicon(path);
    FAIL("expected duplicate-surface ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("save then load reproduces the lexicon exactly") {
  const Lexicon lex = synth_lexicon(SyntheticLexiconConfig{}, 21);
  const fs::path path = temp_file("roundtrip.tsv");
  save_lexicon(lex, path);
  const Lexicon back = load_lexicon(path);
  for (MorphemeClass cls : kMorphemeClasses) {
    const auto& a = lex.inventory(cls);
    const auto& b = back.inventory(cls);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a.item(i).surface == b.item(i).surface);
      CHECK(a.item(i).length == b.item(i).length);
      CHECK(a.weight(i) == b.weight(i));  // bit-exact via %.17g
    }
  }
}

TEST_CASE("custom length distribution parameters are honored") {
  SyntheticLexiconConfig cfg = tiny_config();
  cfg.root = ClassConfig{100, 1.0, 3, 8};
  cfg.root.length_mean = 3.0;
  cfg.root.length_sd = 0.5;
  const Lexicon lex = synth_lexicon(cfg, 3);
  // Mass should pile up at the short end.
  std::size_t short_count = 0;
  for (const Morpheme& m : lex.roots.items()) {
    if (m.length <= 4) ++short_count;
  }
  CHECK(short_count > 80);
}
