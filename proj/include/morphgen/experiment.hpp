#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>

#include "morphgen/corpus.hpp"
#include "morphgen/filter.hpp"
#include "morphgen/generator.hpp"
#include "morphgen/length_analytics.hpp"
#include "morphgen/lexicon.hpp"
#include "morphgen/zipf.hpp"

namespace morphgen {

// Filter settings as written in config files; build() materializes and
// validates the survival spec.
struct FilterSettings {
  std::string kind = "constant";  // constant | logistic | table
  double c = 1.0;
  double midpoint = 8.0;
  double steepness = 1.0;
  std::string direction = "favor_short";  // favor_short | favor_long
  std::string table;                      // "length:prob,length:prob,..."
  std::string mode = "per_type";          // per_type | per_token

  SurvivalSpec build() const;
};

// One experiment: lexicon source, slot activations, constraint, filter,
// token budget, seed, fit window, output directory. The defaults are the
// built-in reference configuration (20/500/80/15 morphemes, activations
// 0.4/0.6/0.7, 80k tokens), so a bare `generate` reproduces the standard
// study-scale run.
struct ExperimentConfig {
  std::filesystem::path lexicon_file;  // empty: synthesize from `lexicon`
  SyntheticLexiconConfig lexicon;
  SlotActivations activations{0.4, 0.6, 0.7};
  std::filesystem::path constraint_rules;  // empty: free generator
  FilterSettings filter;
  std::uint64_t n_tokens = 80000;
  std::uint64_t seed = 1;
  std::uint32_t fit_r_min = 1;
  std::uint32_t fit_r_max = 100;
  std::filesystem::path out_dir = "out";
  unsigned threads = 1;
  bool svg = false;
  std::uint64_t enum_budget = kDefaultEnumerationBudget;
  // Word-level files are only dumped when the analysis count stays under
  // this bound; the distribution itself is computed whenever it fits the
  // enumeration budget.
  std::uint64_t words_budget = 2'000'000;
  std::map<std::string, std::string> sweep_lists;  // config key -> comma list
  std::uint64_t sweep_max_points = 256;
};

// Flat dotted-key settings: `activations.a_P = 0.4`. '#' starts a comment
// line. Later sources win, so CLI flags override file values.
std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path);
void apply_setting(ExperimentConfig& config, const std::string& key,
                   const std::string& value);
void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path);
void apply_override(ExperimentConfig& config, const std::string& key_equals_value);
void validate_config(const ExperimentConfig& config);

Lexicon resolve_lexicon(const ExperimentConfig& config, LoadReport* report = nullptr);
Constraint resolve_constraint(const ExperimentConfig& config, const Lexicon& lexicon);

void run_gen_lexicon(const ExperimentConfig& config, std::ostream& log);

struct GenerateSummary {
  std::uint64_t tokens_requested = 0;
  std::uint64_t tokens_surviving = 0;
  std::uint64_t types = 0;
  int length_mode = 0;
  bool fit_valid = false;
  ZipfFit fit;
};
GenerateSummary run_generate(const ExperimentConfig& config, std::ostream& log);

struct ExactSummary {
  SlotCountPmf slot_count;
  LengthMoments moments;
  std::optional<LengthPmf> length_pmf;
  std::uint64_t total_analyses = 0;
  std::uint64_t admissible_analyses = 0;
  double normalization = 0.0;
  double probability_sum = 0.0;  // post-normalization, when enumerated
  bool enumerated = false;
  bool words_written = false;
};
ExactSummary run_exact(const ExperimentConfig& config, std::ostream& log);

CorpusStats run_corpus(const ExperimentConfig& config,
                       const std::filesystem::path& input,
                       const TokenizeOptions& options, std::ostream& log);

ComparisonReport run_compare(const ExperimentConfig& config,
                             const std::filesystem::path& model_dir,
                             const std::filesystem::path& corpus_dir,
                             std::ostream& log);

void run_sweep(const ExperimentConfig& config, std::ostream& log);

}  // namespace morphgen
