#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "morphgen/alias_table.hpp"
#include "morphgen/filter.hpp"
#include "morphgen/lexicon.hpp"
#include "morphgen/rng.hpp"

namespace morphgen {

// Activation probabilities of the optional slots; the root slot is always
// active.
struct SlotActivations {
  double prefix = 0.0;
  double deriv = 0.0;
  double infl = 0.0;
};

void validate(const SlotActivations& acts);  // each value in [0, 1]

// Presence pattern of the optional slots for one word.
struct Template {
  bool has_prefix = false;
  bool has_deriv = false;
  bool has_infl = false;
};

// One generated word: inventory indices per chosen slot plus the
// concatenated surface. length always equals the character count of
// surface, which is the sum of the chosen morpheme lengths.
struct WordForm {
  std::optional<std::uint32_t> prefix;
  std::uint32_t root = 0;
  std::optional<std::uint32_t> deriv;
  std::optional<std::uint32_t> infl;
  std::string surface;
  int length = 0;
};

// Admissibility predicate over analyses. Total and deterministic. The
// rule variant restricts, per root, which derivational suffixes and
// inflections may attach; roots without a rule allow everything, and
// absent slots are always admissible.
class Constraint {
 public:
  struct RootRule {
    std::optional<std::vector<bool>> allowed_deriv;  // indexed by deriv index
    std::optional<std::vector<bool>> allowed_infl;
  };
  using Predicate = std::function<bool(
      std::optional<std::uint32_t> prefix, std::uint32_t root,
      std::optional<std::uint32_t> deriv, std::optional<std::uint32_t> infl)>;

  static Constraint free();
  static Constraint rules(std::unordered_map<std::uint32_t, RootRule> by_root);
  static Constraint predicate(Predicate fn);

  // Rule file: one record per line, root<TAB>deriv_allow<TAB>infl_allow,
  // where each allow field is '*' (everything), '-' (nothing), or a
  // comma-separated list of surfaces from the matching inventory.
  // '#' begins a comment line. Unlisted roots allow everything.
  static Constraint rules_from_file(const std::filesystem::path& path,
                                    const Lexicon& lexicon);

  bool admits(std::optional<std::uint32_t> prefix, std::uint32_t root,
              std::optional<std::uint32_t> deriv,
              std::optional<std::uint32_t> infl) const;
  bool is_free() const { return kind_ == Kind::Free; }

 private:
  enum class Kind { Free, Rules, Predicate };
  Kind kind_ = Kind::Free;
  std::unordered_map<std::uint32_t, RootRule> by_root_;
  Predicate predicate_;
};

Template sample_template(const SlotActivations& acts, Rng& rng);

struct GeneratorLimits {
  std::uint64_t rejection_budget = 1'000'000;
};

// Draw-by-draw sampler bound to one lexicon. The lexicon must outlive
// the sampler; the constraint is copied. Stateless after construction,
// so one instance may serve many threads, each with its own Rng.
// Constraint rejections redraw the whole template + morpheme choice,
// which realizes the normalized law exactly.
class WordSampler {
 public:
  WordSampler(const Lexicon& lexicon, const SlotActivations& acts,
              Constraint constraint, GeneratorLimits limits = {});
  WordForm sample(Rng& rng) const;

 private:
  const Lexicon& lexicon_;
  SlotActivations acts_;
  Constraint constraint_;
  GeneratorLimits limits_;
  std::optional<AliasTable> prefix_table_, root_table_, deriv_table_, infl_table_;
};

// Convenience single-draw form of WordSampler.
WordForm generate_word(const Lexicon& lexicon, const SlotActivations& acts,
                       const Constraint& constraint, Rng& rng,
                       GeneratorLimits limits = {});

// Unnormalized probability of one analysis: the product of the slot
// absence/selection factors, the root weight, and the 0/1 constraint.
double word_probability(const Lexicon& lexicon, const SlotActivations& acts,
                        const WordForm& word, const Constraint& constraint);

// (1 + n_prefix) * n_root * (1 + n_deriv) * (1 + n_infl)
std::uint64_t analysis_count(const Lexicon& lexicon);

struct WordAnalysis {
  std::optional<std::uint32_t> prefix;
  std::uint32_t root = 0;
  std::optional<std::uint32_t> deriv;
  std::optional<std::uint32_t> infl;
  double probability = 0.0;  // normalized
};

struct ExactWordDistribution {
  std::vector<WordAnalysis> analyses;  // enumeration order
  double normalization = 0.0;          // sum of unnormalized admissible mass

  // Distinct analyses may share a surface; the corpus observes surfaces,
  // so this view sums probabilities per surface. Sorted by probability
  // descending, ties by surface ascending.
  std::vector<std::pair<std::string, double>> merged_by_surface(
      const Lexicon& lexicon) const;
};

std::string analysis_surface(const Lexicon& lexicon,
                             std::optional<std::uint32_t> prefix,
                             std::uint32_t root,
                             std::optional<std::uint32_t> deriv,
                             std::optional<std::uint32_t> infl);

// Enumerates every admissible analysis in deterministic order, passing
// the unnormalized mass to the visitor. Used by the materializing form
// below and by streaming writers.
void for_each_admissible_analysis(
    const Lexicon& lexicon, const SlotActivations& acts,
    const Constraint& constraint,
    const std::function<void(std::optional<std::uint32_t>, std::uint32_t,
                             std::optional<std::uint32_t>,
                             std::optional<std::uint32_t>, double)>& visit);

inline constexpr std::uint64_t kDefaultEnumerationBudget = 20'000'000;

ExactWordDistribution exact_word_distribution(
    const Lexicon& lexicon, const SlotActivations& acts,
    const Constraint& constraint,
    std::uint64_t budget = kDefaultEnumerationBudget);

struct CorpusCounts {
  std::unordered_map<std::string, std::uint64_t> counts;  // by surface
  std::uint64_t tokens_requested = 0;
  std::uint64_t tokens_surviving = 0;
};

// Tokens are generated in fixed-size shards, each on the substream
// seed XOR shard index, so the result is identical for any thread count.
inline constexpr std::uint64_t kCorpusShardSize = 65536;

CorpusCounts generate_corpus(const Lexicon& lexicon, const SlotActivations& acts,
                             const Constraint& constraint,
                             const SurvivalSpec& filter, std::uint64_t n_tokens,
                             std::uint64_t seed, unsigned threads = 1,
                             GeneratorLimits limits = {});

}  // namespace morphgen
