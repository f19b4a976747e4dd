#pragma once

#include <cstdint>
#include <map>
#include <string_view>
#include <variant>

#include "morphgen/rng.hpp"

namespace morphgen {

// Lexical survival filter: a word type (or token) survives into the
// counted corpus with probability given by the survival function.

enum class FilterMode {
  PerType,   // outcome is a pure function of (seed, surface): a type
             // lives or dies consistently across all of its tokens
  PerToken,  // independent Bernoulli thinning per occurrence
};

enum class LogisticDirection { FavorShort, FavorLong };

struct ConstantSurvival {
  double p = 1.0;
};

// 1 / (1 + exp(+-k (L - midpoint))); sign chosen so FavorShort decays
// with length and FavorLong grows with it.
struct LogisticSurvival {
  double midpoint = 8.0;
  double steepness = 1.0;
  LogisticDirection direction = LogisticDirection::FavorShort;
};

// Explicit length -> probability map; unlisted lengths survive (1.0).
struct TableSurvival {
  std::map<int, double> by_length;
};

struct SurvivalSpec {
  std::variant<ConstantSurvival, LogisticSurvival, TableSurvival> fn =
      ConstantSurvival{1.0};
  FilterMode mode = FilterMode::PerType;

  static SurvivalSpec constant(double p, FilterMode mode = FilterMode::PerType);
  static SurvivalSpec length_logistic(double midpoint, double steepness,
                                      LogisticDirection direction,
                                      FilterMode mode = FilterMode::PerType);
  static SurvivalSpec table(std::map<int, double> by_length,
                            FilterMode mode = FilterMode::PerType);
};

double survival_probability(const SurvivalSpec& spec, int length);

// Per-type mode hashes (seed, surface); per-token mode consumes one unit
// draw from rng. Degenerate probabilities (<= 0, >= 1) consume nothing,
// so an always-survive filter leaves the generation stream untouched.
bool survives(const SurvivalSpec& spec, std::string_view surface, int length,
              std::uint64_t seed, Rng& rng);

}  // namespace morphgen
