#include "morphgen/filter.hpp"

#include <cmath>

#include "morphgen/errors.hpp"

namespace morphgen {
namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError(std::string(what) + " must lie in [0, 1]");
  }
}

}  // namespace

SurvivalSpec SurvivalSpec::constant(double p, FilterMode mode) {
  check_probability(p, "constant survival probability");
  return SurvivalSpec{ConstantSurvival{p}, mode};
}

SurvivalSpec SurvivalSpec::length_logistic(double midpoint, double steepness,
                                           LogisticDirection direction,
                                           FilterMode mode) {
  if (steepness < 0.0) throw ValidationError("logistic steepness must be >= 0");
  return SurvivalSpec{LogisticSurvival{midpoint, steepness, direction}, mode};
}

SurvivalSpec SurvivalSpec::table(std::map<int, double> by_length,
                                 FilterMode mode) {
  for (const auto& [len, p] : by_length) {
    (void)len;
    check_probability(p, "table survival probability");
  }
  return SurvivalSpec{TableSurvival{std::move(by_length)}, mode};
}

double survival_probability(const SurvivalSpec& spec, int length) {
  return std::visit(
      [length](const auto& fn) -> double {
        using T = std::decay_t<decltype(fn)>;
        if constexpr (std::is_same_v<T, ConstantSurvival>) {
          return fn.p;
        } else if constexpr (std::is_same_v<T, LogisticSurvival>) {
          double t = fn.steepness * (length - fn.midpoint);
          if (fn.direction == LogisticDirection::FavorLong) t = -t;
          if (std::isnan(t)) return 0.5;  // infinite steepness at the midpoint
          return 1.0 / (1.0 + std::exp(t));
        } else {
          const auto it = fn.by_length.find(length);
          return it == fn.by_length.end() ? 1.0 : it->second;
        }
      },
      spec.fn);
}

bool survives(const SurvivalSpec& spec, std::string_view surface, int length,
              std::uint64_t seed, Rng& rng) {
  const double p = survival_probability(spec, length);
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  if (spec.mode == FilterMode::PerType) return hash_unit(seed, surface) < p;
  return rng.next_unit() < p;
}

}  // namespace morphgen
