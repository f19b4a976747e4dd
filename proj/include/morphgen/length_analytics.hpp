#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "morphgen/generator.hpp"
#include "morphgen/lexicon.hpp"

namespace morphgen {

// Probability mass function over a contiguous integer range of word
// lengths. Probabilities are nonnegative and sum to 1 within 1e-12;
// interior zeros are allowed.
class LengthPmf {
 public:
  LengthPmf() = default;
  LengthPmf(int min_length, std::vector<double> probabilities);

  int min_length() const { return min_length_; }
  int max_length() const { return min_length_ + static_cast<int>(probs_.size()) - 1; }
  double prob(int length) const;
  const std::vector<double>& probabilities() const { return probs_; }

  double mean() const;
  double variance() const;
  int mode() const;  // smallest argmax
  // Non-decreasing up to the mode, non-increasing after it.
  bool unimodal() const;
  // Mode strictly inside (min_length, max_length).
  bool interior_mode() const;

  static LengthPmf from_counts(const std::map<int, std::uint64_t>& counts);

 private:
  int min_length_ = 0;
  std::vector<double> probs_;
};

// Half the L1 distance between two pmfs over the union of supports.
double total_variation(const LengthPmf& a, const LengthPmf& b);

// Distribution of the number of morphemes per word, N in {1, 2, 3, 4}:
// the mandatory root plus the three independent slot indicators.
struct SlotCountPmf {
  std::array<double, 4> probabilities{};  // index i holds P(N = i + 1)
  double prob(int n) const { return probabilities[static_cast<std::size_t>(n - 1)]; }
  double mean() const;
  double variance() const;
};

SlotCountPmf n_morpheme_distribution(const SlotActivations& acts);

// Length pmf of one class under its categorical weights.
LengthPmf class_length_pmf(const MorphemeInventory& inventory);

// Exact pmf of the total word length for the free (unconstrained)
// generator: a mixture over the 8 slot presence patterns, each pattern a
// convolution of the active classes' length pmfs with the root pmf.
LengthPmf exact_length_pmf(const Lexicon& lexicon, const SlotActivations& acts);

struct LengthMoments {
  double mean = 0.0;
  double variance = 0.0;
};

// Closed-form mean and variance of the free-generator word length,
// composed from per-class moments and the activation probabilities.
LengthMoments length_moments(const Lexicon& lexicon, const SlotActivations& acts);

// Length pmf induced by an enumerated word distribution (usable with
// constraints, where the convolution form does not apply).
LengthPmf length_pmf_from_analyses(const ExactWordDistribution& dist,
                                   const Lexicon& lexicon);

// Truncated geometric baseline on 1..max_len with decay ratio (1 - q);
// q = 1 degenerates to a point mass at length 1. Strictly decreasing for
// q in (0, 1): no interior maximum.
LengthPmf geometric_length_pmf(double q, int max_len);

struct LengthHistRow {
  int length = 0;
  std::uint64_t count = 0;
  double share_percent = 0.0;
};

std::vector<LengthHistRow> empirical_length_hist(
    const std::map<int, std::uint64_t>& counts_by_length);

// Aggregates surface-keyed type counts by byte length (ASCII surfaces).
std::map<int, std::uint64_t> length_counts_from_types(
    const std::unordered_map<std::string, std::uint64_t>& type_counts);

}  // namespace morphgen
