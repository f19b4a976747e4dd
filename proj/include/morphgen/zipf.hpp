#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace morphgen {

struct RankRecord {
  std::uint32_t rank = 0;
  std::string surface;
  std::uint64_t count = 0;
  double frequency = 0.0;  // count / total_tokens
};

// Types sorted by descending count, ties broken by surface ascending;
// ranks run 1..K consecutively and frequencies sum to 1.
struct RankFrequencyTable {
  std::vector<RankRecord> records;
  std::uint64_t total_tokens = 0;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

// Builds the table from a type-count map. Pure function of the count
// multiset. total_tokens must equal the sum of the counts. Empty counts
// give an empty table.
RankFrequencyTable rank_frequency(
    const std::unordered_map<std::string, std::uint64_t>& type_counts,
    std::uint64_t total_tokens);

struct ZipfFit {
  double alpha = 0.0;      // negated log-log slope
  double intercept = 0.0;  // log-frequency intercept at log rank = 0
  std::uint32_t r_min = 0;
  std::uint32_t r_max = 0;
  double residual_stderr = 0.0;
};

// Ordinary least squares of log frequency on log rank over ranks
// [r_min, r_max]. The window needs at least 3 points and strictly
// positive frequencies.
ZipfFit fit_zipf_exponent(const RankFrequencyTable& table, std::uint32_t r_min,
                          std::uint32_t r_max);

// Default window 1..min(100, table size).
ZipfFit fit_zipf_exponent(const RankFrequencyTable& table);

// Secondary maximum-likelihood estimate of the exponent (discrete
// power-law MLE over the rank values, token-weighted). Reported for
// comparison; the least-squares fit above is the primary estimator.
double fit_zipf_mle(const RankFrequencyTable& table, std::uint32_t r_min,
                    std::uint32_t r_max);

// Pure power-law reference curve: frequency(r) = r^-alpha for r = 1..ranks
// (normalized to sum 1 when requested). Counts are zero; the table shape
// is for fitting and plotting only.
RankFrequencyTable synthetic_zipf(double alpha, std::uint32_t ranks,
                                  bool normalized = false);

}  // namespace morphgen
