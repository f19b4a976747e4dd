#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "morphgen/length_analytics.hpp"
#include "morphgen/zipf.hpp"

namespace morphgen {

struct TokenizeOptions {
  // Default rule: tokens are maximal runs of ASCII letters [A-Za-z],
  // lowercased; every other byte separates. The Unicode mode widens
  // "letter" to the common European alphabetic ranges and applies the
  // simple case mappings for them.
  bool unicode_letters = false;
  // Drop everything up to a "*** START" line and from a "*** END" line on.
  bool strip_gutenberg = false;
};

struct TokenStream {
  std::vector<std::string> tokens;
  std::string source_label;
};

// Input must be valid UTF-8 in both modes; malformed bytes raise
// InputError with the byte offset.
TokenStream tokenize_alpha(std::string_view text, const TokenizeOptions& options = {},
                           std::string source_label = {});

TokenStream tokenize_file(const std::filesystem::path& path,
                          const TokenizeOptions& options = {});

// Letters in a token (code points; bytes for pure ASCII).
int token_letter_count(std::string_view token);

struct CorpusStats {
  std::vector<LengthHistRow> length_table;
  RankFrequencyTable rank_table;
  std::uint64_t token_count = 0;
  std::uint64_t type_count = 0;
};

CorpusStats corpus_stats(const TokenStream& stream);

struct ComparisonReport {
  double length_tv_distance = 0.0;
  int model_mode = 0;
  int corpus_mode = 0;
  bool alphas_valid = false;  // fit window had >= 3 usable ranks
  double model_alpha = 0.0;
  double corpus_alpha = 0.0;
  std::uint32_t window_lo = 0;
  std::uint32_t window_hi = 0;
};

// Total-variation distance between the normalized length distributions,
// both fitted exponents over a shared rank window, and mode locations.
ComparisonReport compare_distributions(
    const std::vector<LengthHistRow>& model_lengths,
    const RankFrequencyTable& model_ranks,
    const std::vector<LengthHistRow>& corpus_lengths,
    const RankFrequencyTable& corpus_ranks);

}  // namespace morphgen
