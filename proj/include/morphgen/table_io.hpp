#pragma once

#include <filesystem>
#include <optional>
#include <unordered_map>
#include <vector>

#include "morphgen/length_analytics.hpp"
#include "morphgen/zipf.hpp"

namespace morphgen {

// Tab-separated tables, UTF-8, one header line. Writers emit rows in a
// deterministic order so reruns are byte-identical.

// length<TAB>count<TAB>share_percent, length ascending, share to 2 dp.
void write_length_table(const std::filesystem::path& path,
                        const std::vector<LengthHistRow>& rows);
std::vector<LengthHistRow> read_length_table(const std::filesystem::path& path);

// rank<TAB>surface<TAB>count<TAB>frequency, rank ascending.
void write_rank_table(const std::filesystem::path& path,
                      const RankFrequencyTable& table);
// Frequencies are recomputed from the counts on load.
RankFrequencyTable read_rank_table(const std::filesystem::path& path);

// surface<TAB>count, count descending then surface ascending.
void write_counts_table(const std::filesystem::path& path,
                        const std::unordered_map<std::string, std::uint64_t>& counts);

// Key-value fit report: alpha=, intercept=, window=, stderr= and
// optionally alpha_mle=.
void write_fit_report(const std::filesystem::path& path, const ZipfFit& fit,
                      std::optional<double> alpha_mle = std::nullopt);

// log10 rank / log10 frequency pairs over the fit window, comma-separated.
void write_loglog_csv(const std::filesystem::path& path,
                      const RankFrequencyTable& table, std::uint32_t r_min,
                      std::uint32_t r_max);

// Static log-log scatter of the rank table with the fitted line.
void write_loglog_svg(const std::filesystem::path& path,
                      const RankFrequencyTable& table, const ZipfFit& fit);

}  // namespace morphgen
