#include "morphgen/zipf.hpp"

#include <algorithm>
#include <cmath>

#include "morphgen/errors.hpp"
#include "morphgen/numeric.hpp"

namespace morphgen {

RankFrequencyTable rank_frequency(
    const std::unordered_map<std::string, std::uint64_t>& type_counts,
    std::uint64_t total_tokens) {
  RankFrequencyTable table;
  if (type_counts.empty()) return table;
  if (total_tokens == 0) throw ValidationError("total_tokens must be > 0");

  std::uint64_t sum = 0;
  table.records.reserve(type_counts.size());
  for (const auto& [surface, count] : type_counts) {
    sum += count;
    table.records.push_back(RankRecord{0, surface, count, 0.0});
  }
  if (sum != total_tokens) {
    throw ValidationError("total_tokens (" + std::to_string(total_tokens) +
                          ") does not match the count sum (" +
                          std::to_string(sum) + ")");
  }
  std::sort(table.records.begin(), table.records.end(),
            [](const RankRecord& a, const RankRecord& b) {
              if (a.count != b.count) return a.count > b.count;
              return a.surface < b.surface;
            });
  table.total_tokens = total_tokens;
  for (std::size_t i = 0; i < table.records.size(); ++i) {
    table.records[i].rank = static_cast<std::uint32_t>(i + 1);
    table.records[i].frequency = static_cast<double>(table.records[i].count) /
                                 static_cast<double>(total_tokens);
  }
  return table;
}

ZipfFit fit_zipf_exponent(const RankFrequencyTable& table, std::uint32_t r_min,
                          std::uint32_t r_max) {
  if (r_min < 1 || r_max > table.size() || r_max < r_min) {
    throw ValidationError("fit window [" + std::to_string(r_min) + ", " +
                          std::to_string(r_max) + "] is invalid for a table of " +
                          std::to_string(table.size()) + " ranks");
  }
  const std::uint32_t n = r_max - r_min + 1;
  if (n < 3) throw ValidationError("fit window must contain at least 3 points");

  NeumaierSum sx, sy, sxx, sxy;
  for (std::uint32_t r = r_min; r <= r_max; ++r) {
    const double f = table.records[r - 1].frequency;
    if (!(f > 0.0)) {
      throw ValidationError("zero frequency at rank " + std::to_string(r) +
                            " inside the fit window");
    }
    const double x = std::log(static_cast<double>(r));
    const double y = std::log(f);
    sx.add(x);
    sy.add(y);
    sxx.add(x * x);
    sxy.add(x * y);
  }
  const double dn = n;
  const double mean_x = sx.value() / dn;
  const double mean_y = sy.value() / dn;
  const double var_x = sxx.value() - dn * mean_x * mean_x;
  const double cov_xy = sxy.value() - dn * mean_x * mean_y;
  if (!(var_x > 0.0)) throw ValidationError("degenerate fit window");
  const double slope = cov_xy / var_x;
  const double intercept = mean_y - slope * mean_x;

  NeumaierSum ssr;
  for (std::uint32_t r = r_min; r <= r_max; ++r) {
    const double x = std::log(static_cast<double>(r));
    const double resid = std::log(table.records[r - 1].frequency) - (intercept + slope * x);
    ssr.add(resid * resid);
  }
  ZipfFit fit;
  fit.alpha = -slope;
  fit.intercept = intercept;
  fit.r_min = r_min;
  fit.r_max = r_max;
  fit.residual_stderr = n > 2 ? std::sqrt(ssr.value() / (dn - 2.0)) : 0.0;
  return fit;
}

ZipfFit fit_zipf_exponent(const RankFrequencyTable& table) {
  const auto r_max = static_cast<std::uint32_t>(std::min<std::size_t>(100, table.size()));
  return fit_zipf_exponent(table, 1, r_max);
}

double fit_zipf_mle(const RankFrequencyTable& table, std::uint32_t r_min,
                    std::uint32_t r_max) {
  if (r_min < 1 || r_max > table.size() || r_max < r_min) {
    throw ValidationError("MLE window is invalid");
  }
  NeumaierSum log_sum;
  std::uint64_t tokens = 0;
  for (std::uint32_t r = r_min; r <= r_max; ++r) {
    const std::uint64_t c = table.records[r - 1].count;
    if (c == 0) throw ValidationError("MLE window requires positive counts");
    tokens += c;
    log_sum.add(static_cast<double>(c) *
                std::log(static_cast<double>(r) / (r_min - 0.5)));
  }
  if (!(log_sum.value() > 0.0)) throw ValidationError("degenerate MLE window");
  return 1.0 + static_cast<double>(tokens) / log_sum.value();
}

RankFrequencyTable synthetic_zipf(double alpha, std::uint32_t ranks,
                                  bool normalized) {
  if (!(alpha > 0.0)) throw ValidationError("alpha must be > 0");
  if (ranks < 1) throw ValidationError("ranks must be >= 1");
  RankFrequencyTable table;
  table.records.reserve(ranks);
  NeumaierSum total;
  for (std::uint32_t r = 1; r <= ranks; ++r) {
    const double f = std::pow(static_cast<double>(r), -alpha);
    total.add(f);
    table.records.push_back(RankRecord{r, std::string(), 0, f});
  }
  if (normalized) {
    const double norm = total.value();
    for (RankRecord& rec : table.records) rec.frequency /= norm;
  }
  return table;
}

}  // namespace morphgen
