#include "morphgen/table_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "morphgen/errors.hpp"

namespace morphgen {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write file: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path.string());
  return in;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw ValidationError("I/O error writing " + path.string());
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::uint64_t parse_u64(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("cannot parse integer '" + s + "'", line_no);
  }
}

int parse_int(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("cannot parse integer '" + s + "'", line_no);
  }
}

}  // namespace

void write_length_table(const std::filesystem::path& path,
                        const std::vector<LengthHistRow>& rows) {
  auto out = open_out(path);
  out << "length\tcount\tshare_percent\n";
  char buf[32];
  for (const LengthHistRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.2f", r.share_percent);
    out << r.length << '\t' << r.count << '\t' << buf << '\n';
  }
  finish(out, path);
}

std::vector<LengthHistRow> read_length_table(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<LengthHistRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  std::uint64_t total = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() != 3) throw ParseError("expected 3 tab-separated fields", line_no);
    LengthHistRow row;
    row.length = parse_int(fields[0], line_no);
    row.count = parse_u64(fields[1], line_no);
    total += row.count;
    rows.push_back(row);
  }
  for (LengthHistRow& r : rows) {
    r.share_percent = total == 0 ? 0.0
                                 : 100.0 * static_cast<double>(r.count) /
                                       static_cast<double>(total);
  }
  return rows;
}

void write_rank_table(const std::filesystem::path& path,
                      const RankFrequencyTable& table) {
  auto out = open_out(path);
  out << "rank\tsurface\tcount\tfrequency\n";
  char buf[40];
  for (const RankRecord& r : table.records) {
    std::snprintf(buf, sizeof buf, "%.12g", r.frequency);
    out << r.rank << '\t' << r.surface << '\t' << r.count << '\t' << buf << '\n';
  }
  finish(out, path);
}

RankFrequencyTable read_rank_table(const std::filesystem::path& path) {
  auto in = open_in(path);
  RankFrequencyTable table;
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() != 4) throw ParseError("expected 4 tab-separated fields", line_no);
    RankRecord rec;
    rec.rank = static_cast<std::uint32_t>(parse_u64(fields[0], line_no));
    rec.surface = fields[1];
    rec.count = parse_u64(fields[2], line_no);
    if (rec.rank != table.records.size() + 1) {
      throw ParseError("ranks must be consecutive from 1", line_no);
    }
    table.total_tokens += rec.count;
    table.records.push_back(std::move(rec));
  }
  for (RankRecord& rec : table.records) {
    rec.frequency = table.total_tokens == 0
                        ? 0.0
                        : static_cast<double>(rec.count) /
                              static_cast<double>(table.total_tokens);
  }
  return table;
}

void write_counts_table(
    const std::filesystem::path& path,
    const std::unordered_map<std::string, std::uint64_t>& counts) {
  std::vector<std::pair<std::string, std::uint64_t>> rows(counts.begin(), counts.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  auto out = open_out(path);
  out << "surface\tcount\n";
  for (const auto& [surface, count] : rows) out << surface << '\t' << count << '\n';
  finish(out, path);
}

void write_fit_report(const std::filesystem::path& path, const ZipfFit& fit,
                      std::optional<double> alpha_mle) {
  auto out = open_out(path);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", fit.alpha);
  out << "alpha=" << buf << '\n';
  std::snprintf(buf, sizeof buf, "%.9g", fit.intercept);
  out << "intercept=" << buf << '\n';
  out << "window=" << fit.r_min << ".." << fit.r_max << '\n';
  std::snprintf(buf, sizeof buf, "%.9g", fit.residual_stderr);
  out << "stderr=" << buf << '\n';
  if (alpha_mle) {
    std::snprintf(buf, sizeof buf, "%.9g", *alpha_mle);
    out << "alpha_mle=" << buf << '\n';
  }
  finish(out, path);
}

void write_loglog_csv(const std::filesystem::path& path,
                      const RankFrequencyTable& table, std::uint32_t r_min,
                      std::uint32_t r_max) {
  auto out = open_out(path);
  out << "log10_rank,log10_frequency\n";
  char buf[80];
  for (std::uint32_t r = r_min; r <= r_max && r <= table.size(); ++r) {
    const double f = table.records[r - 1].frequency;
    if (!(f > 0.0)) continue;
    std::snprintf(buf, sizeof buf, "%.9g,%.9g", std::log10(static_cast<double>(r)),
                  std::log10(f));
    out << buf << '\n';
  }
  finish(out, path);
}

void write_loglog_svg(const std::filesystem::path& path,
                      const RankFrequencyTable& table, const ZipfFit& fit) {
  constexpr int kWidth = 640, kHeight = 480, kMargin = 56;
  std::vector<std::pair<double, double>> pts;
  for (const RankRecord& rec : table.records) {
    if (rec.frequency > 0.0) {
      pts.emplace_back(std::log10(static_cast<double>(rec.rank)),
                       std::log10(rec.frequency));
    }
  }
  if (pts.empty()) throw ValidationError("no positive frequencies to plot");
  double x_lo = pts.front().first, x_hi = pts.front().first;
  double y_lo = pts.front().second, y_hi = pts.front().second;
  for (const auto& [x, y] : pts) {
    x_lo = std::min(x_lo, x); x_hi = std::max(x_hi, x);
    y_lo = std::min(y_lo, y); y_hi = std::max(y_hi, y);
  }
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  if (y_hi == y_lo) y_hi = y_lo + 1.0;
  const auto sx = [&](double x) {
    return kMargin + (x - x_lo) / (x_hi - x_lo) * (kWidth - 2 * kMargin);
  };
  const auto sy = [&](double y) {
    return kHeight - kMargin - (y - y_lo) / (y_hi - y_lo) * (kHeight - 2 * kMargin);
  };

  auto out = open_out(path);
  char buf[160];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"none\" stroke=\"black\"/>\n",
                kMargin, kMargin, kWidth - 2 * kMargin, kHeight - 2 * kMargin);
  out << buf;
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">log10 rank</text>\n";
  out << "<text x=\"16\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
      << kHeight / 2 << ")\">log10 frequency</text>\n";
  for (const auto& [x, y] : pts) {
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.4\" fill=\"#27509b\"/>\n",
                  sx(x), sy(y));
    out << buf;
  }
  // Fitted line over the fit window, converted to base-10 coordinates.
  const double ln10 = std::log(10.0);
  const auto fit_y = [&](double x10) {
    return (fit.intercept - fit.alpha * x10 * ln10) / ln10;
  };
  const double fx0 = std::log10(static_cast<double>(fit.r_min));
  const double fx1 = std::log10(static_cast<double>(fit.r_max));
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#b03a2e\" stroke-width=\"1.5\"/>\n",
                sx(fx0), sy(fit_y(fx0)), sx(fx1), sy(fit_y(fx1)));
  out << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%d\" y=\"%d\" font-size=\"13\">alpha = %.4f (ranks %u..%u)</text>\n",
                kMargin + 8, kMargin + 18, fit.alpha, fit.r_min, fit.r_max);
  out << buf;
  out << "</svg>\n";
  finish(out, path);
}

}  // namespace morphgen
