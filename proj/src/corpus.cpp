#include "morphgen/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "morphgen/errors.hpp"

namespace morphgen {
namespace {

bool is_ascii_letter(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Decodes one UTF-8 code point at offset i; throws InputError on
// malformed sequences. Returns the code point and advances i.
char32_t decode_utf8(std::string_view text, std::size_t& i) {
  const auto fail = [&](const char* why) -> char32_t {
    throw InputError(std::string("invalid UTF-8: ") + why, i);
  };
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
  const unsigned char b0 = byte(i);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int extra = 0;
  char32_t cp = 0;
  char32_t min_cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1; cp = b0 & 0x1F; min_cp = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2; cp = b0 & 0x0F; min_cp = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3; cp = b0 & 0x07; min_cp = 0x10000;
  } else {
    return fail("stray continuation or invalid lead byte");
  }
  if (i + static_cast<std::size_t>(extra) >= text.size()) {
    return fail("truncated sequence");
  }
  for (int k = 1; k <= extra; ++k) {
    const unsigned char bk = byte(i + static_cast<std::size_t>(k));
    if ((bk & 0xC0) != 0x80) return fail("missing continuation byte");
    cp = (cp << 6) | (bk & 0x3F);
  }
  if (cp < min_cp) return fail("overlong encoding");
  if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return fail("invalid code point");
  i += static_cast<std::size_t>(extra) + 1;
  return cp;
}

// Alphabetic ranges for the Unicode mode: Latin (incl. extensions),
// Greek, Cyrillic. Coverage is intentionally limited to the scripts the
// tool is used with; everything else separates tokens.
bool is_unicode_letter(char32_t cp) {
  if (cp < 0x80) return is_ascii_letter(static_cast<unsigned char>(cp));
  if (cp >= 0x00C0 && cp <= 0x00FF) return cp != 0x00D7 && cp != 0x00F7;
  if (cp >= 0x0100 && cp <= 0x024F) return true;   // Latin Extended-A/B
  if (cp >= 0x0370 && cp <= 0x03FF) return cp != 0x0374 && cp != 0x0375 &&
                                           cp != 0x037E && cp != 0x0384 &&
                                           cp != 0x0385 && cp != 0x0387;
  if (cp >= 0x0400 && cp <= 0x04FF) return true;   // Cyrillic
  if (cp >= 0x1E00 && cp <= 0x1EFF) return true;   // Latin Extended Additional
  return false;
}

// Simple lowercase mapping for the ranges above.
char32_t simple_lowercase(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 0x20;
  if (cp >= 0x0100 && cp <= 0x024F) {
    // Mostly alternating upper/lower pairs; even code points are upper.
    if (cp <= 0x0177 || (cp >= 0x01DE && cp <= 0x01EF) ||
        (cp >= 0x01F8 && cp <= 0x021F) || (cp >= 0x0222 && cp <= 0x0233)) {
      return (cp % 2 == 0) ? cp + 1 : cp;
    }
    return cp;
  }
  if (cp >= 0x0391 && cp <= 0x03A9 && cp != 0x03A2) return cp + 0x20;
  if (cp >= 0x0400 && cp <= 0x040F) return cp + 0x50;
  if (cp >= 0x0410 && cp <= 0x042F) return cp + 0x20;
  if (cp >= 0x1E00 && cp <= 0x1EFF) return (cp % 2 == 0) ? cp + 1 : cp;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string_view strip_gutenberg_envelope(std::string_view text) {
  const std::size_t start_marker = text.find("*** START");
  if (start_marker != std::string_view::npos) {
    const std::size_t eol = text.find('\n', start_marker);
    if (eol != std::string_view::npos) text = text.substr(eol + 1);
  }
  const std::size_t end_marker = text.find("*** END");
  if (end_marker != std::string_view::npos) {
    std::size_t bol = text.rfind('\n', end_marker);
    if (bol == std::string_view::npos) bol = 0;
    text = text.substr(0, bol);
  }
  return text;
}

}  // namespace

TokenStream tokenize_alpha(std::string_view text, const TokenizeOptions& options,
                           std::string source_label) {
  if (options.strip_gutenberg) text = strip_gutenberg_envelope(text);

  TokenStream stream;
  stream.source_label = std::move(source_label);
  std::string current;
  const auto flush = [&] {
    if (!current.empty()) {
      stream.tokens.push_back(current);
      current.clear();
    }
  };

  std::size_t i = 0;
  while (i < text.size()) {
    const unsigned char b = static_cast<unsigned char>(text[i]);
    if (b < 0x80) {
      if (is_ascii_letter(b)) {
        current.push_back(static_cast<char>(b >= 'A' && b <= 'Z' ? b + 0x20 : b));
      } else {
        flush();
      }
      ++i;
      continue;
    }
    const char32_t cp = decode_utf8(text, i);
    if (options.unicode_letters && is_unicode_letter(cp)) {
      append_utf8(current, simple_lowercase(cp));
    } else {
      flush();
    }
  }
  flush();
  return stream;
}

TokenStream tokenize_file(const std::filesystem::path& path,
                          const TokenizeOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open corpus file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw ValidationError("I/O error reading " + path.string());
  return tokenize_alpha(buffer.str(), options, path.filename().string());
}

int token_letter_count(std::string_view token) {
  int letters = 0;
  for (unsigned char c : token) {
    if ((c & 0xC0) != 0x80) ++letters;  // count non-continuation bytes
  }
  return letters;
}

CorpusStats corpus_stats(const TokenStream& stream) {
  std::unordered_map<std::string, std::uint64_t> type_counts;
  std::map<int, std::uint64_t> length_counts;
  for (const std::string& token : stream.tokens) {
    ++type_counts[token];
    ++length_counts[token_letter_count(token)];
  }
  CorpusStats stats;
  stats.token_count = stream.tokens.size();
  stats.type_count = type_counts.size();
  stats.length_table = empirical_length_hist(length_counts);
  stats.rank_table = rank_frequency(type_counts, stats.token_count);
  return stats;
}

namespace {

int table_mode(const std::vector<LengthHistRow>& rows) {
  int mode = 0;
  std::uint64_t best = 0;
  for (const LengthHistRow& r : rows) {
    if (r.count > best) {
      best = r.count;
      mode = r.length;
    }
  }
  return mode;
}

}  // namespace

ComparisonReport compare_distributions(
    const std::vector<LengthHistRow>& model_lengths,
    const RankFrequencyTable& model_ranks,
    const std::vector<LengthHistRow>& corpus_lengths,
    const RankFrequencyTable& corpus_ranks) {
  if (model_lengths.empty() || corpus_lengths.empty()) {
    throw ValidationError("comparison requires non-empty length tables");
  }
  const auto to_counts = [](const std::vector<LengthHistRow>& rows) {
    std::map<int, std::uint64_t> counts;
    for (const LengthHistRow& r : rows) counts[r.length] = r.count;
    return counts;
  };
  ComparisonReport report;
  report.length_tv_distance =
      total_variation(LengthPmf::from_counts(to_counts(model_lengths)),
                      LengthPmf::from_counts(to_counts(corpus_lengths)));
  report.model_mode = table_mode(model_lengths);
  report.corpus_mode = table_mode(corpus_lengths);

  const std::size_t shared =
      std::min<std::size_t>({100, model_ranks.size(), corpus_ranks.size()});
  if (shared >= 3) {
    report.window_lo = 1;
    report.window_hi = static_cast<std::uint32_t>(shared);
    report.model_alpha = fit_zipf_exponent(model_ranks, 1, report.window_hi).alpha;
    report.corpus_alpha = fit_zipf_exponent(corpus_ranks, 1, report.window_hi).alpha;
    report.alphas_valid = true;
  }
  return report;
}

}  // namespace morphgen
