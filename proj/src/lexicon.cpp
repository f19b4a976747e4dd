#include "morphgen/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "morphgen/errors.hpp"
#include "morphgen/numeric.hpp"
#include "morphgen/rng.hpp"

namespace morphgen {
namespace {

// Lexicon synthesis draws from its own stream so that corpus shard
// substreams (seed XOR shard) never overlap it.
constexpr std::uint64_t kLexiconStreamTag = 0x6C657869636F6EULL;

constexpr std::uint64_t kSurfaceAttemptLimit = 100000;

}  // namespace

char class_code(MorphemeClass cls) {
  switch (cls) {
    case MorphemeClass::Prefix: return 'P';
    case MorphemeClass::Root: return 'R';
    case MorphemeClass::DerivSuffix: return 'S';
    case MorphemeClass::Inflection: return 'E';
  }
  return '?';
}

MorphemeClass class_from_code(char code) {
  switch (code) {
    case 'P': return MorphemeClass::Prefix;
    case 'R': return MorphemeClass::Root;
    case 'S': return MorphemeClass::DerivSuffix;
    case 'E': return MorphemeClass::Inflection;
  }
  throw ValidationError(std::string("unknown morpheme class code '") + code +
                        "' (expected P, R, S or E)");
}

const char* class_name(MorphemeClass cls) {
  switch (cls) {
    case MorphemeClass::Prefix: return "prefix";
    case MorphemeClass::Root: return "root";
    case MorphemeClass::DerivSuffix: return "deriv";
    case MorphemeClass::Inflection: return "infl";
  }
  return "?";
}

MorphemeInventory::MorphemeInventory(MorphemeClass cls,
                                     std::vector<Morpheme> items,
                                     std::vector<double> weights,
                                     int declared_min, int declared_max)
    : cls_(cls), items_(std::move(items)), weights_(std::move(weights)) {
  if (items_.size() != weights_.size()) {
    throw ValidationError("inventory items and weights differ in cardinality");
  }
  if (items_.empty()) return;

  std::unordered_set<std::string_view> seen;
  min_length_ = items_.front().length;
  max_length_ = min_length_;
  for (const Morpheme& m : items_) {
    if (m.surface.empty()) throw ValidationError("empty morpheme surface");
    if (m.length != static_cast<int>(m.surface.size())) {
      throw ValidationError("morpheme length does not match surface '" +
                            m.surface + "'");
    }
    if (m.cls != cls_) throw ValidationError("morpheme class mismatch");
    if (!seen.insert(m.surface).second) {
      throw ValidationError("duplicate surface '" + m.surface +
                            "' in class " + class_name(cls_));
    }
    min_length_ = std::min(min_length_, m.length);
    max_length_ = std::max(max_length_, m.length);
  }
  if (declared_min >= 0 && (min_length_ < declared_min || max_length_ > declared_max)) {
    throw ValidationError(std::string("class ") + class_name(cls_) +
                          " has lengths outside the declared bounds");
  }
  for (double w : weights_) {
    if (!(w > 0.0)) throw ValidationError("inventory weights must be positive");
  }
  const double sum = neumaier_sum(weights_);
  if (std::abs(sum - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "class " << class_name(cls_) << " weights sum to " << sum
       << ", expected 1";
    throw ValidationError(os.str());
  }
}

const MorphemeInventory& Lexicon::inventory(MorphemeClass cls) const {
  switch (cls) {
    case MorphemeClass::Prefix: return prefixes;
    case MorphemeClass::Root: return roots;
    case MorphemeClass::DerivSuffix: return derivs;
    case MorphemeClass::Inflection: return inflections;
  }
  return roots;
}

double ClassConfig::resolved_mean() const {
  if (!std::isnan(length_mean)) return length_mean;
  return length_min + (length_max - length_min) / 3.0;
}

double ClassConfig::resolved_sd() const {
  if (!std::isnan(length_sd)) return length_sd;
  return std::max((length_max - length_min) / 4.0, 0.5);
}

const ClassConfig& SyntheticLexiconConfig::for_class(MorphemeClass cls) const {
  switch (cls) {
    case MorphemeClass::Prefix: return prefix;
    case MorphemeClass::Root: return root;
    case MorphemeClass::DerivSuffix: return deriv;
    case MorphemeClass::Inflection: return infl;
  }
  return root;
}

ClassConfig& SyntheticLexiconConfig::for_class(MorphemeClass cls) {
  switch (cls) {
    case MorphemeClass::Prefix: return prefix;
    case MorphemeClass::Root: return root;
    case MorphemeClass::DerivSuffix: return deriv;
    case MorphemeClass::Inflection: return infl;
  }
  return root;
}

std::vector<double> build_zipf_weights(std::size_t n, double s) {
  if (n == 0) throw ValidationError("build_zipf_weights: n must be >= 1");
  if (s < 0.0) throw ValidationError("build_zipf_weights: skew must be >= 0");
  std::vector<double> w(n);
  NeumaierSum norm;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::pow(static_cast<double>(i + 1), -s);
    norm.add(w[i]);
  }
  const double total = norm.value();
  for (double& x : w) x /= total;
  return w;
}

namespace {

int draw_truncated_length(Rng& rng, const ClassConfig& cfg) {
  const double mean = cfg.resolved_mean();
  const double sd = cfg.resolved_sd();
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const long k = std::lround(rng.next_normal(mean, sd));
    if (k >= cfg.length_min && k <= cfg.length_max) return static_cast<int>(k);
  }
  throw ConstructionError("truncated normal rejection failed: mean " +
                          std::to_string(mean) + " sd " + std::to_string(sd) +
                          " is degenerate for the class bounds");
}

// Number of distinct lowercase strings with lengths in [lo, hi], saturated.
double surface_capacity(int lo, int hi) {
  double cap = 0.0;
  for (int k = lo; k <= hi && cap < 1e18; ++k) cap += std::pow(26.0, k);
  return cap;
}

MorphemeInventory synth_class(MorphemeClass cls, const ClassConfig& cfg, Rng& rng) {
  if (cfg.count == 0) throw ValidationError(std::string("class ") + class_name(cls) + ": count must be >= 1");
  if (cfg.length_min < 1 || cfg.length_min > cfg.length_max) {
    throw ValidationError(std::string("class ") + class_name(cls) + ": bad length bounds");
  }
  if (static_cast<double>(cfg.count) > surface_capacity(cfg.length_min, cfg.length_max)) {
    throw ConstructionError(std::string("class ") + class_name(cls) + ": " +
                            std::to_string(cfg.count) +
                            " distinct surfaces do not exist at the allowed lengths");
  }

  std::vector<Morpheme> items;
  items.reserve(cfg.count);
  std::unordered_set<std::string> seen;
  std::string surface;
  for (std::uint32_t i = 0; i < cfg.count; ++i) {
    std::uint64_t attempts = 0;
    for (;;) {
      if (++attempts > kSurfaceAttemptLimit) {
        throw ConstructionError(std::string("class ") + class_name(cls) +
                                ": could not draw a fresh surface (inventory too dense)");
      }
      const int len = draw_truncated_length(rng, cfg);
      surface.clear();
      for (int c = 0; c < len; ++c) {
        surface.push_back(static_cast<char>('a' + rng.next_below(26)));
      }
      if (seen.insert(surface).second) break;
    }
    items.push_back(Morpheme{surface, static_cast<int>(surface.size()), cls});
  }
  return MorphemeInventory(cls, std::move(items),
                           build_zipf_weights(cfg.count, cfg.skew),
                           cfg.length_min, cfg.length_max);
}

}  // namespace

Lexicon synth_lexicon(const SyntheticLexiconConfig& config, std::uint64_t seed) {
  Rng rng(seed ^ kLexiconStreamTag);
  Lexicon lex;
  lex.prefixes = synth_class(MorphemeClass::Prefix, config.prefix, rng);
  lex.roots = synth_class(MorphemeClass::Root, config.root, rng);
  lex.derivs = synth_class(MorphemeClass::DerivSuffix, config.deriv, rng);
  lex.inflections = synth_class(MorphemeClass::Inflection, config.infl, rng);
  return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path, WeightPolicy policy,
                     LoadReport* report) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open lexicon file: " + path.string());

  std::array<std::vector<Morpheme>, 4> items;
  std::array<std::vector<double>, 4> weights;
  std::array<std::unordered_set<std::string>, 4> surfaces;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;

    const std::size_t tab1 = line.find('\t');
    const std::size_t tab2 = tab1 == std::string::npos ? std::string::npos
                                                       : line.find('\t', tab1 + 1);
    if (tab1 == std::string::npos || tab2 == std::string::npos ||
        line.find('\t', tab2 + 1) != std::string::npos) {
      throw ParseError("expected class<TAB>surface<TAB>weight", line_no);
    }
    const std::string cls_field = line.substr(0, tab1);
    const std::string surface = line.substr(tab1 + 1, tab2 - tab1 - 1);
    const std::string weight_field = line.substr(tab2 + 1);
    if (cls_field.size() != 1) throw ParseError("class field must be one of P, R, S, E", line_no);

    MorphemeClass cls;
    try {
      cls = class_from_code(cls_field[0]);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    }
    if (surface.empty()) throw ParseError("empty surface", line_no);

    double w = 0.0;
    try {
      std::size_t used = 0;
      w = std::stod(weight_field, &used);
      if (used != weight_field.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ParseError("cannot parse weight '" + weight_field + "'", line_no);
    }
    if (!(w > 0.0) || !std::isfinite(w)) throw ParseError("weight must be positive and finite", line_no);

    const auto idx = static_cast<std::size_t>(cls);
    if (!surfaces[idx].insert(surface).second) {
      throw ParseError("duplicate surface '" + surface + "' in class " +
                       class_name(cls), line_no);
    }
    items[idx].push_back(Morpheme{surface, static_cast<int>(surface.size()), cls});
    weights[idx].push_back(w);
  }
  if (in.bad()) throw ValidationError("I/O error reading " + path.string());

  Lexicon lex;
  for (MorphemeClass cls : kMorphemeClasses) {
    const auto idx = static_cast<std::size_t>(cls);
    LoadReport::ClassReport cr;
    cr.count = items[idx].size();
    if (!items[idx].empty()) {
      const double sum = neumaier_sum(weights[idx]);
      cr.raw_weight_sum = sum;
      if (std::abs(sum - 1.0) > 1e-12) {
        if (policy == WeightPolicy::RequireNormalized && std::abs(sum - 1.0) > 1e-6) {
          std::ostringstream os;
          os << "class " << class_name(cls) << " weights sum to " << sum
             << "; expected 1 (use the normalizing load mode for raw counts)";
          throw ValidationError(os.str());
        }
        for (double& w : weights[idx]) w /= sum;
        cr.rescaled = true;
      }
    }
    MorphemeInventory inv(cls, std::move(items[idx]), std::move(weights[idx]));
    switch (cls) {
      case MorphemeClass::Prefix: lex.prefixes = std::move(inv); break;
      case MorphemeClass::Root: lex.roots = std::move(inv); break;
      case MorphemeClass::DerivSuffix: lex.derivs = std::move(inv); break;
      case MorphemeClass::Inflection: lex.inflections = std::move(inv); break;
    }
    if (report) report->per_class[idx] = cr;
  }
  return lex;
}

void save_lexicon(const Lexicon& lexicon, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write lexicon file: " + path.string());
  out << "# class\tsurface\tweight\n";
  char buf[64];
  for (MorphemeClass cls : kMorphemeClasses) {
    const MorphemeInventory& inv = lexicon.inventory(cls);
    for (std::size_t i = 0; i < inv.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", inv.weight(i));
      out << class_code(cls) << '\t' << inv.item(i).surface << '\t' << buf << '\n';
    }
  }
  if (!out) throw ValidationError("I/O error writing " + path.string());
}

}  // namespace morphgen
