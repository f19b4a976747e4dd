#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

namespace morphgen {

enum class MorphemeClass { Prefix, Root, DerivSuffix, Inflection };

inline constexpr std::array<MorphemeClass, 4> kMorphemeClasses = {
    MorphemeClass::Prefix, MorphemeClass::Root, MorphemeClass::DerivSuffix,
    MorphemeClass::Inflection};

char class_code(MorphemeClass cls);        // 'P', 'R', 'S', 'E'
MorphemeClass class_from_code(char code);  // throws ValidationError
const char* class_name(MorphemeClass cls);

struct Morpheme {
  std::string surface;
  int length = 0;  // character count of surface
  MorphemeClass cls = MorphemeClass::Root;
};

// One morphological class: distinct surfaces with categorical weights.
// Immutable after construction; safe to share across threads.
//
// An inventory may be empty, in which case the class can never be active
// in generation. A non-empty inventory requires weights of matching
// cardinality, all positive, summing to 1 within 1e-12.
class MorphemeInventory {
 public:
  MorphemeInventory(MorphemeClass cls, std::vector<Morpheme> items,
                    std::vector<double> weights, int declared_min = -1,
                    int declared_max = -1);
  static MorphemeInventory empty(MorphemeClass cls) {
    return MorphemeInventory(cls, {}, {});
  }

  MorphemeClass cls() const { return cls_; }
  std::size_t size() const { return items_.size(); }
  bool is_empty() const { return items_.empty(); }
  const Morpheme& item(std::size_t i) const { return items_[i]; }
  const std::vector<Morpheme>& items() const { return items_; }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  int min_length() const { return min_length_; }
  int max_length() const { return max_length_; }

 private:
  MorphemeClass cls_;
  std::vector<Morpheme> items_;
  std::vector<double> weights_;
  int min_length_ = 0;
  int max_length_ = 0;
};

struct Lexicon {
  MorphemeInventory prefixes = MorphemeInventory::empty(MorphemeClass::Prefix);
  MorphemeInventory roots = MorphemeInventory::empty(MorphemeClass::Root);
  MorphemeInventory derivs = MorphemeInventory::empty(MorphemeClass::DerivSuffix);
  MorphemeInventory inflections = MorphemeInventory::empty(MorphemeClass::Inflection);

  const MorphemeInventory& inventory(MorphemeClass cls) const;
  std::size_t total_morphemes() const {
    return prefixes.size() + roots.size() + derivs.size() + inflections.size();
  }
};

// Synthesis parameters for one class. Surface lengths are drawn from a
// discretized truncated normal: a normal draw is rounded to the nearest
// integer and redrawn while outside [length_min, length_max]. NaN mean/sd
// select the defaults: mean = length_min + (length_max - length_min) / 3,
// sd = (length_max - length_min) / 4, floored at 0.5.
struct ClassConfig {
  std::uint32_t count = 0;
  double skew = 1.0;  // within-class power-law exponent for the weights
  int length_min = 1;
  int length_max = 1;
  double length_mean = std::numeric_limits<double>::quiet_NaN();
  double length_sd = std::numeric_limits<double>::quiet_NaN();

  double resolved_mean() const;
  double resolved_sd() const;
};

struct SyntheticLexiconConfig {
  ClassConfig prefix{20, 1.0, 2, 4};
  ClassConfig root{500, 1.2, 3, 8};
  ClassConfig deriv{80, 1.2, 2, 5};
  ClassConfig infl{15, 1.0, 1, 3};

  const ClassConfig& for_class(MorphemeClass cls) const;
  ClassConfig& for_class(MorphemeClass cls);
};

// w_i = i^-s / sum_j j^-s for i = 1..n: strictly positive, non-increasing,
// sums to 1 within 1e-12.
std::vector<double> build_zipf_weights(std::size_t n, double s);

// Builds the four inventories from per-class configs. Surfaces are random
// lowercase ASCII strings, distinct within a class (duplicate draws are
// rejected and redrawn). Deterministic given the seed.
Lexicon synth_lexicon(const SyntheticLexiconConfig& config, std::uint64_t seed);

// Lexicon file: UTF-8 text, one record per line: class<TAB>surface<TAB>weight
// with class in {P,R,S,E}; '#' begins a comment line.
enum class WeightPolicy {
  RequireNormalized,  // per-class sums must be within 1e-6 of 1
  Normalize,          // any positive weights; rescaled on load
};

struct LoadReport {
  struct ClassReport {
    std::size_t count = 0;
    double raw_weight_sum = 0.0;
    bool rescaled = false;
  };
  std::array<ClassReport, 4> per_class;  // indexed by kMorphemeClasses order
};

Lexicon load_lexicon(const std::filesystem::path& path,
                     WeightPolicy policy = WeightPolicy::RequireNormalized,
                     LoadReport* report = nullptr);

void save_lexicon(const Lexicon& lexicon, const std::filesystem::path& path);

}  // namespace morphgen
