#include "morphgen/length_analytics.hpp"

#include <algorithm>
#include <cmath>

#include "morphgen/errors.hpp"
#include "morphgen/numeric.hpp"

namespace morphgen {

LengthPmf::LengthPmf(int min_length, std::vector<double> probabilities)
    : min_length_(min_length), probs_(std::move(probabilities)) {
  if (probs_.empty()) throw ValidationError("length pmf has empty support");
  // Trim zero tails so the support bounds are tight.
  std::size_t lo = 0;
  std::size_t hi = probs_.size();
  while (lo < hi && probs_[lo] == 0.0) ++lo;
  while (hi > lo && probs_[hi - 1] == 0.0) --hi;
  if (lo == hi) throw ValidationError("length pmf has no mass");
  if (lo > 0 || hi < probs_.size()) {
    probs_ = std::vector<double>(probs_.begin() + static_cast<std::ptrdiff_t>(lo),
                                 probs_.begin() + static_cast<std::ptrdiff_t>(hi));
    min_length_ += static_cast<int>(lo);
  }
  for (double p : probs_) {
    if (!(p >= 0.0)) throw ValidationError("length pmf has negative mass");
  }
  const double sum = neumaier_sum(probs_);
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ValidationError("length pmf sums to " + std::to_string(sum) +
                          ", expected 1");
  }
  if (min_length_ < 0) throw ValidationError("negative length in pmf support");
}

double LengthPmf::prob(int length) const {
  const int idx = length - min_length_;
  if (idx < 0 || idx >= static_cast<int>(probs_.size())) return 0.0;
  return probs_[static_cast<std::size_t>(idx)];
}

double LengthPmf::mean() const {
  NeumaierSum m;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    m.add((min_length_ + static_cast<int>(i)) * probs_[i]);
  }
  return m.value();
}

double LengthPmf::variance() const {
  const double mu = mean();
  NeumaierSum v;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    const double d = (min_length_ + static_cast<int>(i)) - mu;
    v.add(d * d * probs_[i]);
  }
  return v.value();
}

int LengthPmf::mode() const {
  const auto it = std::max_element(probs_.begin(), probs_.end());
  return min_length_ + static_cast<int>(it - probs_.begin());
}

bool LengthPmf::unimodal() const {
  const std::size_t m = static_cast<std::size_t>(mode() - min_length_);
  constexpr double kSlack = 1e-12;
  for (std::size_t i = 0; i + 1 <= m; ++i) {
    if (probs_[i + 1] < probs_[i] - kSlack) return false;
  }
  for (std::size_t i = m; i + 1 < probs_.size(); ++i) {
    if (probs_[i + 1] > probs_[i] + kSlack) return false;
  }
  return true;
}

bool LengthPmf::interior_mode() const {
  const int m = mode();
  return m > min_length() && m < max_length();
}

LengthPmf LengthPmf::from_counts(const std::map<int, std::uint64_t>& counts) {
  if (counts.empty()) throw ValidationError("empty count table");
  std::uint64_t total = 0;
  for (const auto& [len, c] : counts) {
    if (len < 0) throw ValidationError("negative length in count table");
    total += c;
  }
  if (total == 0) throw ValidationError("count table has no tokens");
  const int lo = counts.begin()->first;
  const int hi = counts.rbegin()->first;
  std::vector<double> probs(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (const auto& [len, c] : counts) {
    probs[static_cast<std::size_t>(len - lo)] =
        static_cast<double>(c) / static_cast<double>(total);
  }
  return LengthPmf(lo, std::move(probs));
}

double total_variation(const LengthPmf& a, const LengthPmf& b) {
  const int lo = std::min(a.min_length(), b.min_length());
  const int hi = std::max(a.max_length(), b.max_length());
  NeumaierSum l1;
  for (int k = lo; k <= hi; ++k) l1.add(std::abs(a.prob(k) - b.prob(k)));
  return 0.5 * l1.value();
}

double SlotCountPmf::mean() const {
  NeumaierSum m;
  for (int n = 1; n <= 4; ++n) m.add(n * probabilities[static_cast<std::size_t>(n - 1)]);
  return m.value();
}

double SlotCountPmf::variance() const {
  const double mu = mean();
  NeumaierSum v;
  for (int n = 1; n <= 4; ++n) {
    v.add((n - mu) * (n - mu) * probabilities[static_cast<std::size_t>(n - 1)]);
  }
  return v.value();
}

SlotCountPmf n_morpheme_distribution(const SlotActivations& acts) {
  validate(acts);
  const double p = acts.prefix, s = acts.deriv, e = acts.infl;
  SlotCountPmf pmf;
  pmf.probabilities[0] = (1 - p) * (1 - s) * (1 - e);
  pmf.probabilities[1] = p * (1 - s) * (1 - e) + (1 - p) * s * (1 - e) + (1 - p) * (1 - s) * e;
  pmf.probabilities[2] = p * s * (1 - e) + p * (1 - s) * e + (1 - p) * s * e;
  pmf.probabilities[3] = p * s * e;
  return pmf;
}

LengthPmf class_length_pmf(const MorphemeInventory& inventory) {
  if (inventory.is_empty()) {
    throw ValidationError(std::string("class ") + class_name(inventory.cls()) +
                          " is empty; no length distribution");
  }
  const int lo = inventory.min_length();
  const int hi = inventory.max_length();
  std::vector<double> probs(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (std::size_t i = 0; i < inventory.size(); ++i) {
    probs[static_cast<std::size_t>(inventory.item(i).length - lo)] += inventory.weight(i);
  }
  return LengthPmf(lo, std::move(probs));
}

namespace {

// Dense convolution of length pmfs anchored at absolute length 0.
std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

std::vector<double> dense_from(const LengthPmf& pmf) {
  std::vector<double> d(static_cast<std::size_t>(pmf.max_length()) + 1, 0.0);
  for (int k = pmf.min_length(); k <= pmf.max_length(); ++k) {
    d[static_cast<std::size_t>(k)] = pmf.prob(k);
  }
  return d;
}

}  // namespace

LengthPmf exact_length_pmf(const Lexicon& lexicon, const SlotActivations& acts) {
  validate(acts);
  if (lexicon.roots.is_empty()) throw ValidationError("root inventory is empty");
  const std::vector<double> root = dense_from(class_length_pmf(lexicon.roots));

  // Optional-class pmfs are only needed when the slot can activate.
  std::array<std::vector<double>, 3> slot_pmfs;
  const std::array<double, 3> slot_acts = {acts.prefix, acts.deriv, acts.infl};
  const std::array<const MorphemeInventory*, 3> slot_inv = {
      &lexicon.prefixes, &lexicon.derivs, &lexicon.inflections};
  for (std::size_t s = 0; s < 3; ++s) {
    if (slot_acts[s] > 0.0) slot_pmfs[s] = dense_from(class_length_pmf(*slot_inv[s]));
  }

  std::vector<double> mix;
  for (int pattern = 0; pattern < 8; ++pattern) {
    double weight = 1.0;
    for (std::size_t s = 0; s < 3; ++s) {
      weight *= (pattern >> s & 1) ? slot_acts[s] : 1.0 - slot_acts[s];
    }
    if (weight == 0.0) continue;
    std::vector<double> pmf = root;
    for (std::size_t s = 0; s < 3; ++s) {
      if (pattern >> s & 1) pmf = convolve(pmf, slot_pmfs[s]);
    }
    if (pmf.size() > mix.size()) mix.resize(pmf.size(), 0.0);
    for (std::size_t k = 0; k < pmf.size(); ++k) mix[k] += weight * pmf[k];
  }
  return LengthPmf(0, std::move(mix));
}

LengthMoments length_moments(const Lexicon& lexicon, const SlotActivations& acts) {
  validate(acts);
  const LengthPmf root = class_length_pmf(lexicon.roots);
  const double root_mean = root.mean();
  const double root_var = root.variance();

  LengthMoments m;
  m.mean = root_mean;
  m.variance = root_var;
  const std::array<double, 3> slot_acts = {acts.prefix, acts.deriv, acts.infl};
  const std::array<const MorphemeInventory*, 3> slot_inv = {
      &lexicon.prefixes, &lexicon.derivs, &lexicon.inflections};
  for (std::size_t s = 0; s < 3; ++s) {
    const double a = slot_acts[s];
    if (a == 0.0) continue;
    const LengthPmf pmf = class_length_pmf(*slot_inv[s]);
    const double mu = pmf.mean();
    // Slot contribution a*mu to the mean; variance splits into the
    // activation term a(1-a)mu^2 plus the within-class term a*sigma^2.
    m.mean += a * mu;
    m.variance += a * (1.0 - a) * mu * mu + a * pmf.variance();
  }
  return m;
}

LengthPmf length_pmf_from_analyses(const ExactWordDistribution& dist,
                                   const Lexicon& lexicon) {
  std::map<int, double> by_length;
  for (const WordAnalysis& a : dist.analyses) {
    int len = lexicon.roots.item(a.root).length;
    if (a.prefix) len += lexicon.prefixes.item(*a.prefix).length;
    if (a.deriv) len += lexicon.derivs.item(*a.deriv).length;
    if (a.infl) len += lexicon.inflections.item(*a.infl).length;
    by_length[len] += a.probability;
  }
  const int lo = by_length.begin()->first;
  const int hi = by_length.rbegin()->first;
  std::vector<double> probs(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (const auto& [len, p] : by_length) probs[static_cast<std::size_t>(len - lo)] = p;
  return LengthPmf(lo, std::move(probs));
}

LengthPmf geometric_length_pmf(double q, int max_len) {
  if (!(q > 0.0 && q <= 1.0)) throw ValidationError("geometric q must lie in (0, 1]");
  if (max_len < 1) throw ValidationError("max_len must be >= 1");
  // Weights proportional to (1 - q)^k over k = 1..max_len; the shared
  // factor (1 - q) q is dropped so q = 1 stays well defined.
  std::vector<double> w(static_cast<std::size_t>(max_len));
  const double ratio = 1.0 - q;
  double cur = 1.0;
  NeumaierSum total;
  for (std::size_t k = 0; k < w.size(); ++k) {
    w[k] = cur;
    total.add(cur);
    cur *= ratio;
  }
  const double norm = total.value();
  for (double& x : w) x /= norm;
  return LengthPmf(1, std::move(w));
}

std::vector<LengthHistRow> empirical_length_hist(
    const std::map<int, std::uint64_t>& counts_by_length) {
  std::uint64_t total = 0;
  for (const auto& [len, c] : counts_by_length) {
    (void)len;
    total += c;
  }
  std::vector<LengthHistRow> rows;
  if (total == 0) return rows;
  rows.reserve(counts_by_length.size());
  for (const auto& [len, c] : counts_by_length) {
    rows.push_back(LengthHistRow{
        len, c, 100.0 * static_cast<double>(c) / static_cast<double>(total)});
  }
  return rows;
}

std::map<int, std::uint64_t> length_counts_from_types(
    const std::unordered_map<std::string, std::uint64_t>& type_counts) {
  std::map<int, std::uint64_t> by_length;
  for (const auto& [surface, count] : type_counts) {
    by_length[static_cast<int>(surface.size())] += count;
  }
  return by_length;
}

}  // namespace morphgen
