#include "morphgen/generator.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "morphgen/errors.hpp"
#include "morphgen/numeric.hpp"

namespace morphgen {

void validate(const SlotActivations& acts) {
  for (double a : {acts.prefix, acts.deriv, acts.infl}) {
    if (!(a >= 0.0 && a <= 1.0)) {
      throw ValidationError("slot activation must lie in [0, 1]");
    }
  }
}

Constraint Constraint::free() { return Constraint{}; }

Constraint Constraint::rules(std::unordered_map<std::uint32_t, RootRule> by_root) {
  Constraint c;
  c.kind_ = Kind::Rules;
  c.by_root_ = std::move(by_root);
  return c;
}

Constraint Constraint::predicate(Predicate fn) {
  Constraint c;
  c.kind_ = Kind::Predicate;
  c.predicate_ = std::move(fn);
  return c;
}

bool Constraint::admits(std::optional<std::uint32_t> prefix, std::uint32_t root,
                        std::optional<std::uint32_t> deriv,
                        std::optional<std::uint32_t> infl) const {
  switch (kind_) {
    case Kind::Free:
      return true;
    case Kind::Predicate:
      return predicate_(prefix, root, deriv, infl);
    case Kind::Rules: {
      const auto it = by_root_.find(root);
      if (it == by_root_.end()) return true;
      const RootRule& rule = it->second;
      if (deriv && rule.allowed_deriv && !(*rule.allowed_deriv)[*deriv]) return false;
      if (infl && rule.allowed_infl && !(*rule.allowed_infl)[*infl]) return false;
      return true;
    }
  }
  return true;
}

namespace {

std::optional<std::uint32_t> find_surface(const MorphemeInventory& inv,
                                          const std::string& surface) {
  for (std::size_t i = 0; i < inv.size(); ++i) {
    if (inv.item(i).surface == surface) return static_cast<std::uint32_t>(i);
  }
  return std::nullopt;
}

std::vector<bool> parse_allow_set(const std::string& field,
                                  const MorphemeInventory& inv,
                                  std::size_t line_no) {
  std::vector<bool> allowed(inv.size(), false);
  if (field == "-") return allowed;
  std::stringstream ss(field);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name.empty()) throw ParseError("empty surface in allow list", line_no);
    const auto idx = find_surface(inv, name);
    if (!idx) {
      throw ParseError("surface '" + name + "' not found in class " +
                       class_name(inv.cls()), line_no);
    }
    allowed[*idx] = true;
  }
  return allowed;
}

}  // namespace

Constraint Constraint::rules_from_file(const std::filesystem::path& path,
                                       const Lexicon& lexicon) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open rules file: " + path.string());
  std::unordered_map<std::uint32_t, RootRule> by_root;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab1 = line.find('\t');
    const std::size_t tab2 = tab1 == std::string::npos ? std::string::npos
                                                       : line.find('\t', tab1 + 1);
    if (tab1 == std::string::npos || tab2 == std::string::npos) {
      throw ParseError("expected root<TAB>deriv_allow<TAB>infl_allow", line_no);
    }
    const std::string root_surface = line.substr(0, tab1);
    const std::string deriv_field = line.substr(tab1 + 1, tab2 - tab1 - 1);
    const std::string infl_field = line.substr(tab2 + 1);

    const auto root = find_surface(lexicon.roots, root_surface);
    if (!root) throw ParseError("unknown root '" + root_surface + "'", line_no);
    if (by_root.count(*root)) throw ParseError("duplicate rule for root '" + root_surface + "'", line_no);

    RootRule rule;
    if (deriv_field != "*") rule.allowed_deriv = parse_allow_set(deriv_field, lexicon.derivs, line_no);
    if (infl_field != "*") rule.allowed_infl = parse_allow_set(infl_field, lexicon.inflections, line_no);
    by_root.emplace(*root, std::move(rule));
  }
  if (in.bad()) throw ValidationError("I/O error reading " + path.string());
  return rules(std::move(by_root));
}

Template sample_template(const SlotActivations& acts, Rng& rng) {
  Template t;
  t.has_prefix = rng.next_bernoulli(acts.prefix);
  t.has_deriv = rng.next_bernoulli(acts.deriv);
  t.has_infl = rng.next_bernoulli(acts.infl);
  return t;
}

WordSampler::WordSampler(const Lexicon& lexicon, const SlotActivations& acts,
                         Constraint constraint, GeneratorLimits limits)
    : lexicon_(lexicon), acts_(acts), constraint_(std::move(constraint)), limits_(limits) {
  validate(acts_);
  if (lexicon_.roots.is_empty()) throw ValidationError("root inventory is empty");
  root_table_.emplace(lexicon_.roots.weights());
  if (acts_.prefix > 0.0) {
    if (lexicon_.prefixes.is_empty()) throw ValidationError("prefix activation > 0 but inventory is empty");
    prefix_table_.emplace(lexicon_.prefixes.weights());
  }
  if (acts_.deriv > 0.0) {
    if (lexicon_.derivs.is_empty()) throw ValidationError("deriv activation > 0 but inventory is empty");
    deriv_table_.emplace(lexicon_.derivs.weights());
  }
  if (acts_.infl > 0.0) {
    if (lexicon_.inflections.is_empty()) throw ValidationError("infl activation > 0 but inventory is empty");
    infl_table_.emplace(lexicon_.inflections.weights());
  }
}

WordForm WordSampler::sample(Rng& rng) const {
  for (std::uint64_t attempt = 0; attempt < limits_.rejection_budget; ++attempt) {
    const Template t = sample_template(acts_, rng);
    std::optional<std::uint32_t> prefix, deriv, infl;
    if (t.has_prefix) prefix = prefix_table_->sample(rng);
    const std::uint32_t root = root_table_->sample(rng);
    if (t.has_deriv) deriv = deriv_table_->sample(rng);
    if (t.has_infl) infl = infl_table_->sample(rng);
    if (!constraint_.admits(prefix, root, deriv, infl)) continue;

    WordForm w;
    w.prefix = prefix;
    w.root = root;
    w.deriv = deriv;
    w.infl = infl;
    w.surface = analysis_surface(lexicon_, prefix, root, deriv, infl);
    w.length = static_cast<int>(w.surface.size());
    return w;
  }
  throw InfeasibleConstraintError(
      "constraint rejected " + std::to_string(limits_.rejection_budget) +
      " consecutive draws");
}

WordForm generate_word(const Lexicon& lexicon, const SlotActivations& acts,
                       const Constraint& constraint, Rng& rng,
                       GeneratorLimits limits) {
  return WordSampler(lexicon, acts, constraint, limits).sample(rng);
}

std::string analysis_surface(const Lexicon& lexicon,
                             std::optional<std::uint32_t> prefix,
                             std::uint32_t root,
                             std::optional<std::uint32_t> deriv,
                             std::optional<std::uint32_t> infl) {
  std::string s;
  std::size_t len = lexicon.roots.item(root).surface.size();
  if (prefix) len += lexicon.prefixes.item(*prefix).surface.size();
  if (deriv) len += lexicon.derivs.item(*deriv).surface.size();
  if (infl) len += lexicon.inflections.item(*infl).surface.size();
  s.reserve(len);
  if (prefix) s += lexicon.prefixes.item(*prefix).surface;
  s += lexicon.roots.item(root).surface;
  if (deriv) s += lexicon.derivs.item(*deriv).surface;
  if (infl) s += lexicon.inflections.item(*infl).surface;
  return s;
}

double word_probability(const Lexicon& lexicon, const SlotActivations& acts,
                        const WordForm& word, const Constraint& constraint) {
  validate(acts);
  if (word.root >= lexicon.roots.size()) throw ValidationError("root index out of range");
  if (word.prefix && *word.prefix >= lexicon.prefixes.size()) throw ValidationError("prefix index out of range");
  if (word.deriv && *word.deriv >= lexicon.derivs.size()) throw ValidationError("deriv index out of range");
  if (word.infl && *word.infl >= lexicon.inflections.size()) throw ValidationError("infl index out of range");

  double p = word.prefix ? acts.prefix * lexicon.prefixes.weight(*word.prefix)
                         : 1.0 - acts.prefix;
  p *= lexicon.roots.weight(word.root);
  p *= word.deriv ? acts.deriv * lexicon.derivs.weight(*word.deriv)
                  : 1.0 - acts.deriv;
  p *= word.infl ? acts.infl * lexicon.inflections.weight(*word.infl)
                 : 1.0 - acts.infl;
  if (!constraint.admits(word.prefix, word.root, word.deriv, word.infl)) return 0.0;
  return p;
}

std::uint64_t analysis_count(const Lexicon& lexicon) {
  unsigned __int128 total = 1 + static_cast<unsigned __int128>(lexicon.prefixes.size());
  total *= lexicon.roots.size();
  total *= 1 + static_cast<unsigned __int128>(lexicon.derivs.size());
  total *= 1 + static_cast<unsigned __int128>(lexicon.inflections.size());
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  return total > kMax ? kMax : static_cast<std::uint64_t>(total);
}

void for_each_admissible_analysis(
    const Lexicon& lexicon, const SlotActivations& acts,
    const Constraint& constraint,
    const std::function<void(std::optional<std::uint32_t>, std::uint32_t,
                             std::optional<std::uint32_t>,
                             std::optional<std::uint32_t>, double)>& visit) {
  validate(acts);
  // Slot option lists: absent first, then each index with its factor.
  using Option = std::pair<std::optional<std::uint32_t>, double>;
  const auto options = [](const MorphemeInventory& inv, double act) {
    std::vector<Option> opts;
    opts.reserve(inv.size() + 1);
    opts.emplace_back(std::nullopt, 1.0 - act);
    for (std::size_t i = 0; i < inv.size(); ++i) {
      opts.emplace_back(static_cast<std::uint32_t>(i), act * inv.weight(i));
    }
    return opts;
  };
  const std::vector<Option> prefix_opts = options(lexicon.prefixes, acts.prefix);
  const std::vector<Option> deriv_opts = options(lexicon.derivs, acts.deriv);
  const std::vector<Option> infl_opts = options(lexicon.inflections, acts.infl);

  for (const auto& [p, pf] : prefix_opts) {
    for (std::uint32_t r = 0; r < lexicon.roots.size(); ++r) {
      const double rf = pf * lexicon.roots.weight(r);
      for (const auto& [s, sf] : deriv_opts) {
        const double rsf = rf * sf;
        for (const auto& [e, ef] : infl_opts) {
          if (!constraint.admits(p, r, s, e)) continue;
          visit(p, r, s, e, rsf * ef);
        }
      }
    }
  }
}

ExactWordDistribution exact_word_distribution(const Lexicon& lexicon,
                                              const SlotActivations& acts,
                                              const Constraint& constraint,
                                              std::uint64_t budget) {
  const std::uint64_t total = analysis_count(lexicon);
  if (total > budget) {
    throw BudgetExceededError(
        "enumeration of " + std::to_string(total) +
        " analyses exceeds the budget of " + std::to_string(budget) +
        "; use Monte Carlo generation instead");
  }

  ExactWordDistribution dist;
  dist.analyses.reserve(total);
  NeumaierSum mass;
  for_each_admissible_analysis(
      lexicon, acts, constraint,
      [&](std::optional<std::uint32_t> p, std::uint32_t r,
          std::optional<std::uint32_t> s, std::optional<std::uint32_t> e,
          double unnorm) {
        dist.analyses.push_back(WordAnalysis{p, r, s, e, unnorm});
        mass.add(unnorm);
      });
  dist.normalization = mass.value();
  if (!(dist.normalization > 0.0)) {
    throw InfeasibleConstraintError("constraint admits no probability mass");
  }
  for (WordAnalysis& a : dist.analyses) a.probability /= dist.normalization;
  return dist;
}

std::vector<std::pair<std::string, double>>
ExactWordDistribution::merged_by_surface(const Lexicon& lexicon) const {
  std::unordered_map<std::string, double> merged;
  merged.reserve(analyses.size());
  for (const WordAnalysis& a : analyses) {
    merged[analysis_surface(lexicon, a.prefix, a.root, a.deriv, a.infl)] +=
        a.probability;
  }
  std::vector<std::pair<std::string, double>> out(merged.begin(), merged.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

CorpusCounts generate_corpus(const Lexicon& lexicon, const SlotActivations& acts,
                             const Constraint& constraint,
                             const SurvivalSpec& filter, std::uint64_t n_tokens,
                             std::uint64_t seed, unsigned threads,
                             GeneratorLimits limits) {
  if (n_tokens == 0) throw ValidationError("n_tokens must be >= 1");
  const WordSampler sampler(lexicon, acts, constraint, limits);
  const std::uint64_t shard_count = (n_tokens + kCorpusShardSize - 1) / kCorpusShardSize;

  using Map = std::unordered_map<std::string, std::uint64_t>;
  const auto run_shard = [&](std::uint64_t shard, Map& local) {
    Rng rng = Rng::substream(seed, shard);
    const std::uint64_t begin = shard * kCorpusShardSize;
    const std::uint64_t end = std::min(n_tokens, begin + kCorpusShardSize);
    for (std::uint64_t i = begin; i < end; ++i) {
      WordForm w = sampler.sample(rng);
      if (survives(filter, w.surface, w.length, seed, rng)) {
        ++local[std::move(w.surface)];
      }
    }
  };

  CorpusCounts result;
  result.tokens_requested = n_tokens;
  if (threads <= 1 || shard_count == 1) {
    for (std::uint64_t shard = 0; shard < shard_count; ++shard) {
      run_shard(shard, result.counts);
    }
  } else {
    const unsigned worker_count =
        static_cast<unsigned>(std::min<std::uint64_t>(threads, shard_count));
    std::vector<Map> partials(worker_count);
    std::atomic<std::uint64_t> next_shard{0};
    std::vector<std::thread> workers;
    workers.reserve(worker_count);
    for (unsigned t = 0; t < worker_count; ++t) {
      workers.emplace_back([&, t] {
        for (;;) {
          const std::uint64_t shard = next_shard.fetch_add(1);
          if (shard >= shard_count) return;
          run_shard(shard, partials[t]);
        }
      });
    }
    for (std::thread& w : workers) w.join();
    // Count maps merge by addition, so worker scheduling cannot change
    // the result.
    for (Map& partial : partials) {
      for (auto& [surface, count] : partial) result.counts[surface] += count;
    }
  }
  for (const auto& [surface, count] : result.counts) {
    (void)surface;
    result.tokens_surviving += count;
  }
  return result;
}

}  // namespace morphgen
