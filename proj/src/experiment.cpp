#include "morphgen/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "morphgen/errors.hpp"
#include "morphgen/numeric.hpp"
#include "morphgen/table_io.hpp"

namespace morphgen {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

double parse_double_setting(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ValidationError(key + ": cannot parse number '" + value + "'");
  }
}

std::uint64_t parse_u64_setting(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size() || value.front() == '-') throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ValidationError(key + ": cannot parse integer '" + value + "'");
  }
}

bool parse_bool_setting(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ValidationError(key + ": cannot parse boolean '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  return out;
}

const std::array<std::string, 8> kSweepableKeys = {
    "activations.a_P", "activations.a_S", "activations.a_E",
    "n_tokens",        "lexicon.prefix.count", "lexicon.root.count",
    "lexicon.deriv.count", "lexicon.infl.count"};

void write_pmf_table(const std::filesystem::path& path, const LengthPmf& pmf) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write file: " + path.string());
  out << "length\tprobability\n";
  char buf[40];
  for (int k = pmf.min_length(); k <= pmf.max_length(); ++k) {
    std::snprintf(buf, sizeof buf, "%.12g", pmf.prob(k));
    out << k << '\t' << buf << '\n';
  }
  if (!out) throw ValidationError("I/O error writing " + path.string());
}

}  // namespace

SurvivalSpec FilterSettings::build() const {
  FilterMode fmode;
  if (mode == "per_type") {
    fmode = FilterMode::PerType;
  } else if (mode == "per_token") {
    fmode = FilterMode::PerToken;
  } else {
    throw ValidationError("filter.mode: expected per_type or per_token, got '" + mode + "'");
  }
  if (kind == "constant") return SurvivalSpec::constant(c, fmode);
  if (kind == "logistic") {
    LogisticDirection dir;
    if (direction == "favor_short") {
      dir = LogisticDirection::FavorShort;
    } else if (direction == "favor_long") {
      dir = LogisticDirection::FavorLong;
    } else {
      throw ValidationError("filter.direction: expected favor_short or favor_long");
    }
    return SurvivalSpec::length_logistic(midpoint, steepness, dir, fmode);
  }
  if (kind == "table") {
    std::map<int, double> by_length;
    for (const std::string& entry : split_list(table)) {
      const std::size_t colon = entry.find(':');
      if (colon == std::string::npos) {
        throw ValidationError("filter.table: expected length:prob entries");
      }
      const int len = static_cast<int>(parse_u64_setting("filter.table", entry.substr(0, colon)));
      by_length[len] = parse_double_setting("filter.table", entry.substr(colon + 1));
    }
    return SurvivalSpec::table(std::move(by_length), fmode);
  }
  throw ValidationError("filter.kind: expected constant, logistic or table, got '" + kind + "'");
}

std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path.string());
  std::map<std::string, std::string> settings;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", line_no);
    settings[key] = value;
  }
  if (in.bad()) throw ValidationError("I/O error reading " + path.string());
  return settings;
}

void apply_setting(ExperimentConfig& config, const std::string& key,
                   const std::string& value) {
  if (key == "lexicon.file") { config.lexicon_file = value; return; }
  if (key.rfind("lexicon.", 0) == 0) {
    const std::string rest = key.substr(8);
    const std::size_t dot = rest.find('.');
    if (dot != std::string::npos) {
      const std::string cls = rest.substr(0, dot);
      const std::string field = rest.substr(dot + 1);
      ClassConfig* cc = nullptr;
      if (cls == "prefix") cc = &config.lexicon.prefix;
      else if (cls == "root") cc = &config.lexicon.root;
      else if (cls == "deriv") cc = &config.lexicon.deriv;
      else if (cls == "infl") cc = &config.lexicon.infl;
      if (cc) {
        if (field == "count") { cc->count = static_cast<std::uint32_t>(parse_u64_setting(key, value)); return; }
        if (field == "skew") { cc->skew = parse_double_setting(key, value); return; }
        if (field == "min_len") { cc->length_min = static_cast<int>(parse_u64_setting(key, value)); return; }
        if (field == "max_len") { cc->length_max = static_cast<int>(parse_u64_setting(key, value)); return; }
        if (field == "length_mean") { cc->length_mean = parse_double_setting(key, value); return; }
        if (field == "length_sd") { cc->length_sd = parse_double_setting(key, value); return; }
      }
    }
    throw ValidationError("unknown config key '" + key + "'");
  }
  if (key == "activations.a_P") { config.activations.prefix = parse_double_setting(key, value); return; }
  if (key == "activations.a_S") { config.activations.deriv = parse_double_setting(key, value); return; }
  if (key == "activations.a_E") { config.activations.infl = parse_double_setting(key, value); return; }
  if (key == "constraint.rules") { config.constraint_rules = value; return; }
  if (key == "filter.kind") { config.filter.kind = value; return; }
  if (key == "filter.c") { config.filter.c = parse_double_setting(key, value); return; }
  if (key == "filter.midpoint") { config.filter.midpoint = parse_double_setting(key, value); return; }
  if (key == "filter.steepness") { config.filter.steepness = parse_double_setting(key, value); return; }
  if (key == "filter.direction") { config.filter.direction = value; return; }
  if (key == "filter.table") { config.filter.table = value; return; }
  if (key == "filter.mode") { config.filter.mode = value; return; }
  if (key == "n_tokens") { config.n_tokens = parse_u64_setting(key, value); return; }
  if (key == "seed") { config.seed = parse_u64_setting(key, value); return; }
  if (key == "fit.r_min") { config.fit_r_min = static_cast<std::uint32_t>(parse_u64_setting(key, value)); return; }
  if (key == "fit.r_max") { config.fit_r_max = static_cast<std::uint32_t>(parse_u64_setting(key, value)); return; }
  if (key == "out") { config.out_dir = value; return; }
  if (key == "threads") { config.threads = static_cast<unsigned>(parse_u64_setting(key, value)); return; }
  if (key == "svg") { config.svg = parse_bool_setting(key, value); return; }
  if (key == "enum_budget") { config.enum_budget = parse_u64_setting(key, value); return; }
  if (key == "words_budget") { config.words_budget = parse_u64_setting(key, value); return; }
  if (key == "sweep.max_points") { config.sweep_max_points = parse_u64_setting(key, value); return; }
  if (key.rfind("sweep.", 0) == 0) {
    const std::string target = key.substr(6);
    if (std::find(kSweepableKeys.begin(), kSweepableKeys.end(), target) == kSweepableKeys.end()) {
      throw ValidationError("'" + target + "' is not sweepable");
    }
    if (split_list(value).empty()) throw ValidationError(key + ": empty value list");
    config.sweep_lists[target] = value;
    return;
  }
  throw ValidationError("unknown config key '" + key + "'");
}

void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path) {
  for (const auto& [key, value] : parse_config_file(path)) {
    apply_setting(config, key, value);
  }
}

void apply_override(ExperimentConfig& config, const std::string& key_equals_value) {
  const std::size_t eq = key_equals_value.find('=');
  if (eq == std::string::npos) {
    throw ValidationError("override must be key=value: '" + key_equals_value + "'");
  }
  apply_setting(config, trim(key_equals_value.substr(0, eq)),
                trim(key_equals_value.substr(eq + 1)));
}

void validate_config(const ExperimentConfig& config) {
  const auto check = [](bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
  };
  for (MorphemeClass cls : kMorphemeClasses) {
    const ClassConfig& cc = config.lexicon.for_class(cls);
    const std::string base = std::string("lexicon.") + class_name(cls);
    if (config.lexicon_file.empty()) {
      check(cc.count >= 1, base + ".count: must be >= 1");
      check(cc.length_min >= 1, base + ".min_len: must be >= 1");
      check(cc.length_min <= cc.length_max, base + ": min_len must be <= max_len");
      check(cc.skew >= 0.0, base + ".skew: must be >= 0");
      check(std::isnan(cc.length_sd) || cc.length_sd > 0.0, base + ".length_sd: must be > 0");
    }
  }
  for (const auto& [key, a] :
       std::initializer_list<std::pair<const char*, double>>{
           {"activations.a_P", config.activations.prefix},
           {"activations.a_S", config.activations.deriv},
           {"activations.a_E", config.activations.infl}}) {
    check(a >= 0.0 && a <= 1.0, std::string(key) + ": must lie in [0, 1]");
  }
  check(config.n_tokens >= 1, "n_tokens: must be >= 1");
  check(config.fit_r_min >= 1, "fit.r_min: must be >= 1");
  check(config.fit_r_min <= config.fit_r_max, "fit: r_min must be <= r_max");
  check(config.threads >= 1, "threads: must be >= 1");
  if (!config.lexicon_file.empty()) {
    check(std::filesystem::exists(config.lexicon_file),
          "lexicon.file: no such file: " + config.lexicon_file.string());
  }
  if (!config.constraint_rules.empty()) {
    check(std::filesystem::exists(config.constraint_rules),
          "constraint.rules: no such file: " + config.constraint_rules.string());
  }
  config.filter.build();  // validates filter settings
}

Lexicon resolve_lexicon(const ExperimentConfig& config, LoadReport* report) {
  if (!config.lexicon_file.empty()) {
    return load_lexicon(config.lexicon_file, WeightPolicy::Normalize, report);
  }
  return synth_lexicon(config.lexicon, config.seed);
}

namespace {

// Loads or synthesizes the lexicon, logging any on-load weight rescaling.
Lexicon resolve_lexicon_logged(const ExperimentConfig& config, std::ostream& log) {
  LoadReport report;
  Lexicon lexicon = resolve_lexicon(config, &report);
  if (!config.lexicon_file.empty()) {
    for (MorphemeClass cls : kMorphemeClasses) {
      const auto& cr = report.per_class[static_cast<std::size_t>(cls)];
      if (cr.rescaled) {
        char buf[96];
        std::snprintf(buf, sizeof buf,
                      "notice: class %s weights rescaled on load (raw sum %.6g)\n",
                      class_name(cls), cr.raw_weight_sum);
        log << buf;
      }
    }
  }
  return lexicon;
}

}  // namespace

Constraint resolve_constraint(const ExperimentConfig& config, const Lexicon& lexicon) {
  if (config.constraint_rules.empty()) return Constraint::free();
  return Constraint::rules_from_file(config.constraint_rules, lexicon);
}

void run_gen_lexicon(const ExperimentConfig& config, std::ostream& log) {
  validate_config(config);
  const Lexicon lexicon = resolve_lexicon_logged(config, log);
  std::filesystem::create_directories(config.out_dir);
  const auto path = config.out_dir / "lexicon.tsv";
  save_lexicon(lexicon, path);
  log << "wrote " << path.string() << " (" << lexicon.total_morphemes()
      << " morphemes)\n";
  for (MorphemeClass cls : kMorphemeClasses) {
    const MorphemeInventory& inv = lexicon.inventory(cls);
    if (inv.is_empty()) {
      log << "  " << class_name(cls) << ": empty\n";
      continue;
    }
    const double top = *std::max_element(inv.weights().begin(), inv.weights().end());
    char buf[96];
    std::snprintf(buf, sizeof buf, "  %-6s %5zu items, lengths %d..%d, top weight %.4f\n",
                  class_name(cls), inv.size(), inv.min_length(), inv.max_length(), top);
    log << buf;
  }
}

GenerateSummary run_generate(const ExperimentConfig& config, std::ostream& log) {
  validate_config(config);
  const Lexicon lexicon = resolve_lexicon_logged(config, log);
  const Constraint constraint = resolve_constraint(config, lexicon);
  const SurvivalSpec filter = config.filter.build();

  const CorpusCounts corpus =
      generate_corpus(lexicon, config.activations, constraint, filter,
                      config.n_tokens, config.seed, config.threads);

  std::filesystem::create_directories(config.out_dir);
  write_counts_table(config.out_dir / "counts.tsv", corpus.counts);
  const auto length_counts = length_counts_from_types(corpus.counts);
  const auto length_rows = empirical_length_hist(length_counts);
  write_length_table(config.out_dir / "lengths.tsv", length_rows);
  const RankFrequencyTable ranks = rank_frequency(corpus.counts, corpus.tokens_surviving);
  write_rank_table(config.out_dir / "ranks.tsv", ranks);

  GenerateSummary summary;
  summary.tokens_requested = corpus.tokens_requested;
  summary.tokens_surviving = corpus.tokens_surviving;
  summary.types = ranks.size();
  int mode = 0;
  std::uint64_t best = 0;
  for (const LengthHistRow& row : length_rows) {
    if (row.count > best) {
      best = row.count;
      mode = row.length;
    }
  }
  summary.length_mode = mode;

  const auto r_max = static_cast<std::uint32_t>(
      std::min<std::uint64_t>(config.fit_r_max, ranks.size()));
  if (ranks.size() >= 3 && config.fit_r_min <= r_max && r_max - config.fit_r_min + 1 >= 3) {
    summary.fit = fit_zipf_exponent(ranks, config.fit_r_min, r_max);
    summary.fit_valid = true;
    const double mle = fit_zipf_mle(ranks, config.fit_r_min, r_max);
    write_fit_report(config.out_dir / "fit.txt", summary.fit, mle);
    write_loglog_csv(config.out_dir / "loglog.csv", ranks, config.fit_r_min, r_max);
    if (config.svg) write_loglog_svg(config.out_dir / "zipf.svg", ranks, summary.fit);
  } else {
    log << "warning: rank table too small for a fit; fit outputs skipped\n";
  }

  if (corpus.tokens_surviving == 0) {
    log << "warning: no tokens survived the filter; outputs are empty\n";
  }
  log << "tokens " << summary.tokens_surviving << "/" << summary.tokens_requested
      << " surviving, types " << summary.types << ", length mode "
      << summary.length_mode;
  if (summary.fit_valid) {
    char buf[48];
    std::snprintf(buf, sizeof buf, ", alpha %.4f", summary.fit.alpha);
    log << buf;
  }
  log << "\n";
  return summary;
}

ExactSummary run_exact(const ExperimentConfig& config, std::ostream& log) {
  validate_config(config);
  const Lexicon lexicon = resolve_lexicon_logged(config, log);
  const Constraint constraint = resolve_constraint(config, lexicon);
  std::filesystem::create_directories(config.out_dir);

  ExactSummary summary;
  summary.slot_count = n_morpheme_distribution(config.activations);
  summary.total_analyses = analysis_count(lexicon);

  {
    std::ofstream out(config.out_dir / "n_morphemes.tsv");
    if (!out) throw ValidationError("cannot write n_morphemes.tsv");
    out << "n\tprobability\n";
    char buf[40];
    for (int n = 1; n <= 4; ++n) {
      std::snprintf(buf, sizeof buf, "%.12g", summary.slot_count.prob(n));
      out << n << '\t' << buf << '\n';
    }
  }

  const bool enumerable = summary.total_analyses <= config.enum_budget;
  std::optional<ExactWordDistribution> dist;
  if (enumerable) {
    dist = exact_word_distribution(lexicon, config.activations, constraint,
                                   config.enum_budget);
    summary.enumerated = true;
    summary.admissible_analyses = dist->analyses.size();
    summary.normalization = dist->normalization;
    NeumaierSum check;
    for (const WordAnalysis& a : dist->analyses) check.add(a.probability);
    summary.probability_sum = check.value();
  } else {
    log << "notice: " << summary.total_analyses
        << " analyses exceed the enumeration budget (" << config.enum_budget
        << "); word-level output skipped, use `generate` for Monte Carlo\n";
  }

  if (constraint.is_free()) {
    summary.length_pmf = exact_length_pmf(lexicon, config.activations);
    summary.moments = length_moments(lexicon, config.activations);
  } else if (dist) {
    summary.length_pmf = length_pmf_from_analyses(*dist, lexicon);
    summary.moments = {summary.length_pmf->mean(), summary.length_pmf->variance()};
  } else {
    // Constrained and too large to enumerate: estimate the pmf by
    // sampling instead.
    log << "notice: constrained length distribution estimated from 200000 samples\n";
    const CorpusCounts mc = generate_corpus(lexicon, config.activations, constraint,
                                            SurvivalSpec::constant(1.0), 200000,
                                            config.seed, config.threads);
    summary.length_pmf = LengthPmf::from_counts(length_counts_from_types(mc.counts));
    summary.moments = {summary.length_pmf->mean(), summary.length_pmf->variance()};
  }

  write_pmf_table(config.out_dir / "exact_lengths.tsv", *summary.length_pmf);
  {
    std::ofstream out(config.out_dir / "moments.txt");
    if (!out) throw ValidationError("cannot write moments.txt");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", summary.moments.mean);
    out << "mean_length=" << buf << '\n';
    std::snprintf(buf, sizeof buf, "%.12g", summary.moments.variance);
    out << "variance_length=" << buf << '\n';
    std::snprintf(buf, sizeof buf, "%.12g", summary.slot_count.mean());
    out << "mean_morphemes=" << buf << '\n';
    std::snprintf(buf, sizeof buf, "%.12g", summary.slot_count.variance());
    out << "variance_morphemes=" << buf << '\n';
  }

  if (dist && summary.admissible_analyses <= config.words_budget) {
    char buf[40];
    {
      std::ofstream out(config.out_dir / "exact_analyses.tsv");
      if (!out) throw ValidationError("cannot write exact_analyses.tsv");
      out << "surface\tprefix\troot\tderiv\tinfl\tprobability\n";
      for (const WordAnalysis& a : dist->analyses) {
        out << analysis_surface(lexicon, a.prefix, a.root, a.deriv, a.infl) << '\t'
            << (a.prefix ? lexicon.prefixes.item(*a.prefix).surface : "-") << '\t'
            << lexicon.roots.item(a.root).surface << '\t'
            << (a.deriv ? lexicon.derivs.item(*a.deriv).surface : "-") << '\t'
            << (a.infl ? lexicon.inflections.item(*a.infl).surface : "-") << '\t';
        std::snprintf(buf, sizeof buf, "%.12g", a.probability);
        out << buf << '\n';
      }
    }
    {
      std::ofstream out(config.out_dir / "exact_words.tsv");
      if (!out) throw ValidationError("cannot write exact_words.tsv");
      out << "surface\tprobability\n";
      for (const auto& [surface, p] : dist->merged_by_surface(lexicon)) {
        std::snprintf(buf, sizeof buf, "%.12g", p);
        out << surface << '\t' << buf << '\n';
      }
    }
    summary.words_written = true;
  } else if (dist) {
    log << "notice: " << summary.admissible_analyses
        << " admissible analyses exceed words_budget (" << config.words_budget
        << "); exact_analyses.tsv / exact_words.tsv skipped\n";
  }

  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", summary.slot_count.mean());
  log << "mean morphemes per word: " << buf << "\n";
  std::snprintf(buf, sizeof buf, "%.6g (variance %.6g)", summary.moments.mean,
                summary.moments.variance);
  log << "mean word length: " << buf << "\n";
  if (summary.enumerated) {
    std::snprintf(buf, sizeof buf, "%.17g", summary.probability_sum);
    log << "enumerated " << summary.admissible_analyses
        << " admissible analyses, probability sum " << buf << "\n";
  }
  return summary;
}

CorpusStats run_corpus(const ExperimentConfig& config,
                       const std::filesystem::path& input,
                       const TokenizeOptions& options, std::ostream& log) {
  if (!std::filesystem::exists(input)) {
    throw ValidationError("corpus file does not exist: " + input.string());
  }
  const TokenStream stream = tokenize_file(input, options);
  const CorpusStats stats = corpus_stats(stream);

  std::filesystem::create_directories(config.out_dir);
  write_length_table(config.out_dir / "lengths.tsv", stats.length_table);
  write_rank_table(config.out_dir / "ranks.tsv", stats.rank_table);
  const auto r_max = static_cast<std::uint32_t>(
      std::min<std::uint64_t>(config.fit_r_max, stats.rank_table.size()));
  if (stats.rank_table.size() >= 3 && config.fit_r_min <= r_max &&
      r_max - config.fit_r_min + 1 >= 3) {
    const ZipfFit fit = fit_zipf_exponent(stats.rank_table, config.fit_r_min, r_max);
    const double mle = fit_zipf_mle(stats.rank_table, config.fit_r_min, r_max);
    write_fit_report(config.out_dir / "fit.txt", fit, mle);
    write_loglog_csv(config.out_dir / "loglog.csv", stats.rank_table, config.fit_r_min, r_max);
    if (config.svg) write_loglog_svg(config.out_dir / "zipf.svg", stats.rank_table, fit);
  }
  {
    std::ofstream out(config.out_dir / "summary.txt");
    if (!out) throw ValidationError("cannot write summary.txt");
    out << "tokens=" << stats.token_count << "\ntypes=" << stats.type_count << '\n';
  }
  log << "tokens " << stats.token_count << ", types " << stats.type_count << "\n";
  return stats;
}

ComparisonReport run_compare(const ExperimentConfig& config,
                             const std::filesystem::path& model_dir,
                             const std::filesystem::path& corpus_dir,
                             std::ostream& log) {
  const auto model_lengths = read_length_table(model_dir / "lengths.tsv");
  const auto corpus_lengths = read_length_table(corpus_dir / "lengths.tsv");
  const auto model_ranks = read_rank_table(model_dir / "ranks.tsv");
  const auto corpus_ranks = read_rank_table(corpus_dir / "ranks.tsv");
  const ComparisonReport report = compare_distributions(model_lengths, model_ranks,
                                                        corpus_lengths, corpus_ranks);

  std::filesystem::create_directories(config.out_dir);
  std::ofstream out(config.out_dir / "report.txt");
  if (!out) throw ValidationError("cannot write report.txt");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", report.length_tv_distance);
  out << "length_tv_distance=" << buf << '\n';
  out << "model_mode=" << report.model_mode << '\n';
  out << "corpus_mode=" << report.corpus_mode << '\n';
  if (report.alphas_valid) {
    std::snprintf(buf, sizeof buf, "%.9g", report.model_alpha);
    out << "model_alpha=" << buf << '\n';
    std::snprintf(buf, sizeof buf, "%.9g", report.corpus_alpha);
    out << "corpus_alpha=" << buf << '\n';
    out << "window=" << report.window_lo << ".." << report.window_hi << '\n';
  }
  std::snprintf(buf, sizeof buf, "%.6g", report.length_tv_distance);
  log << "length TV distance " << buf << ", modes " << report.model_mode
      << " vs " << report.corpus_mode;
  if (report.alphas_valid) {
    std::snprintf(buf, sizeof buf, ", alpha %.4f vs %.4f", report.model_alpha,
                  report.corpus_alpha);
    log << buf;
  }
  log << "\n";
  return report;
}

void run_sweep(const ExperimentConfig& config, std::ostream& log) {
  validate_config(config);

  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  for (const auto& [key, list] : config.sweep_lists) {
    axes.emplace_back(key, split_list(list));
  }
  std::uint64_t points = 1;
  for (const auto& [key, values] : axes) {
    if (values.empty()) throw ValidationError("sweep." + key + ": empty list");
    points *= values.size();
    if (points > config.sweep_max_points) break;
  }
  if (points > config.sweep_max_points) {
    throw ValidationError("sweep grid has " + std::to_string(points) +
                          " points, which exceeds sweep.max_points (" +
                          std::to_string(config.sweep_max_points) + ")");
  }

  std::filesystem::create_directories(config.out_dir);
  std::ofstream out(config.out_dir / "sweep.csv");
  if (!out) throw ValidationError("cannot write sweep.csv");
  out << "point";
  for (const auto& [key, values] : axes) {
    (void)values;
    out << ',' << key;
  }
  out << ",types,tokens_surviving,alpha,length_mode,mean_length\n";

  char buf[64];
  for (std::uint64_t i = 0; i < points; ++i) {
    ExperimentConfig point = config;
    point.sweep_lists.clear();
    point.seed = config.seed + i;  // point 0 keeps the base seed
    std::uint64_t stride = 1;
    std::vector<std::string> cells;
    for (const auto& [key, values] : axes) {
      const std::string& value = values[(i / stride) % values.size()];
      apply_setting(point, key, value);
      cells.push_back(value);
      stride *= values.size();
    }
    validate_config(point);

    const Lexicon lexicon = resolve_lexicon(point);
    const Constraint constraint = resolve_constraint(point, lexicon);
    const CorpusCounts corpus =
        generate_corpus(lexicon, point.activations, constraint,
                        point.filter.build(), point.n_tokens, point.seed,
                        point.threads);
    const RankFrequencyTable ranks = rank_frequency(corpus.counts, corpus.tokens_surviving);

    double alpha = std::numeric_limits<double>::quiet_NaN();
    const auto r_max = static_cast<std::uint32_t>(
        std::min<std::uint64_t>(point.fit_r_max, ranks.size()));
    if (ranks.size() >= 3 && point.fit_r_min <= r_max && r_max - point.fit_r_min + 1 >= 3) {
      alpha = fit_zipf_exponent(ranks, point.fit_r_min, r_max).alpha;
    }
    int mode = 0;
    std::uint64_t best = 0;
    for (const auto& [len, count] : length_counts_from_types(corpus.counts)) {
      if (count > best) {
        best = count;
        mode = len;
      }
    }
    double mean_length;
    if (constraint.is_free()) {
      mean_length = length_moments(lexicon, point.activations).mean;
    } else {
      NeumaierSum weighted;
      for (const auto& [len, count] : length_counts_from_types(corpus.counts)) {
        weighted.add(static_cast<double>(len) * static_cast<double>(count));
      }
      mean_length = corpus.tokens_surviving == 0
                        ? std::numeric_limits<double>::quiet_NaN()
                        : weighted.value() / static_cast<double>(corpus.tokens_surviving);
    }

    out << i;
    for (const std::string& cell : cells) out << ',' << cell;
    std::snprintf(buf, sizeof buf, "%.6g", alpha);
    out << ',' << ranks.size() << ',' << corpus.tokens_surviving << ',' << buf;
    std::snprintf(buf, sizeof buf, "%.9g", mean_length);
    out << ',' << mode << ',' << buf << '\n';
  }
  if (!out) throw ValidationError("I/O error writing sweep.csv");
  log << "swept " << points << " grid point(s) over " << axes.size()
      << " axis/axes; wrote sweep.csv\n";
}

}  // namespace morphgen
