#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "morphgen/errors.hpp"
#include "morphgen/experiment.hpp"

namespace {

struct GlobalFlags {
  std::string config_path;
  std::vector<std::string> overrides;
  bool seed_set = false;
  std::uint64_t seed = 0;
  std::string out_dir;
  unsigned threads = 0;
  bool svg = false;
};

morphgen::ExperimentConfig assemble(const GlobalFlags& flags) {
  morphgen::ExperimentConfig config;
  if (!flags.config_path.empty()) {
    morphgen::apply_config_file(config, flags.config_path);
  }
  for (const std::string& kv : flags.overrides) {
    morphgen::apply_override(config, kv);
  }
  // Dedicated flags win over config file and --set values.
  if (flags.seed_set) config.seed = flags.seed;
  if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
  if (flags.threads > 0) config.threads = flags.threads;
  if (flags.svg) config.svg = true;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"morpheme-slot word generator and lexical statistics"};
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_option("--config", flags.config_path, "experiment config file (key = value lines)");
  app.add_option("--set", flags.overrides, "override one config key, e.g. --set activations.a_P=0.5")
      ->take_all();
  app.add_option("--seed", flags.seed, "random seed")->each([&flags](const std::string&) {
    flags.seed_set = true;
  });
  app.add_option("--out", flags.out_dir, "output directory");
  app.add_option("--threads", flags.threads, "worker threads for generation");
  app.add_flag("--svg", flags.svg, "also write SVG plots");

  auto* gen_lexicon = app.add_subcommand("gen-lexicon", "synthesize a lexicon and write lexicon.tsv");
  auto* generate = app.add_subcommand("generate", "sample a corpus; write counts, length and rank tables, fit");
  auto* exact = app.add_subcommand("exact", "exact distributions: slot counts, length pmf, moments, word probabilities");
  auto* corpus_cmd = app.add_subcommand("corpus", "tokenize a text file and compute its statistics");
  std::string corpus_path;
  morphgen::TokenizeOptions token_options;
  corpus_cmd->add_option("file", corpus_path, "input text file")->required();
  corpus_cmd->add_flag("--unicode-letters", token_options.unicode_letters,
                       "treat common non-ASCII letters as token characters");
  corpus_cmd->add_flag("--strip-gutenberg", token_options.strip_gutenberg,
                       "drop boilerplate outside *** START / *** END markers");
  auto* compare = app.add_subcommand("compare", "compare two stats directories (lengths.tsv + ranks.tsv)");
  std::string model_dir, corpus_dir;
  compare->add_option("model_dir", model_dir)->required();
  compare->add_option("corpus_dir", corpus_dir)->required();
  auto* sweep = app.add_subcommand("sweep", "run a parameter grid and write sweep.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // bad arguments count as validation errors
  }

  try {
    const morphgen::ExperimentConfig config = assemble(flags);
    if (gen_lexicon->parsed()) {
      morphgen::run_gen_lexicon(config, std::cout);
    } else if (generate->parsed()) {
      morphgen::run_generate(config, std::cout);
    } else if (exact->parsed()) {
      morphgen::run_exact(config, std::cout);
    } else if (corpus_cmd->parsed()) {
      morphgen::run_corpus(config, corpus_path, token_options, std::cout);
    } else if (compare->parsed()) {
      morphgen::run_compare(config, model_dir, corpus_dir, std::cout);
    } else if (sweep->parsed()) {
      morphgen::run_sweep(config, std::cout);
    }
    return 0;
  } catch (const morphgen::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
