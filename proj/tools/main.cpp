#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "stabkit/io.hpp"
#include "stabkit/morley.hpp"

namespace {

int emit(const stabkit::RunOutcome& out, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << out.rendered;
  } else {
    std::ofstream f(out_path);
    if (!f) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return 2;
    }
    f << out.rendered;
  }
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite local-stability and Keisler-measure toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", stabkit::kVersion);

  stabkit::RunConfig cfg;
  std::string eps_str = "1/8";
  std::string r_str = "0";

  const std::vector<std::string> commands = {
      "analyze",      "decompose",    "morley",   "approx",
      "search-order", "double-limit", "two-tree", "generate"};
  const std::map<std::string, std::string> descriptions = {
      {"analyze", "ladder index, VC dimension, type and definability census"},
      {"decompose", "weighted-sum decomposition of a measure"},
      {"morley", "pairwise product values and commutativity"},
      {"approx", "eps-approximation of a measure by an average of points"},
      {"search-order", "search for an (r,eps)-order array of measures"},
      {"double-limit", "iterated-limit diagnostic on the sub-model grid"},
      {"two-tree", "measure-driven binary tree of formula classes"},
      {"generate", "emit a generated relation document"}};

  for (const auto& name : commands) {
    CLI::App* sub = app.add_subcommand(name, descriptions.at(name));
    sub->add_option("--input", cfg.input_path, "relation document path");
    sub->add_option("--gen", cfg.gen_spec,
                    "generator spec, e.g. half_graph(8) or "
                    "random_bipartite(8,8,1/2,7)");
    sub->add_option("--cap", cfg.cap,
                    "ladder cap / search size cap / tree depth cap");
    sub->add_option("--eps", eps_str, "threshold or tolerance (rational)");
    sub->add_option("--r", r_str, "order-array base level (rational)");
    sub->add_option("--seed", cfg.seed, "sampling seed");
    sub->add_option("--out", cfg.out_path, "output path (default stdout)");
    sub->add_option("--format", cfg.format, "json or csv");
    sub->add_option("--mu", cfg.mu_paths, "measure document(s), phi side");
    sub->add_option("--nu", cfg.nu_paths, "measure document(s), opp side");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  try {
    cfg.eps = stabkit::rat_parse(eps_str);
    cfg.r = stabkit::rat_parse(r_str);
    return emit(stabkit::run(cfg), cfg.out_path);
  } catch (const stabkit::UndefinableTypeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const stabkit::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
