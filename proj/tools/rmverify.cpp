// Scenario-driven verification CLI: parse a scenario file, run the
// requested checks over sampled points, and emit human-readable and JSON
// reports. Exit codes: 0 when no check fails or is inconsistent, 1
// otherwise, 2 on usage or parse errors.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rmap/catalog.hpp"
#include "rmap/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chart-level Riemannian map verifier"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string json_path;
  int samples = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  double tolerance = 0.0;
  double rank_tol = rmap::kRankTol;
  int threads = 0;

  CLI::App* verify = app.add_subcommand("verify", "run the checks of a scenario file");
  verify->add_option("file", scenario_path, "scenario file (or built-in scenario name)")
      ->required();
  verify->add_option("--json", json_path, "write the JSON report to this path");
  verify->add_option("--samples", samples, "override the scenario sample count");
  verify->add_option("--seed", seed, "override the scenario seed")
      ->each([&](const std::string&) { seed_given = true; });
  verify->add_option("--tolerance", tolerance, "override every check tolerance");
  verify->add_option("--rank-tol", rank_tol, "relative singular value threshold for rank");
  verify->add_option("--threads", threads, "sample-level parallelism (0 = serial)");

  CLI::App* catalog_cmd = app.add_subcommand("catalog", "list the built-in scenarios");

  std::string describe_name;
  CLI::App* describe = app.add_subcommand("describe", "print a built-in scenario file");
  describe->add_option("name", describe_name, "scenario name from the catalog")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (catalog_cmd->parsed()) {
      for (const rmap::CatalogEntry& e : rmap::catalog())
        std::cout << e.name << "  -  " << e.description << "\n";
      return 0;
    }
    if (describe->parsed()) {
      const rmap::CatalogEntry* e = rmap::find_catalog_entry(describe_name);
      if (!e) {
        std::cerr << "unknown scenario '" << describe_name << "' (see `catalog`)\n";
        return 2;
      }
      std::cout << e->text;
      return 0;
    }

    // verify
    std::string text;
    std::string fallback_name = "scenario";
    if (const rmap::CatalogEntry* e = rmap::find_catalog_entry(scenario_path)) {
      text = e->text;
      fallback_name = e->name;
    } else {
      text = read_file(scenario_path);
      fallback_name = std::filesystem::path(scenario_path).stem().string();
    }
    rmap::Scenario sc;
    try {
      sc = rmap::parse_scenario(text, fallback_name);
    } catch (const rmap::ScenarioError& e) {
      std::cerr << "scenario error: " << e.what() << "\n";
      return 2;
    }

    rmap::RunOptions opt;
    if (samples > 0) opt.samples = samples;
    if (seed_given) opt.seed = seed;
    if (tolerance > 0.0) opt.tolerance = tolerance;
    opt.rank_tol = rank_tol;
    opt.threads = threads;
    opt.policy = threads > 1 ? rmap::ExecutionPolicy::Parallel : rmap::ExecutionPolicy::Serial;

    const rmap::RunResult result = rmap::run_scenario(sc, opt);
    std::cout << rmap::to_text(result);
    if (!json_path.empty()) {
      std::ofstream out(json_path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write '" + json_path + "'");
      out << rmap::to_json(result);
    }
    return result.all_clean() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
