// Batch front door for the multi-cascade influence maximization solver.
// Progress and warnings go to stderr; reports go only to the designated
// output, so stdout stays pipeline-clean.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcim/cli.hpp"
#include "mcim/error.hpp"

namespace {

int error_record(const char* type, const std::string& message, int code) {
  nlohmann::ordered_json j;
  j["error"] = {{"type", type}, {"message", message}};
  std::cerr << j.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-cascade influence maximization: reverse sandwich solver"};
  app.require_subcommand(1);

  std::string config;
  std::string out = "-";
  std::string seeds;
  std::string dump;
  std::uint64_t trials = 0;
  bool trials_given = false;
  std::uint64_t check_tuples = 100000;
  std::vector<unsigned> k_list;
  std::vector<std::string> algorithms;

  auto* solve = app.add_subcommand("solve", "select seeds, write a JSON report");
  solve->add_option("--config", config, "JSON run config")->required();
  solve->add_option("--out", out, "report path ('-' for stdout)")->required();
  solve->add_option("--dump-tuples", dump, "write the sample collection as text");

  auto* evaluate = app.add_subcommand("evaluate", "Monte-Carlo influence of a seed file");
  evaluate->add_option("--config", config, "JSON run config")->required();
  evaluate->add_option("--seeds", seeds, "node labels, one per line")->required();
  evaluate->add_option("--trials", trials, "override evaluate.trials")
      ->each([&](const std::string&) { trials_given = true; });
  evaluate->add_option("--out", out, "report path ('-' for stdout)");

  auto* sweep = app.add_subcommand("sweep", "one run per (algorithm, k), CSV output");
  sweep->add_option("--config", config, "JSON run config")->required();
  sweep->add_option("--k-list", k_list, "budgets, e.g. 20,30,40,50")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", out, "CSV path (appended)")->required();
  sweep->add_option("--algorithms", algorithms, "override the config's algorithm")
      ->delimiter(',');

  auto* check = app.add_subcommand("oracle-check",
                                   "validate sampling against exact enumeration");
  check->add_option("--config", config, "JSON run config")->required();
  check->add_option("--tuples", check_tuples, "sample size (default 100000)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return mcim::cli::cmd_solve(config, out, dump);
    if (*evaluate)
      return mcim::cli::cmd_evaluate(
          config, seeds,
          trials_given ? std::optional<std::uint64_t>(trials) : std::nullopt, out);
    if (*sweep) return mcim::cli::cmd_sweep(config, k_list, out, algorithms);
    if (*check) return mcim::cli::cmd_oracle_check(config, check_tuples);
  } catch (const mcim::ConfigError& e) {
    return error_record("config", e.what(), 2);
  } catch (const mcim::ResourceError& e) {
    return error_record("resource", e.what(), 3);
  } catch (const std::exception& e) {
    return error_record("internal", e.what(), 1);
  }
  return 0;
}
