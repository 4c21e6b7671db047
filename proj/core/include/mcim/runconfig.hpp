#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcim/cascades.hpp"
#include "mcim/graph.hpp"
#include "mcim/probability.hpp"
#include "mcim/solver.hpp"

namespace mcim {

// One experiment, as described by the JSON config. Key layout:
//   graph.path, graph.directed
//   probabilities.scheme, probabilities.p | mean | file
//   cascades[].name, cascades[].seeds | seed_fraction
//   activation.type, activation.rng_seed, activation.table (explicit_table)
//   solver.algorithm, k, epsilon, N, K  (+ epsilon0/1/2, max_tuples)
//   evaluate.trials
//   candidates ("all" or a label file)
//   rng_seed
// The new cascade is always named "c_new".
struct RunConfig {
  std::string graph_path;
  bool directed = true;
  SchemeKind scheme = SchemeKind::uniform;
  double scheme_p = 0.1;
  double scheme_mean = 0.01;
  std::string scheme_file;

  struct CascadeIn {
    std::string name;
    std::optional<std::string> seeds_file;
    std::optional<double> seed_fraction;
  };
  std::vector<CascadeIn> cascades;

  ActivationKind activation = ActivationKind::cascade_order;
  std::uint64_t activation_seed = 0;
  nlohmann::ordered_json activation_table;  // raw rules, resolved at load

  std::string algorithm = "rs";
  SolverParams solver;
  std::string candidates = "all";
  std::uint64_t rng_seed = 0;

  nlohmann::ordered_json echo;  // the parsed document, key order preserved
};

RunConfig parse_run_config(const nlohmann::ordered_json& doc);
RunConfig load_run_config(const std::string& path);

// Fully materialized run: graph with probabilities assigned, seed sets drawn
// or read, candidate set resolved, instance validated. Heap members keep the
// instance's graph reference stable.
struct PreparedRun {
  RunConfig config;
  std::unique_ptr<DirectedGraph> graph;
  std::unique_ptr<Instance> instance;
};

PreparedRun prepare_run(RunConfig config);

// Seed files: one node label per line, '#' comments allowed.
std::vector<NodeId> load_label_file(const std::string& path, const DirectedGraph& g);

// Summary record {n, m, scheme, seed} for reports.
nlohmann::ordered_json graph_summary(const PreparedRun& run);

}  // namespace mcim
