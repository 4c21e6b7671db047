#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcim/diffusion.hpp"
#include "mcim/graph.hpp"
#include "mcim/rng.hpp"

namespace mcim {

struct PhaseTimes {
  double opt_lower_s = 0;
  double sampling_s = 0;
  double selection_s = 0;
  double evaluation_s = 0;
  double total_s = 0;
};

// Machine-readable outcome of one solver run; serialized as JSON with the
// original node labels.
struct SolverReport {
  std::string algorithm;
  std::vector<NodeId> seeds;  // selection order
  std::uint64_t l = 0;        // tuples used for selection
  double f_lo = 0;
  std::optional<double> gamma_lower;
  InfluenceEstimate influence;
  PhaseTimes phases;
  nlohmann::ordered_json config_echo;    // filled by the CLI layer
  nlohmann::ordered_json graph_summary;  // {n, m, scheme, seed}
  std::string rng_algorithm = kRngAlgorithm;
};

nlohmann::ordered_json report_to_json(const SolverReport& report,
                                      const DirectedGraph& g);

}  // namespace mcim
