#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>

#include "mcim/graph.hpp"

namespace mcim {

enum class SchemeKind {
  uniform,            // every edge gets the same p
  weighted_cascade,   // p_(u,v) = 1 / in_degree(v)
  exponential,        // p = min(1, mean * Exp(1) draw), floored at epsilon
  from_file,          // keep the probabilities supplied with the edge list
  frequency_weighted  // proportional to per-edge action counts, normalized
                      // per target so incoming weights sum to min(1, raw sum)
};

struct ProbabilityScheme {
  SchemeKind kind = SchemeKind::uniform;
  double p = 0.1;        // uniform
  double mean = 0.01;    // exponential
  std::uint64_t rng_seed = 0;
  // frequency_weighted: action counts keyed by "u<TAB>v" labels
  std::unordered_map<std::string, double> action_counts;

  std::string name() const;
};

// "u v count" lines, same comment rules as edge lists.
std::unordered_map<std::string, double> load_action_counts(std::istream& in);
std::unordered_map<std::string, double> load_action_counts_file(const std::string& path);

// Returns a graph with every edge probability rewritten per the scheme.
// Deterministic given rng_seed: stochastic schemes draw in edge-id order.
DirectedGraph assign_probabilities(const DirectedGraph& g,
                                   const ProbabilityScheme& scheme);

}  // namespace mcim
