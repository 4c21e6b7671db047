#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mcim/cascades.hpp"

namespace mcim {

// Enumeration guards. The objective is #P-hard; these keep the exact oracle
// honest about what it can afford.
inline constexpr unsigned kMaxOracleEdges = 20;
inline constexpr double kMaxOracleSubsets = 100000.0;

// Probability of one live/dead edge realization: bit e of live_mask marks
// edge e live. The product of edge probabilities over live edges times the
// complement over dead edges.
double realization_probability(const DirectedGraph& g, std::uint32_t live_mask);

// Exact expected new-cascade influence f(S), computed by enumerating all 2^m
// edge realizations and diffusing deterministically on each. Requires
// m <= kMaxOracleEdges and a deterministic activation kind.
double exact_influence(const Instance& inst, std::span<const NodeId> new_seeds);

struct OptimalSeeds {
  std::vector<NodeId> seeds;
  double influence = 0;
};

// Exhaustive argmax of exact_influence over all k-subsets of the candidate
// set; ties break to the lexicographically smallest id set. Guarded by
// C(|candidates|, k) <= kMaxOracleSubsets.
OptimalSeeds exact_optimal(const Instance& inst, unsigned k);

}  // namespace mcim
