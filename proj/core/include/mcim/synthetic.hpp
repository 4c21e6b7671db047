#pragma once

#include <cstdint>

#include "mcim/graph.hpp"

namespace mcim {

// Uniform random digraph with exactly m distinct directed edges (no
// self-loops), labels "0".."n-1". Deterministic given seed.
DirectedGraph random_graph(NodeId n, std::uint64_t m, std::uint64_t seed);

}  // namespace mcim
