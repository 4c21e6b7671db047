#include "mcim/synthetic.hpp"

#include <unordered_set>

#include "mcim/error.hpp"
#include "mcim/rng.hpp"

namespace mcim {

DirectedGraph random_graph(NodeId n, std::uint64_t m, std::uint64_t seed) {
  if (n < 2) throw ConfigError("random_graph: need at least two nodes");
  const std::uint64_t max_edges =
      static_cast<std::uint64_t>(n) * (static_cast<std::uint64_t>(n) - 1);
  if (m > max_edges / 2)
    throw ConfigError("random_graph: too dense for rejection sampling");

  Rng rng = make_rng(seed);
  GraphBuilder builder(true);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(m * 2);
  // Ensure every node id exists even if it ends up isolated.
  builder.add_edge(static_cast<NodeId>(0), static_cast<NodeId>(n - 1), std::nullopt);
  seen.insert(static_cast<std::uint64_t>(n - 1));
  std::uint64_t added = 1;
  while (added < m) {
    const NodeId u = static_cast<NodeId>(rng() % n);
    const NodeId v = static_cast<NodeId>(rng() % n);
    if (u == v) continue;
    const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
    if (!seen.insert(key).second) continue;
    builder.add_edge(u, v, std::nullopt);
    ++added;
  }
  return builder.build();
}

}  // namespace mcim
