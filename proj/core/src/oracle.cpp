#include "mcim/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "mcim/diffusion.hpp"
#include "mcim/error.hpp"
#include "mcim/parallel.hpp"

namespace mcim {

double realization_probability(const DirectedGraph& g, std::uint32_t live_mask) {
  double p = 1.0;
  for (std::uint32_t e = 0; e < g.edge_count(); ++e) {
    const double pe = g.probability(static_cast<EdgeId>(e));
    p *= ((live_mask >> e) & 1u) ? pe : 1.0 - pe;
  }
  return p;
}

double exact_influence(const Instance& inst, std::span<const NodeId> new_seeds) {
  const DirectedGraph& g = inst.graph();
  if (g.edge_count() > kMaxOracleEdges)
    throw ResourceError("exact_influence: graph exceeds the edge enumeration guard");
  if (inst.activation().kind() == ActivationKind::random_choice)
    throw ConfigError("exact_influence: random activation is not enumerable");
  inst.check_new_seeds(new_seeds);

  const std::uint64_t total = 1ull << g.edge_count();
  // Fixed 64-way split keeps the summation order independent of the worker
  // count; masks are enumerated ascending within each range.
  const std::uint64_t ranges = std::min<std::uint64_t>(64, total);
  std::vector<double> partial(ranges, 0.0);
  parallel_chunks(ranges, effective_threads(),
                  [&](unsigned, std::uint64_t begin, std::uint64_t end) {
                    DiffusionWorkspace ws;
                    for (std::uint64_t r = begin; r < end; ++r) {
                      const std::uint64_t lo = total / ranges * r;
                      const std::uint64_t hi =
                          (r + 1 == ranges) ? total : total / ranges * (r + 1);
                      double acc = 0;
                      for (std::uint64_t mask = lo; mask < hi; ++mask) {
                        const double pr = realization_probability(
                            g, static_cast<std::uint32_t>(mask));
                        acc += pr * static_cast<double>(diffuse_on_realization(
                                        inst, new_seeds,
                                        static_cast<std::uint32_t>(mask), ws));
                      }
                      partial[r] = acc;
                    }
                  });
  double sum = 0;
  for (double v : partial) sum += v;
  return sum;
}

namespace {

double choose_approx(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  double r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= static_cast<double>(n - k + i) / static_cast<double>(i);
    if (r > 1e18) return r;
  }
  return r;
}

}  // namespace

OptimalSeeds exact_optimal(const Instance& inst, unsigned k) {
  const auto candidates = inst.candidates();
  if (k == 0) return {};
  if (k > candidates.size())
    throw ConfigError("exact_optimal: budget exceeds the candidate set");
  if (choose_approx(candidates.size(), k) > kMaxOracleSubsets)
    throw ResourceError("exact_optimal: subset enumeration guard exceeded");

  std::vector<std::size_t> pick(k);
  for (unsigned i = 0; i < k; ++i) pick[i] = i;

  OptimalSeeds best;
  best.influence = -1;
  std::vector<NodeId> seeds(k);
  while (true) {
    for (unsigned i = 0; i < k; ++i) seeds[i] = candidates[pick[i]];
    const double f = exact_influence(inst, seeds);
    if (f > best.influence) {  // strict: first (lexicographically smallest) wins ties
      best.influence = f;
      best.seeds = seeds;
    }
    // next k-combination in lexicographic order
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && pick[i] == candidates.size() - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (unsigned j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

}  // namespace mcim
