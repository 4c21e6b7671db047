#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mcim/cascades.hpp"

namespace mcim {

struct DiffusionResult {
  std::vector<CascadeId> state;     // kNoCascade where never activated
  std::vector<std::int32_t> time;   // round of activation, -1 where never
  std::uint64_t new_active = 0;     // nodes ending up new-cascade-active
};

struct TraceEvent {
  NodeId node;
  CascadeId cascade;
  std::int32_t time;
};

// Reusable scratch for synchronous diffusion. Mark-stamped arrays avoid O(n)
// clears between runs; sized lazily to the graph.
struct DiffusionWorkspace {
  std::vector<CascadeId> state;
  std::vector<std::int32_t> time;
  std::vector<std::uint32_t> state_mark;
  std::vector<std::uint32_t> offer_mark;
  std::vector<std::uint32_t> offer_slot;
  std::vector<std::vector<Offer>> offers;
  std::vector<NodeId> touched;
  std::vector<NodeId> frontier;
  std::vector<NodeId> next_frontier;
  std::uint32_t counter = 0;
  std::uint32_t run_mark = 0;

  void prepare(NodeId n);
  std::uint32_t next_mark() { return ++counter; }
  bool active(NodeId v) const { return state_mark[v] == run_mark; }
};

// Synchronous diffusion of all cascades from their seeds (the new cascade
// spreads from `new_seeds`). Edge coin flips and activation randomness come
// from one stream seeded with rng_seed, consumed in a fixed order (ascending
// node id, then ascending out-edge index), so runs are reproducible.
// `trace`, when given, records every state assignment in order.
DiffusionResult diffuse(const Instance& inst, std::span<const NodeId> new_seeds,
                        std::uint64_t rng_seed,
                        std::vector<TraceEvent>* trace = nullptr);

// Deterministic diffusion on a fixed edge realization: edge e succeeds iff
// bit e of live_mask is set (graphs with at most 32 edges). Requires a
// deterministic activation kind. Returns the new-cascade-active count.
std::uint64_t diffuse_on_realization(const Instance& inst,
                                     std::span<const NodeId> new_seeds,
                                     std::uint32_t live_mask,
                                     DiffusionWorkspace& ws);

struct InfluenceEstimate {
  double mean = 0;             // mean new-cascade-active count
  double std_error = 0;        // sample standard deviation / sqrt(trials)
  double not_active_mean = 0;  // n - mean
  std::uint64_t trials = 0;
};

// Monte-Carlo estimate of the influence objective and its complement.
// Per-trial seeds derive from rng_seed via the `trials` substream, so results
// do not depend on the worker count.
InfluenceEstimate estimate_influence(const Instance& inst,
                                     std::span<const NodeId> new_seeds,
                                     std::uint64_t trials,
                                     std::uint64_t rng_seed,
                                     unsigned threads = 0);

}  // namespace mcim
