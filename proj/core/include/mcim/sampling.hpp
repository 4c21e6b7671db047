#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "mcim/cascades.hpp"
#include "mcim/diffusion.hpp"

namespace mcim {

// Edge of a sampled subgraph in original (forward) direction, as indices
// into the tuple's node list.
struct LocalEdge {
  std::uint32_t from, to;
};

// An existing-cascade seed captured inside a sampled subgraph.
struct TupleSeedRef {
  CascadeId cascade;
  std::uint32_t local;
};

// One reverse-reachability sample rooted at `root`. `nodes` lists the
// subgraph nodes in discovery order (root first); the whole list is the
// upper seed set, its first `lower_count` entries are the lower seed set.
// The nodes beyond `lower_count`, if any, form the final BFS layer that
// touched an existing seed. `frozen_activation_seed` replays random
// activation deterministically when the sample is re-evaluated.
struct RRTuple {
  NodeId root = 0;
  std::vector<NodeId> nodes;
  std::uint32_t lower_count = 0;
  std::vector<LocalEdge> edges;
  std::vector<TupleSeedRef> existing_seeds;
  std::uint64_t frozen_activation_seed = 0;
  std::uint64_t edges_tested = 0;

  bool hit_existing_seed() const { return lower_count < nodes.size(); }
};

// Scratch for tuple generation (mark-stamped visited arrays, reset lazily).
struct SampleWorkspace {
  std::vector<std::uint32_t> mark;
  std::vector<std::uint32_t> round_added;
  std::vector<std::uint32_t> local_id;
  std::uint32_t counter = 0;
  std::uint32_t run = 0;

  void prepare(NodeId n);
};

// Reverse-BFS sample from a fixed root: walk in-edges layer by layer, testing
// each eligible edge exactly once with its propagation probability, stopping
// when a layer touches an existing seed (that layer stays out of the lower
// set) or when no node is reachable anymore. The first value consumed from
// `rng` is the tuple's frozen activation seed.
RRTuple sample_rr_tuple_at(const Instance& inst, NodeId root, Rng& rng,
                           SampleWorkspace& ws);

// Same with the root drawn uniformly from V.
RRTuple sample_rr_tuple(const Instance& inst, Rng& rng, SampleWorkspace& ws);

// A batch of RR-tuples in pooled storage plus inverted coverage indices
// (node -> tuple ids whose upper/lower set contains it). Read-only after
// generation; evaluators are safe to run concurrently.
class TupleCollection {
 public:
  TupleCollection() = default;

  // Generates `count` tuples. Tuple i draws from substream(rng_seed, tuples, i),
  // so the result is independent of the worker count.
  static TupleCollection generate(const Instance& inst, std::uint64_t count,
                                  std::uint64_t rng_seed, unsigned threads = 0);

  // Tops the collection up to `count` tuples under the same per-index
  // seeding, then rebuilds the indices.
  void extend(const Instance& inst, std::uint64_t count, std::uint64_t rng_seed,
              unsigned threads = 0);

  // Builds a collection from explicit tuples (tests and synthetic coverage
  // instances). `n` is the node count the estimators should scale by.
  static TupleCollection from_tuples(NodeId n, const std::vector<RRTuple>& tuples);

  std::uint64_t size() const { return roots_.size(); }
  NodeId graph_nodes() const { return n_; }

  NodeId root(std::uint64_t i) const { return roots_[i]; }
  std::span<const NodeId> nodes(std::uint64_t i) const {
    return {node_pool_.data() + node_off_[i], node_pool_.data() + node_off_[i + 1]};
  }
  std::uint32_t lower_count(std::uint64_t i) const { return lower_counts_[i]; }
  std::span<const LocalEdge> edges(std::uint64_t i) const {
    return {edge_pool_.data() + edge_off_[i], edge_pool_.data() + edge_off_[i + 1]};
  }
  std::span<const TupleSeedRef> existing_seeds(std::uint64_t i) const {
    return {seed_pool_.data() + seed_off_[i], seed_pool_.data() + seed_off_[i + 1]};
  }
  std::uint64_t frozen_seed(std::uint64_t i) const { return frozen_seeds_[i]; }
  bool hit_existing(std::uint64_t i) const {
    return lower_counts_[i] < node_off_[i + 1] - node_off_[i];
  }

  std::uint64_t total_edges_tested() const { return edges_tested_; }

  std::span<const std::uint32_t> upper_tuples(NodeId v) const {
    return {up_list_.data() + up_off_[v], up_list_.data() + up_off_[v + 1]};
  }
  std::span<const std::uint32_t> lower_tuples(NodeId v) const {
    return {lo_list_.data() + lo_off_[v], lo_list_.data() + lo_off_[v + 1]};
  }

 private:
  void append(const RRTuple& t);
  void build_indices();

  NodeId n_ = 0;
  std::vector<NodeId> roots_;
  std::vector<std::uint32_t> lower_counts_;
  std::vector<std::uint64_t> frozen_seeds_;
  std::vector<std::uint64_t> node_off_{0}, edge_off_{0}, seed_off_{0};
  std::vector<NodeId> node_pool_;
  std::vector<LocalEdge> edge_pool_;
  std::vector<TupleSeedRef> seed_pool_;
  std::uint64_t edges_tested_ = 0;
  std::vector<std::uint64_t> up_off_, lo_off_;
  std::vector<std::uint32_t> up_list_, lo_list_;
};

// Set-intersection evaluators; `seeds` must be sorted.
bool covered_upper(const TupleCollection& coll, std::uint64_t i,
                   std::span<const NodeId> seeds);
bool covered_lower(const TupleCollection& coll, std::uint64_t i,
                   std::span<const NodeId> seeds);

// Scratch for induced-instance evaluation and estimator accumulation.
struct EvalWorkspace {
  // per-local-node arrays, sized to the largest tuple seen
  std::vector<CascadeId> state;
  std::vector<std::uint8_t> is_new_seed;
  std::vector<std::uint32_t> adj_off, adj, offer_slot;
  std::vector<std::uint8_t> offered;
  std::vector<std::uint32_t> frontier, next_frontier, touched;
  std::vector<std::vector<Offer>> offers;
  std::vector<std::uint32_t> new_seed_locals;
  // per-tuple stamp array for distinct counting in estimators
  std::vector<std::uint32_t> tuple_mark;
  std::uint32_t mark_counter = 0;
};

// Exact per-tuple evaluation: builds the induced instance (the sampled
// subgraph with every probability 1, existing seeds restricted to it, the
// same activation functions) and runs the deterministic diffusion; true iff
// the root ends up new-cascade-active. Random activation draws from the
// tuple's frozen seed, so repeated evaluations agree.
bool new_cascade_activates_root(const TupleCollection& coll, std::uint64_t i,
                                const Instance& inst,
                                std::span<const NodeId> seeds, EvalWorkspace& ws);

enum class Estimator { lower_bound, exact, upper_bound };

// Coverage-style estimate of the influence objective or its bounds:
// n * (tuples hit by `seeds` under the chosen evaluator) / l. Bound kinds are
// answered from the inverted indices; the exact kind re-simulates the tuples
// whose upper set intersects `seeds` (no other tuple can evaluate to 1).
double estimate(const TupleCollection& coll, const Instance& inst,
                std::span<const NodeId> seeds, Estimator kind, EvalWorkspace& ws);

// Debug dump, one line per tuple: root, upper set, lower set, edges.
void dump_tuples(const TupleCollection& coll, const DirectedGraph& g,
                 std::ostream& out);

}  // namespace mcim
