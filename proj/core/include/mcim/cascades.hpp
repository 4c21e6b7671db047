#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcim/graph.hpp"
#include "mcim/rng.hpp"

namespace mcim {

using CascadeId = std::uint32_t;
inline constexpr CascadeId kNoCascade = 0xffffffffu;

enum class ActivationKind {
  cascade_order,   // per-node total order over all cascades
  neighbor_order,  // per-node total order over in-neighbors
  random_choice,   // uniform over the distinct offered cascades
  dominating,      // the new cascade wins whenever it is offered
  dominated,       // the new cascade loses whenever competition appears
  explicit_table,  // per offer-set winner table
};

const char* activation_kind_name(ActivationKind k);
std::optional<ActivationKind> activation_kind_from_name(std::string_view name);

// One offer-set rule: at `node` (or at every node when unset), when exactly
// the cascades in `offered` arrive together, `winner` activates the node.
struct ExplicitRule {
  std::optional<NodeId> node;
  std::vector<CascadeId> offered;  // sorted, distinct, size >= 2
  CascadeId winner;                // must be a member of `offered`
};

struct ActivationSpec {
  ActivationKind kind = ActivationKind::cascade_order;
  std::uint64_t rng_seed = 0;  // drives order generation and random_choice
  std::vector<ExplicitRule> table;
};

// The cascades of an instance: existing cascades with fixed seed sets, the
// new cascade being optimized, a candidate set, and the activation rule.
// Existing cascades are indexed 0..L-1; the new cascade has index L.
struct CascadeConfig {
  std::vector<std::string> cascade_names;          // size L
  std::vector<std::vector<NodeId>> existing_seeds; // size L, each sorted+unique
  std::string new_cascade_name = "c_new";
  bool candidates_all = true;
  std::vector<NodeId> candidates;  // sorted+unique, used when !candidates_all
  ActivationSpec activation;

  CascadeId new_cascade() const {
    return static_cast<CascadeId>(existing_seeds.size());
  }
  std::size_t cascade_count() const { return existing_seeds.size() + 1; }
};

// One arriving cascade at a node: `from` is the offering in-neighbor, or the
// node itself for seed-time resolution.
struct Offer {
  NodeId from;
  CascadeId cascade;
};

// Materialized activation functions for one (graph, config) pair. Orders are
// generated once from the spec's rng_seed, so they do not depend on how many
// trials or samples consume them. Immutable and shareable across workers.
class ActivationModel {
 public:
  static ActivationModel build(const DirectedGraph& g, const CascadeConfig& cfg);

  // Returns the winning cascade for a nonempty offer set at `node`. The
  // result is always one of the offered cascades. `rng` is consulted only by
  // random_choice, and only when at least two distinct cascades arrive.
  CascadeId resolve(NodeId node, std::span<const Offer> offers, Rng* rng) const;

  ActivationKind kind() const { return kind_; }

 private:
  CascadeId pick_by_cascade_rank(NodeId node, std::span<const CascadeId> distinct) const;

  ActivationKind kind_ = ActivationKind::cascade_order;
  CascadeId new_cascade_ = 0;
  std::uint32_t cascade_count_ = 1;
  const DirectedGraph* graph_ = nullptr;
  std::vector<std::uint32_t> cascade_rank_;   // n * cascade_count, larger wins
  std::vector<std::uint32_t> neighbor_rank_;  // aligned with in-adjacency slots
  std::map<std::pair<NodeId, std::vector<CascadeId>>, CascadeId> table_;
  std::map<std::vector<CascadeId>, CascadeId> table_any_;
};

// Validated, ready-to-run problem instance: graph + cascade config plus the
// derived structures every algorithm needs (activation model, existing-seed
// lookup, resolved candidate set). Read-only after construction; shared
// freely across threads. Holds references to the graph, which must outlive it.
class Instance {
 public:
  Instance(const DirectedGraph& g, CascadeConfig cfg);

  const DirectedGraph& graph() const { return *g_; }
  const CascadeConfig& config() const { return cfg_; }
  const ActivationModel& activation() const { return model_; }

  CascadeId new_cascade() const { return cfg_.new_cascade(); }
  std::uint32_t cascade_count() const {
    return static_cast<std::uint32_t>(cfg_.cascade_count());
  }

  bool is_existing_seed(NodeId v) const {
    return (seed_bits_[v >> 6] >> (v & 63)) & 1u;
  }
  // Existing cascades that seed v (ascending cascade index).
  std::span<const CascadeId> seed_cascades(NodeId v) const;
  // All nodes seeded by at least one existing cascade, ascending.
  std::span<const NodeId> seeded_nodes() const { return seed_nodes_; }

  std::span<const NodeId> candidates() const { return candidates_; }

  // Validates a proposed new-cascade seed set: sorted, unique, within the
  // candidate set. Throws ConfigError otherwise.
  void check_new_seeds(std::span<const NodeId> seeds) const;

 private:
  const DirectedGraph* g_;
  CascadeConfig cfg_;
  ActivationModel model_;
  std::vector<std::uint64_t> seed_bits_;
  std::vector<NodeId> seed_nodes_;          // sorted nodes with >=1 cascade
  std::vector<std::uint32_t> seed_off_;     // |seed_nodes_|+1
  std::vector<CascadeId> seed_cascades_;    // CSR payload
  std::vector<NodeId> candidates_;          // resolved, sorted
};

}  // namespace mcim
