#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mcim {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

// Immutable weighted digraph. Nodes are dense indices 0..n-1; the original
// labels are kept for reporting. Each directed edge carries a propagation
// probability in (0,1]. Both adjacency directions are stored; in-adjacency
// entries reference the shared per-edge probability array, so the two
// directions can never disagree.
//
// Construction is single-threaded; a built graph is safe for unrestricted
// concurrent reads.
class DirectedGraph {
 public:
  struct InEdge {
    NodeId from;
    EdgeId edge;  // index into the shared edge arrays
  };

  NodeId node_count() const { return n_; }
  std::uint64_t edge_count() const { return out_dst_.size(); }

  // Out-neighbors of u; the edge id of out(u)[i] is out_begin(u) + i.
  std::span<const NodeId> out(NodeId u) const {
    return {out_dst_.data() + out_off_[u], out_dst_.data() + out_off_[u + 1]};
  }
  EdgeId out_begin(NodeId u) const { return out_off_[u]; }

  std::span<const InEdge> in(NodeId v) const {
    return {in_.data() + in_off_[v], in_.data() + in_off_[v + 1]};
  }

  double probability(EdgeId e) const { return prob_[e]; }
  bool has_explicit_probability(EdgeId e) const { return explicit_prob_[e] != 0; }

  NodeId out_degree(NodeId u) const { return out_off_[u + 1] - out_off_[u]; }
  NodeId in_degree(NodeId v) const { return in_off_[v + 1] - in_off_[v]; }

  const std::string& label(NodeId v) const { return labels_[v]; }
  std::optional<NodeId> find(std::string_view label) const;

  // Same structure with every edge probability replaced; `prob` is indexed
  // by edge id and must already be validated to lie in (0,1].
  DirectedGraph with_probabilities(std::vector<double> prob) const;

 private:
  friend class GraphBuilder;

  NodeId n_ = 0;
  std::vector<EdgeId> out_off_;      // n+1
  std::vector<NodeId> out_dst_;      // m, edge id == slot
  std::vector<double> prob_;         // m
  std::vector<std::uint8_t> explicit_prob_;  // m, 1 if the input supplied p
  std::vector<EdgeId> in_off_;       // n+1
  std::vector<InEdge> in_;           // m
  std::vector<std::string> labels_;  // n
  std::unordered_map<std::string, NodeId> label_index_;
};

// Accumulates edges (deduplicating on the ordered pair, keep-first policy;
// self-loops are dropped) and produces a DirectedGraph. Labels are interned
// in first-appearance order.
class GraphBuilder {
 public:
  explicit GraphBuilder(bool directed = true) : directed_(directed) {}

  NodeId intern(const std::string& label);

  // `p`, when present, must lie in (0,1]; `where` is used in error messages
  // (e.g. "line 3").
  void add_edge(const std::string& u, const std::string& v,
                std::optional<double> p, const std::string& where = {});
  void add_edge(NodeId u, NodeId v, std::optional<double> p);

  std::uint64_t pending_edges() const { return src_.size(); }

  // Throws ConfigError if no edge was added.
  DirectedGraph build();

 private:
  void push(NodeId u, NodeId v, std::optional<double> p);

  bool directed_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> label_index_;
  std::vector<NodeId> src_, dst_;
  std::vector<double> prob_;
  std::vector<std::uint8_t> explicit_;
  std::unordered_map<std::uint64_t, std::uint8_t> seen_;
};

// Text edge lists: one edge per line, "u v" or "u v p", whitespace-separated;
// lines starting with '#' and blank lines are ignored. Node labels are
// arbitrary tokens and get remapped to dense indices. With directed=false
// every listed edge is expanded to both directions.
DirectedGraph load_edge_list(std::istream& in, bool directed);
DirectedGraph load_edge_list_file(const std::string& path, bool directed);

// Writes "label_u label_v p" lines in edge-id order with round-trippable
// probability formatting.
void save_edge_list(const DirectedGraph& g, std::ostream& out);

}  // namespace mcim
