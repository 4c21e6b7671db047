#pragma once

#include <algorithm>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "mcim/cascades.hpp"
#include "mcim/graph.hpp"

namespace mcim::testing {

// Keeps the graph at a stable address for the instance's lifetime.
struct Fixture {
  std::unique_ptr<DirectedGraph> graph;
  std::unique_ptr<Instance> instance;

  const DirectedGraph& g() const { return *graph; }
  const Instance& inst() const { return *instance; }
  NodeId id(const std::string& label) const { return *graph->find(label); }
  std::vector<NodeId> ids(std::initializer_list<const char*> labels) const {
    std::vector<NodeId> out;
    for (const char* l : labels) out.push_back(id(l));
    std::sort(out.begin(), out.end());
    return out;
  }
};

inline Fixture make_fixture(const std::string& edge_text, bool directed,
                            CascadeConfig cfg) {
  Fixture f;
  std::istringstream in(edge_text);
  f.graph = std::make_unique<DirectedGraph>(load_edge_list(in, directed));
  f.instance = std::make_unique<Instance>(*f.graph, std::move(cfg));
  return f;
}

inline CascadeConfig config_with(
    ActivationKind kind,
    std::vector<std::pair<std::string, std::vector<NodeId>>> cascades,
    std::uint64_t activation_seed = 11) {
  CascadeConfig cfg;
  for (auto& [name, seeds] : cascades) {
    cfg.cascade_names.push_back(name);
    cfg.existing_seeds.push_back(std::move(seeds));
  }
  cfg.activation.kind = kind;
  cfg.activation.rng_seed = activation_seed;
  return cfg;
}

// a -> c, b -> c with p=1; cascade c1 seeds {a}. Ids: a=0, c=1, b=2.
inline Fixture fork(ActivationKind kind) {
  return make_fixture("a c 1\nb c 1\n", true,
                      config_with(kind, {{"c1", {0}}}));
}

// u -> v with p=0.5, no existing cascades. Ids: u=0, v=1.
inline Fixture single_edge() {
  return make_fixture("u v 0.5\n", true,
                      config_with(ActivationKind::cascade_order, {}));
}

// a -> b -> c with p=0.5 each; cascade c1 seeds {a}. Ids: a=0, b=1, c=2.
inline Fixture path3(ActivationKind kind) {
  return make_fixture("a b 0.5\nb c 0.5\n", true,
                      config_with(kind, {{"c1", {0}}}));
}

// Seven nodes, eleven edges, two existing cascades with genuine competition.
inline const char* kCompetitionEdges =
    "s x 0.8\n"
    "s y 0.5\n"
    "x z 0.6\n"
    "y z 0.7\n"
    "t y 0.9\n"
    "t w 0.5\n"
    "z w 0.5\n"
    "w q 0.8\n"
    "y q 0.4\n"
    "q z 0.5\n"
    "x w 0.3\n";

// c1 seeds {s}, c2 seeds {t}.
inline Fixture competition(ActivationKind kind, std::uint64_t order_seed = 11) {
  Fixture f;
  std::istringstream in(kCompetitionEdges);
  f.graph = std::make_unique<DirectedGraph>(load_edge_list(in, true));
  CascadeConfig cfg = config_with(
      kind, {{"c1", {*f.graph->find("s")}}, {"c2", {*f.graph->find("t")}}},
      order_seed);
  f.instance = std::make_unique<Instance>(*f.graph, std::move(cfg));
  return f;
}

// Same shape with no existing cascades.
inline Fixture no_competition() {
  return make_fixture(kCompetitionEdges, true,
                      config_with(ActivationKind::cascade_order, {}));
}

}  // namespace mcim::testing
