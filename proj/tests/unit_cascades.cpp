#include <doctest.h>

#include <algorithm>
#include <queue>
#include <set>

#include "mcim/diffusion.hpp"
#include "mcim/error.hpp"
#include "support/fixtures.hpp"
#include "support/reference.hpp"

using namespace mcim;
using namespace mcim::testing;

TEST_SUITE("cascades") {

TEST_CASE("single offer wins under every activation kind") {
  for (ActivationKind kind :
       {ActivationKind::cascade_order, ActivationKind::neighbor_order,
        ActivationKind::random_choice, ActivationKind::dominating,
        ActivationKind::dominated}) {
    Fixture f = fork(kind);
    const CascadeId cnew = f.inst().new_cascade();
    Rng rng = make_rng(1);
    const Offer offer{f.id("c"), cnew};
    CHECK(f.inst().activation().resolve(f.id("c"), {&offer, 1}, &rng) == cnew);
  }
}

TEST_CASE("dominated removes the new cascade from real conflicts") {
  Fixture f = fork(ActivationKind::dominated);
  const CascadeId cnew = f.inst().new_cascade();
  const Offer offers[] = {{f.id("a"), 0}, {f.id("b"), cnew}};
  CHECK(f.inst().activation().resolve(f.id("c"), offers, nullptr) == 0);
}

TEST_CASE("dominating grabs every conflict it appears in") {
  Fixture f = fork(ActivationKind::dominating);
  const CascadeId cnew = f.inst().new_cascade();
  const Offer offers[] = {{f.id("a"), 0}, {f.id("b"), cnew}};
  CHECK(f.inst().activation().resolve(f.id("c"), offers, nullptr) == cnew);
}

TEST_CASE("explicit table resolves configured offer sets and rejects misses") {
  CascadeConfig cfg = config_with(ActivationKind::explicit_table,
                                  {{"c1", {0}}, {"c2", {1}}});
  // at v1: {c1, c2} -> c1; anywhere: {c1, c2, c_new} -> c2
  cfg.activation.table.push_back({std::optional<NodeId>(2), {0, 1}, 0});
  cfg.activation.table.push_back({std::nullopt, {0, 1, 2}, 1});
  Fixture f = make_fixture("v0 v2\nv1 v2\n", true, std::move(cfg));

  const Offer both[] = {{0, 0}, {1, 1}};
  CHECK(f.inst().activation().resolve(2, both, nullptr) == 0);
  const Offer all3[] = {{0, 0}, {1, 1}, {2, 2}};
  CHECK(f.inst().activation().resolve(2, all3, nullptr) == 1);
  const Offer miss[] = {{0, 1}, {1, 2}};
  CHECK_THROWS_AS(f.inst().activation().resolve(2, miss, nullptr), ConfigError);
}

TEST_CASE("explicit table validates the winner is offered") {
  CascadeConfig cfg = config_with(ActivationKind::explicit_table, {{"c1", {0}}});
  cfg.activation.table.push_back({std::nullopt, {0}, 0});  // too small
  CHECK_THROWS_AS(make_fixture("a b\n", true, cfg), ConfigError);
  cfg.activation.table.clear();
  cfg.activation.table.push_back({std::nullopt, {0, 1}, 5});  // unknown winner
  CHECK_THROWS_AS(make_fixture("a b\n", true, cfg), ConfigError);
}

TEST_CASE("resolution always returns an offered cascade") {
  for (ActivationKind kind :
       {ActivationKind::cascade_order, ActivationKind::neighbor_order,
        ActivationKind::random_choice, ActivationKind::dominating,
        ActivationKind::dominated}) {
    Fixture f = competition(kind, 99);
    Rng rng = make_rng(5);
    Rng offer_rng = make_rng(17);
    for (int trial = 0; trial < 200; ++trial) {
      const NodeId node = f.id("z");
      // offers arrive from z's in-neighbors with arbitrary cascade states
      std::vector<Offer> offers;
      std::set<CascadeId> offered;
      for (const auto& ie : f.g().in(node)) {
        if (offer_rng() % 2 == 0) continue;
        const CascadeId c = static_cast<CascadeId>(offer_rng() % 3);
        offers.push_back({ie.from, c});
        offered.insert(c);
      }
      if (offers.empty()) continue;
      const CascadeId win = f.inst().activation().resolve(node, offers, &rng);
      CHECK(offered.count(win) == 1);
    }
  }
}

TEST_CASE("neighbor order falls back to cascade order for seed-time self-offers") {
  Fixture f = competition(ActivationKind::neighbor_order, 7);
  Fixture ca = competition(ActivationKind::cascade_order, 7);
  const NodeId node = f.id("z");
  const Offer self_offers[] = {{node, 0}, {node, 1}};
  // both kinds share the per-node cascade ranks generated from the same seed
  CHECK(f.inst().activation().resolve(node, self_offers, nullptr) ==
        ca.inst().activation().resolve(node, self_offers, nullptr));
}

TEST_CASE("diffusion: dominating fork flips the contested node") {
  Fixture f = fork(ActivationKind::dominating);
  const std::vector<NodeId> seeds{f.id("b")};
  const DiffusionResult r = diffuse(f.inst(), seeds, 42);
  CHECK(r.new_active == 2);  // b and c
  CHECK(r.state[f.id("c")] == f.inst().new_cascade());
  CHECK(r.state[f.id("a")] == 0);
}

TEST_CASE("diffusion: dominated fork loses the contested node") {
  Fixture f = fork(ActivationKind::dominated);
  const std::vector<NodeId> seeds{f.id("b")};
  const DiffusionResult r = diffuse(f.inst(), seeds, 42);
  CHECK(r.new_active == 1);
  CHECK(r.state[f.id("c")] == 0);  // c1 keeps it
}

TEST_CASE("diffusion: single cascade on a sure path reaches everyone") {
  Fixture f = make_fixture("s x 1\nx y 1\n", true,
                           config_with(ActivationKind::cascade_order, {}));
  const std::vector<NodeId> seeds{f.id("s")};
  const DiffusionResult r = diffuse(f.inst(), seeds, 1);
  CHECK(r.new_active == 3);
  CHECK(r.time[f.id("y")] == 2);
}

TEST_CASE("seed overlap resolves by the activation function") {
  // a is both an existing seed and a new seed
  Fixture dom = fork(ActivationKind::dominating);
  std::vector<NodeId> seeds{dom.id("a")};
  CHECK(diffuse(dom.inst(), seeds, 3).state[dom.id("a")] == dom.inst().new_cascade());

  Fixture sub = fork(ActivationKind::dominated);
  seeds = {sub.id("a")};
  CHECK(diffuse(sub.inst(), seeds, 3).state[sub.id("a")] == 0);
}

TEST_CASE("states are write-once") {
  Fixture f = competition(ActivationKind::cascade_order);
  std::vector<TraceEvent> trace;
  const std::vector<NodeId> seeds = f.ids({"x", "q"});
  for (std::uint64_t s = 0; s < 50; ++s) {
    trace.clear();
    diffuse(f.inst(), seeds, s, &trace);
    std::set<NodeId> seen;
    for (const TraceEvent& e : trace) CHECK(seen.insert(e.node).second);
  }
}

TEST_CASE("activation time equals BFS distance when every edge fires") {
  Fixture f = make_fixture(
      "a b 1\nb c 1\na d 1\nd e 1\ne c 1\nc f 1\n", true,
      config_with(ActivationKind::cascade_order, {}));
  const std::vector<NodeId> seeds{f.id("a")};
  const DiffusionResult r = diffuse(f.inst(), seeds, 0);

  // reference BFS distances from a
  std::vector<int> dist(f.g().node_count(), -1);
  std::queue<NodeId> q;
  dist[f.id("a")] = 0;
  q.push(f.id("a"));
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop();
    for (NodeId v : f.g().out(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  for (NodeId v = 0; v < f.g().node_count(); ++v) CHECK(r.time[v] == dist[v]);
}

TEST_CASE("estimate_influence: deterministic instance has zero spread") {
  Fixture f = fork(ActivationKind::dominating);
  const std::vector<NodeId> seeds{f.id("b")};
  const InfluenceEstimate est = estimate_influence(f.inst(), seeds, 64, 5);
  CHECK(est.mean == 2.0);
  CHECK(est.std_error == 0.0);
  CHECK(est.not_active_mean == 1.0);
}

TEST_CASE("estimate_influence: single edge converges to the exact value") {
  Fixture f = single_edge();
  const std::vector<NodeId> seeds{f.id("u")};
  const InfluenceEstimate est = estimate_influence(f.inst(), seeds, 100000, 17);
  CHECK(std::abs(est.mean - 1.5) <= 3 * est.std_error);
}

TEST_CASE("estimate_influence: empty seeds and zero trials") {
  Fixture f = fork(ActivationKind::cascade_order);
  const InfluenceEstimate est = estimate_influence(f.inst(), {}, 16, 3);
  CHECK(est.mean == 0.0);
  CHECK(est.not_active_mean == 3.0);
  CHECK_THROWS_AS(estimate_influence(f.inst(), {}, 0, 3), ConfigError);
}

TEST_CASE("single-cascade degeneration matches a reference IC simulator") {
  Fixture f = no_competition();
  const std::vector<NodeId> seeds = f.ids({"s", "t"});
  const InfluenceEstimate ours = estimate_influence(f.inst(), seeds, 60000, 23);
  const ReferenceIcEstimate ic = reference_ic_influence(
      f.g(), {seeds.begin(), seeds.end()}, 60000, 29);
  const double gap = std::abs(ours.mean - ic.mean);
  const double se = std::sqrt(ours.std_error * ours.std_error +
                              ic.std_error * ic.std_error);
  CHECK(gap <= 3 * se);
}

TEST_CASE("trials are reproducible and worker-count independent") {
  Fixture f = competition(ActivationKind::random_choice);
  const std::vector<NodeId> seeds = f.ids({"x"});
  const InfluenceEstimate a = estimate_influence(f.inst(), seeds, 5000, 7, 1);
  const InfluenceEstimate b = estimate_influence(f.inst(), seeds, 5000, 7, 4);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("config validation rejects bad shapes") {
  CascadeConfig dup = config_with(ActivationKind::cascade_order,
                                  {{"c1", {0}}, {"c1", {1}}});
  CHECK_THROWS_AS(make_fixture("a b\n", true, dup), ConfigError);

  CascadeConfig out_of_range = config_with(ActivationKind::cascade_order,
                                           {{"c1", {99}}});
  CHECK_THROWS_AS(make_fixture("a b\n", true, out_of_range), ConfigError);

  CascadeConfig reserved = config_with(ActivationKind::cascade_order, {{"c_new", {0}}});
  CHECK_THROWS_AS(make_fixture("a b\n", true, reserved), ConfigError);
}

}  // TEST_SUITE
