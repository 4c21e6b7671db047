#include "mcim/diffusion.hpp"

#include <algorithm>
#include <cmath>

#include "mcim/error.hpp"
#include "mcim/parallel.hpp"

namespace mcim {

void DiffusionWorkspace::prepare(NodeId n) {
  if (state.size() < n) {
    state.resize(n, kNoCascade);
    time.resize(n, -1);
    state_mark.resize(n, 0);
    offer_mark.resize(n, 0);
    offer_slot.resize(n, 0);
  }
  if (counter > 0xfffffff0u) {  // stamp wrap: reset once in ~4e9 runs
    std::fill(state_mark.begin(), state_mark.end(), 0u);
    std::fill(offer_mark.begin(), offer_mark.end(), 0u);
    counter = 0;
  }
  run_mark = next_mark();
  frontier.clear();
  next_frontier.clear();
  touched.clear();
}

namespace {

// One synchronous run. EdgeOk(edge_id) decides whether an attempt along that
// edge succeeds; it is invoked at most once per edge and only for attempts on
// inactive targets. act_rng feeds random activation (may be null for
// deterministic kinds).
template <typename EdgeOk>
std::uint64_t run_rounds(const Instance& inst, std::span<const NodeId> new_seeds,
                         EdgeOk&& edge_ok, Rng* act_rng,
                         std::vector<TraceEvent>* trace, DiffusionWorkspace& ws) {
  const DirectedGraph& g = inst.graph();
  const CascadeId cnew = inst.new_cascade();
  const ActivationModel& model = inst.activation();
  ws.prepare(g.node_count());

  std::uint64_t new_active = 0;
  auto activate = [&](NodeId v, CascadeId c, std::int32_t t) {
    ws.state[v] = c;
    ws.state_mark[v] = ws.run_mark;
    ws.time[v] = t;
    if (c == cnew) ++new_active;
    if (trace) trace->push_back({v, c, t});
    ws.next_frontier.push_back(v);
  };

  // Step 0: seed states, resolving overlaps per the activation function. The
  // seeded-node walk merges the (sorted) existing-seed nodes with new_seeds.
  {
    const auto seeded = inst.seeded_nodes();
    std::size_t i = 0, j = 0;
    std::vector<Offer> offers;
    while (i < seeded.size() || j < new_seeds.size()) {
      NodeId v;
      bool from_existing = false, from_new = false;
      if (j >= new_seeds.size() || (i < seeded.size() && seeded[i] <= new_seeds[j])) {
        v = seeded[i];
        from_existing = true;
        if (j < new_seeds.size() && new_seeds[j] == v) from_new = true;
      } else {
        v = new_seeds[j];
        from_new = true;
      }
      if (from_existing) ++i;
      if (from_new) ++j;

      const auto cascades = inst.seed_cascades(v);
      if (!from_new && cascades.size() == 1) {
        activate(v, cascades[0], 0);
        continue;
      }
      if (from_new && cascades.empty()) {
        activate(v, cnew, 0);
        continue;
      }
      offers.clear();
      for (CascadeId c : cascades) offers.push_back({v, c});
      if (from_new) offers.push_back({v, cnew});
      activate(v, model.resolve(v, offers, act_rng), 0);
    }
  }

  std::int32_t t = 0;
  while (!ws.next_frontier.empty()) {
    ++t;
    ws.frontier.swap(ws.next_frontier);
    ws.next_frontier.clear();
    ws.touched.clear();
    const std::uint32_t round_mark = ws.next_mark();

    for (NodeId u : ws.frontier) {
      const CascadeId cu = ws.state[u];
      const auto targets = g.out(u);
      const EdgeId base = g.out_begin(u);
      for (std::size_t s = 0; s < targets.size(); ++s) {
        const NodeId v = targets[s];
        if (ws.active(v)) continue;
        if (!edge_ok(static_cast<EdgeId>(base + s))) continue;
        if (ws.offer_mark[v] != round_mark) {
          ws.offer_mark[v] = round_mark;
          ws.offer_slot[v] = static_cast<std::uint32_t>(ws.touched.size());
          ws.touched.push_back(v);
          if (ws.offers.size() <= ws.offer_slot[v]) ws.offers.emplace_back();
          ws.offers[ws.offer_slot[v]].clear();
        }
        ws.offers[ws.offer_slot[v]].push_back({u, cu});
      }
    }

    std::sort(ws.touched.begin(), ws.touched.end());
    for (NodeId v : ws.touched) {
      const auto& offers = ws.offers[ws.offer_slot[v]];
      activate(v, model.resolve(v, offers, act_rng), t);
    }
  }
  return new_active;
}

}  // namespace

DiffusionResult diffuse(const Instance& inst, std::span<const NodeId> new_seeds,
                        std::uint64_t rng_seed, std::vector<TraceEvent>* trace) {
  inst.check_new_seeds(new_seeds);
  DiffusionWorkspace ws;
  Rng rng = make_rng(rng_seed);
  const DirectedGraph& g = inst.graph();
  auto coin = [&](EdgeId e) { return uniform01(rng) <= g.probability(e); };
  const std::uint64_t count = run_rounds(inst, new_seeds, coin, &rng, trace, ws);

  DiffusionResult out;
  const NodeId n = g.node_count();
  out.state.assign(n, kNoCascade);
  out.time.assign(n, -1);
  out.new_active = count;
  for (NodeId v = 0; v < n; ++v) {
    if (ws.active(v)) {
      out.state[v] = ws.state[v];
      out.time[v] = ws.time[v];
    }
  }
  return out;
}

std::uint64_t diffuse_on_realization(const Instance& inst,
                                     std::span<const NodeId> new_seeds,
                                     std::uint32_t live_mask,
                                     DiffusionWorkspace& ws) {
  auto live = [live_mask](EdgeId e) { return (live_mask >> e) & 1u; };
  return run_rounds(inst, new_seeds, live, nullptr, nullptr, ws);
}

InfluenceEstimate estimate_influence(const Instance& inst,
                                     std::span<const NodeId> new_seeds,
                                     std::uint64_t trials,
                                     std::uint64_t rng_seed, unsigned threads) {
  if (trials == 0) throw ConfigError("estimate_influence: trials must be >= 1");
  inst.check_new_seeds(new_seeds);

  const DirectedGraph& g = inst.graph();
  std::vector<std::uint32_t> counts(trials);
  parallel_chunks(trials, effective_threads(threads),
                  [&](unsigned, std::uint64_t begin, std::uint64_t end) {
                    DiffusionWorkspace ws;
                    for (std::uint64_t i = begin; i < end; ++i) {
                      Rng rng = make_rng(substream(rng_seed, Stream::trials, i));
                      auto coin = [&](EdgeId e) {
                        return uniform01(rng) <= g.probability(e);
                      };
                      counts[i] = static_cast<std::uint32_t>(
                          run_rounds(inst, new_seeds, coin, &rng, nullptr, ws));
                    }
                  });

  InfluenceEstimate est;
  est.trials = trials;
  double sum = 0;
  for (std::uint32_t c : counts) sum += c;
  est.mean = sum / static_cast<double>(trials);
  if (trials > 1) {
    double ss = 0;
    for (std::uint32_t c : counts) {
      const double d = c - est.mean;
      ss += d * d;
    }
    est.std_error = std::sqrt(ss / static_cast<double>(trials - 1)) /
                    std::sqrt(static_cast<double>(trials));
  }
  est.not_active_mean = static_cast<double>(g.node_count()) - est.mean;
  return est;
}

}  // namespace mcim
