#include "mcim/sampling.hpp"

#include <algorithm>
#include <ostream>

#include "mcim/error.hpp"
#include "mcim/parallel.hpp"

namespace mcim {

void SampleWorkspace::prepare(NodeId n) {
  if (mark.size() < n) {
    mark.resize(n, 0);
    round_added.resize(n, 0);
    local_id.resize(n, 0);
  }
  if (counter == 0xffffffffu) {
    std::fill(mark.begin(), mark.end(), 0u);
    counter = 0;
  }
  run = ++counter;
}

RRTuple sample_rr_tuple_at(const Instance& inst, NodeId root, Rng& rng,
                           SampleWorkspace& ws) {
  const DirectedGraph& g = inst.graph();
  ws.prepare(g.node_count());

  RRTuple t;
  t.frozen_activation_seed = rng();
  t.root = root;
  t.nodes.push_back(root);
  ws.mark[root] = ws.run;
  ws.round_added[root] = 0;
  ws.local_id[root] = 0;

  std::size_t frontier_begin = 0;
  std::size_t frontier_end = 1;
  std::uint32_t round = 0;
  std::uint32_t lower = 0;

  while (true) {
    if (frontier_begin == frontier_end) {  // nothing left to reach
      lower = static_cast<std::uint32_t>(t.nodes.size());
      break;
    }
    bool hit = false;
    for (std::size_t i = frontier_begin; i < frontier_end && !hit; ++i)
      hit = inst.is_existing_seed(t.nodes[i]);
    if (hit) {  // this layer joins the upper set only
      lower = static_cast<std::uint32_t>(frontier_begin);
      break;
    }

    ++round;
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      const NodeId u2 = t.nodes[i];
      for (const DirectedGraph::InEdge& ie : g.in(u2)) {
        const NodeId u1 = ie.from;
        // Skip sources already in the subgraph before this round; sources
        // discovered earlier in this same round are still tested on their
        // remaining edges into the current layer.
        if (ws.mark[u1] == ws.run && ws.round_added[u1] < round) continue;
        ++t.edges_tested;
        if (uniform01(rng) <= g.probability(ie.edge)) {
          if (ws.mark[u1] != ws.run) {
            ws.mark[u1] = ws.run;
            ws.round_added[u1] = round;
            ws.local_id[u1] = static_cast<std::uint32_t>(t.nodes.size());
            t.nodes.push_back(u1);
          }
          t.edges.push_back({ws.local_id[u1], ws.local_id[u2]});
        }
      }
    }
    frontier_begin = frontier_end;
    frontier_end = t.nodes.size();
  }

  t.lower_count = lower;
  for (std::size_t i = lower; i < t.nodes.size(); ++i) {
    for (CascadeId c : inst.seed_cascades(t.nodes[i]))
      t.existing_seeds.push_back({c, static_cast<std::uint32_t>(i)});
  }
  return t;
}

RRTuple sample_rr_tuple(const Instance& inst, Rng& rng, SampleWorkspace& ws) {
  const NodeId root =
      static_cast<NodeId>(rng() % inst.graph().node_count());
  return sample_rr_tuple_at(inst, root, rng, ws);
}

void TupleCollection::append(const RRTuple& t) {
  roots_.push_back(t.root);
  lower_counts_.push_back(t.lower_count);
  frozen_seeds_.push_back(t.frozen_activation_seed);
  node_pool_.insert(node_pool_.end(), t.nodes.begin(), t.nodes.end());
  edge_pool_.insert(edge_pool_.end(), t.edges.begin(), t.edges.end());
  seed_pool_.insert(seed_pool_.end(), t.existing_seeds.begin(), t.existing_seeds.end());
  node_off_.push_back(node_pool_.size());
  edge_off_.push_back(edge_pool_.size());
  seed_off_.push_back(seed_pool_.size());
  edges_tested_ += t.edges_tested;
}

void TupleCollection::build_indices() {
  const std::uint64_t l = size();
  up_off_.assign(static_cast<std::size_t>(n_) + 1, 0);
  lo_off_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (std::uint64_t i = 0; i < l; ++i) {
    const auto ns = nodes(i);
    const std::uint32_t lc = lower_counts_[i];
    for (std::size_t j = 0; j < ns.size(); ++j) {
      up_off_[ns[j] + 1]++;
      if (j < lc) lo_off_[ns[j] + 1]++;
    }
  }
  for (NodeId v = 0; v < n_; ++v) {
    up_off_[v + 1] += up_off_[v];
    lo_off_[v + 1] += lo_off_[v];
  }
  up_list_.resize(up_off_[n_]);
  lo_list_.resize(lo_off_[n_]);
  std::vector<std::uint64_t> ucur(up_off_.begin(), up_off_.end() - 1);
  std::vector<std::uint64_t> lcur(lo_off_.begin(), lo_off_.end() - 1);
  for (std::uint64_t i = 0; i < l; ++i) {
    const auto ns = nodes(i);
    const std::uint32_t lc = lower_counts_[i];
    for (std::size_t j = 0; j < ns.size(); ++j) {
      up_list_[ucur[ns[j]]++] = static_cast<std::uint32_t>(i);
      if (j < lc) lo_list_[lcur[ns[j]]++] = static_cast<std::uint32_t>(i);
    }
  }
}

TupleCollection TupleCollection::generate(const Instance& inst,
                                          std::uint64_t count,
                                          std::uint64_t rng_seed,
                                          unsigned threads) {
  TupleCollection coll;
  coll.n_ = inst.graph().node_count();
  coll.extend(inst, count, rng_seed, threads);
  return coll;
}

void TupleCollection::extend(const Instance& inst, std::uint64_t count,
                             std::uint64_t rng_seed, unsigned threads) {
  n_ = inst.graph().node_count();
  const std::uint64_t old = size();
  if (count > 0xffffffffull)
    throw ResourceError("tuple collection exceeds 32-bit tuple ids");
  if (count <= old) {
    if (up_off_.empty()) build_indices();
    return;
  }
  const std::uint64_t add = count - old;
  const unsigned workers = effective_threads(threads);

  std::vector<TupleCollection> parts(workers);
  parallel_chunks(add, workers,
                  [&](unsigned w, std::uint64_t begin, std::uint64_t end) {
                    SampleWorkspace ws;
                    TupleCollection& part = parts[w];
                    part.n_ = n_;
                    for (std::uint64_t i = begin; i < end; ++i) {
                      Rng rng = make_rng(
                          substream(rng_seed, Stream::tuples, old + i));
                      part.append(sample_rr_tuple(inst, rng, ws));
                    }
                  });
  for (TupleCollection& part : parts) {
    const std::uint64_t base_nodes = node_pool_.size();
    const std::uint64_t base_edges = edge_pool_.size();
    const std::uint64_t base_seeds = seed_pool_.size();
    roots_.insert(roots_.end(), part.roots_.begin(), part.roots_.end());
    lower_counts_.insert(lower_counts_.end(), part.lower_counts_.begin(),
                         part.lower_counts_.end());
    frozen_seeds_.insert(frozen_seeds_.end(), part.frozen_seeds_.begin(),
                         part.frozen_seeds_.end());
    node_pool_.insert(node_pool_.end(), part.node_pool_.begin(), part.node_pool_.end());
    edge_pool_.insert(edge_pool_.end(), part.edge_pool_.begin(), part.edge_pool_.end());
    seed_pool_.insert(seed_pool_.end(), part.seed_pool_.begin(), part.seed_pool_.end());
    for (std::size_t i = 1; i < part.node_off_.size(); ++i) {
      node_off_.push_back(base_nodes + part.node_off_[i]);
      edge_off_.push_back(base_edges + part.edge_off_[i]);
      seed_off_.push_back(base_seeds + part.seed_off_[i]);
    }
    edges_tested_ += part.edges_tested_;
    part = TupleCollection();
  }
  build_indices();
}

TupleCollection TupleCollection::from_tuples(NodeId n,
                                             const std::vector<RRTuple>& tuples) {
  TupleCollection coll;
  coll.n_ = n;
  for (const RRTuple& t : tuples) coll.append(t);
  coll.build_indices();
  return coll;
}

namespace {

bool intersects(std::span<const NodeId> tuple_nodes, std::size_t limit,
                std::span<const NodeId> sorted_seeds) {
  for (std::size_t j = 0; j < limit; ++j) {
    if (std::binary_search(sorted_seeds.begin(), sorted_seeds.end(), tuple_nodes[j]))
      return true;
  }
  return false;
}

}  // namespace

bool covered_upper(const TupleCollection& coll, std::uint64_t i,
                   std::span<const NodeId> seeds) {
  const auto ns = coll.nodes(i);
  return intersects(ns, ns.size(), seeds);
}

bool covered_lower(const TupleCollection& coll, std::uint64_t i,
                   std::span<const NodeId> seeds) {
  return intersects(coll.nodes(i), coll.lower_count(i), seeds);
}

bool new_cascade_activates_root(const TupleCollection& coll, std::uint64_t i,
                                const Instance& inst,
                                std::span<const NodeId> seeds, EvalWorkspace& ws) {
  const auto ns = coll.nodes(i);
  const std::uint32_t cnt = static_cast<std::uint32_t>(ns.size());
  const CascadeId cnew = inst.new_cascade();
  const ActivationModel& model = inst.activation();

  ws.new_seed_locals.clear();
  if (ws.state.size() < cnt) {
    ws.state.resize(cnt);
    ws.is_new_seed.resize(cnt);
    ws.adj_off.resize(cnt + 1);
    ws.offer_slot.resize(cnt);
    ws.offered.resize(cnt);
  }
  for (std::uint32_t li = 0; li < cnt; ++li) {
    const bool is_new =
        std::binary_search(seeds.begin(), seeds.end(), ns[li]);
    ws.is_new_seed[li] = is_new ? 1 : 0;
    if (is_new) ws.new_seed_locals.push_back(li);
  }
  if (ws.new_seed_locals.empty()) return false;  // no new seed inside

  const auto tuple_edges = coll.edges(i);
  const auto tuple_seeds = coll.existing_seeds(i);

  // Local forward adjacency of the sampled subgraph.
  std::fill(ws.adj_off.begin(), ws.adj_off.begin() + cnt + 1, 0u);
  for (const LocalEdge& e : tuple_edges) ws.adj_off[e.from + 1]++;
  for (std::uint32_t li = 0; li < cnt; ++li) ws.adj_off[li + 1] += ws.adj_off[li];
  if (ws.adj.size() < tuple_edges.size()) ws.adj.resize(tuple_edges.size());
  {
    std::vector<std::uint32_t>& cur = ws.touched;  // borrow as cursor scratch
    cur.assign(ws.adj_off.begin(), ws.adj_off.begin() + cnt);
    for (const LocalEdge& e : tuple_edges) ws.adj[cur[e.from]++] = e.to;
  }

  std::fill(ws.state.begin(), ws.state.begin() + cnt, kNoCascade);
  std::fill(ws.offered.begin(), ws.offered.begin() + cnt, 0);

  Rng frozen_rng(coll.frozen_seed(i));
  Rng* act_rng =
      model.kind() == ActivationKind::random_choice ? &frozen_rng : nullptr;

  ws.frontier.clear();
  ws.next_frontier.clear();

  // Step 0 inside the induced instance: existing seeds restricted to the
  // subgraph plus the new seeds, overlaps resolved by the activation function.
  {
    std::size_t a = 0;  // tuple_seeds, ascending local
    std::size_t b = 0;  // new_seed_locals, ascending
    std::vector<Offer> offers;
    while (a < tuple_seeds.size() || b < ws.new_seed_locals.size()) {
      std::uint32_t li;
      if (b >= ws.new_seed_locals.size() ||
          (a < tuple_seeds.size() && tuple_seeds[a].local <= ws.new_seed_locals[b])) {
        li = tuple_seeds[a].local;
      } else {
        li = ws.new_seed_locals[b];
      }
      offers.clear();
      while (a < tuple_seeds.size() && tuple_seeds[a].local == li) {
        offers.push_back({ns[li], tuple_seeds[a].cascade});
        ++a;
      }
      if (b < ws.new_seed_locals.size() && ws.new_seed_locals[b] == li) {
        offers.push_back({ns[li], cnew});
        ++b;
      }
      const CascadeId win = offers.size() == 1
                                ? offers[0].cascade
                                : model.resolve(ns[li], offers, act_rng);
      ws.state[li] = win;
      ws.next_frontier.push_back(li);
    }
  }

  while (!ws.next_frontier.empty()) {
    ws.frontier.swap(ws.next_frontier);
    ws.next_frontier.clear();
    ws.touched.clear();
    for (const std::uint32_t u : ws.frontier) {
      const CascadeId cu = ws.state[u];
      for (std::uint32_t s = ws.adj_off[u]; s < ws.adj_off[u + 1]; ++s) {
        const std::uint32_t v = ws.adj[s];
        if (ws.state[v] != kNoCascade) continue;
        if (!ws.offered[v]) {
          ws.offered[v] = 1;
          ws.offer_slot[v] = static_cast<std::uint32_t>(ws.touched.size());
          ws.touched.push_back(v);
          if (ws.offers.size() <= ws.offer_slot[v]) ws.offers.emplace_back();
          ws.offers[ws.offer_slot[v]].clear();
        }
        ws.offers[ws.offer_slot[v]].push_back({ns[u], cu});
      }
    }
    std::sort(ws.touched.begin(), ws.touched.end());
    for (const std::uint32_t v : ws.touched) {
      const auto& offers = ws.offers[ws.offer_slot[v]];
      ws.state[v] = offers.size() == 1 ? offers[0].cascade
                                       : model.resolve(ns[v], offers, act_rng);
      ws.offered[v] = 0;
      ws.next_frontier.push_back(v);
    }
  }
  return ws.state[0] == cnew;  // local 0 is the root
}

double estimate(const TupleCollection& coll, const Instance& inst,
                std::span<const NodeId> seeds, Estimator kind, EvalWorkspace& ws) {
  const std::uint64_t l = coll.size();
  if (l == 0) throw Error("estimate: empty tuple collection");

  if (ws.tuple_mark.size() < l) ws.tuple_mark.resize(l, 0);
  if (ws.mark_counter == 0xffffffffu) {
    std::fill(ws.tuple_mark.begin(), ws.tuple_mark.end(), 0u);
    ws.mark_counter = 0;
  }
  const std::uint32_t mark = ++ws.mark_counter;

  std::uint64_t covered = 0;
  for (const NodeId v : seeds) {
    const auto list = kind == Estimator::lower_bound ? coll.lower_tuples(v)
                                                     : coll.upper_tuples(v);
    for (const std::uint32_t t : list) {
      if (ws.tuple_mark[t] == mark) continue;
      ws.tuple_mark[t] = mark;
      if (kind == Estimator::exact) {
        if (new_cascade_activates_root(coll, t, inst, seeds, ws)) ++covered;
      } else {
        ++covered;
      }
    }
  }
  return static_cast<double>(coll.graph_nodes()) * static_cast<double>(covered) /
         static_cast<double>(l);
}

void dump_tuples(const TupleCollection& coll, const DirectedGraph& g,
                 std::ostream& out) {
  out << "# tuples=" << coll.size() << " graph_nodes=" << coll.graph_nodes() << '\n';
  for (std::uint64_t i = 0; i < coll.size(); ++i) {
    const auto ns = coll.nodes(i);
    out << i << " root=" << g.label(coll.root(i)) << " upper=";
    for (std::size_t j = 0; j < ns.size(); ++j)
      out << (j ? "," : "") << g.label(ns[j]);
    out << " lower=";
    for (std::size_t j = 0; j < coll.lower_count(i); ++j)
      out << (j ? "," : "") << g.label(ns[j]);
    out << " edges=";
    const auto es = coll.edges(i);
    for (std::size_t j = 0; j < es.size(); ++j)
      out << (j ? "," : "") << g.label(ns[es[j].from]) << '>' << g.label(ns[es[j].to]);
    out << '\n';
  }
}

}  // namespace mcim
