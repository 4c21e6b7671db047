#include "mcim/cascades.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "mcim/error.hpp"

namespace mcim {

const char* activation_kind_name(ActivationKind k) {
  switch (k) {
    case ActivationKind::cascade_order: return "cascade_order";
    case ActivationKind::neighbor_order: return "neighbor_order";
    case ActivationKind::random_choice: return "random";
    case ActivationKind::dominating: return "dominating";
    case ActivationKind::dominated: return "dominated";
    case ActivationKind::explicit_table: return "explicit_table";
  }
  return "?";
}

std::optional<ActivationKind> activation_kind_from_name(std::string_view name) {
  if (name == "cascade_order") return ActivationKind::cascade_order;
  if (name == "neighbor_order") return ActivationKind::neighbor_order;
  if (name == "random") return ActivationKind::random_choice;
  if (name == "dominating") return ActivationKind::dominating;
  if (name == "dominated") return ActivationKind::dominated;
  if (name == "explicit_table") return ActivationKind::explicit_table;
  return std::nullopt;
}

ActivationModel ActivationModel::build(const DirectedGraph& g,
                                       const CascadeConfig& cfg) {
  ActivationModel m;
  m.kind_ = cfg.activation.kind;
  m.new_cascade_ = cfg.new_cascade();
  m.cascade_count_ = static_cast<std::uint32_t>(cfg.cascade_count());
  m.graph_ = &g;

  const NodeId n = g.node_count();
  const std::uint32_t C = m.cascade_count_;

  const bool needs_cascade_rank = m.kind_ == ActivationKind::cascade_order ||
                                  m.kind_ == ActivationKind::dominating ||
                                  m.kind_ == ActivationKind::dominated ||
                                  m.kind_ == ActivationKind::neighbor_order;
  if (needs_cascade_rank) {
    m.cascade_rank_.resize(static_cast<std::size_t>(n) * C);
    std::vector<CascadeId> perm(C);
    for (NodeId v = 0; v < n; ++v) {
      Rng rng = make_rng(substream(cfg.activation.rng_seed, Stream::activation_orders, v));
      std::iota(perm.begin(), perm.end(), 0u);
      for (std::uint32_t i = C; i > 1; --i)
        std::swap(perm[i - 1], perm[rng() % i]);
      for (std::uint32_t r = 0; r < C; ++r)
        m.cascade_rank_[static_cast<std::size_t>(v) * C + perm[r]] = r;
    }
  }
  if (m.kind_ == ActivationKind::neighbor_order) {
    m.neighbor_rank_.resize(g.edge_count());
    std::vector<std::uint32_t> perm;
    for (NodeId v = 0; v < n; ++v) {
      const auto in = g.in(v);
      perm.resize(in.size());
      std::iota(perm.begin(), perm.end(), 0u);
      Rng rng = make_rng(substream(cfg.activation.rng_seed, Stream::activation_orders,
                                   static_cast<std::uint64_t>(v) | (1ull << 40)));
      for (std::size_t i = perm.size(); i > 1; --i)
        std::swap(perm[i - 1], perm[rng() % i]);
      const std::size_t base = in.data() - g.in(0).data();
      for (std::size_t i = 0; i < in.size(); ++i)
        m.neighbor_rank_[base + i] = perm[i];
    }
  }
  if (m.kind_ == ActivationKind::explicit_table) {
    for (const ExplicitRule& rule : cfg.activation.table) {
      if (rule.offered.size() < 2)
        throw ConfigError("explicit activation rule needs at least two cascades");
      if (!std::is_sorted(rule.offered.begin(), rule.offered.end()) ||
          std::adjacent_find(rule.offered.begin(), rule.offered.end()) != rule.offered.end())
        throw ConfigError("explicit activation rule offers must be sorted and distinct");
      if (!std::binary_search(rule.offered.begin(), rule.offered.end(), rule.winner))
        throw ConfigError("explicit activation rule winner not among offered cascades");
      for (CascadeId c : rule.offered)
        if (c >= C) throw ConfigError("explicit activation rule names unknown cascade");
      if (rule.node) {
        if (*rule.node >= n) throw ConfigError("explicit activation rule names unknown node");
        m.table_[{*rule.node, rule.offered}] = rule.winner;
      } else {
        m.table_any_[rule.offered] = rule.winner;
      }
    }
  }
  return m;
}

CascadeId ActivationModel::pick_by_cascade_rank(
    NodeId node, std::span<const CascadeId> distinct) const {
  const std::size_t base = static_cast<std::size_t>(node) * cascade_count_;
  CascadeId best = distinct[0];
  std::uint32_t best_rank = cascade_rank_[base + best];
  for (std::size_t i = 1; i < distinct.size(); ++i) {
    const std::uint32_t r = cascade_rank_[base + distinct[i]];
    if (r > best_rank) {
      best_rank = r;
      best = distinct[i];
    }
  }
  return best;
}

CascadeId ActivationModel::resolve(NodeId node, std::span<const Offer> offers,
                                   Rng* rng) const {
  if (offers.empty()) throw Error("resolve_activation: empty offer set");
  if (offers.size() == 1) return offers[0].cascade;  // sole candidate wins

  // Distinct offered cascades, ascending.
  CascadeId stack[16];
  std::vector<CascadeId> heap;
  std::span<CascadeId> distinct;
  {
    std::size_t cnt = 0;
    const bool small = offers.size() <= 16;
    if (!small) heap.reserve(offers.size());
    for (const Offer& o : offers) {
      if (small) stack[cnt++] = o.cascade; else heap.push_back(o.cascade);
    }
    CascadeId* data = small ? stack : heap.data();
    std::size_t len = small ? cnt : heap.size();
    std::sort(data, data + len);
    len = std::unique(data, data + len) - data;
    distinct = {data, len};
  }

  if (distinct.size() == 1) return distinct[0];

  switch (kind_) {
    case ActivationKind::cascade_order:
      return pick_by_cascade_rank(node, distinct);
    case ActivationKind::neighbor_order: {
      // Seed-time offers carry the node itself; fall back to the node's
      // cascade order since neighbor ranks cannot discriminate there.
      bool self_only = true;
      for (const Offer& o : offers) self_only = self_only && o.from == node;
      if (self_only) return pick_by_cascade_rank(node, distinct);
      const auto in = graph_->in(node);
      const std::size_t base = in.data() - graph_->in(0).data();
      std::uint32_t best_rank = 0;
      CascadeId best = kNoCascade;
      for (const Offer& o : offers) {
        // In-lists are sorted by source, so locate the slot by binary search.
        std::size_t lo = 0, hi = in.size();
        while (lo < hi) {
          const std::size_t mid = (lo + hi) / 2;
          if (in[mid].from < o.from) lo = mid + 1; else hi = mid;
        }
        if (lo >= in.size() || in[lo].from != o.from)
          throw Error("resolve_activation: offer from a non-in-neighbor");
        const std::uint32_t r = neighbor_rank_[base + lo];
        if (best == kNoCascade || r > best_rank) {
          best_rank = r;
          best = o.cascade;
        }
      }
      return best;
    }
    case ActivationKind::random_choice: {
      if (!rng) throw Error("resolve_activation: random activation without rng");
      return distinct[(*rng)() % distinct.size()];
    }
    case ActivationKind::dominating: {
      if (std::binary_search(distinct.begin(), distinct.end(), new_cascade_))
        return new_cascade_;
      return pick_by_cascade_rank(node, distinct);
    }
    case ActivationKind::dominated: {
      // At least two distinct cascades here, so c_new never wins a conflict.
      if (distinct.back() == new_cascade_) distinct = distinct.first(distinct.size() - 1);
      if (distinct.size() == 1) return distinct[0];
      return pick_by_cascade_rank(node, distinct);
    }
    case ActivationKind::explicit_table: {
      std::vector<CascadeId> key(distinct.begin(), distinct.end());
      if (auto it = table_.find({node, key}); it != table_.end()) return it->second;
      if (auto it = table_any_.find(key); it != table_any_.end()) return it->second;
      throw ConfigError("explicit activation table: no rule for the offer set at node " +
                        std::to_string(node));
    }
  }
  throw Error("resolve_activation: unreachable");
}

Instance::Instance(const DirectedGraph& g, CascadeConfig cfg)
    : g_(&g), cfg_(std::move(cfg)) {
  const NodeId n = g.node_count();

  std::set<std::string> names(cfg_.cascade_names.begin(), cfg_.cascade_names.end());
  if (cfg_.cascade_names.size() != cfg_.existing_seeds.size())
    throw ConfigError("cascade names and seed sets disagree in count");
  names.insert(cfg_.new_cascade_name);
  if (names.size() != cfg_.cascade_count())
    throw ConfigError("cascade identifiers must be distinct");

  for (auto& seeds : cfg_.existing_seeds) {
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    for (NodeId v : seeds)
      if (v >= n) throw ConfigError("cascade seed outside the graph");
  }

  if (cfg_.candidates_all) {
    candidates_.resize(n);
    std::iota(candidates_.begin(), candidates_.end(), 0u);
  } else {
    candidates_ = cfg_.candidates;
    std::sort(candidates_.begin(), candidates_.end());
    candidates_.erase(std::unique(candidates_.begin(), candidates_.end()),
                      candidates_.end());
    for (NodeId v : candidates_)
      if (v >= n) throw ConfigError("candidate outside the graph");
    if (candidates_.empty()) throw ConfigError("candidate set is empty");
  }

  // Per-node CSR of seeding cascades, plus a membership bitmap.
  seed_bits_.assign((static_cast<std::size_t>(n) + 63) / 64, 0);
  std::vector<std::pair<NodeId, CascadeId>> pairs;
  for (CascadeId c = 0; c < cfg_.existing_seeds.size(); ++c)
    for (NodeId v : cfg_.existing_seeds[c]) pairs.emplace_back(v, c);
  std::sort(pairs.begin(), pairs.end());
  for (const auto& [v, c] : pairs) {
    if (seed_nodes_.empty() || seed_nodes_.back() != v) {
      seed_nodes_.push_back(v);
      seed_off_.push_back(static_cast<std::uint32_t>(seed_cascades_.size()));
    }
    seed_cascades_.push_back(c);
    seed_bits_[v >> 6] |= 1ull << (v & 63);
  }
  seed_off_.push_back(static_cast<std::uint32_t>(seed_cascades_.size()));

  model_ = ActivationModel::build(g, cfg_);
}

std::span<const CascadeId> Instance::seed_cascades(NodeId v) const {
  auto it = std::lower_bound(seed_nodes_.begin(), seed_nodes_.end(), v);
  if (it == seed_nodes_.end() || *it != v) return {};
  const std::size_t i = it - seed_nodes_.begin();
  return {seed_cascades_.data() + seed_off_[i],
          seed_cascades_.data() + seed_off_[i + 1]};
}

void Instance::check_new_seeds(std::span<const NodeId> seeds) const {
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (i > 0 && seeds[i] <= seeds[i - 1])
      throw ConfigError("new-cascade seeds must be sorted and distinct");
    if (!std::binary_search(candidates_.begin(), candidates_.end(), seeds[i]))
      throw ConfigError("new-cascade seed outside the candidate set");
  }
}

}  // namespace mcim
