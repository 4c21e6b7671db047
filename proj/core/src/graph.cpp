#include "mcim/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "mcim/error.hpp"

namespace mcim {

std::optional<NodeId> DirectedGraph::find(std::string_view label) const {
  auto it = label_index_.find(std::string(label));
  if (it == label_index_.end()) return std::nullopt;
  return it->second;
}

DirectedGraph DirectedGraph::with_probabilities(std::vector<double> prob) const {
  if (prob.size() != prob_.size())
    throw Error("with_probabilities: size mismatch");
  DirectedGraph g = *this;
  g.prob_ = std::move(prob);
  return g;
}

NodeId GraphBuilder::intern(const std::string& label) {
  auto it = label_index_.find(label);
  if (it != label_index_.end()) return it->second;
  const NodeId id = static_cast<NodeId>(labels_.size());
  labels_.push_back(label);
  label_index_.emplace(label, id);
  return id;
}

void GraphBuilder::push(NodeId u, NodeId v, std::optional<double> p) {
  if (u == v) return;  // self-loops cannot affect diffusion
  const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
  if (!seen_.emplace(key, 1).second) return;  // keep the first probability seen
  src_.push_back(u);
  dst_.push_back(v);
  prob_.push_back(p.value_or(1.0));
  explicit_.push_back(p.has_value() ? 1 : 0);
}

void GraphBuilder::add_edge(const std::string& u, const std::string& v,
                            std::optional<double> p, const std::string& where) {
  if (p && !(*p > 0.0 && *p <= 1.0)) {
    std::string msg = "probability out of range";
    if (!where.empty()) msg += " at " + where;
    throw ConfigError(msg);
  }
  const NodeId a = intern(u);
  const NodeId b = intern(v);
  push(a, b, p);
  if (!directed_) push(b, a, p);
}

void GraphBuilder::add_edge(NodeId u, NodeId v, std::optional<double> p) {
  if (p && !(*p > 0.0 && *p <= 1.0)) throw ConfigError("probability out of range");
  const NodeId hi = std::max(u, v);
  while (labels_.size() <= hi) {
    std::string label = std::to_string(labels_.size());
    label_index_.emplace(label, static_cast<NodeId>(labels_.size()));
    labels_.push_back(std::move(label));
  }
  push(u, v, p);
  if (!directed_) push(v, u, p);
}

DirectedGraph GraphBuilder::build() {
  if (src_.empty()) throw ConfigError("empty input: no edges");
  if (src_.size() >= std::numeric_limits<EdgeId>::max())
    throw ResourceError("too many edges for 32-bit edge ids");

  DirectedGraph g;
  const NodeId n = static_cast<NodeId>(labels_.size());
  const std::uint64_t m = src_.size();
  g.n_ = n;
  g.labels_ = std::move(labels_);
  g.label_index_ = std::move(label_index_);

  // Stable counting sort by source: edge ids end up grouped by source in
  // ascending order, preserving input order within a source.
  g.out_off_.assign(n + 1, 0);
  for (NodeId u : src_) g.out_off_[u + 1]++;
  for (NodeId u = 0; u < n; ++u) g.out_off_[u + 1] += g.out_off_[u];
  g.out_dst_.resize(m);
  g.prob_.resize(m);
  g.explicit_prob_.resize(m);
  std::vector<EdgeId> cursor(g.out_off_.begin(), g.out_off_.end() - 1);
  for (std::uint64_t i = 0; i < m; ++i) {
    const EdgeId slot = cursor[src_[i]]++;
    g.out_dst_[slot] = dst_[i];
    g.prob_[slot] = prob_[i];
    g.explicit_prob_[slot] = explicit_[i];
  }

  g.in_off_.assign(n + 1, 0);
  for (NodeId v : g.out_dst_) g.in_off_[v + 1]++;
  for (NodeId v = 0; v < n; ++v) g.in_off_[v + 1] += g.in_off_[v];
  g.in_.resize(m);
  std::vector<EdgeId> icursor(g.in_off_.begin(), g.in_off_.end() - 1);
  for (NodeId u = 0; u < n; ++u) {
    for (EdgeId e = g.out_off_[u]; e < g.out_off_[u + 1]; ++e) {
      g.in_[icursor[g.out_dst_[e]]++] = {u, e};
    }
  }
  return g;
}

namespace {

bool parse_probability(std::string_view tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

DirectedGraph load_edge_list(std::istream& in, bool directed) {
  GraphBuilder builder(directed);
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv(line);
    while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t' || sv.front() == '\r'))
      sv.remove_prefix(1);
    if (sv.empty() || sv.front() == '#') continue;

    std::istringstream fields{std::string(sv)};
    std::string u, v, ptok, extra;
    fields >> u >> v;
    if (v.empty())
      throw ConfigError("malformed edge at line " + std::to_string(line_no));
    fields >> ptok;
    if (fields >> extra)
      throw ConfigError("malformed edge at line " + std::to_string(line_no));

    std::optional<double> p;
    if (!ptok.empty()) {
      double value;
      if (!parse_probability(ptok, value))
        throw ConfigError("malformed probability at line " + std::to_string(line_no));
      if (!(value > 0.0 && value <= 1.0))
        throw ConfigError("probability out of range at line " + std::to_string(line_no));
      p = value;
    }
    builder.add_edge(u, v, p, "line " + std::to_string(line_no));
  }
  return builder.build();
}

DirectedGraph load_edge_list_file(const std::string& path, bool directed) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open edge list: " + path);
  return load_edge_list(in, directed);
}

void save_edge_list(const DirectedGraph& g, std::ostream& out) {
  char buf[64];
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const auto targets = g.out(u);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const EdgeId e = g.out_begin(u) + static_cast<EdgeId>(i);
      std::snprintf(buf, sizeof(buf), "%.17g", g.probability(e));
      out << g.label(u) << ' ' << g.label(targets[i]) << ' ' << buf << '\n';
    }
  }
}

}  // namespace mcim
