#include "mcim/probability.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

#include "mcim/error.hpp"
#include "mcim/rng.hpp"

namespace mcim {

std::string ProbabilityScheme::name() const {
  switch (kind) {
    case SchemeKind::uniform: return "uniform";
    case SchemeKind::weighted_cascade: return "weighted_cascade";
    case SchemeKind::exponential: return "exponential";
    case SchemeKind::from_file: return "from_file";
    case SchemeKind::frequency_weighted: return "frequency_weighted";
  }
  return "?";
}

std::unordered_map<std::string, double> load_action_counts(std::istream& in) {
  std::unordered_map<std::string, double> counts;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string u, v;
    double c;
    if (!(fields >> u)) continue;
    if (u[0] == '#') continue;
    if (!(fields >> v >> c))
      throw ConfigError("malformed action count at line " + std::to_string(line_no));
    if (!(c > 0.0))
      throw ConfigError("action count must be positive at line " + std::to_string(line_no));
    counts[u + "\t" + v] = c;
  }
  if (counts.empty()) throw ConfigError("empty action count table");
  return counts;
}

std::unordered_map<std::string, double> load_action_counts_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open action count table: " + path);
  return load_action_counts(in);
}

DirectedGraph assign_probabilities(const DirectedGraph& g,
                                   const ProbabilityScheme& scheme) {
  const std::uint64_t m = g.edge_count();
  std::vector<double> prob(m);

  switch (scheme.kind) {
    case SchemeKind::uniform: {
      if (!(scheme.p > 0.0 && scheme.p <= 1.0))
        throw ConfigError("uniform probability must lie in (0,1]");
      std::fill(prob.begin(), prob.end(), scheme.p);
      break;
    }
    case SchemeKind::weighted_cascade: {
      for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto targets = g.out(u);
        for (std::size_t i = 0; i < targets.size(); ++i) {
          const EdgeId e = g.out_begin(u) + static_cast<EdgeId>(i);
          prob[e] = 1.0 / static_cast<double>(g.in_degree(targets[i]));
        }
      }
      break;
    }
    case SchemeKind::exponential: {
      if (!(scheme.mean > 0.0)) throw ConfigError("exponential mean must be positive");
      Rng rng = make_rng(substream(scheme.rng_seed, Stream::edge_probabilities));
      for (std::uint64_t e = 0; e < m; ++e) {
        const double x = -std::log(1.0 - uniform01(rng));  // Exp(1)
        double p = std::min(1.0, scheme.mean * x);
        if (p < std::numeric_limits<double>::epsilon())
          p = std::numeric_limits<double>::epsilon();
        prob[e] = p;
      }
      break;
    }
    case SchemeKind::from_file: {
      for (std::uint64_t e = 0; e < m; ++e) {
        if (!g.has_explicit_probability(static_cast<EdgeId>(e)))
          throw ConfigError("from_file scheme: edge without a supplied probability");
        prob[e] = g.probability(static_cast<EdgeId>(e));
      }
      break;
    }
    case SchemeKind::frequency_weighted: {
      // Raw counts first, then per-target normalization so that the weights
      // into each node sum to min(1, raw sum).
      std::vector<double> raw_sum(g.node_count(), 0.0);
      for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto targets = g.out(u);
        for (std::size_t i = 0; i < targets.size(); ++i) {
          const EdgeId e = g.out_begin(u) + static_cast<EdgeId>(i);
          const auto it = scheme.action_counts.find(g.label(u) + "\t" + g.label(targets[i]));
          if (it == scheme.action_counts.end())
            throw ConfigError("frequency_weighted scheme: no action count for edge " +
                              g.label(u) + " -> " + g.label(targets[i]));
          prob[e] = it->second;
          raw_sum[targets[i]] += it->second;
        }
      }
      for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto targets = g.out(u);
        for (std::size_t i = 0; i < targets.size(); ++i) {
          const EdgeId e = g.out_begin(u) + static_cast<EdgeId>(i);
          const double sum = raw_sum[targets[i]];
          if (sum > 1.0) prob[e] /= sum;
        }
      }
      break;
    }
  }
  return g.with_probabilities(std::move(prob));
}

}  // namespace mcim
