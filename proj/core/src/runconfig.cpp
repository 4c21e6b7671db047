#include "mcim/runconfig.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "mcim/error.hpp"

namespace mcim {

namespace {

using Json = nlohmann::ordered_json;

const Json* get(const Json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

template <typename T>
T require(const Json& j, const char* where, const char* key) {
  const Json* v = get(j, key);
  if (!v) throw ConfigError(std::string(where) + "." + key + " is required");
  try {
    return v->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string(where) + "." + key + " has the wrong type");
  }
}

template <typename T>
T optional_or(const Json& j, const char* where, const char* key, T fallback) {
  const Json* v = get(j, key);
  if (!v) return fallback;
  try {
    return v->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string(where) + "." + key + " has the wrong type");
  }
}

SchemeKind scheme_from_name(const std::string& name) {
  if (name == "uniform") return SchemeKind::uniform;
  if (name == "weighted_cascade") return SchemeKind::weighted_cascade;
  if (name == "exponential") return SchemeKind::exponential;
  if (name == "from_file") return SchemeKind::from_file;
  if (name == "frequency_weighted") return SchemeKind::frequency_weighted;
  throw ConfigError("unknown probability scheme: " + name);
}

}  // namespace

RunConfig parse_run_config(const Json& doc) {
  RunConfig cfg;
  cfg.echo = doc;

  const Json* graph = get(doc, "graph");
  if (!graph || !graph->is_object()) throw ConfigError("graph section is required");
  cfg.graph_path = require<std::string>(*graph, "graph", "path");
  cfg.directed = optional_or(*graph, "graph", "directed", true);

  const Json* prob = get(doc, "probabilities");
  if (!prob || !prob->is_object())
    throw ConfigError("probabilities section is required");
  cfg.scheme = scheme_from_name(require<std::string>(*prob, "probabilities", "scheme"));
  cfg.scheme_p = optional_or(*prob, "probabilities", "p", 0.1);
  cfg.scheme_mean = optional_or(*prob, "probabilities", "mean", 0.01);
  cfg.scheme_file = optional_or<std::string>(*prob, "probabilities", "file", "");
  if (cfg.scheme == SchemeKind::frequency_weighted && cfg.scheme_file.empty())
    throw ConfigError("probabilities.file is required for frequency_weighted");

  if (const Json* cascades = get(doc, "cascades")) {
    if (!cascades->is_array()) throw ConfigError("cascades must be an array");
    for (const Json& c : *cascades) {
      RunConfig::CascadeIn in;
      in.name = require<std::string>(c, "cascades[]", "name");
      if (in.name == "c_new")
        throw ConfigError("the name c_new is reserved for the new cascade");
      if (const Json* s = get(c, "seeds")) in.seeds_file = s->get<std::string>();
      if (const Json* f = get(c, "seed_fraction")) in.seed_fraction = f->get<double>();
      if (in.seeds_file.has_value() == in.seed_fraction.has_value())
        throw ConfigError("cascade " + in.name +
                          ": exactly one of seeds or seed_fraction is required");
      if (in.seed_fraction && !(*in.seed_fraction > 0.0 && *in.seed_fraction <= 1.0))
        throw ConfigError("cascade " + in.name + ": seed_fraction must lie in (0,1]");
      cfg.cascades.push_back(std::move(in));
    }
  }

  const Json* act = get(doc, "activation");
  if (!act || !act->is_object()) throw ConfigError("activation section is required");
  const std::string type = require<std::string>(*act, "activation", "type");
  const auto kind = activation_kind_from_name(type);
  if (!kind) throw ConfigError("unknown activation type: " + type);
  cfg.activation = *kind;
  cfg.activation_seed = optional_or<std::uint64_t>(*act, "activation", "rng_seed", 0);
  if (const Json* table = get(*act, "table")) cfg.activation_table = *table;
  if (cfg.activation == ActivationKind::explicit_table &&
      !cfg.activation_table.is_array())
    throw ConfigError("activation.table is required for explicit_table");

  const Json* solver = get(doc, "solver");
  if (!solver || !solver->is_object()) throw ConfigError("solver section is required");
  cfg.algorithm = optional_or<std::string>(*solver, "solver", "algorithm", "rs");
  if (cfg.algorithm != "rs" && cfg.algorithm != "nr_greedy" && cfg.algorithm != "maxinf")
    throw ConfigError("unknown algorithm: " + cfg.algorithm);
  const auto k = require<std::int64_t>(*solver, "solver", "k");
  if (k < 0) throw ConfigError("solver.k must be >= 0");
  cfg.solver.k = static_cast<unsigned>(k);
  cfg.solver.epsilon = optional_or(*solver, "solver", "epsilon", 0.3);
  cfg.solver.N = optional_or(*solver, "solver", "N", 10000.0);
  cfg.solver.K = optional_or(*solver, "solver", "K", 100.0);
  if (const Json* v = get(*solver, "epsilon0")) cfg.solver.epsilon0 = v->get<double>();
  if (const Json* v = get(*solver, "epsilon1")) cfg.solver.epsilon1 = v->get<double>();
  if (const Json* v = get(*solver, "epsilon2")) cfg.solver.epsilon2 = v->get<double>();
  cfg.solver.max_tuples = optional_or<std::uint64_t>(*solver, "solver", "max_tuples",
                                                     cfg.solver.max_tuples);

  if (const Json* ev = get(doc, "evaluate"))
    cfg.solver.evaluation_trials =
        optional_or<std::uint64_t>(*ev, "evaluate", "trials", 10000);

  cfg.candidates = optional_or<std::string>(doc, "", "candidates", "all");
  cfg.rng_seed = optional_or<std::uint64_t>(doc, "", "rng_seed", 0);
  cfg.solver.rng_seed = cfg.rng_seed;
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_run_config(doc);
}

std::vector<NodeId> load_label_file(const std::string& path, const DirectedGraph& g) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open node list: " + path);
  std::vector<NodeId> out;
  std::string token;
  while (in >> token) {
    if (token[0] == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    const auto id = g.find(token);
    if (!id) throw ConfigError("unknown node label: " + token + " in " + path);
    out.push_back(*id);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

std::vector<NodeId> draw_fraction(const DirectedGraph& g, double fraction,
                                  std::uint64_t seed) {
  const NodeId n = g.node_count();
  std::uint64_t count = static_cast<std::uint64_t>(
      std::max<double>(1.0, std::llround(fraction * static_cast<double>(n))));
  count = std::min<std::uint64_t>(count, n);
  Rng rng = make_rng(seed);
  std::vector<NodeId> out;
  out.reserve(count);
  if (count * 16 < n) {
    std::unordered_set<NodeId> seen;
    while (seen.size() < count) {
      const NodeId v = static_cast<NodeId>(rng() % n);
      if (seen.insert(v).second) out.push_back(v);
    }
  } else {
    std::vector<NodeId> all(n);
    for (NodeId v = 0; v < n; ++v) all[v] = v;
    for (std::uint64_t i = 0; i < count; ++i)
      std::swap(all[i], all[i + rng() % (n - i)]);
    out.assign(all.begin(), all.begin() + count);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ExplicitRule> resolve_table(const nlohmann::ordered_json& table,
                                        const DirectedGraph& g,
                                        const CascadeConfig& cfg) {
  std::vector<ExplicitRule> rules;
  if (!table.is_array()) return rules;
  const auto cascade_id = [&](const std::string& name) -> CascadeId {
    if (name == cfg.new_cascade_name) return cfg.new_cascade();
    for (std::size_t i = 0; i < cfg.cascade_names.size(); ++i)
      if (cfg.cascade_names[i] == name) return static_cast<CascadeId>(i);
    throw ConfigError("activation.table names unknown cascade: " + name);
  };
  for (const auto& entry : table) {
    ExplicitRule rule;
    if (const auto it = entry.find("node"); it != entry.end()) {
      const auto id = g.find(it->get<std::string>());
      if (!id) throw ConfigError("activation.table names unknown node");
      rule.node = *id;
    }
    const auto offers = entry.find("offers");
    const auto winner = entry.find("winner");
    if (offers == entry.end() || winner == entry.end())
      throw ConfigError("activation.table entries need offers and winner");
    for (const auto& name : *offers)
      rule.offered.push_back(cascade_id(name.get<std::string>()));
    std::sort(rule.offered.begin(), rule.offered.end());
    rule.winner = cascade_id(winner->get<std::string>());
    rules.push_back(std::move(rule));
  }
  return rules;
}

}  // namespace

PreparedRun prepare_run(RunConfig config) {
  PreparedRun run;

  DirectedGraph loaded = load_edge_list_file(config.graph_path, config.directed);

  ProbabilityScheme scheme;
  scheme.kind = config.scheme;
  scheme.p = config.scheme_p;
  scheme.mean = config.scheme_mean;
  scheme.rng_seed = substream(config.rng_seed, Stream::edge_probabilities);
  if (config.scheme == SchemeKind::frequency_weighted)
    scheme.action_counts = load_action_counts_file(config.scheme_file);
  run.graph = std::make_unique<DirectedGraph>(assign_probabilities(loaded, scheme));

  CascadeConfig cascades;
  for (std::size_t i = 0; i < config.cascades.size(); ++i) {
    const auto& in = config.cascades[i];
    cascades.cascade_names.push_back(in.name);
    if (in.seeds_file) {
      cascades.existing_seeds.push_back(load_label_file(*in.seeds_file, *run.graph));
    } else {
      cascades.existing_seeds.push_back(draw_fraction(
          *run.graph, *in.seed_fraction,
          substream(config.rng_seed, Stream::seed_selection, i)));
    }
  }
  if (config.candidates == "all") {
    cascades.candidates_all = true;
  } else {
    cascades.candidates_all = false;
    cascades.candidates = load_label_file(config.candidates, *run.graph);
  }
  cascades.activation.kind = config.activation;
  cascades.activation.rng_seed = config.activation_seed;
  cascades.activation.table =
      resolve_table(config.activation_table, *run.graph, cascades);

  run.instance = std::make_unique<Instance>(*run.graph, std::move(cascades));
  run.config = std::move(config);
  return run;
}

nlohmann::ordered_json graph_summary(const PreparedRun& run) {
  ProbabilityScheme s;
  s.kind = run.config.scheme;
  return {{"n", run.graph->node_count()},
          {"m", run.graph->edge_count()},
          {"scheme", s.name()},
          {"seed", run.config.rng_seed}};
}

}  // namespace mcim
