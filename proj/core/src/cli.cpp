#include "mcim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "mcim/baselines.hpp"
#include "mcim/error.hpp"
#include "mcim/oracle.hpp"
#include "mcim/sampling.hpp"

namespace mcim::cli {

namespace {

using Json = nlohmann::ordered_json;

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output: " + path);
  out << text;
}

SolverReport dispatch(const PreparedRun& run) {
  if (run.config.algorithm == "rs") return run_rs(*run.instance, run.config.solver);
  if (run.config.algorithm == "nr_greedy")
    return run_nr_greedy(*run.instance, run.config.solver);
  return run_maxinf(*run.instance, run.config.solver);
}

std::string csv_field(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

int cmd_solve(const std::string& config_path, const std::string& out_path,
              const std::string& dump_tuples_path) {
  PreparedRun run = prepare_run(load_run_config(config_path));
  SolverReport rep = dispatch(run);
  rep.config_echo = run.config.echo;
  rep.graph_summary = graph_summary(run);
  write_text(out_path, report_to_json(rep, *run.graph).dump(2) + "\n");

  if (!dump_tuples_path.empty() && rep.l > 0) {
    // Regenerate the selection collection from its recorded stream; maxinf
    // samples against the competition-stripped instance.
    const Instance* inst = run.instance.get();
    std::unique_ptr<Instance> stripped;
    if (run.config.algorithm == "maxinf") {
      CascadeConfig cfg = run.instance->config();
      cfg.cascade_names.clear();
      cfg.existing_seeds.clear();
      cfg.activation.table.clear();
      stripped = std::make_unique<Instance>(*run.graph, std::move(cfg));
      inst = stripped.get();
    }
    const TupleCollection coll = TupleCollection::generate(
        *inst, rep.l, substream(run.config.rng_seed, Stream::collection),
        run.config.solver.threads);
    std::ofstream out(dump_tuples_path);
    if (!out) throw ConfigError("cannot open output: " + dump_tuples_path);
    dump_tuples(coll, *run.graph, out);
  }
  return 0;
}

int cmd_evaluate(const std::string& config_path, const std::string& seeds_path,
                 std::optional<std::uint64_t> trials, const std::string& out_path) {
  PreparedRun run = prepare_run(load_run_config(config_path));
  const std::vector<NodeId> seeds = load_label_file(seeds_path, *run.graph);
  run.instance->check_new_seeds(seeds);

  const std::uint64_t t = trials.value_or(run.config.solver.evaluation_trials);
  const InfluenceEstimate est = estimate_influence(
      *run.instance, seeds, t, substream(run.config.rng_seed, Stream::evaluation),
      run.config.solver.threads);

  Json j;
  auto& labels = j["seeds"] = Json::array();
  for (NodeId v : seeds) labels.push_back(run.graph->label(v));
  j["influence"] = {{"mean", est.mean}, {"stderr", est.std_error}, {"trials", est.trials}};
  j["not_active_mean"] = est.not_active_mean;
  j["graph_summary"] = graph_summary(run);
  j["config"] = run.config.echo;
  j["rng_algorithm"] = kRngAlgorithm;
  write_text(out_path, j.dump(2) + "\n");
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::vector<unsigned>& k_list,
              const std::string& out_csv, const std::vector<std::string>& algorithms) {
  if (k_list.empty()) throw ConfigError("sweep: empty k list");
  RunConfig base = load_run_config(config_path);
  PreparedRun run = prepare_run(base);

  std::vector<std::string> algs = algorithms;
  if (algs.empty()) algs.push_back(base.algorithm);
  for (const std::string& a : algs)
    if (a != "rs" && a != "nr_greedy" && a != "maxinf")
      throw ConfigError("unknown algorithm: " + a);

  const bool fresh = !std::filesystem::exists(out_csv) ||
                     std::filesystem::file_size(out_csv) == 0;
  std::ofstream csv(out_csv, std::ios::app);
  if (!csv) throw ConfigError("cannot open output: " + out_csv);
  if (fresh)
    csv << "algorithm,k,l,f_lo,gamma_lower,influence_mean,influence_stderr,"
           "trials,not_active_mean,opt_lower_s,sampling_s,selection_s,"
           "evaluation_s,total_s,seeds\n";

  for (const std::string& alg : algs) {
    for (unsigned k : k_list) {
      run.config.algorithm = alg;
      run.config.solver.k = k;
      std::fprintf(stderr, "mcim: sweep %s k=%u\n", alg.c_str(), k);
      const SolverReport rep = dispatch(run);
      csv << alg << ',' << k << ',' << rep.l << ',' << csv_field(rep.f_lo) << ',';
      if (rep.gamma_lower) csv << csv_field(*rep.gamma_lower);
      csv << ',' << csv_field(rep.influence.mean) << ','
          << csv_field(rep.influence.std_error) << ',' << rep.influence.trials
          << ',' << csv_field(rep.influence.not_active_mean) << ','
          << csv_field(rep.phases.opt_lower_s) << ','
          << csv_field(rep.phases.sampling_s) << ','
          << csv_field(rep.phases.selection_s) << ','
          << csv_field(rep.phases.evaluation_s) << ','
          << csv_field(rep.phases.total_s) << ',';
      for (std::size_t i = 0; i < rep.seeds.size(); ++i)
        csv << (i ? "|" : "") << run.graph->label(rep.seeds[i]);
      csv << '\n';
    }
  }
  return 0;
}

int cmd_oracle_check(const std::string& config_path, std::uint64_t tuples) {
  PreparedRun run = prepare_run(load_run_config(config_path));
  const Instance& inst = *run.instance;
  const DirectedGraph& g = *run.graph;

  if (g.edge_count() > kMaxOracleEdges)
    throw ResourceError("oracle-check: graph exceeds the enumeration guard");
  if (inst.activation().kind() == ActivationKind::random_choice)
    throw ConfigError("oracle-check: random activation is not enumerable");
  const auto candidates = inst.candidates();
  if (candidates.size() > 12)
    throw ResourceError("oracle-check: candidate set too large for pair enumeration");
  if (tuples == 0) throw ConfigError("oracle-check: tuples must be >= 1");

  // Singleton and pair seed sets over the candidates.
  std::vector<std::vector<NodeId>> seed_sets;
  for (NodeId v : candidates) seed_sets.push_back({v});
  for (std::size_t i = 0; i < candidates.size(); ++i)
    for (std::size_t j = i + 1; j < candidates.size(); ++j)
      seed_sets.push_back({candidates[i], candidates[j]});

  // The collection is built from individually generated tuples so the
  // corruption hook (a deliberate fault injection used to prove this harness
  // can fail) can perturb them before indexing.
  const bool corrupt = std::getenv("MCIM_ORACLE_CHECK_CORRUPT") != nullptr;
  std::vector<RRTuple> raw;
  raw.reserve(tuples);
  {
    SampleWorkspace ws;
    for (std::uint64_t i = 0; i < tuples; ++i) {
      Rng rng = make_rng(substream(run.config.rng_seed, Stream::tuples, i));
      RRTuple t = sample_rr_tuple(inst, rng, ws);
      if (corrupt && t.hit_existing_seed())
        t.lower_count = static_cast<std::uint32_t>(t.nodes.size());
      raw.push_back(std::move(t));
    }
  }
  const TupleCollection coll = TupleCollection::from_tuples(g.node_count(), raw);
  raw.clear();

  const ActivationKind kind = inst.activation().kind();
  const bool no_competition = inst.seeded_nodes().empty();

  std::uint64_t ordering_violations = 0;
  std::uint64_t upper_gaps = 0;  // tuples/sets where the upper bound is not tight
  std::uint64_t lower_gaps = 0;
  std::vector<std::uint64_t> g_counts(seed_sets.size(), 0);
  EvalWorkspace ws;
  for (std::uint64_t t = 0; t < coll.size(); ++t) {
    for (std::size_t s = 0; s < seed_sets.size(); ++s) {
      const auto& S = seed_sets[s];
      const bool lo = covered_lower(coll, t, S);
      const bool up = covered_upper(coll, t, S);
      const bool mid = new_cascade_activates_root(coll, t, inst, S, ws);
      if ((lo && !mid) || (mid && !up)) ++ordering_violations;
      if (up != mid) ++upper_gaps;
      if (lo != mid) ++lower_gaps;
      if (mid) ++g_counts[s];
    }
  }

  bool all_pass = true;
  const auto report = [&](bool pass, const std::string& line) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << line << "\n";
    all_pass = all_pass && pass;
  };

  report(ordering_violations == 0,
         "ordering: lower <= exact <= upper, " +
             std::to_string(ordering_violations) + " violations over " +
             std::to_string(coll.size() * seed_sets.size()) + " tuple/set pairs");

  std::uint64_t unbiased_fail = 0;
  const double n = static_cast<double>(g.node_count());
  const double l = static_cast<double>(coll.size());
  for (std::size_t s = 0; s < seed_sets.size(); ++s) {
    const double exact = exact_influence(inst, seed_sets[s]);
    const double phat = static_cast<double>(g_counts[s]) / l;
    const double se = n * std::sqrt(phat * (1.0 - phat) / (l - 1.0));
    const double diff = std::abs(n * phat - exact);
    if (diff > std::max(3.0 * se, 1e-9)) ++unbiased_fail;
  }
  report(unbiased_fail == 0,
         "unbiasedness: sample mean vs exact enumeration within 3 standard "
         "errors for " + std::to_string(seed_sets.size()) + " seed sets, " +
             std::to_string(unbiased_fail) + " failures");

  if (kind == ActivationKind::dominating) {
    report(upper_gaps == 0, "dominating tightness: upper bound == exact, " +
                                std::to_string(upper_gaps) + " gaps");
  }
  if (kind == ActivationKind::dominated) {
    report(lower_gaps == 0, "dominated tightness: lower bound == exact, " +
                                std::to_string(lower_gaps) + " gaps");
  }
  if (no_competition) {
    std::uint64_t split = 0;
    for (std::uint64_t t = 0; t < coll.size(); ++t)
      if (coll.hit_existing(t)) ++split;
    report(split == 0, "no-competition degeneration: upper set == lower set, " +
                           std::to_string(split) + " split tuples");
  }
  return all_pass ? 0 : 1;
}

}  // namespace mcim::cli
