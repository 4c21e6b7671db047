#include "mcim/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "mcim/error.hpp"
#include "mcim/parallel.hpp"

namespace mcim {

namespace {

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void evaluate_into(SolverReport& rep, const Instance& inst,
                   const SolverParams& params) {
  if (params.evaluation_trials == 0) {
    rep.influence.not_active_mean = inst.graph().node_count();
    return;
  }
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<NodeId> sorted(rep.seeds);
  std::sort(sorted.begin(), sorted.end());
  rep.influence = estimate_influence(
      inst, sorted, params.evaluation_trials,
      substream(params.rng_seed, Stream::evaluation), params.threads);
  rep.phases.evaluation_s = elapsed_s(t0);
}

}  // namespace

SolverReport run_nr_greedy(const Instance& inst, const SolverParams& params) {
  SolverReport rep;
  rep.algorithm = "nr_greedy";
  const auto t_total = std::chrono::steady_clock::now();

  if (params.k > 0) {
    const Epsilons eps = resolve_epsilons(params);
    if (params.k > inst.candidates().size())
      throw ConfigError("budget k exceeds the candidate set size");

    auto t0 = std::chrono::steady_clock::now();
    const OptLowerResult opt = estimate_opt_lower(inst, params);
    rep.phases.opt_lower_s = elapsed_s(t0);
    rep.f_lo = opt.f_lo;

    const double need = std::ceil(
        sample_bound_l2(inst.graph().node_count(), params.N, eps.e2) / opt.f_lo);
    if (need > static_cast<double>(params.max_tuples))
      throw ResourceError("nr_greedy: planned sample size exceeds the cap");
    rep.l = static_cast<std::uint64_t>(std::max(need, 1.0));

    t0 = std::chrono::steady_clock::now();
    const TupleCollection coll = TupleCollection::generate(
        inst, rep.l, substream(params.rng_seed, Stream::collection),
        params.threads);
    rep.phases.sampling_s = elapsed_s(t0);

    t0 = std::chrono::steady_clock::now();
    const auto candidates = inst.candidates();
    std::vector<std::uint8_t> current(coll.size(), 0);  // g per tuple at S
    std::vector<std::uint8_t> in_set(inst.graph().node_count(), 0);
    std::vector<NodeId> sorted_seeds;
    std::vector<std::int64_t> gains(candidates.size());
    const unsigned workers = effective_threads(params.threads);

    for (unsigned step = 0; step < params.k; ++step) {
      // Marginals only need the tuples whose upper set holds the candidate:
      // adding a node outside a tuple's subgraph cannot change its outcome.
      parallel_chunks(
          candidates.size(), workers,
          [&](unsigned, std::uint64_t begin, std::uint64_t end) {
            EvalWorkspace ws;
            std::vector<NodeId> with;
            for (std::uint64_t ci = begin; ci < end; ++ci) {
              const NodeId v = candidates[ci];
              if (in_set[v]) {
                gains[ci] = std::numeric_limits<std::int64_t>::min();
                continue;
              }
              with = sorted_seeds;
              with.insert(std::upper_bound(with.begin(), with.end(), v), v);
              std::int64_t gain = 0;
              for (const std::uint32_t t : coll.upper_tuples(v)) {
                const bool now =
                    new_cascade_activates_root(coll, t, inst, with, ws);
                gain += static_cast<std::int64_t>(now) -
                        static_cast<std::int64_t>(current[t]);
              }
              gains[ci] = gain;
            }
          });

      std::int64_t best_gain = std::numeric_limits<std::int64_t>::min();
      std::size_t best = 0;
      for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
        if (gains[ci] > best_gain) {
          best_gain = gains[ci];
          best = ci;
        }
      }
      if (best_gain < 0) break;  // the estimator is not monotone

      const NodeId v = candidates[best];
      rep.seeds.push_back(v);
      in_set[v] = 1;
      sorted_seeds.insert(
          std::upper_bound(sorted_seeds.begin(), sorted_seeds.end(), v), v);
      EvalWorkspace ws;
      for (const std::uint32_t t : coll.upper_tuples(v))
        current[t] = new_cascade_activates_root(coll, t, inst, sorted_seeds, ws)
                         ? 1
                         : 0;
      std::fprintf(stderr,
                   "mcim: nr_greedy step %u/%u picked %s (marginal %lld, %.1fs)\n",
                   step + 1, params.k, inst.graph().label(v).c_str(),
                   static_cast<long long>(best_gain), elapsed_s(t0));
    }
    rep.phases.selection_s = elapsed_s(t0);
  }

  evaluate_into(rep, inst, params);
  rep.phases.total_s = elapsed_s(t_total);
  return rep;
}

SolverReport run_maxinf(const Instance& inst, const SolverParams& params) {
  SolverReport rep;
  rep.algorithm = "maxinf";
  const auto t_total = std::chrono::steady_clock::now();

  if (params.k > 0) {
    CascadeConfig stripped = inst.config();
    stripped.cascade_names.clear();
    stripped.existing_seeds.clear();
    // Offer-set rules can reference cascades that no longer exist; with a
    // single cascade no conflict can arise, so the table is moot anyway.
    stripped.activation.table.clear();
    const Instance oblivious(inst.graph(), std::move(stripped));

    RsSelection sel = rs_select(oblivious, params);
    rep.seeds = sel.result.chosen;
    rep.l = sel.l;
    rep.f_lo = sel.f_lo;
    rep.gamma_lower = sel.result.gamma_lower;
    rep.phases.opt_lower_s = sel.opt_lower_s;
    rep.phases.sampling_s = sel.sampling_s;
    rep.phases.selection_s = sel.selection_s;
  }

  // Quality is always reported under the true configuration.
  evaluate_into(rep, inst, params);
  rep.phases.total_s = elapsed_s(t_total);
  return rep;
}

}  // namespace mcim
