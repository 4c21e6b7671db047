#include "mcim/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <queue>

#include "mcim/error.hpp"

namespace mcim {

namespace {

constexpr double kOneMinusInvE = 1.0 - 1.0 / std::numbers::e;

double ln_choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0.0;
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

struct StopWatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double lap() {
    const auto t1 = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(t1 - t0).count();
    t0 = t1;
    return s;
  }
};

}  // namespace

Epsilons resolve_epsilons(const SolverParams& params) {
  Epsilons e{};
  e.e1 = params.epsilon1.value_or(params.epsilon);
  e.e2 = params.epsilon2.value_or(params.epsilon);
  if (params.epsilon0) {
    e.e0 = *params.epsilon0;
  } else {
    if (!(params.K > 0)) throw ConfigError("K must be positive");
    e.e0 = params.K * e.e1;
    if (e.e0 >= 1.0) {
      e.e0 = 0.999;
      e.e0_capped = true;
    }
  }
  for (double v : {e.e0, e.e1, e.e2})
    if (!(v > 0.0 && v < 1.0))
      throw ConfigError("error parameters must lie in (0,1)");
  if (!(params.N > 1.0)) throw ConfigError("N must exceed 1");
  return e;
}

std::vector<NodeId> greedy_max_coverage(const TupleCollection& coll, unsigned k,
                                        Estimator bound,
                                        std::span<const NodeId> candidates) {
  if (coll.size() == 0) throw Error("greedy_max_coverage: empty tuple collection");
  if (bound == Estimator::exact)
    throw Error("greedy_max_coverage: only the coverage bounds are submodular");

  const auto list = [&](NodeId v) {
    return bound == Estimator::upper_bound ? coll.upper_tuples(v)
                                           : coll.lower_tuples(v);
  };

  struct Entry {
    std::uint64_t gain;
    NodeId node;
    std::uint32_t version;
  };
  // Max-heap on gain; equal gains surface the smallest node id.
  const auto cmp = [](const Entry& a, const Entry& b) {
    return a.gain < b.gain || (a.gain == b.gain && a.node > b.node);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
  for (NodeId v : candidates)
    heap.push({list(v).size(), v, 0});

  std::vector<std::uint8_t> covered(coll.size(), 0);
  std::vector<NodeId> picked;
  std::uint32_t version = 0;
  const std::size_t want = std::min<std::size_t>(k, candidates.size());

  while (picked.size() < want && !heap.empty()) {
    Entry top = heap.top();
    heap.pop();
    if (top.version != version) {
      // Stale upper bound (coverage is submodular): recompute and reinsert.
      std::uint64_t gain = 0;
      for (std::uint32_t t : list(top.node)) gain += covered[t] ? 0 : 1;
      top.gain = gain;
      top.version = version;
      heap.push(top);
      continue;
    }
    // Marginal gains are coverage counts, never negative, so the early-exit
    // branch of the greedy template cannot trigger here.
    picked.push_back(top.node);
    ++version;
    for (std::uint32_t t : list(top.node)) covered[t] = 1;
  }
  return picked;
}

SandwichResult sandwich(const TupleCollection& coll, const Instance& inst,
                        unsigned k, std::span<const NodeId> candidates) {
  SandwichResult r;
  r.l = coll.size();
  r.upper_seeds = greedy_max_coverage(coll, k, Estimator::upper_bound, candidates);
  r.lower_seeds = greedy_max_coverage(coll, k, Estimator::lower_bound, candidates);

  EvalWorkspace ws;
  const auto triple = [&](const std::vector<NodeId>& sel) {
    std::vector<NodeId> s(sel);
    std::sort(s.begin(), s.end());
    EstimateTriple t;
    t.lower = estimate(coll, inst, s, Estimator::lower_bound, ws);
    t.exact = estimate(coll, inst, s, Estimator::exact, ws);
    t.upper = estimate(coll, inst, s, Estimator::upper_bound, ws);
    return t;
  };
  r.at_upper = triple(r.upper_seeds);
  r.at_lower = triple(r.lower_seeds);
  r.chosen = r.at_upper.exact >= r.at_lower.exact ? r.upper_seeds : r.lower_seeds;

  // Computable branch of the data-dependent ratio; 0/0 (nothing covered)
  // counts as a tight bound.
  const double ratio =
      r.at_upper.upper > 0 ? r.at_upper.exact / r.at_upper.upper : 1.0;
  r.gamma_lower = kOneMinusInvE * ratio;
  return r;
}

OptLowerResult estimate_opt_lower(const Instance& inst, const SolverParams& params) {
  const Epsilons eps = resolve_epsilons(params);
  if (eps.e0_capped)
    std::fprintf(stderr,
                 "mcim: warning: K*epsilon1 = %g leaves (0,1); epsilon0 "
                 "capped at 0.999\n",
                 params.K * eps.e1);
  const std::uint64_t n = inst.graph().node_count();
  const unsigned k =
      std::min<std::uint64_t>(params.k, inst.candidates().size());
  if (k == 0) throw Error("estimate_opt_lower: k must be >= 1");

  // Internal accuracy knob: a large epsilon0 only loosens the contract's
  // denominator, so the search itself never needs to run coarser than 1/2.
  const double ep = std::min(eps.e0, 0.5);
  const unsigned rounds = std::max<unsigned>(
      1, static_cast<unsigned>(std::ceil(std::log2(static_cast<double>(n)))));
  const double delta = 1.0 / (params.N * rounds);
  const double lambda = static_cast<double>(n) * (2.0 + 2.0 * ep / 3.0) *
                        (ln_choose(n, k) + std::log(1.0 / delta)) / (ep * ep);

  const std::uint64_t phase_seed =
      substream(params.rng_seed, Stream::opt_lower_tuples);

  TupleCollection coll;
  EvalWorkspace ws;
  OptLowerResult out;
  double last_est = 0;

  for (unsigned i = 1; i <= rounds; ++i) {
    const double x = static_cast<double>(n) / std::pow(2.0, i);
    std::uint64_t theta =
        static_cast<std::uint64_t>(std::ceil(lambda / std::max(x, 1.0)));
    theta = std::max<std::uint64_t>(theta, 1);
    theta = std::min<std::uint64_t>(theta, params.max_tuples);
    coll.extend(inst, theta, phase_seed, params.threads);

    std::vector<NodeId> greedy_set =
        greedy_max_coverage(coll, k, Estimator::lower_bound, inst.candidates());
    std::sort(greedy_set.begin(), greedy_set.end());
    const double est =
        estimate(coll, inst, greedy_set, Estimator::lower_bound, ws);
    last_est = est;
    if (est >= (1.0 + ep) * x) {
      out.certified = true;
      out.f_lo = est / ((1.0 + ep) * (1.0 + ep));
      break;
    }
    if (theta >= params.max_tuples) break;  // budget exhausted, settle below
  }
  if (!out.certified) out.f_lo = last_est / ((1.0 + ep) * (1.0 + ep));

  // Any non-seed candidate certifies optimum >= 1 deterministically (the
  // seed itself counts). If every candidate already belongs to an existing
  // cascade the instance is degenerate; flag it and keep the floor.
  bool any_free_candidate = false;
  for (NodeId v : inst.candidates()) {
    if (!inst.is_existing_seed(v)) {
      any_free_candidate = true;
      break;
    }
  }
  if (!any_free_candidate)
    std::fprintf(stderr,
                 "mcim: warning: every candidate is an existing-cascade seed; "
                 "lower-bound floor is not certified\n");
  out.f_lo = std::min(std::max(out.f_lo, 1.0), static_cast<double>(n));
  out.tuples_used = coll.size();
  return out;
}

double sample_bound_l1(std::uint64_t n, unsigned k, double N, double e1) {
  return static_cast<double>(n) * (ln_choose(n, k) + std::log(N)) *
         (2.0 + e1) / (e1 * e1);
}

double sample_bound_l2(std::uint64_t n, double N, double e2) {
  return 2.0 * static_cast<double>(n) * std::log(N) / (e2 * e2);
}

std::uint64_t plan_sample_size(std::uint64_t n, unsigned k,
                               const SolverParams& params, double f_lo) {
  const Epsilons eps = resolve_epsilons(params);
  if (!(f_lo > 0)) throw Error("plan_sample_size: f_lo must be positive");
  const double l1 = sample_bound_l1(n, k, params.N, eps.e1);
  const double l2 = sample_bound_l2(n, params.N, eps.e2);
  const double need = std::ceil(std::max(l1, l2) / f_lo);
  if (!std::isfinite(need))
    throw ResourceError("plan_sample_size: sample bound overflowed");
  if (need > static_cast<double>(params.max_tuples))
    throw ResourceError("plan_sample_size: planned " + std::to_string(need) +
                        " samples exceeds the cap of " +
                        std::to_string(params.max_tuples));
  return static_cast<std::uint64_t>(std::max(need, 1.0));
}

RsSelection rs_select(const Instance& inst, const SolverParams& params) {
  (void)resolve_epsilons(params);  // fail fast on bad parameters
  if (params.k > inst.candidates().size())
    throw ConfigError("budget k exceeds the candidate set size");

  RsSelection sel;
  StopWatch watch;
  const OptLowerResult opt = estimate_opt_lower(inst, params);
  sel.opt_lower_s = watch.lap();
  sel.f_lo = opt.f_lo;

  sel.l = plan_sample_size(inst.graph().node_count(), params.k, params, opt.f_lo);
  TupleCollection coll = TupleCollection::generate(
      inst, sel.l, substream(params.rng_seed, Stream::collection), params.threads);
  sel.sampling_s = watch.lap();

  sel.result = sandwich(coll, inst, params.k, inst.candidates());
  sel.result.f_lo = opt.f_lo;
  sel.selection_s = watch.lap();
  return sel;
}

SolverReport run_rs(const Instance& inst, const SolverParams& params) {
  SolverReport rep;
  rep.algorithm = "rs";
  StopWatch total;

  if (params.k > 0) {
    RsSelection sel = rs_select(inst, params);
    rep.seeds = sel.result.chosen;
    rep.l = sel.l;
    rep.f_lo = sel.f_lo;
    rep.gamma_lower = sel.result.gamma_lower;
    rep.phases.opt_lower_s = sel.opt_lower_s;
    rep.phases.sampling_s = sel.sampling_s;
    rep.phases.selection_s = sel.selection_s;
  }

  if (params.evaluation_trials > 0) {
    StopWatch eval;
    std::vector<NodeId> sorted(rep.seeds);
    std::sort(sorted.begin(), sorted.end());
    rep.influence = estimate_influence(
        inst, sorted, params.evaluation_trials,
        substream(params.rng_seed, Stream::evaluation), params.threads);
    rep.phases.evaluation_s = eval.lap();
  } else {
    rep.influence.not_active_mean = inst.graph().node_count();
  }
  rep.phases.total_s = total.lap();
  return rep;
}

}  // namespace mcim
