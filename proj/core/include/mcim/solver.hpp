#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mcim/report.hpp"
#include "mcim/sampling.hpp"

namespace mcim {

struct SolverParams {
  unsigned k = 1;
  double epsilon = 0.3;  // unified error; explicit values below override
  std::optional<double> epsilon0, epsilon1, epsilon2;
  double N = 10000;      // failure-odds parameter, > 1
  double K = 100;        // epsilon0 = K * epsilon1 when epsilon0 not explicit
  std::uint64_t rng_seed = 0;
  std::uint64_t max_tuples = 100'000'000;  // resource cap on planned samples
  std::uint64_t evaluation_trials = 10000;
  unsigned threads = 0;  // 0 = automatic
};

struct Epsilons {
  double e0, e1, e2;
  bool e0_capped = false;  // K*e1 exceeded the (0,1) range and was clamped
};

// Unified-epsilon policy: e1 = e2 = epsilon, e0 = min(0.999, K * e1);
// explicit values take precedence. Validates the (0,1) ranges and N > 1.
Epsilons resolve_epsilons(const SolverParams& params);

// Lazy (priority-queue) greedy maximum coverage on the chosen bound's
// inverted index. Coverage is monotone submodular, so stale queue entries
// are always upper bounds and the output matches naive greedy, with ties
// broken toward the smallest node id. Returns min(k, |candidates|) seeds in
// selection order.
std::vector<NodeId> greedy_max_coverage(const TupleCollection& coll, unsigned k,
                                        Estimator bound,
                                        std::span<const NodeId> candidates);

struct EstimateTriple {
  double lower = 0, exact = 0, upper = 0;
};

struct SandwichResult {
  std::vector<NodeId> chosen;
  std::vector<NodeId> upper_seeds;
  std::vector<NodeId> lower_seeds;
  EstimateTriple at_upper;  // estimates at the upper-bound greedy solution
  EstimateTriple at_lower;
  double gamma_lower = 0;   // (1 - 1/e) * G(upper_seeds) / upper-bound estimate
  std::uint64_t l = 0;
  double f_lo = 0;  // filled by the pipeline
};

// Sandwich strategy: greedy on the upper and on the lower bound, then keep
// whichever set scores higher under the exact estimator. The objective itself
// is never optimized greedily, only evaluated. Also records the computable
// branch of the data-dependent approximation ratio.
SandwichResult sandwich(const TupleCollection& coll, const Instance& inst,
                        unsigned k, std::span<const NodeId> candidates);

struct OptLowerResult {
  double f_lo = 0;
  std::uint64_t tuples_used = 0;
  bool certified = false;  // a doubling round passed its confidence test
};

// Certified lower bound on the optimum of the lower-bound objective (and
// hence on f(S_opt)): doubling search over thresholds n/2^i, each tested with
// a Chernoff confidence bound on the greedy lower-coverage solution at level
// 1 - 1/(N * ceil(log2 n)). Samples draw from a dedicated stream, separate
// from the main collection.
OptLowerResult estimate_opt_lower(const Instance& inst, const SolverParams& params);

// Sample-size plan. l1 covers the union bound over all k-subsets at error
// e1, l2 the optimum's concentration at error e2; ln C(n,k) goes through
// log-gamma. The planned count is ceil(max(l1, l2) / f_lo).
double sample_bound_l1(std::uint64_t n, unsigned k, double N, double e1);
double sample_bound_l2(std::uint64_t n, double N, double e2);
std::uint64_t plan_sample_size(std::uint64_t n, unsigned k,
                               const SolverParams& params, double f_lo);

// Selection phases of the reverse sandwich pipeline (no final evaluation);
// split out so baselines can reuse it against a modified instance.
struct RsSelection {
  SandwichResult result;
  double f_lo = 0;
  std::uint64_t l = 0;
  double opt_lower_s = 0, sampling_s = 0, selection_s = 0;
};
RsSelection rs_select(const Instance& inst, const SolverParams& params);

// Full reverse sandwich run: opt lower bound, sample plan, collection,
// sandwich selection, Monte-Carlo evaluation of the chosen seeds.
SolverReport run_rs(const Instance& inst, const SolverParams& params);

}  // namespace mcim
