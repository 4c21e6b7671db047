#pragma once

#include "mcim/solver.hpp"

namespace mcim {

// Plain greedy on the unbiased (exact) estimator. No lazy evaluation: the
// estimator is not submodular, so stale queue bounds would be unsound. The
// sample count follows the l2 bound over the same certified lower-bound
// machinery as the main algorithm. Expected to be slow; progress goes to
// stderr.
SolverReport run_nr_greedy(const Instance& inst, const SolverParams& params);

// Competition-oblivious baseline: runs the reverse sandwich pipeline against
// a copy of the instance with the existing cascades removed (samples never
// stop at their seeds, so upper and lower sets coincide), then reports the
// chosen seeds' true multi-cascade influence under the original instance.
SolverReport run_maxinf(const Instance& inst, const SolverParams& params);

}  // namespace mcim
