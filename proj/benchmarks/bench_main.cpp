#include <benchmark/benchmark.h>

#include <memory>

#include "mcim/diffusion.hpp"
#include "mcim/probability.hpp"
#include "mcim/sampling.hpp"
#include "mcim/solver.hpp"
#include "mcim/synthetic.hpp"

using namespace mcim;

namespace {

struct Bench {
  std::unique_ptr<DirectedGraph> graph;
  std::unique_ptr<Instance> instance;
};

// 20k nodes, 200k edges, one existing cascade seeding 1% of the nodes.
const Bench& instance(SchemeKind scheme) {
  static auto make = [](SchemeKind kind) {
    auto b = std::make_unique<Bench>();
    DirectedGraph base = random_graph(20000, 200000, 12);
    ProbabilityScheme s;
    s.kind = kind;
    s.p = 0.02;
    s.mean = 0.02;
    s.rng_seed = 13;
    b->graph = std::make_unique<DirectedGraph>(assign_probabilities(base, s));
    CascadeConfig cfg;
    cfg.cascade_names.push_back("c1");
    std::vector<NodeId> seeds;
    Rng rng = make_rng(14);
    while (seeds.size() < 200)
      seeds.push_back(static_cast<NodeId>(rng() % 20000));
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    cfg.existing_seeds.push_back(std::move(seeds));
    cfg.activation.kind = ActivationKind::cascade_order;
    cfg.activation.rng_seed = 15;
    b->instance = std::make_unique<Instance>(*b->graph, std::move(cfg));
    return b;
  };
  static auto wc = make(SchemeKind::weighted_cascade);
  static auto uni = make(SchemeKind::uniform);
  return scheme == SchemeKind::uniform ? *uni : *wc;
}

void BM_TupleGeneration(benchmark::State& state, SchemeKind scheme) {
  const Bench& b = instance(scheme);
  std::uint64_t seed = 100;
  const std::uint64_t count = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    TupleCollection coll = TupleCollection::generate(*b.instance, count, seed++, 1);
    benchmark::DoNotOptimize(coll.total_edges_tested());
  }
  state.SetItemsProcessed(state.iterations() * count);
}

void BM_MonteCarloTrials(benchmark::State& state) {
  const Bench& b = instance(SchemeKind::weighted_cascade);
  std::vector<NodeId> seeds;
  for (NodeId v = 0; v < 50; ++v) seeds.push_back(v * 7);
  std::sort(seeds.begin(), seeds.end());
  std::uint64_t seed = 200;
  const std::uint64_t trials = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    const InfluenceEstimate est =
        estimate_influence(*b.instance, seeds, trials, seed++, 1);
    benchmark::DoNotOptimize(est.mean);
  }
  state.SetItemsProcessed(state.iterations() * trials);
}

void BM_GreedySelection(benchmark::State& state) {
  const Bench& b = instance(SchemeKind::weighted_cascade);
  const TupleCollection coll = TupleCollection::generate(*b.instance, 200000, 42, 1);
  for (auto _ : state) {
    const auto picked = greedy_max_coverage(
        coll, 50, Estimator::upper_bound, b.instance->candidates());
    benchmark::DoNotOptimize(picked.size());
  }
}

void BM_ExactEstimate(benchmark::State& state) {
  const Bench& b = instance(SchemeKind::weighted_cascade);
  const TupleCollection coll = TupleCollection::generate(*b.instance, 200000, 43, 1);
  std::vector<NodeId> seeds = greedy_max_coverage(
      coll, 50, Estimator::upper_bound, b.instance->candidates());
  std::sort(seeds.begin(), seeds.end());
  EvalWorkspace ws;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        estimate(coll, *b.instance, seeds, Estimator::exact, ws));
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_TupleGeneration, weighted_cascade, SchemeKind::weighted_cascade)
    ->Arg(10000)
    ->Arg(50000)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TupleGeneration, uniform, SchemeKind::uniform)
    ->Arg(10000)
    ->Arg(50000)
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloTrials)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GreedySelection)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactEstimate)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
