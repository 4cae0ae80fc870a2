#include <benchmark/benchmark.h>

#include "rankagg/metrics.hpp"
#include "rankagg/oracle.hpp"
#include "rankagg/rng.hpp"
#include "rankagg/surrogate.hpp"
#include "rankagg/synthgen.hpp"

using namespace rankagg;

static void BM_EmpiricalAuc(benchmark::State& state) {
    const auto d = gen_sigmoid_pair({.n = static_cast<std::size_t>(state.range(0)), .tau = 2.0, .seed = 1});
    const auto s = d.eta->column(0);
    const auto y = d.labels.column(0);
    for (auto _ : state) benchmark::DoNotOptimize(bipartite_auc_empirical(s, y));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EmpiricalAuc)->RangeMultiplier(10)->Range(1000, 1000000)->Complexity();

static void BM_LabelAggAuc(benchmark::State& state) {
    const auto d = gen_sigmoid_pair({.n = static_cast<std::size_t>(state.range(0)), .tau = 2.0, .seed = 1});
    const auto s = d.eta->column(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(label_agg_auc(s, d.labels, Aggregator::sum(), CostMatrix::abs_diff(2)));
}
BENCHMARK(BM_LabelAggAuc)->RangeMultiplier(10)->Range(1000, 1000000);

static void BM_HypothesisEnumeration(benchmark::State& state) {
    const auto d = gen_gaussian_bilevel(static_cast<std::size_t>(state.range(0)), 0);
    const HypothesisSpace h(d.labels, 3);
    for (auto _ : state) benchmark::DoNotOptimize(maximizer_sets(h, 5).label_agg.size());
    state.counters["hypotheses"] = static_cast<double>(h.total());
}
BENCHMARK(BM_HypothesisEnumeration)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_WeakOrderSearch(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    RandomStream r(0, Stream::Eval);
    Matrix<double> w(n, n);
    for (double& v : w.data()) v = r.uniform();
    for (auto _ : state) benchmark::DoNotOptimize(optimal_weak_order(w).value);
}
BENCHMARK(BM_WeakOrderSearch)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);

static void BM_SurrogateGradient(benchmark::State& state) {
    const auto d = gen_sigmoid_pair({.n = static_cast<std::size_t>(state.range(0)), .tau = 2.0, .seed = 1});
    const auto scorer = Scorer::mlp(2, std::vector<std::size_t>{16}, 0);
    const auto obj = ObjectiveSpec::label_agg(Aggregator::sum(), CostMatrix::abs_diff(2));
    for (auto _ : state) benchmark::DoNotOptimize(surrogate_gradient(scorer, d, obj, SurrogateKind::Logistic));
}
BENCHMARK(BM_SurrogateGradient)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
