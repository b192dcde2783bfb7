#include <benchmark/benchmark.h>

#include <protnum/enumeration.hpp>
#include <protnum/protection.hpp>
#include <protnum/sampling.hpp>

using namespace protnum;

namespace
{

void series_product(benchmark::State &state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto t = tree_series(make_family("polya"), n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(t * t);
    }
}
BENCHMARK(series_product)->Arg(64)->Arg(128)->Arg(256);

void series_product_float(benchmark::State &state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto t = to_float_series(tree_series(make_family("polya"), n), bits_for_digits(64));
    for (auto _ : state) {
        benchmark::DoNotOptimize(t * t);
    }
}
BENCHMARK(series_product_float)->Arg(64)->Arg(128)->Arg(256);

void tree_series_solve(benchmark::State &state)
{
    const auto &names = builtin_family_names();
    const auto family = make_family(names[static_cast<std::size_t>(state.range(0))]);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tree_series(family, 256));
    }
    state.SetLabel(family.name);
}
BENCHMARK(tree_series_solve)->DenseRange(0, 6)->Unit(benchmark::kMillisecond);

void tk_ladder(benchmark::State &state)
{
    const auto family = make_family("polya");
    for (auto _ : state) {
        benchmark::DoNotOptimize(tk_sequence(family, static_cast<int>(state.range(0)), 128));
    }
}
BENCHMARK(tk_ladder)->Arg(2)->Arg(6)->Unit(benchmark::kMillisecond);

void singularity(benchmark::State &state)
{
    const auto family = make_family(state.range(0) == 0 ? "polya" : "non-plane-binary");
    const auto t = tree_series(family, 256);
    for (auto _ : state) {
        benchmark::DoNotOptimize(find_singularity(family, 64, t));
    }
    state.SetLabel(family.name);
}
BENCHMARK(singularity)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void root_report(benchmark::State &state)
{
    const auto family = make_family(builtin_family_names()[static_cast<std::size_t>(state.range(0))]);
    for (auto _ : state) {
        benchmark::DoNotOptimize(root_limits(family, {30}));
    }
    state.SetLabel(family.name);
}
BENCHMARK(root_report)->DenseRange(0, 6)->Unit(benchmark::kMillisecond);

void sample_trees(benchmark::State &state)
{
    const auto family = make_family(state.range(0) == 0 ? "plane" : "polya");
    const tree_sampler sampler(family, 1000);
    std::uint64_t trial = 0;
    for (auto _ : state) {
        auto rng = trial_engine(1, trial++);
        benchmark::DoNotOptimize(sampler.sample(1000, rng));
    }
    state.SetLabel(family.name);
}
BENCHMARK(sample_trees)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
