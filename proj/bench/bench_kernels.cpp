// Serial reference kernels against their OpenMP counterparts. Run with OMP_NUM_THREADS or
// --benchmark_filter to focus on one kernel.
#include <benchmark/benchmark.h>

#include "bsa/kernels.hpp"
#include "bsa/polynomial.hpp"
#include "bsa/random.hpp"

namespace {

bsa::TruthTable random_table(int n) {
    bsa::Stream rng(7, static_cast<std::uint64_t>(n));
    std::vector<std::uint64_t> words(n >= 6 ? std::size_t{1} << (n - 6) : 1);
    for (auto& w : words) w = rng();
    if (n < 6) words[0] &= (std::uint64_t{1} << (1 << n)) - 1;
    return bsa::TruthTable::from_words(n, std::move(words));
}

std::vector<double> random_values(std::size_t count) {
    bsa::Stream rng(11, count);
    std::vector<double> v(count);
    for (auto& x : v) x = rng.normal();
    return v;
}

template <auto Kernel>
void profile(benchmark::State& state) {
    const auto f = random_table(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(f));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.size()));
}

template <auto Kernel>
void walsh_hadamard(benchmark::State& state) {
    const auto base = random_values(std::size_t{1} << state.range(0));
    std::vector<double> data;
    for (auto _ : state) {
        data = base;
        Kernel(data);
        benchmark::DoNotOptimize(data.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(base.size()));
}

template <auto Kernel>
void pairwise_sum(benchmark::State& state) {
    const auto values = random_values(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(values));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void sign_table(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto p = bsa::generate({bsa::GeneratorKind::random_dense, n, {}, 2, 1, 5});
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(p));
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}

namespace serial = bsa::kernels::serial;
namespace parallel = bsa::kernels::parallel;

BENCHMARK(profile<serial::sensitivity_profile>)->Name("profile/serial")->Arg(16)->Arg(20)->Arg(22);
BENCHMARK(profile<parallel::sensitivity_profile>)->Name("profile/parallel")->Arg(16)->Arg(20)->Arg(22);
BENCHMARK(walsh_hadamard<serial::walsh_hadamard>)->Name("walsh_hadamard/serial")->Arg(16)->Arg(20);
BENCHMARK(walsh_hadamard<parallel::walsh_hadamard>)->Name("walsh_hadamard/parallel")->Arg(16)->Arg(20);
BENCHMARK(pairwise_sum<serial::pairwise_sum>)->Name("pairwise_sum/serial")->Arg(1 << 16)->Arg(1 << 22);
BENCHMARK(pairwise_sum<parallel::pairwise_sum>)->Name("pairwise_sum/parallel")->Arg(1 << 16)->Arg(1 << 22);
BENCHMARK(sign_table<serial::sign_table>)->Name("sign_table/serial")->Arg(12)->Arg(16);
BENCHMARK(sign_table<parallel::sign_table>)->Name("sign_table/parallel")->Arg(12)->Arg(16);

} // namespace

BENCHMARK_MAIN();
