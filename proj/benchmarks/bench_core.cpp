#include <benchmark/benchmark.h>

#include <random>

#include "degenpred/degeneracy_classes.hpp"
#include "degenpred/prediction_pipeline.hpp"

namespace dp = degenpred;

namespace {

dp::Sequence noise(long len) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    std::vector<dp::cplx> v(static_cast<std::size_t>(len));
    for (auto& e : v) e = {nd(rng), 0.0};
    return dp::Sequence(-len / 2, v);
}

void BM_Ztrace(benchmark::State& st) {
    const auto g = dp::make_grid(static_cast<std::size_t>(st.range(0)));
    const auto x = noise(st.range(0) / 2);
    for (auto _ : st) benchmark::DoNotOptimize(dp::ztrace(x, g));
    st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_Ztrace)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_Transfer(benchmark::State& st) {
    const auto g = dp::make_grid(1 << 14);
    const dp::KernelSpec ks{2, 1, 4, static_cast<double>(st.range(0)), 1.2, dp::kPi};
    for (auto _ : st) benchmark::DoNotOptimize(dp::predictor_transfer(ks, g));
}
BENCHMARK(BM_Transfer)->Arg(3)->Arg(20);

void BM_Kernel(benchmark::State& st) {
    const auto g = dp::make_grid(1 << 14);
    const dp::KernelSpec ks{2, 1, 4, 3.0, 1.2, dp::kPi};
    for (auto _ : st) benchmark::DoNotOptimize(dp::predictor_kernel(ks, g));
}
BENCHMARK(BM_Kernel);

void BM_SaddleNorm(benchmark::State& st) {
    const dp::KernelSpec ks{2, 1, 4, static_cast<double>(st.range(0)), 1.2, dp::kPi};
    for (auto _ : st) benchmark::DoNotOptimize(dp::kernel_norm_saddle(ks));
}
BENCHMARK(BM_SaddleNorm)->Arg(3)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_MaskedPredict(benchmark::State& st) {
    const auto g = dp::make_grid(1 << 14);
    const auto x = noise(1 << 13);
    auto task = dp::PredictionTask::make(dp::KernelSpec{2, 1, 4, 10.0, 1.2, dp::kPi}, x.window(), {0, 0});
    task.mode = dp::PredictMode::masked_spectral;
    task.gap = dp::GapSpec{0.5, 4, dp::kPi};
    for (auto _ : st) benchmark::DoNotOptimize(dp::predict(x, task, g));
}
BENCHMARK(BM_MaskedPredict)->Unit(benchmark::kMillisecond);

void BM_Braided(benchmark::State& st) {
    const auto g = dp::make_grid(1 << 12);
    const auto x = noise(64);
    dp::BraidedSpec s;
    s.nu = dp::nu_scheme(2);
    for (auto _ : st) benchmark::DoNotOptimize(dp::braided_approximant(x, s, g, false));
}
BENCHMARK(BM_Braided)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
