#include "hetvol/additive.hpp"
#include "hetvol/garch_logistic.hpp"
#include "hetvol/simulate.hpp"
#include "hetvol/smoother.hpp"
#include "hetvol/variance_models.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace hetvol;

namespace {

const GarchLParams kSicily{7.391, 0.222, 0.565, 10.171, 101.2, 0.012, 513, LogisticTime::SinceActivation};

const SimResult& sample() {
    static const SimResult sim = [] {
        SimSpec spec;
        spec.seed = 42;
        return simulate(spec);
    }();
    return sim;
}

void BM_NegLogLik(benchmark::State& state) {
    const auto& eps = sample().eps;
    for (auto _ : state) benchmark::DoNotOptimize(neg_loglik(kSicily, eps));
}
BENCHMARK(BM_NegLogLik);

void BM_NegLogLikGradient(benchmark::State& state) {
    const auto& eps = sample().eps;
    std::array<double, GarchLParams::kCount> g{};
    for (auto _ : state) {
        benchmark::DoNotOptimize(neg_loglik(kSicily, eps, &g));
        benchmark::ClobberMemory();
    }
}
BENCHMARK(BM_NegLogLikGradient);

void BM_SmootherGcv(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> z(0.0, 0.3);
    std::vector<double> x(n), y(n), w(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = u(rng);
        y[i] = std::sin(6.0 * x[i]) + z(rng);
    }
    const auto basis = SplineBasis::uniform_for(x, 20);
    const auto grid = default_lambda_grid();
    for (auto _ : state) {
        const auto sel = select_lambda_gcv(x, y, w, basis, grid);
        benchmark::DoNotOptimize(fit_smoother(x, y, w, sel.lambda, basis));
    }
}
BENCHMARK(BM_SmootherGcv)->Arg(400)->Arg(1461)->Unit(benchmark::kMicrosecond);

void BM_MeanModelBackfit(benchmark::State& state) {
    const auto& sim = sample();
    for (auto _ : state) benchmark::DoNotOptimize(fit_mean_model(sim.prices, sim.calendar, sim.res));
}
BENCHMARK(BM_MeanModelBackfit)->Unit(benchmark::kMillisecond);

void BM_FitGarchL(benchmark::State& state) {
    const auto& eps = sample().eps;
    for (auto _ : state) benchmark::DoNotOptimize(fit_garchl(eps, kSicily.t0_index));
}
BENCHMARK(BM_FitGarchL)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
