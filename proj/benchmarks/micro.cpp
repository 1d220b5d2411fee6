#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include <mdiica/basis.hpp>
#include <mdiica/bench.hpp>
#include <mdiica/mdi_density.hpp>
#include <mdiica/prep.hpp>
#include <mdiica/solvers.hpp>

using namespace mdiica;

namespace {

Vector sample_projection(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<SourceSpec> specs(2);
    specs[0].family = Family::uniform;
    specs[1].family = Family::exponential;
    const Matrix src = generate_sources(specs, n, rng);
    return (src.col(0) + src.col(1)) / std::sqrt(2.0);
}

Matrix whitened_mixture(int n, int m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<SourceSpec> specs(m);
    for (auto& s : specs) s.family = Family::uniform;
    const Matrix src = generate_sources(specs, n, rng);
    const Matrix raw = src * random_mixing(m, rng).transpose();
    const WhiteningTransform t = fit_whitening(raw);
    return apply_whitening(t, raw);
}

void bm_build_histogram(benchmark::State& state) {
    const Vector y = sample_projection(16900, 11);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_histogram(y, 500, -5.0, 5.0));
    }
}
BENCHMARK(bm_build_histogram)->Unit(benchmark::kMicrosecond);

void bm_fit_tilt(benchmark::State& state, const char* name) {
    const Vector y = sample_projection(16900, 11);
    const GridHistogram h = build_histogram(y, 500, -5.0, 5.0);
    const BasisSet basis = BasisSet::from_name(name);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_tilt_wls(h, basis));
    }
}
BENCHMARK_CAPTURE(bm_fit_tilt, mica2, "mica2")->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(bm_fit_tilt, mica4, "mica4")->Unit(benchmark::kMicrosecond);

void bm_whitening(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::vector<SourceSpec> specs(3);
    for (auto& s : specs) s.family = Family::uniform;
    const Matrix src = generate_sources(specs, 16900, rng);
    const Matrix raw = src * random_mixing(3, rng).transpose();
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_whitening(raw));
    }
}
BENCHMARK(bm_whitening)->Unit(benchmark::kMicrosecond);

void bm_solver_iteration(benchmark::State& state, const char* method) {
    const Matrix xw = whitened_mixture(16900, 3, 21);
    SolverConfig cfg;
    cfg.max_outer_iters = 1;
    cfg.seed = 5;
    for (auto _ : state) {
        if (std::string(method) == "mdiica") {
            benchmark::DoNotOptimize(mdiica::mdiica(xw, cfg));
        } else {
            benchmark::DoNotOptimize(fastica_single(xw, BasisId::G0, cfg));
        }
    }
}
BENCHMARK_CAPTURE(bm_solver_iteration, mdiica, "mdiica")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_solver_iteration, fastica, "fastica")->Unit(benchmark::kMillisecond);

void bm_full_separation(benchmark::State& state) {
    const Matrix xw = whitened_mixture(static_cast<int>(state.range(0)), 2, 33);
    SolverConfig cfg;
    cfg.seed = 5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mdiica::mdiica(xw, cfg));
    }
}
BENCHMARK(bm_full_separation)->Arg(1000)->Arg(16900)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
