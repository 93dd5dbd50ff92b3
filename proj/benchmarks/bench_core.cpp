#include <benchmark/benchmark.h>

#include <random>

#include <cspectra/bodycalc.hpp>
#include <cspectra/harmonics.hpp>
#include <cspectra/transforms.hpp>

using namespace cspectra;

namespace {

HarmonicSpectrum random_spectrum(int n, int L, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    HarmonicSpectrum s(n, L);
    for (double& c : s.raw()) c = gauss(rng);
    return s;
}

void bench_analyze(benchmark::State& state) {
    auto grid = SphereGrid::make(3, static_cast<int>(state.range(0)));
    ScalarField f = synthesize(random_spectrum(3, grid->work_degree(), 1), grid);
    for (auto _ : state) benchmark::DoNotOptimize(analyze(f, grid->work_degree()));
}
BENCHMARK(bench_analyze)->Arg(24)->Arg(48);

void bench_synthesize(benchmark::State& state) {
    auto grid = SphereGrid::make(3, static_cast<int>(state.range(0)));
    HarmonicSpectrum s = random_spectrum(3, grid->work_degree(), 2);
    for (auto _ : state) benchmark::DoNotOptimize(synthesize(s, grid));
}
BENCHMARK(bench_synthesize)->Arg(24)->Arg(48);

void bench_cosine_quadrature(benchmark::State& state) {
    auto grid = SphereGrid::make(3, static_cast<int>(state.range(0)));
    ScalarField f = synthesize(random_spectrum(3, 12, 3), grid);
    for (auto _ : state)
        benchmark::DoNotOptimize(cosine_transform(f, TransformBackend::quadrature));
}
BENCHMARK(bench_cosine_quadrature)->Arg(24)->Arg(48);

void bench_project_i(benchmark::State& state) {
    auto grid = SphereGrid::make(3, 48);
    HarmonicSpectrum s = random_spectrum(3, 6, 4);
    s *= 0.01 / s.l2_norm();
    ScalarField f = synthesize(s, grid) + 1.0;
    SupportField body = SupportField::certify(f);
    for (auto _ : state)
        benchmark::DoNotOptimize(project_i(body, static_cast<int>(state.range(0))));
}
BENCHMARK(bench_project_i)->Arg(1)->Arg(2);

}  // namespace

BENCHMARK_MAIN();
