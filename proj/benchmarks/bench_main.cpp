#include "aet/focusing.hpp"
#include "aet/phantom.hpp"
#include "aet/recon2d.hpp"
#include "aet/spectral.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace aet;

namespace {

ScalarField table1_sigma(int n) { return rasterize(builtin_phantom("table1-2d"), Grid(2, n), PhantomOutput::Sigma); }

void BM_SpectralDerivative(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto f = sample(Grid(2, n), [](auto x) { return std::cos(3.0 * x[0]) * std::sin(2.0 * x[1]); });
  for (auto _ : state) benchmark::DoNotOptimize(spectral_derivative(f, 0));
}
BENCHMARK(BM_SpectralDerivative)->Arg(129)->Arg(257)->Arg(513)->Unit(benchmark::kMillisecond);

void BM_PoissonNeumann3D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto f = sample(Grid(3, n), [](auto x) { return std::cos(M_PI * (x[0] + 1.0)) * x[1] * x[2]; });
  for (auto _ : state) benchmark::DoNotOptimize(poisson_neumann(f));
}
BENCHMARK(BM_PoissonNeumann3D)->Arg(33)->Arg(65)->Unit(benchmark::kMillisecond);

void BM_SolvePotential(benchmark::State& state) {
  const auto sigma = table1_sigma(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_potential(sigma, {1}));
}
BENCHMARK(BM_SolvePotential)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond);

void BM_Focus(benchmark::State& state) {
  Grid g(2, static_cast<int>(state.range(0)));
  const auto sigma = table1_sigma(g.n());
  const auto u1 = solve_potential(sigma, {1});
  const auto s = measure_linearized(power_density(sigma, u1, u1), reference_array(g));
  for (auto _ : state) benchmark::DoNotOptimize(focus(s, g));
}
BENCHMARK(BM_Focus)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

void BM_Iteration0(benchmark::State& state) {
  Grid g(2, static_cast<int>(state.range(0)));
  const auto sigma = table1_sigma(g.n());
  const auto m = power_densities(sigma, solve_potential(sigma, {1}), solve_potential(sigma, {2}));
  const ScalarField one(g, 1.0);
  const auto m0 = power_densities(one, solve_potential(one, {1}), solve_potential(one, {2}));
  const auto data = perturbation_data(m, m0);
  for (auto _ : state) benchmark::DoNotOptimize(iteration0(data));
}
BENCHMARK(BM_Iteration0)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
