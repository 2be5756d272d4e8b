#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "cubiclab/diagnostics.hpp"
#include "cubiclab/evolve.hpp"
#include "cubiclab/fft.hpp"

using namespace cubiclab;

namespace {

ComplexField packet(std::size_t n) {
  const GridSpec g(n, 100.0);
  ComplexField u(g);
  for (std::size_t i = 0; i < n; ++i) u.values[i] = std::exp(-0.5 * g.x(i) * g.x(i)) * std::polar(1.0, 0.7 * g.x(i));
  return u;
}

void BM_Fft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<Complex> buf(n);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  for (auto& v : buf) v = {nd(rng), nd(rng)};
  for (auto _ : state) {
    fft::transform(buf, buf, fft::Direction::forward);
    fft::transform(buf, buf, fft::Direction::backward);
    benchmark::DoNotOptimize(buf.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fft)->RangeMultiplier(4)->Range(256, 65536)->Complexity(benchmark::oNLogN);

void BM_Trilinear(benchmark::State& state) {
  const auto u = packet(static_cast<std::size_t>(state.range(0)));
  const auto c = state.range(1) == 0 ? constant_symbol(1.0) : smoothed_symbol(1.0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(eval_trilinear(c, u));
}
BENCHMARK(BM_Trilinear)->ArgsProduct({{1024, 8192}, {0, 1}})->ArgNames({"n", "smoothed"});

void BM_Ifrk4Step(benchmark::State& state) {
  const auto u = packet(static_cast<std::size_t>(state.range(0)));
  SolverConfig cfg;
  cfg.dt = 1e-3;
  Integrator integ(u.grid, schrodinger_dispersion(), constant_symbol(1.0), cfg);
  auto coeffs = to_spectral(u).coeffs;
  double t = 0.0;
  for (auto _ : state) {
    integ.advance(coeffs, t);
    t += cfg.dt;
  }
}
BENCHMARK(BM_Ifrk4Step)->Arg(1024)->Arg(8192);

void BM_MorawetzPrefix(benchmark::State& state) {
  const auto u = packet(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(interaction_morawetz(u, u));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MorawetzPrefix)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_MorawetzDirect(benchmark::State& state) {
  const auto u = packet(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const auto d = densities(u);
    double s = 0.0;
    for (std::size_t x = 0; x < d.mass.size(); ++x)
      for (std::size_t y = x + 1; y < d.mass.size(); ++y) s += d.mass[x] * d.momentum[y] - d.mass[y] * d.momentum[x];
    benchmark::DoNotOptimize(s);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MorawetzDirect)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oNSquared);

}  // namespace

BENCHMARK_MAIN();
