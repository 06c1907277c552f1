#include <benchmark/benchmark.h>

#include <random>

#include "phasefront/expm.hpp"
#include "phasefront/propagate.hpp"
#include "phasefront/stft.hpp"
#include "phasefront/symplectic.hpp"
#include "phasefront/wavefront.hpp"

using namespace phasefront;

namespace {

CMat random_generator(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  CMat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cplx(u(rng), u(rng));
  return a;
}

void bench_expm_8x8(benchmark::State& state) {
  const CMat a = random_generator(8, 1);
  for (auto _ : state) benchmark::DoNotOptimize(expm(a));
}
BENCHMARK(bench_expm_8x8);

void bench_singular_space_d3(benchmark::State& state) {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  Mat g(6, 6), s(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      g(i, j) = u(rng);
      s(i, j) = u(rng);
    }
  const Mat re = g.transpose() * g;
  const Mat im = 0.5 * (s + s.transpose());
  const auto q = QuadraticHamiltonian::create(
      3, re.cast<cplx>() + cplx(0, 1) * im.cast<cplx>());
  const auto h = hamilton_map(q);
  for (auto _ : state) benchmark::DoNotOptimize(singular_space(h));
}
BENCHMARK(bench_singular_space_d3);

void bench_stft_sampled_1024(benchmark::State& state) {
  const auto f = SampledField::sample(1, 12.0, 1024, [](const Vec& x) {
    return cplx(std::pow(M_PI, -0.25) * std::exp(-0.5 * x(0) * x(0)), 0.0);
  });
  for (auto _ : state)
    benchmark::DoNotOptimize(stft_sampled(f, GaussianWindow{1}));
}
BENCHMARK(bench_stft_sampled_1024);

void bench_splitstep_4096(benchmark::State& state) {
  const auto u0 = GaussianChirpState::single(1.0, cplx(0, 1) * CMat::Identity(1, 1),
                                             CVec::Zero(1));
  const auto f0 = u0.sample(16.0, 4096);
  const auto q = QuadraticHamiltonian::harmonic_oscillator(1);
  for (auto _ : state)
    benchmark::DoNotOptimize(propagate_splitstep(f0, q, 0.1, state.range(0)));
}
BENCHMARK(bench_splitstep_4096)->Arg(64)->Arg(256);

void bench_estimate_wf_closed_form(benchmark::State& state) {
  const auto V = closed_form_evaluator(Chirp{Mat::Identity(1, 1)});
  WfEstimateParams params;
  params.a_min = 0.02;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_wf(V, params));
}
BENCHMARK(bench_estimate_wf_closed_form);

}  // namespace

BENCHMARK_MAIN();
