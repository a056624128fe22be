#include "blgp/bandpass.hpp"
#include "blgp/demod.hpp"
#include "blgp/gp.hpp"
#include "blgp/kernels.hpp"
#include "blgp/sparse.hpp"
#include "blgp/spectral.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace blgp;

namespace {

TimeSeries random_series(std::size_t n, double span) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.0, span);
  std::normal_distribution<double> normal;
  std::vector<double> t(n);
  for (auto& x : t) x = u(gen);
  std::sort(t.begin(), t.end());
  std::vector<double> y(n);
  for (auto& v : y) v = normal(gen);
  return TimeSeries(t, y);
}

void BM_GramSinc(benchmark::State& state) {
  const auto obs = random_series(static_cast<std::size_t>(state.range(0)), 100.0);
  const auto spec = KernelSpec::sinc(SincParams(1.0, 0.3, 0.2));
  for (auto _ : state) benchmark::DoNotOptimize(gram_matrix(spec, obs.times()));
}
BENCHMARK(BM_GramSinc)->Arg(100)->Arg(400)->Arg(1600);

void BM_GramGsk(benchmark::State& state) {
  const auto obs = random_series(200, 100.0);
  const auto spec = KernelSpec::generalised_sinc(
      SincParams(1.0, 0.3, 0.2), SpectralEnvelope::triangular(0.3, 0.1), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gram_matrix(spec, obs.times()));
}
BENCHMARK(BM_GramGsk)->Arg(8)->Arg(64);

void BM_Posterior(benchmark::State& state) {
  const auto obs = random_series(static_cast<std::size_t>(state.range(0)), 100.0);
  const GPModel model(KernelSpec::centred_sinc(1.0, 0.5), 0.1);
  const auto q = linspace(0.0, 100.0, 500);
  for (auto _ : state) benchmark::DoNotOptimize(posterior_mean(model, obs, q));
}
BENCHMARK(BM_Posterior)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_LogLikelihood(benchmark::State& state) {
  const auto obs = random_series(static_cast<std::size_t>(state.range(0)), 100.0);
  const GPModel model(KernelSpec::centred_sinc(1.0, 0.5), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(log_marginal_likelihood(model, obs));
}
BENCHMARK(BM_LogLikelihood)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_BandKernel(benchmark::State& state) {
  const BandKernel k(KernelSpec::spectral_mixture(1.0, 0.4, 0.01), Band(0.3, 0.5),
                     static_cast<int>(state.range(0)));
  double tau = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(k(tau));
    tau += 0.01;
  }
}
BENCHMARK(BM_BandKernel)->Arg(64)->Arg(512);

void BM_SparseVsExact(benchmark::State& state) {
  const auto obs = random_series(600, 53.0);
  const GPModel model(KernelSpec::centred_sinc(1.0, 1.0), 0.01);
  const auto q = linspace(0.0, 53.0, 600);
  const bool sparse = state.range(0) == 1;
  const auto inducing = nyquist_inducing(model.kernel(), 0.0, 53.0);
  for (auto _ : state) {
    if (sparse) {
      benchmark::DoNotOptimize(sparse_posterior(obs, model.kernel(), model.noise_var(), inducing, q, true));
    } else {
      benchmark::DoNotOptimize(posterior_mean(model, obs, q));
    }
  }
  state.SetLabel(sparse ? "sparse" : "exact");
}
BENCHMARK(BM_SparseVsExact)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Demodulate(benchmark::State& state) {
  const auto obs = random_series(static_cast<std::size_t>(state.range(0)), 30.0);
  const auto q = linspace(0.0, 30.0, 400);
  for (auto _ : state) {
    benchmark::DoNotOptimize(demodulate(obs, SincParams(1.0, 2.0, 1.0), 0.04, q, true));
  }
}
BENCHMARK(BM_Demodulate)->Arg(240)->Arg(960)->Unit(benchmark::kMillisecond);

void BM_Periodogram(benchmark::State& state) {
  const auto obs = random_series(static_cast<std::size_t>(state.range(0)), 100.0);
  for (auto _ : state) benchmark::DoNotOptimize(periodogram(obs));
}
BENCHMARK(BM_Periodogram)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
