#include "blgp/error.hpp"
#include "blgp/gp.hpp"
#include "blgp/synthetic.hpp"
#include "blgp/training.hpp"

#include <doctest.h>

using namespace blgp;

namespace {

TimeSeries sinc_draw(std::uint64_t seed, std::size_t n, double dt, double noise) {
  SyntheticRecipe r;
  r.kind = SyntheticKind::GpSincDraw;
  r.length = n;
  r.dt = dt;
  r.sampling = Sampling::JitteredUniform;
  r.kernel = KernelSpec::centred_sinc(1.0, 0.5);
  const auto data = make_synthetic(r, seed);
  return corrupt(data.series, noise, data.series.size(), seed + 1000);
}

double delta_of(const GPModel& m) {
  return std::get<CentredSinc>(m.kernel().variant()).delta;
}

}  // namespace

TEST_CASE("config validation") {
  TrainingConfig c;
  CHECK_NOTHROW(c.validate());
  c.max_iters = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = {};
  c.restarts = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = {};
  c.log_lower = 3.0;
  c.log_upper = 3.0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("parameter packing round trip") {
  const std::vector<GPModel> models = {
      GPModel(KernelSpec::centred_sinc(1.5, 0.3), 0.2),
      GPModel(KernelSpec::sinc(SincParams(0.7, 1.2, 0.4)), 0.01),
      GPModel(KernelSpec::spectral_mixture(2.0, 0.5, 0.03), 0.1),
      GPModel(KernelSpec::sum({KernelSpec::sinc(SincParams(1.0, 0.1, 0.05)),
                               KernelSpec::sinc(SincParams(0.5, 0.4, 0.05))}),
              0.3),
  };
  for (const auto& m : models) {
    const auto back = unpack_parameters(pack_parameters(m), m);
    CHECK(back.noise_var() == doctest::Approx(m.noise_var()));
    for (double tau : {0.0, 0.4, 2.5, -7.0}) {
      CHECK(kernel_eval(back.kernel(), tau) == doctest::Approx(kernel_eval(m.kernel(), tau)));
    }
  }
  const GPModel m(KernelSpec::centred_sinc(1.0, 1.0), 0.1);
  CHECK_THROWS_AS(unpack_parameters(Eigen::VectorXd::Zero(5), m), ValidationError);
}

TEST_CASE("unpacking clamps to the bounds") {
  const GPModel shape(KernelSpec::sinc(SincParams(1.0, 1.0, 1.0)), 0.1);
  Eigen::VectorXd x(4);
  x << 100.0, -3.0, -100.0, -100.0;
  const auto m = unpack_parameters(x, shape, -10.0, 10.0, 0.05);
  const auto& p = std::get<Sinc>(m.kernel().variant()).params;
  CHECK(p.sigma2() == doctest::Approx(std::exp(10.0)));
  CHECK(p.xi0() == 0.0);
  CHECK(p.delta() == doctest::Approx(0.05));
  CHECK(m.noise_var() == doctest::Approx(std::exp(-10.0)));
}

TEST_CASE("periodogram initialisation lands near the dominant frequency") {
  const auto t = linspace(0.0, 199.0, 200);
  std::vector<double> y(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) y[i] = std::sin(2.0 * std::numbers::pi * 0.12 * t[i]);
  const TimeSeries obs(t, y);
  const GPModel shape(KernelSpec::sinc(SincParams(1.0, 0.3, 0.1)), 0.1);
  const auto g = initial_guess(obs, shape, {}, 0);
  const auto& p = std::get<Sinc>(g.kernel().variant()).params;
  CHECK(p.xi0() == doctest::Approx(0.12).epsilon(0.05));
  CHECK(p.sigma2() == doctest::Approx(0.5).epsilon(0.05));
  CHECK(g.noise_var() == doctest::Approx(0.05).epsilon(0.05));
  CHECK_THROWS_AS(initial_guess(TimeSeries({0.0, 1.0}, {0.0, 1.0}), shape, {}, 0), ValidationError);
}

TEST_CASE("fit improves the likelihood and records a monotone trace") {
  const auto obs = sinc_draw(5, 150, 0.5, 0.1);
  const GPModel start(KernelSpec::centred_sinc(1.0, 1.0), 0.1);
  for (auto kind : {OptimizerKind::DirectionSet, OptimizerKind::QuasiNewton}) {
    TrainingConfig cfg;
    cfg.optimizer = kind;
    cfg.restarts = 2;
    const auto r = fit(obs, start, cfg);
    CHECK_FALSE(r.best_effort);
    CHECK(std::isfinite(r.log_likelihood));
    CHECK(r.log_likelihood == doctest::Approx(log_marginal_likelihood(r.model, obs)));
    REQUIRE_FALSE(r.trace.empty());
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
      CHECK(r.trace[i].objective >= r.trace[i - 1].objective - 1e-9);
    }
    CHECK(r.log_likelihood >= r.trace.front().objective - 1e-9);
    CHECK(delta_of(r.model) == doctest::Approx(0.5).epsilon(0.25));
  }
}

TEST_CASE("fit is deterministic") {
  const auto obs = sinc_draw(9, 80, 0.5, 0.1);
  const GPModel start(KernelSpec::centred_sinc(1.0, 1.0), 0.1);
  TrainingConfig cfg;
  cfg.restarts = 4;
  cfg.seed = 3;
  const auto a = fit(obs, start, cfg);
  const auto b = fit(obs, start, cfg);
  CHECK(a.model == b.model);
  CHECK(a.log_likelihood == b.log_likelihood);
}

TEST_CASE("fit rejects too few observations") {
  const GPModel start(KernelSpec::centred_sinc(1.0, 1.0), 0.1);
  CHECK_THROWS_AS(fit(TimeSeries({0.0, 1.0, 2.0}, {1.0, 0.0, 1.0}), start), ValidationError);
}

TEST_CASE("bandwidth never collapses below the frequency resolution") {
  // Two pure sinusoids: the likelihood alone would drive delta to zero.
  const auto t = linspace(0.0, 100.0, 201);
  std::vector<double> y(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    y[i] = std::sin(2.0 * std::numbers::pi * 0.1 * t[i]) + std::sin(2.0 * std::numbers::pi * 0.4 * t[i]);
  }
  const GPModel start(KernelSpec::sinc(SincParams(1.0, 0.1, 0.05)), 0.1);
  const auto r = fit(TimeSeries(t, y), start);
  CHECK(std::get<Sinc>(r.model.kernel().variant()).params.delta() >= 1.0 / 100.0 * (1.0 - 1e-12));
}
