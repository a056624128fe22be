#include "blgp/demod.hpp"
#include "blgp/error.hpp"
#include "blgp/synthetic.hpp"

#include <doctest.h>

#include <random>

using namespace blgp;

TEST_CASE("carrier config") {
  const CarrierConfig c(2.0, 1.0, 1.0);
  CHECK(c.warnings().empty());
  CHECK(c.modulated() == SincParams(1.0, 2.0, 1.0));
  CHECK_FALSE(CarrierConfig(0.4, 1.0, 1.0).warnings().empty());
  CHECK_THROWS_AS(CarrierConfig(-1.0, 1.0, 1.0), ValidationError);
}

TEST_CASE("modulation") {
  const std::vector<double> t = {0.0, 0.125, 0.25};
  const StereoChannels ch(TimeSeries(t, {1.0, 1.0, 1.0}), TimeSeries(t, {2.0, 2.0, 2.0}));
  const auto y = modulate(ch, 2.0, t);
  CHECK(y.values()[0] == doctest::Approx(1.0));
  CHECK(y.values()[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(y.values()[2] == doctest::Approx(-1.0).epsilon(1e-12));
  const std::vector<double> other = {0.0, 0.1, 0.25};
  CHECK_THROWS_AS(modulate(ch, 2.0, other), ValidationError);
  CHECK_THROWS_AS(StereoChannels(TimeSeries(t, {1.0, 1.0, 1.0}), TimeSeries(other, {1.0, 1.0, 1.0})),
                  ValidationError);
}

TEST_CASE("multi-output covariance matches the sinc kernel") {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(-10.0, 10.0), pos(0.1, 3.0);
  for (int i = 0; i < 100; ++i) {
    const SincParams p(pos(gen), 0.0, pos(gen));
    CHECK(mogp_cov_check(p, pos(gen), u(gen), u(gen)) <= 1e-12);
  }
}

TEST_CASE("channel cross-covariances at zero lag") {
  const SincParams p(1.0, 0.0, 0.5);
  const std::vector<double> t = {0.0};
  CHECK(channel_obs_cov(1, p, 2.0, 0.0, t)[0] == doctest::Approx(1.0));
  CHECK(channel_obs_cov(2, p, 2.0, 0.0, t)[0] == doctest::Approx(0.0));
  const std::vector<double> quarter = {1.0 / 8.0};
  CHECK(channel_obs_cov(2, p, 2.0, 0.125, quarter)[0] == doctest::Approx(1.0));
  CHECK_THROWS_AS(channel_obs_cov(3, p, 2.0, 0.0, t), ValidationError);
}

TEST_CASE("demodulation recovers dense noiseless channels") {
  SyntheticRecipe r;
  r.kind = SyntheticKind::ModulatedStereo;
  r.length = 481;
  r.dt = 1.0 / 16.0;
  r.carrier = 2.0;
  r.channel_delta = 1.0;
  const auto data = make_synthetic(r, 12);
  const auto& truth = *data.channels;
  const auto q = linspace(0.0, 30.0, 241);
  const auto res = demodulate(data.series, SincParams(1.0, 2.0, 1.0), 1e-6, q);

  std::vector<double> x1(q.size()), x2(q.size());
  // The query points sit on every other sample.
  for (std::size_t i = 0; i < q.size(); ++i) {
    x1[i] = truth.x1().values()[2 * i];
    x2[i] = truth.x2().values()[2 * i];
  }
  CHECK(interior_rmse(q, res.ch1.mean, x1, 2.0, 1.0) <= 0.1);
  CHECK(interior_rmse(q, res.ch2.mean, x2, 2.0, 1.0) <= 0.1);
  for (Eigen::Index i = 0; i < res.ch1.variance.size(); ++i) {
    CHECK(res.ch1.variance[i] >= 0.0);
    CHECK(res.ch1.variance[i] <= 1.0 + 1e-9);
  }
  const auto means = demodulate(data.series, SincParams(1.0, 2.0, 1.0), 1e-6, q, true);
  CHECK((means.ch1.mean - res.ch1.mean).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(means.ch1.covariance.size() == 0);
}

TEST_CASE("quarter-period shift exchanges the channels") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  std::normal_distribution<double> normal;
  std::vector<double> t(60);
  for (auto& x : t) x = u(gen);
  std::sort(t.begin(), t.end());
  std::vector<double> y(t.size());
  for (auto& v : y) v = normal(gen);
  const double xi0 = 1.5;
  const double s = 1.0 / (4.0 * xi0);
  std::vector<double> ts(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) ts[i] = t[i] + s;
  const auto q = linspace(2.0, 18.0, 33);
  std::vector<double> qs(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) qs[i] = q[i] + s;

  const SincParams p(1.0, xi0, 0.7);
  const auto a = demodulate(TimeSeries(t, y), p, 0.05, q);
  const auto b = demodulate(TimeSeries(ts, y), p, 0.05, qs);
  CHECK((b.ch2.mean - a.ch1.mean).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((b.ch1.mean + a.ch2.mean).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("interior rmse") {
  const std::vector<double> t = {0.0, 1.0, 2.0, 3.0, 4.0};
  Eigen::VectorXd est(5);
  est << 100.0, 1.0, 1.0, 1.0, 100.0;
  const std::vector<double> truth = {0.0, 0.0, 0.0, 0.0, 0.0};
  CHECK(interior_rmse(t, est, truth, 1.0) == doctest::Approx(1.0));
  CHECK(interior_rmse(t, est, truth, 1.0, 2.0) == doctest::Approx(0.5));
}
