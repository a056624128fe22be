#include "blgp/error.hpp"
#include "blgp/gp.hpp"
#include "blgp/sparse.hpp"

#include <doctest.h>

#include <random>

using namespace blgp;

namespace {

TimeSeries noisy_series(std::uint64_t seed, std::size_t n, double span) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, span);
  std::normal_distribution<double> normal;
  std::vector<double> t(n);
  for (auto& x : t) x = u(gen);
  std::sort(t.begin(), t.end());
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = std::sin(0.9 * t[i]) + 0.1 * normal(gen);
  return TimeSeries(t, y);
}

}  // namespace

TEST_CASE("inducing set validation") {
  CHECK_NOTHROW(InducingSet({0.0, 0.5, 1.0}, 2.0));
  CHECK_THROWS_AS(InducingSet({0.0, 0.5, 1.1}, 2.0), ValidationError);
  CHECK_THROWS_AS(InducingSet({0.0, 0.5}, 0.0), ValidationError);
}

TEST_CASE("nyquist inducing grid") {
  const auto set = nyquist_inducing(KernelSpec::centred_sinc(1.0, 1.0), 0.0, 53.0);
  CHECK(set.size() == 54);
  CHECK(set.spacing() == 1.0);
  CHECK(set.locations().front() == 0.0);
  const auto two = nyquist_inducing(KernelSpec::sum({KernelSpec::sinc(SincParams(1.0, 1.0, 0.25)),
                                                     KernelSpec::sinc(SincParams(1.0, 2.0, 0.25))}),
                                    0.0, 10.0);
  CHECK(two.size() == 6);
  CHECK_THROWS_AS(nyquist_inducing(KernelSpec::spectral_mixture(1.0, 0.0, 1.0), 0.0, 1.0),
                  ValidationError);
}

TEST_CASE("sparse variance lies between zero and the prior") {
  const auto obs = noisy_series(3, 200, 40.0);
  const auto spec = KernelSpec::centred_sinc(1.0, 0.4);
  const auto set = nyquist_inducing(spec, 0.0, 40.0);
  const auto q = linspace(-5.0, 45.0, 201);
  const auto post = sparse_posterior(obs, spec, 0.01, set, q);
  for (Eigen::Index i = 0; i < post.variance.size(); ++i) {
    CHECK(post.variance[i] >= 0.0);
    CHECK(post.variance[i] <= 1.0 + 1e-9);
  }
}

TEST_CASE("inducing points at the observations give the exact posterior") {
  const auto obs = noisy_series(5, 40, 20.0);
  const GPModel model(KernelSpec::sinc(SincParams(1.0, 0.2, 0.3)), 0.05);
  const auto q = linspace(0.0, 20.0, 81);
  std::vector<double> u(obs.times().begin(), obs.times().end());
  const auto exact = posterior(model, obs, q);
  const auto sparse = sparse_posterior(obs, model.kernel(), model.noise_var(), u, q);
  CHECK((exact.mean - sparse.mean).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((exact.variance - sparse.variance).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("nyquist inducing set approximates the exact mean") {
  const auto obs = noisy_series(7, 300, 50.0);
  const GPModel model(KernelSpec::centred_sinc(1.0, 0.5), 0.01);
  const auto set = nyquist_inducing(model.kernel(), 0.0, 50.0);
  const auto q = linspace(5.0, 45.0, 161);
  const Eigen::VectorXd exact = posterior_mean(model, obs, q);
  const auto sparse = sparse_posterior(obs, model.kernel(), model.noise_var(), set, q, true);
  CHECK(sparse.covariance.size() == 0);
  const double rmse = std::sqrt((exact - sparse.mean).squaredNorm() / static_cast<double>(q.size()));
  CHECK(rmse <= 0.05);
}

TEST_CASE("sparse rejects bad input") {
  const auto obs = noisy_series(1, 10, 5.0);
  const std::vector<double> q = {1.0};
  const std::vector<double> none;
  CHECK_THROWS_AS(sparse_posterior(obs, KernelSpec::centred_sinc(1.0, 1.0), 0.1, none, q),
                  ValidationError);
  const std::vector<double> u = {0.0, 1.0};
  CHECK_THROWS_AS(sparse_posterior(obs, KernelSpec::centred_sinc(1.0, 1.0), -1.0, u, q),
                  ValidationError);
}
