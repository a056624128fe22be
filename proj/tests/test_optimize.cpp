#include "blgp/optimize.hpp"

#include <doctest.h>

#include <cmath>

using namespace blgp;

namespace {

double rosenbrock(const Eigen::VectorXd& x) {
  double f = 0.0;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    f += 100.0 * std::pow(x[i + 1] - x[i] * x[i], 2) + std::pow(1.0 - x[i], 2);
  }
  return f;
}

double quadratic(const Eigen::VectorXd& x) {
  Eigen::VectorXd c(3);
  c << 1.0, -2.0, 0.5;
  Eigen::VectorXd w(3);
  w << 1.0, 10.0, 100.0;
  return (w.array() * (x - c).array().square()).sum();
}

}  // namespace

TEST_CASE("direction set minimises a quadratic and Rosenbrock") {
  const auto q = minimize_powell(quadratic, Eigen::VectorXd::Zero(3));
  CHECK(q.converged);
  CHECK(q.value < 1e-10);
  const auto r = minimize_powell(rosenbrock, Eigen::Vector2d(-1.2, 1.0), {.max_iters = 2000});
  CHECK(r.value < 1e-8);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("quasi-Newton minimises a quadratic and Rosenbrock") {
  const auto q = minimize_bfgs(quadratic, Eigen::VectorXd::Zero(3));
  CHECK(q.converged);
  CHECK(q.value < 1e-8);
  const auto r = minimize_bfgs(rosenbrock, Eigen::Vector2d(-1.2, 1.0), {.max_iters = 2000});
  CHECK(r.value < 1e-6);
}

TEST_CASE("iteration callback sees a non-increasing objective") {
  for (int which = 0; which < 2; ++which) {
    std::vector<double> seen;
    auto cb = [&](int, const Eigen::VectorXd&, double f) { seen.push_back(f); };
    if (which == 0) {
      minimize_powell(rosenbrock, Eigen::Vector2d(-1.2, 1.0), {}, cb);
    } else {
      minimize_bfgs(rosenbrock, Eigen::Vector2d(-1.2, 1.0), {}, cb);
    }
    REQUIRE(seen.size() > 1);
    for (std::size_t i = 1; i < seen.size(); ++i) CHECK(seen[i] <= seen[i - 1] + 1e-12);
  }
}

TEST_CASE("non-finite objective values are avoided") {
  auto f = [](const Eigen::VectorXd& x) {
    return x[0] < 0.0 ? std::nan("") : (x[0] - 2.0) * (x[0] - 2.0);
  };
  const auto r = minimize_powell(f, Eigen::VectorXd::Constant(1, 0.5));
  CHECK(std::isfinite(r.value));
  CHECK(r.x[0] == doctest::Approx(2.0).epsilon(1e-4));
  const auto b = minimize_bfgs(f, Eigen::VectorXd::Constant(1, 0.5));
  CHECK(b.x[0] == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("iteration budget is respected") {
  const auto r = minimize_powell(rosenbrock, Eigen::Vector2d(-1.2, 1.0), {.max_iters = 3});
  CHECK(r.iterations <= 3);
  CHECK_FALSE(r.converged);
}

TEST_CASE("finite difference gradient") {
  const Eigen::Vector3d x(0.3, -0.7, 2.0);
  const Eigen::VectorXd g = finite_difference_gradient(quadratic, x);
  CHECK(g[0] == doctest::Approx(2.0 * (0.3 - 1.0)).epsilon(1e-6));
  CHECK(g[1] == doctest::Approx(20.0 * (-0.7 + 2.0)).epsilon(1e-6));
  CHECK(g[2] == doctest::Approx(200.0 * (2.0 - 0.5)).epsilon(1e-6));
}
