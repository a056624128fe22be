#pragma once

#include <Eigen/Dense>

#include <functional>

namespace blgp {

/// Objective to minimise. Non-finite values are treated as +infinity.
using Objective = std::function<double(const Eigen::VectorXd&)>;

/// Called after every accepted iteration with (iteration, x, f(x)).
using IterationCallback = std::function<void(int, const Eigen::VectorXd&, double)>;

struct OptimizerOptions {
  int max_iters = 500;
  double rel_tol = 1e-8;
  /// Initial step per coordinate; empty means 1 for every coordinate.
  Eigen::VectorXd initial_step;
};

struct OptimizerResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Powell's direction-set method with Brent line searches (derivative-free).
OptimizerResult minimize_powell(const Objective& f, Eigen::VectorXd x0,
                                const OptimizerOptions& options = {},
                                const IterationCallback& on_iteration = {});

/// BFGS with central finite-difference gradients and a backtracking
/// Armijo line search.
OptimizerResult minimize_bfgs(const Objective& f, Eigen::VectorXd x0,
                              const OptimizerOptions& options = {},
                              const IterationCallback& on_iteration = {});

/// Central-difference gradient with per-coordinate step h * max(1, |x_i|).
Eigen::VectorXd finite_difference_gradient(const Objective& f, const Eigen::VectorXd& x,
                                           double h = 1e-5);

}  // namespace blgp
