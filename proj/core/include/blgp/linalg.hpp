#pragma once

#include <Eigen/Dense>

namespace blgp {

/// Diagonal loading used by every Cholesky factorisation, relative to the
/// largest diagonal entry. `retry` is tried once if `initial` fails.
struct Jitter {
  double initial = 1e-8;
  double retry = 1e-6;
};

/// Cholesky factor of a symmetric positive semi-definite matrix after
/// diagonal loading. Throws IllConditionedError when both attempts fail.
class JitteredCholesky {
 public:
  explicit JitteredCholesky(const Eigen::MatrixXd& a, Jitter jitter = {});

  Eigen::Index size() const noexcept { return llt_.rows(); }

  /// Absolute amount added to the diagonal.
  double jitter_applied() const noexcept { return jitter_applied_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const { return llt_.solve(b); }
  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const { return llt_.solve(b); }

  /// L^{-1} b.
  Eigen::MatrixXd solve_lower(const Eigen::MatrixXd& b) const;

  double log_determinant() const;

  Eigen::MatrixXd matrix_l() const { return llt_.matrixL(); }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double jitter_applied_ = 0.0;
};

}  // namespace blgp
