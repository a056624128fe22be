#include "blgp/linalg.hpp"

#include "blgp/error.hpp"

#include <cmath>
#include <sstream>

namespace blgp {

JitteredCholesky::JitteredCholesky(const Eigen::MatrixXd& a, Jitter jitter) {
  if (a.rows() != a.cols()) throw ValidationError("cholesky: matrix is not square");
  if (a.size() == 0) {
    llt_.compute(a);
    return;
  }
  if (!a.allFinite()) throw NumericalError("cholesky: matrix has non-finite entries");

  const double max_diag = a.diagonal().maxCoeff();
  const double scale = max_diag > 0.0 ? max_diag : 1.0;
  for (double rel : {jitter.initial, jitter.retry}) {
    Eigen::MatrixXd loaded = a;
    loaded.diagonal().array() += rel * scale;
    llt_.compute(loaded);
    if (llt_.info() == Eigen::Success && llt_.matrixLLT().diagonal().allFinite()) {
      jitter_applied_ = rel * scale;
      return;
    }
  }

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
  const double min_eig = eig.eigenvalues().minCoeff();
  std::ostringstream msg;
  msg << "ill-conditioned covariance: Cholesky failed after jitter " << jitter.retry * scale
      << " (smallest eigenvalue estimate " << min_eig << ", size " << a.rows() << ")";
  throw IllConditionedError(msg.str(), min_eig);
}

Eigen::MatrixXd JitteredCholesky::solve_lower(const Eigen::MatrixXd& b) const {
  return llt_.matrixL().solve(b);
}

double JitteredCholesky::log_determinant() const {
  return 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
}

}  // namespace blgp
