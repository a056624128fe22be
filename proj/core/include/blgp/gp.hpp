#pragma once

#include "blgp/kernels.hpp"
#include "blgp/linalg.hpp"
#include "blgp/time_series.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace blgp {

/// Kernel plus white observation noise: Lambda = K(t, t) + noise_var I.
class GPModel {
 public:
  GPModel(KernelSpec kernel, double noise_var);

  const KernelSpec& kernel() const noexcept { return kernel_; }
  double noise_var() const noexcept { return noise_var_; }

  friend bool operator==(const GPModel&, const GPModel&) = default;

 private:
  KernelSpec kernel_;
  double noise_var_;
};

struct PosteriorSummary {
  std::vector<double> query_times;
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
  Eigen::MatrixXd covariance;
};

/// Gaussian conditioning shared by every posterior in the library.
///   mean = C Lambda^{-1} y,  cov = Q - C Lambda^{-1} C^T
/// with C the (query x obs) cross-covariance and Q the query prior covariance.
/// Diagonal entries down to -1e-9 * prior_scale are clamped to zero; anything
/// more negative is a NumericalError.
PosteriorSummary condition_gaussian(const Eigen::MatrixXd& obs_cov, const Eigen::MatrixXd& cross,
                                    const Eigen::MatrixXd& query_cov, const Eigen::VectorXd& y,
                                    std::span<const double> query, double prior_scale,
                                    Jitter jitter = {});

PosteriorSummary posterior(const GPModel& model, const TimeSeries& obs,
                           std::span<const double> query, Jitter jitter = {});

/// Posterior mean only; skips the query covariance.
Eigen::VectorXd posterior_mean(const GPModel& model, const TimeSeries& obs,
                               std::span<const double> query, Jitter jitter = {});

double log_marginal_likelihood(const GPModel& model, const TimeSeries& obs, Jitter jitter = {});

/// `count` zero-mean draws (rows) of the latent process at `times`, using the
/// kernel covariance only. Deterministic in `seed`.
Eigen::MatrixXd sample(const GPModel& model, std::span<const double> times, std::uint64_t seed,
                       int count, Jitter jitter = {});

}  // namespace blgp
