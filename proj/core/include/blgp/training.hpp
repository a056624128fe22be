#pragma once

#include "blgp/gp.hpp"
#include "blgp/time_series.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace blgp {

enum class OptimizerKind { DirectionSet, QuasiNewton };
enum class InitStrategy { Periodogram, Manual };

struct TrainingConfig {
  OptimizerKind optimizer = OptimizerKind::DirectionSet;
  int max_iters = 500;
  int restarts = 3;
  InitStrategy init = InitStrategy::Periodogram;
  /// Bounds applied to every log-parameter.
  double log_lower = -25.0;
  double log_upper = 25.0;
  double rel_tol = 1e-8;
  std::uint64_t seed = 0;
  /// Lower bound on bandwidths (and on 4 sqrt(gamma) for the spectral
  /// mixture). Non-positive means 1 / span of the data, the frequency
  /// resolution below which a bandwidth cannot be identified.
  double min_delta = 0.0;

  void validate() const;
};

/// One accepted iterate. sigma2/xi0/delta describe the first component of
/// the kernel (NaN where the variant has no such parameter).
struct TraceRow {
  int iter;
  double objective;
  double sigma2;
  double xi0;
  double delta;
  double noise_var;
};

struct FitResult {
  GPModel model;
  double log_likelihood;
  /// Trace of the winning restart; objective is the log marginal likelihood.
  std::vector<TraceRow> trace;
  bool converged = false;
  /// Set when no restart produced a finite likelihood.
  bool best_effort = false;
  std::vector<std::string> warnings;
};

/// Starting model for the given restart. Periodogram strategy: xi0 at one of
/// the three strongest peaks, delta from the region above 10% of that peak,
/// sigma2 from the sample variance and noise at 10% of it. The kernel
/// variant (and any envelope or order) comes from `initial`.
GPModel initial_guess(const TimeSeries& obs, const GPModel& initial, const TrainingConfig& config,
                      int restart);

/// Maximum-likelihood hyperparameters. Positive parameters are optimised in
/// log space and xi0 directly, clamped at 0.
FitResult fit(const TimeSeries& obs, const GPModel& initial, const TrainingConfig& config = {});

/// Unconstrained parameter vector for the model (noise last) and its inverse.
Eigen::VectorXd pack_parameters(const GPModel& model);
GPModel unpack_parameters(const Eigen::VectorXd& x, const GPModel& shape,
                          double log_lower = -25.0, double log_upper = 25.0,
                          double min_delta = 0.0);

}  // namespace blgp
