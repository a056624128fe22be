#pragma once

#include "blgp/gp.hpp"
#include "blgp/kernels.hpp"
#include "blgp/time_series.hpp"

#include <span>
#include <vector>

namespace blgp {

/// Uniform inducing grid with spacing 1 / delta_total anchored at t_min.
class InducingSet {
 public:
  InducingSet(std::vector<double> locations, double delta_total);

  const std::vector<double>& locations() const noexcept { return locations_; }
  std::size_t size() const noexcept { return locations_.size(); }
  double delta_total() const noexcept { return delta_total_; }
  double spacing() const noexcept { return 1.0 / delta_total_; }

 private:
  std::vector<double> locations_;
  double delta_total_;
};

/// M = ceil((t_max - t_min) delta_total) + 1 points at the Nyquist spacing of
/// the kernel's total spectral support. Throws for kernels without compact
/// support.
InducingSet nyquist_inducing(const KernelSpec& spec, double t_min, double t_max);

/// Deterministic training conditional (projected process) predictive through
/// the inducing points u:
///   mean = K*u (s2 Kuu + Kuf Kfu)^{-1} Kuf y
///   cov  = K** - Q** + s2 K*u (s2 Kuu + Kuf Kfu)^{-1} Ku*
/// computed in whitened form. With means_only the covariance is skipped.
PosteriorSummary sparse_posterior(const TimeSeries& obs, const KernelSpec& spec, double noise_var,
                                  std::span<const double> inducing, std::span<const double> query,
                                  bool means_only = false, Jitter jitter = {});

inline PosteriorSummary sparse_posterior(const TimeSeries& obs, const KernelSpec& spec,
                                         double noise_var, const InducingSet& inducing,
                                         std::span<const double> query, bool means_only = false,
                                         Jitter jitter = {}) {
  return sparse_posterior(obs, spec, noise_var, inducing.locations(), query, means_only, jitter);
}

}  // namespace blgp
