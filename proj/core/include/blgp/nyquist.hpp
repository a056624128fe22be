#pragma once

#include "blgp/time_series.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace blgp {

/// Uniform grid start + k / delta, k = 0..count-1.
class NyquistGrid {
 public:
  NyquistGrid(double start, std::size_t count, double delta);

  double start() const noexcept { return start_; }
  std::size_t count() const noexcept { return count_; }
  double delta() const noexcept { return delta_; }
  double spacing() const noexcept { return 1.0 / delta_; }

  std::vector<double> times() const;

 private:
  double start_;
  std::size_t count_;
  double delta_;
};

/// Throws GridMismatchError unless consecutive times are 1/delta apart to
/// 1e-12 relative.
void check_nyquist_grid(std::span<const double> times, double delta);

/// Whittaker-Shannon interpolation sum_i y_i sinc(delta (t - t_i)).
double whittaker_mean(const TimeSeries& obs, double delta, double t);

/// sigma2 (1 - sum_i sinc^2(delta (t - t_i))), clamped at 0 within 1e-12.
double nyquist_variance(std::span<const double> grid_times, double delta, double sigma2, double t);

struct OracleReport {
  double max_mean_deviation;
  double max_variance_deviation;
};

/// Compares the exact posterior of a noiseless centred sinc model (jitter
/// 1e-12) against the closed forms on `query`.
OracleReport oracle_match(double sigma2, double delta, const TimeSeries& obs,
                          std::span<const double> query);

}  // namespace blgp
