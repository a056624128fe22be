#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace blgp {

/// Irregularly sampled observations with strictly increasing, finite times.
/// An empty series is allowed and stands for "no data" (prior fallback).
class TimeSeries {
 public:
  TimeSeries() = default;
  TimeSeries(std::vector<double> times, std::vector<double> values,
             std::optional<double> noise_std = std::nullopt);

  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }

  std::span<const double> times() const noexcept { return times_; }
  std::span<const double> values() const noexcept { return values_; }
  std::optional<double> noise_std() const noexcept { return noise_std_; }

  Eigen::VectorXd values_vector() const;

  double span() const noexcept { return empty() ? 0.0 : times_.back() - times_.front(); }

  friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

 private:
  std::vector<double> times_;
  std::vector<double> values_;
  std::optional<double> noise_std_;
};

/// Evenly spaced grid of `count` points on [start, stop].
std::vector<double> linspace(double start, double stop, std::size_t count);

}  // namespace blgp
