#include "blgp/time_series.hpp"

#include "blgp/error.hpp"

#include <cmath>
#include <sstream>

namespace blgp {

TimeSeries::TimeSeries(std::vector<double> times, std::vector<double> values,
                       std::optional<double> noise_std)
    : times_(std::move(times)), values_(std::move(values)), noise_std_(noise_std) {
  if (times_.size() != values_.size()) {
    throw ValidationError("time series: times and values differ in length");
  }
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]) || !std::isfinite(values_[i])) {
      std::ostringstream os;
      os << "time series: non-finite entry at index " << i;
      throw ValidationError(os.str());
    }
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      std::ostringstream os;
      os << "time series: times must be strictly increasing (index " << i << ", t=" << times_[i]
         << ")";
      throw ValidationError(os.str());
    }
  }
  if (noise_std_ && !(std::isfinite(*noise_std_) && *noise_std_ >= 0.0)) {
    throw ValidationError("time series: noise_std must be finite and >= 0");
  }
}

Eigen::VectorXd TimeSeries::values_vector() const {
  return Eigen::Map<const Eigen::VectorXd>(values_.data(), static_cast<Eigen::Index>(values_.size()));
}

std::vector<double> linspace(double start, double stop, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = start;
    return out;
  }
  const double step = (stop - start) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = start + step * static_cast<double>(i);
  if (count > 1) out.back() = stop;
  return out;
}

}  // namespace blgp
