#include "blgp/nyquist.hpp"

#include "blgp/error.hpp"
#include "blgp/gp.hpp"
#include "blgp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace blgp {

NyquistGrid::NyquistGrid(double start, std::size_t count, double delta)
    : start_(start), count_(count), delta_(delta) {
  if (!std::isfinite(start)) throw ValidationError("nyquist grid: start must be finite");
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw ValidationError("nyquist grid: delta must be finite and > 0");
  }
}

std::vector<double> NyquistGrid::times() const {
  std::vector<double> t(count_);
  for (std::size_t k = 0; k < count_; ++k) t[k] = start_ + static_cast<double>(k) / delta_;
  return t;
}

void check_nyquist_grid(std::span<const double> times, double delta) {
  if (!(delta > 0.0)) throw ValidationError("nyquist: delta must be > 0");
  const double spacing = 1.0 / delta;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double d = times[i] - times[i - 1];
    if (std::fabs(d - spacing) > 1e-12 * spacing * std::max(1.0, std::fabs(times[i]) * delta)) {
      std::ostringstream os;
      os << "nyquist: spacing " << d << " between t=" << times[i - 1] << " and t=" << times[i]
         << " differs from 1/delta = " << spacing;
      throw GridMismatchError(os.str());
    }
  }
}

double whittaker_mean(const TimeSeries& obs, double delta, double t) {
  const auto times = obs.times();
  check_nyquist_grid(times, delta);
  const auto y = obs.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) sum += y[i] * normalized_sinc(delta * (t - times[i]));
  return sum;
}

double nyquist_variance(std::span<const double> grid_times, double delta, double sigma2, double t) {
  check_nyquist_grid(grid_times, delta);
  double s = 0.0;
  for (double ti : grid_times) {
    const double v = normalized_sinc(delta * (t - ti));
    s += v * v;
  }
  double var = sigma2 * (1.0 - s);
  if (var < 0.0 && var >= -1e-12 * std::max(sigma2, 1.0)) var = 0.0;
  return var;
}

OracleReport oracle_match(double sigma2, double delta, const TimeSeries& obs,
                          std::span<const double> query) {
  check_nyquist_grid(obs.times(), delta);
  const GPModel model(KernelSpec::centred_sinc(sigma2, delta), 0.0);
  const auto post = posterior(model, obs, query, Jitter{1e-12, 1e-10});
  OracleReport report{0.0, 0.0};
  for (std::size_t q = 0; q < query.size(); ++q) {
    const auto i = static_cast<Eigen::Index>(q);
    const double m = obs.empty() ? 0.0 : whittaker_mean(obs, delta, query[q]);
    const double v = nyquist_variance(obs.times(), delta, sigma2, query[q]);
    report.max_mean_deviation = std::max(report.max_mean_deviation, std::fabs(post.mean[i] - m));
    report.max_variance_deviation =
        std::max(report.max_variance_deviation, std::fabs(post.variance[i] - v));
  }
  return report;
}

}  // namespace blgp
