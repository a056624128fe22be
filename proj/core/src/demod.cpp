#include "blgp/demod.hpp"

#include "blgp/error.hpp"

#include <algorithm>
#include <cmath>

namespace blgp {

StereoChannels::StereoChannels(TimeSeries x1, TimeSeries x2)
    : x1_(std::move(x1)), x2_(std::move(x2)) {
  if (!std::ranges::equal(x1_.times(), x2_.times())) {
    throw ValidationError("stereo channels: x1 and x2 must share the same time grid");
  }
}

CarrierConfig::CarrierConfig(double xi0, double sigma2, double delta)
    : xi0_(xi0), base_(sigma2, 0.0, delta) {
  if (!(xi0 > 0.0) || !std::isfinite(xi0)) {
    throw ValidationError("carrier: xi0 must be finite and > 0");
  }
}

std::vector<std::string> CarrierConfig::warnings() const {
  if (xi0_ > 0.5 * base_.delta()) return {};
  return {"carrier: xi0 <= delta/2, channel spectra overlap across zero frequency"};
}

TimeSeries modulate(const StereoChannels& channels, double xi0, std::span<const double> times) {
  if (!std::ranges::equal(times, channels.x1().times())) {
    throw ValidationError("modulate: requested times differ from the channel grid");
  }
  const auto a = channels.x1().values();
  const auto b = channels.x2().values();
  std::vector<double> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    out[i] = a[i] * cos_pi(2.0 * xi0 * times[i]) + b[i] * sin_pi(2.0 * xi0 * times[i]);
  }
  return TimeSeries(std::vector<double>(times.begin(), times.end()), std::move(out));
}

Eigen::VectorXd channel_obs_cov(int channel, const SincParams& params, double xi0, double t,
                                std::span<const double> obs_times) {
  if (channel != 1 && channel != 2) throw ValidationError("channel must be 1 or 2");
  Eigen::VectorXd out(static_cast<Eigen::Index>(obs_times.size()));
  for (std::size_t i = 0; i < obs_times.size(); ++i) {
    const double phase = 2.0 * xi0 * obs_times[i];
    const double carrier = channel == 1 ? cos_pi(phase) : sin_pi(phase);
    out[static_cast<Eigen::Index>(i)] =
        params.sigma2() * normalized_sinc(params.delta() * (t - obs_times[i])) * carrier;
  }
  return out;
}

DemodResult demodulate(const TimeSeries& obs, const SincParams& params, double noise_var,
                       std::span<const double> query, bool means_only, Jitter jitter) {
  if (!(noise_var >= 0.0)) throw ValidationError("demodulate: noise_var must be >= 0");
  const auto t = obs.times();
  const auto n = static_cast<Eigen::Index>(t.size());
  const auto m = static_cast<Eigen::Index>(query.size());
  const KernelSpec channel_kernel = KernelSpec::centred_sinc(params.sigma2(), params.delta());

  Eigen::MatrixXd c1(m, n), c2(m, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double phase = 2.0 * params.xi0() * t[static_cast<std::size_t>(i)];
    const double cs = cos_pi(phase);
    const double sn = sin_pi(phase);
    for (Eigen::Index q = 0; q < m; ++q) {
      const double k = params.sigma2() * normalized_sinc(params.delta() *
                                                         (query[static_cast<std::size_t>(q)] -
                                                          t[static_cast<std::size_t>(i)]));
      c1(q, i) = k * cs;
      c2(q, i) = k * sn;
    }
  }

  Eigen::MatrixXd lambda = gram_matrix(KernelSpec::sinc(params), t);
  lambda.diagonal().array() += noise_var;

  DemodResult out;
  if (means_only) {
    for (auto* s : {&out.ch1, &out.ch2}) s->query_times.assign(query.begin(), query.end());
    if (n == 0) {
      out.ch1.mean = out.ch2.mean = Eigen::VectorXd::Zero(m);
      return out;
    }
    const JitteredCholesky chol(lambda, jitter);
    const Eigen::VectorXd alpha = chol.solve(obs.values_vector());
    out.ch1.mean = c1 * alpha;
    out.ch2.mean = c2 * alpha;
    return out;
  }

  const Eigen::MatrixXd prior = gram_matrix(channel_kernel, query);
  const Eigen::VectorXd y = obs.values_vector();
  out.ch1 = condition_gaussian(lambda, c1, prior, y, query, params.sigma2(), jitter);
  out.ch2 = condition_gaussian(lambda, c2, prior, y, query, params.sigma2(), jitter);
  return out;
}

double mogp_cov_check(const SincParams& params, double xi0, double t, double t_prime) {
  const double kc = centred_sinc_kernel(params.sigma2(), params.delta(), t - t_prime);
  const double full = sinc_kernel(SincParams(params.sigma2(), xi0, params.delta()), t - t_prime);
  const double a = 2.0 * xi0 * t;
  const double b = 2.0 * xi0 * t_prime;
  const double mo = cos_pi(a) * kc * cos_pi(b) + sin_pi(a) * kc * sin_pi(b);
  return std::fabs(full - mo);
}

double interior_rmse(std::span<const double> times, const Eigen::VectorXd& estimate,
                     std::span<const double> truth, double margin, double scale) {
  if (times.size() != truth.size() || static_cast<Eigen::Index>(times.size()) != estimate.size()) {
    throw ValidationError("rmse: length mismatch");
  }
  if (times.empty()) return 0.0;
  const double lo = times.front() + margin;
  const double hi = times.back() - margin;
  double ss = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < lo || times[i] > hi) continue;
    const double d = estimate[static_cast<Eigen::Index>(i)] - truth[i];
    ss += d * d;
    ++count;
  }
  if (count == 0) throw ValidationError("rmse: margin leaves no interior points");
  const double rmse = std::sqrt(ss / static_cast<double>(count));
  return scale > 0.0 ? rmse / scale : rmse;
}

}  // namespace blgp
