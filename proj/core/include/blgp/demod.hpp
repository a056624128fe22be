#pragma once

#include "blgp/gp.hpp"
#include "blgp/kernels.hpp"
#include "blgp/time_series.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace blgp {

/// Two latent channels on a shared time grid.
class StereoChannels {
 public:
  StereoChannels(TimeSeries x1, TimeSeries x2);

  const TimeSeries& x1() const noexcept { return x1_; }
  const TimeSeries& x2() const noexcept { return x2_; }

 private:
  TimeSeries x1_;
  TimeSeries x2_;
};

/// Carrier frequency and the centred channel prior sigma2 sinc(delta tau).
class CarrierConfig {
 public:
  CarrierConfig(double xi0, double sigma2, double delta);

  double xi0() const noexcept { return xi0_; }
  const SincParams& base() const noexcept { return base_; }
  /// Kernel of the modulated signal: the sinc kernel centred at the carrier.
  SincParams modulated() const { return SincParams(base_.sigma2(), xi0_, base_.delta()); }

  /// Non-empty when xi0 <= delta / 2, i.e. the channel spectra fold across zero.
  std::vector<std::string> warnings() const;

 private:
  double xi0_;
  SincParams base_;
};

/// x1(t) cos(2 pi xi0 t) + x2(t) sin(2 pi xi0 t). `times` must equal the
/// channel grid exactly.
TimeSeries modulate(const StereoChannels& channels, double xi0, std::span<const double> times);

/// Cross-covariance between channel `channel` (1 or 2) at t and the
/// modulated observations at obs_times. `params` is the centred channel
/// prior (its xi0 is ignored).
Eigen::VectorXd channel_obs_cov(int channel, const SincParams& params, double xi0, double t,
                                std::span<const double> obs_times);

struct DemodResult {
  PosteriorSummary ch1;
  PosteriorSummary ch2;
};

/// Joint-Gaussian posterior over both channels given noisy observations of
/// the modulated signal. `params` carries the channel power and bandwidth
/// and the carrier frequency as xi0. With means_only the covariances are
/// left empty and the variances are not computed.
DemodResult demodulate(const TimeSeries& obs, const SincParams& params, double noise_var,
                       std::span<const double> query, bool means_only = false,
                       Jitter jitter = {});

/// |K_sinc(t - t') - [cos, sin] diag(Kc, Kc) [cos', sin']^T|.
double mogp_cov_check(const SincParams& params, double xi0, double t, double t_prime);

/// RMSE between estimate and truth over times at least `margin` from either
/// end of [times.front(), times.back()], divided by `scale` when positive.
double interior_rmse(std::span<const double> times, const Eigen::VectorXd& estimate,
                     std::span<const double> truth, double margin, double scale = 0.0);

}  // namespace blgp
