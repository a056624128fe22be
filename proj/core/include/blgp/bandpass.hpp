#pragma once

#include "blgp/band.hpp"
#include "blgp/gp.hpp"
#include "blgp/kernels.hpp"
#include "blgp/time_series.hpp"

#include <span>
#include <vector>

namespace blgp {

/// Covariance of the part of a process whose spectrum lies in +-[a, b].
/// Rectangle spectra (sinc, centred sinc and each sub-rectangle of a
/// generalised sinc) are intersected with the band and integrated exactly.
/// Smooth densities are split into N sub-bands; on each the density is taken
/// at the mid-point and the sub-band is integrated exactly, giving
///   sinc(delta tau / N) sum_i 2 S(xi_i) (delta / N) cos(2 pi xi_i tau).
/// Treating rectangles exactly keeps the band process a true component of
/// the source, so posterior variances stay non-negative.
class BandKernel {
 public:
  BandKernel(const KernelSpec& source, const Band& band, int order = 512);

  const Band& band() const noexcept { return band_; }
  int order() const noexcept { return order_; }

  double operator()(double tau) const;

  /// In-band power, K_band(0).
  double power() const;

  Eigen::MatrixXd gram(std::span<const double> a, std::span<const double> b) const;
  Eigen::MatrixXd gram(std::span<const double> times) const;

 private:
  struct Piece {
    double power;
    double centre;
    double width;
  };
  void add(const KernelSpec& source);
  void add_rectangles(double power, double xi0, double width);
  void add_smooth(const KernelSpec& source);

  Band band_;
  int order_;
  std::vector<Piece> pieces_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

double band_kernel(const KernelSpec& source, const Band& band, int order, double tau);

/// Posterior over the in-band component. Cross terms use K_band while the
/// observation covariance uses the full source kernel plus noise. A white
/// noise source has no in-band component in the strict sense (its flat
/// density describes a Dirac covariance), so only its mean is meaningful;
/// use means_only there.
PosteriorSummary bandpass_posterior(const TimeSeries& obs, const KernelSpec& source,
                                    const Band& band, double noise_var,
                                    std::span<const double> query, int order = 512,
                                    bool means_only = false, Jitter jitter = {});

/// sum_i sinc(delta (t - t_i)) cos(2 pi xi0 (t - t_i)) y_i with xi0, delta
/// taken from the band.
Eigen::VectorXd brick_wall(const TimeSeries& obs, const Band& band, std::span<const double> query);

}  // namespace blgp
