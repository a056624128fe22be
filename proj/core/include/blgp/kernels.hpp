#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace blgp {

/// sin(pi x) with exact zeros at the integers.
double sin_pi(double x);
/// cos(pi x) with exact zeros at the half-integers.
double cos_pi(double x);

/// sin(pi x) / (pi x), equal to 1 at x = 0.
double normalized_sinc(double x);

/// Power sigma2, centre frequency xi0 and bandwidth delta of a symmetric
/// rectangle spectrum. Frequencies are in cycles per time unit.
class SincParams {
 public:
  SincParams(double sigma2, double xi0, double delta);

  double sigma2() const noexcept { return sigma2_; }
  double xi0() const noexcept { return xi0_; }
  double delta() const noexcept { return delta_; }

  /// True when the two rectangles at +-xi0 overlap (delta > 2 xi0).
  bool overlapping() const noexcept { return delta_ > 2.0 * xi0_; }

  friend bool operator==(const SincParams&, const SincParams&) = default;

 private:
  double sigma2_;
  double xi0_;
  double delta_;
};

/// Frequency weighting Gamma for the generalised sinc kernel. Always
/// evaluated at |xi|, so it is symmetric by construction.
class SpectralEnvelope {
 public:
  struct Constant {
    double value;
    friend bool operator==(const Constant&, const Constant&) = default;
  };
  /// peak * max(0, 1 - ||xi| - centre| / half_width)
  struct Triangular {
    double centre;
    double half_width;
    double peak;
    friend bool operator==(const Triangular&, const Triangular&) = default;
  };
  /// Piecewise-linear in |xi| through (freqs[i], values[i]); held constant
  /// beyond the end points.
  struct Table {
    std::vector<double> freqs;
    std::vector<double> values;
    friend bool operator==(const Table&, const Table&) = default;
  };
  using Shape = std::variant<Constant, Triangular, Table>;

  static SpectralEnvelope constant(double value);
  static SpectralEnvelope triangular(double centre, double half_width, double peak = 1.0);
  static SpectralEnvelope table(std::vector<double> freqs, std::vector<double> values);

  double operator()(double xi) const;

  const Shape& shape() const noexcept { return shape_; }
  std::string description() const;

  friend bool operator==(const SpectralEnvelope&, const SpectralEnvelope&) = default;

 private:
  explicit SpectralEnvelope(Shape shape) : shape_(std::move(shape)) {}
  Shape shape_;
};

class KernelSpec;

struct CentredSinc {
  double sigma2;
  double delta;
  friend bool operator==(const CentredSinc&, const CentredSinc&) = default;
};

struct Sinc {
  SincParams params;
  friend bool operator==(const Sinc&, const Sinc&) = default;
};

struct GeneralisedSinc {
  SincParams params;
  SpectralEnvelope envelope;
  int order;
  friend bool operator==(const GeneralisedSinc&, const GeneralisedSinc&) = default;
};

/// Single-component spectral mixture: sigma2 exp(-2 pi^2 gamma tau^2) cos(2 pi xi0 tau).
/// gamma is the variance of each Gaussian spectral bump.
struct SpectralMixture {
  double sigma2;
  double xi0;
  double gamma;
  friend bool operator==(const SpectralMixture&, const SpectralMixture&) = default;
};

/// Discrete white noise: K(0) = sigma2, K(tau != 0) = 0, flat density sigma2.
struct WhiteNoise {
  double sigma2;
  friend bool operator==(const WhiteNoise&, const WhiteNoise&) = default;
};

struct KernelSum {
  std::vector<KernelSpec> components;
  friend bool operator==(const KernelSum&, const KernelSum&);
};

/// Closed set of stationary kernels with both a time-domain and a
/// frequency-domain form. Built only through the validating factories.
class KernelSpec {
 public:
  using Variant =
      std::variant<CentredSinc, Sinc, GeneralisedSinc, SpectralMixture, WhiteNoise, KernelSum>;

  static KernelSpec centred_sinc(double sigma2, double delta);
  static KernelSpec sinc(const SincParams& params);
  static KernelSpec generalised_sinc(const SincParams& params, SpectralEnvelope envelope,
                                     int order);
  static KernelSpec spectral_mixture(double sigma2, double xi0, double gamma);
  static KernelSpec white_noise(double sigma2);
  static KernelSpec sum(std::vector<KernelSpec> components);

  const Variant& variant() const noexcept { return v_; }

  /// Short tag matching the JSON "variant" field.
  std::string name() const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

 private:
  explicit KernelSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

inline bool operator==(const KernelSum& a, const KernelSum& b) {
  return a.components == b.components;
}

/// Closed frequency interval [lo, hi].
struct Interval {
  double lo;
  double hi;
  double width() const noexcept { return hi - lo; }
};

double symmetric_rect_psd(const SincParams& p, double xi);
double sinc_kernel(const SincParams& p, double tau);
double centred_sinc_kernel(double sigma2, double delta, double tau);

/// Order-N mid-point approximation of the generalised sinc kernel: the band is
/// split into N sub-rectangles of width delta/N and power sigma2/N, each
/// weighted by the envelope at its centre.
double gsk_approx(const SincParams& p, const SpectralEnvelope& gamma, int order, double tau);

/// Centres of the N sub-rectangles used by gsk_approx.
std::vector<double> gsk_sub_centres(const SincParams& p, int order);

double kernel_eval(const KernelSpec& spec, double tau);
double kernel_psd(const KernelSpec& spec, double xi);

/// K(0), the marginal prior variance.
double prior_variance(const KernelSpec& spec);

/// Generating intervals [xi0 - delta/2, xi0 + delta/2] of every compactly
/// supported component. Throws ValidationError for unbounded-support kernels.
std::vector<Interval> spectral_support(const KernelSpec& spec);

/// Lebesgue measure of the union of spectral_support(spec).
double support_measure(const KernelSpec& spec);

/// Entry (i, j) = kernel_eval(spec, a[i] - b[j]).
Eigen::MatrixXd gram_matrix(const KernelSpec& spec, std::span<const double> a,
                            std::span<const double> b);

/// Square symmetric Gram matrix; the storage is exactly symmetric.
Eigen::MatrixXd gram_matrix(const KernelSpec& spec, std::span<const double> times);

}  // namespace blgp
