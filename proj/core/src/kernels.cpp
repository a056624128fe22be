#include "blgp/kernels.hpp"

#include "blgp/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace blgp {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_odd(double n) { return std::fmod(n, 2.0) != 0.0; }

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

// Unit rectangle: 1 inside, 1/2 on the boundary, 0 outside.
double rect(double u) {
  const double a = std::fabs(u);
  if (a < 0.5) return 1.0;
  if (a == 0.5) return 0.5;
  return 0.0;
}

double gaussian_density(double x, double variance) {
  return std::exp(-0.5 * x * x / variance) / std::sqrt(2.0 * kPi * variance);
}

// Pre-computed form of a KernelSpec for repeated evaluation (Gram assembly).
class Evaluator {
 public:
  explicit Evaluator(const KernelSpec& spec) {
    std::visit([this](const auto& k) { compile(k); }, spec.variant());
  }

  double operator()(double tau) const {
    switch (kind_) {
      case Kind::Centred:
        return centred_sinc_kernel(sigma2_, delta_, tau);
      case Kind::Sinc:
        return sigma2_ * normalized_sinc(delta_ * tau) * cos_pi(2.0 * xi0_ * tau);
      case Kind::Gsk: {
        double acc = 0.0;
        for (std::size_t i = 0; i < centres_.size(); ++i) {
          acc += weights_[i] * cos_pi(2.0 * centres_[i] * tau);
        }
        return normalized_sinc(delta_ * tau) * acc;
      }
      case Kind::Mixture:
        return sigma2_ * std::exp(-2.0 * kPi * kPi * gamma_ * tau * tau) *
               cos_pi(2.0 * xi0_ * tau);
      case Kind::White:
        return tau == 0.0 ? sigma2_ : 0.0;
      case Kind::Sum: {
        double acc = 0.0;
        for (const auto& c : children_) acc += c(tau);
        return acc;
      }
    }
    return 0.0;
  }

 private:
  enum class Kind { Centred, Sinc, Gsk, Mixture, White, Sum };

  void compile(const CentredSinc& k) {
    kind_ = Kind::Centred;
    sigma2_ = k.sigma2;
    delta_ = k.delta;
  }
  void compile(const Sinc& k) {
    kind_ = Kind::Sinc;
    sigma2_ = k.params.sigma2();
    xi0_ = k.params.xi0();
    delta_ = k.params.delta();
  }
  void compile(const GeneralisedSinc& k) {
    kind_ = Kind::Gsk;
    delta_ = k.params.delta() / k.order;
    centres_ = gsk_sub_centres(k.params, k.order);
    weights_.reserve(centres_.size());
    for (double c : centres_) weights_.push_back(k.params.sigma2() / k.order * k.envelope(c));
  }
  void compile(const SpectralMixture& k) {
    kind_ = Kind::Mixture;
    sigma2_ = k.sigma2;
    xi0_ = k.xi0;
    gamma_ = k.gamma;
  }
  void compile(const WhiteNoise& k) {
    kind_ = Kind::White;
    sigma2_ = k.sigma2;
  }
  void compile(const KernelSum& k) {
    kind_ = Kind::Sum;
    for (const auto& c : k.components) children_.emplace_back(c);
  }

  Kind kind_ = Kind::White;
  double sigma2_ = 0.0;
  double xi0_ = 0.0;
  double delta_ = 0.0;
  double gamma_ = 0.0;
  std::vector<double> centres_;
  std::vector<double> weights_;
  std::vector<Evaluator> children_;
};

}  // namespace

double sin_pi(double x) {
  const double n = std::nearbyint(x);
  const double s = std::sin(kPi * (x - n));
  return is_odd(n) ? -s : s;
}

double cos_pi(double x) {
  const double n = std::nearbyint(x);
  const double r = std::fabs(x - n);
  // 0.5 - r is exact for r in [0.25, 0.5], which gives exact zeros at r = 0.5.
  const double c = r < 0.25 ? std::cos(kPi * r) : std::sin(kPi * (0.5 - r));
  return is_odd(n) ? -c : c;
}

double normalized_sinc(double x) {
  const double px = kPi * x;
  if (std::fabs(px) < 1e-4) {
    const double px2 = px * px;
    return 1.0 - px2 / 6.0 + px2 * px2 / 120.0;
  }
  return sin_pi(x) / px;
}

SincParams::SincParams(double sigma2, double xi0, double delta)
    : sigma2_(sigma2), xi0_(xi0), delta_(delta) {
  require(std::isfinite(sigma2) && sigma2 >= 0.0, "sinc params: sigma2 must be finite and >= 0");
  require(std::isfinite(xi0) && xi0 >= 0.0, "sinc params: xi0 must be finite and >= 0");
  require(std::isfinite(delta) && delta > 0.0, "sinc params: delta must be finite and > 0");
}

SpectralEnvelope SpectralEnvelope::constant(double value) {
  require(std::isfinite(value) && value >= 0.0, "envelope: constant value must be >= 0");
  return SpectralEnvelope(Constant{value});
}

SpectralEnvelope SpectralEnvelope::triangular(double centre, double half_width, double peak) {
  require(std::isfinite(centre) && centre >= 0.0, "envelope: triangular centre must be >= 0");
  require(std::isfinite(half_width) && half_width > 0.0,
          "envelope: triangular half_width must be > 0");
  require(std::isfinite(peak) && peak >= 0.0, "envelope: triangular peak must be >= 0");
  return SpectralEnvelope(Triangular{centre, half_width, peak});
}

SpectralEnvelope SpectralEnvelope::table(std::vector<double> freqs, std::vector<double> values) {
  require(!freqs.empty() && freqs.size() == values.size(),
          "envelope: table needs equal, non-empty freqs and values");
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    require(std::isfinite(freqs[i]) && freqs[i] >= 0.0, "envelope: table freqs must be >= 0");
    require(i == 0 || freqs[i] > freqs[i - 1], "envelope: table freqs must be increasing");
    require(std::isfinite(values[i]) && values[i] >= 0.0, "envelope: table values must be >= 0");
  }
  return SpectralEnvelope(Table{std::move(freqs), std::move(values)});
}

double SpectralEnvelope::operator()(double xi) const {
  const double f = std::fabs(xi);
  return std::visit(
      [f](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return s.value;
        } else if constexpr (std::is_same_v<T, Triangular>) {
          return s.peak * std::max(0.0, 1.0 - std::fabs(f - s.centre) / s.half_width);
        } else {
          if (f <= s.freqs.front()) return s.values.front();
          if (f >= s.freqs.back()) return s.values.back();
          const auto it = std::upper_bound(s.freqs.begin(), s.freqs.end(), f);
          const auto j = static_cast<std::size_t>(it - s.freqs.begin());
          const double w = (f - s.freqs[j - 1]) / (s.freqs[j] - s.freqs[j - 1]);
          return (1.0 - w) * s.values[j - 1] + w * s.values[j];
        }
      },
      shape_);
}

std::string SpectralEnvelope::description() const {
  std::ostringstream os;
  std::visit(
      [&os](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Constant>) {
          os << "constant(" << s.value << ")";
        } else if constexpr (std::is_same_v<T, Triangular>) {
          os << "triangular(centre=" << s.centre << ", half_width=" << s.half_width
             << ", peak=" << s.peak << ")";
        } else {
          os << "table(" << s.freqs.size() << " nodes)";
        }
      },
      shape_);
  return os.str();
}

KernelSpec KernelSpec::centred_sinc(double sigma2, double delta) {
  const SincParams p(sigma2, 0.0, delta);
  return KernelSpec(CentredSinc{p.sigma2(), p.delta()});
}

KernelSpec KernelSpec::sinc(const SincParams& params) { return KernelSpec(Sinc{params}); }

KernelSpec KernelSpec::generalised_sinc(const SincParams& params, SpectralEnvelope envelope,
                                        int order) {
  require(order >= 1, "generalised sinc: order must be >= 1");
  return KernelSpec(GeneralisedSinc{params, std::move(envelope), order});
}

KernelSpec KernelSpec::spectral_mixture(double sigma2, double xi0, double gamma) {
  require(std::isfinite(sigma2) && sigma2 >= 0.0, "spectral mixture: sigma2 must be >= 0");
  require(std::isfinite(xi0) && xi0 >= 0.0, "spectral mixture: xi0 must be >= 0");
  require(std::isfinite(gamma) && gamma > 0.0, "spectral mixture: gamma must be > 0");
  return KernelSpec(SpectralMixture{sigma2, xi0, gamma});
}

KernelSpec KernelSpec::white_noise(double sigma2) {
  require(std::isfinite(sigma2) && sigma2 >= 0.0, "white noise: sigma2 must be >= 0");
  return KernelSpec(WhiteNoise{sigma2});
}

KernelSpec KernelSpec::sum(std::vector<KernelSpec> components) {
  require(!components.empty(), "sum kernel: needs at least one component");
  return KernelSpec(KernelSum{std::move(components)});
}

std::string KernelSpec::name() const {
  static constexpr const char* kNames[] = {"centred_sinc", "sinc", "gsk", "sm", "white", "sum"};
  return kNames[v_.index()];
}

double symmetric_rect_psd(const SincParams& p, double xi) {
  const double height = p.sigma2() / (2.0 * p.delta());
  return height * (rect((xi - p.xi0()) / p.delta()) + rect((xi + p.xi0()) / p.delta()));
}

double sinc_kernel(const SincParams& p, double tau) {
  return p.sigma2() * normalized_sinc(p.delta() * tau) * cos_pi(2.0 * p.xi0() * tau);
}

double centred_sinc_kernel(double sigma2, double delta, double tau) {
  // Same expression as sinc_kernel with xi0 = 0: cos_pi(0) is exactly 1.
  return sigma2 * normalized_sinc(delta * tau) * cos_pi(0.0);
}

std::vector<double> gsk_sub_centres(const SincParams& p, int order) {
  require(order >= 1, "generalised sinc: order must be >= 1");
  std::vector<double> centres(static_cast<std::size_t>(order));
  const double n = order;
  for (int i = 1; i <= order; ++i) {
    centres[static_cast<std::size_t>(i - 1)] = p.xi0() - p.delta() * (n + 1.0 - 2.0 * i) / (2.0 * n);
  }
  return centres;
}

double gsk_approx(const SincParams& p, const SpectralEnvelope& gamma, int order, double tau) {
  const auto centres = gsk_sub_centres(p, order);
  double acc = 0.0;
  for (double c : centres) acc += gamma(c) * cos_pi(2.0 * c * tau);
  return normalized_sinc(p.delta() * tau / order) * (p.sigma2() / order) * acc;
}

double kernel_eval(const KernelSpec& spec, double tau) { return Evaluator(spec)(tau); }

double kernel_psd(const KernelSpec& spec, double xi) {
  return std::visit(
      [xi](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, CentredSinc>) {
          return symmetric_rect_psd(SincParams(k.sigma2, 0.0, k.delta), xi);
        } else if constexpr (std::is_same_v<T, Sinc>) {
          return symmetric_rect_psd(k.params, xi);
        } else if constexpr (std::is_same_v<T, GeneralisedSinc>) {
          return symmetric_rect_psd(k.params, xi) * k.envelope(xi);
        } else if constexpr (std::is_same_v<T, SpectralMixture>) {
          return 0.5 * k.sigma2 *
                 (gaussian_density(xi - k.xi0, k.gamma) + gaussian_density(xi + k.xi0, k.gamma));
        } else if constexpr (std::is_same_v<T, WhiteNoise>) {
          return k.sigma2;
        } else {
          double acc = 0.0;
          for (const auto& c : k.components) acc += kernel_psd(c, xi);
          return acc;
        }
      },
      spec.variant());
}

double prior_variance(const KernelSpec& spec) { return kernel_eval(spec, 0.0); }

std::vector<Interval> spectral_support(const KernelSpec& spec) {
  return std::visit(
      [&spec](const auto& k) -> std::vector<Interval> {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, CentredSinc>) {
          return {{-0.5 * k.delta, 0.5 * k.delta}};
        } else if constexpr (std::is_same_v<T, Sinc> || std::is_same_v<T, GeneralisedSinc>) {
          return {{k.params.xi0() - 0.5 * k.params.delta(), k.params.xi0() + 0.5 * k.params.delta()}};
        } else if constexpr (std::is_same_v<T, KernelSum>) {
          std::vector<Interval> out;
          for (const auto& c : k.components) {
            const auto part = spectral_support(c);
            out.insert(out.end(), part.begin(), part.end());
          }
          return out;
        } else {
          throw ValidationError("kernel '" + spec.name() +
                                "' has unbounded spectral support; Nyquist spacing is undefined");
        }
      },
      spec.variant());
}

double support_measure(const KernelSpec& spec) {
  auto intervals = spectral_support(spec);
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  double total = 0.0;
  double lo = intervals.front().lo;
  double hi = intervals.front().hi;
  for (std::size_t i = 1; i < intervals.size(); ++i) {
    if (intervals[i].lo > hi) {
      total += hi - lo;
      lo = intervals[i].lo;
      hi = intervals[i].hi;
    } else {
      hi = std::max(hi, intervals[i].hi);
    }
  }
  return total + (hi - lo);
}

Eigen::MatrixXd gram_matrix(const KernelSpec& spec, std::span<const double> a,
                            std::span<const double> b) {
  const Evaluator k(spec);
  const auto rows = static_cast<Eigen::Index>(a.size());
  const auto cols = static_cast<Eigen::Index>(b.size());
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      out(i, j) = k(a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

Eigen::MatrixXd gram_matrix(const KernelSpec& spec, std::span<const double> times) {
  const Evaluator k(spec);
  const auto n = static_cast<Eigen::Index>(times.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out(j, j) = k(0.0);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = k(times[static_cast<std::size_t>(i)] - times[static_cast<std::size_t>(j)]);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

}  // namespace blgp
