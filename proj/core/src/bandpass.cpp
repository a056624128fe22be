#include "blgp/bandpass.hpp"

#include "blgp/error.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <type_traits>
#include <variant>

namespace blgp {

BandKernel::BandKernel(const KernelSpec& source, const Band& band, int order)
    : band_(band), order_(order) {
  if (order < 8) throw ValidationError("band kernel: order must be >= 8");
  add(source);
}

void BandKernel::add(const KernelSpec& source) {
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, CentredSinc>) {
          add_rectangles(k.sigma2, 0.0, k.delta);
        } else if constexpr (std::is_same_v<T, Sinc>) {
          add_rectangles(k.params.sigma2(), k.params.xi0(), k.params.delta());
        } else if constexpr (std::is_same_v<T, GeneralisedSinc>) {
          const double w = k.params.delta() / k.order;
          for (double c : gsk_sub_centres(k.params, k.order)) {
            add_rectangles(k.params.sigma2() / k.order * k.envelope(c), c, w);
          }
        } else if constexpr (std::is_same_v<T, KernelSum>) {
          for (const auto& c : k.components) add(c);
        } else {
          add_smooth(source);
        }
      },
      source.variant());
}

// A symmetric rectangle pair of total power `power`: height power / (2 width)
// on [xi0 - width/2, xi0 + width/2] and its mirror image. Each positive-side
// overlap with the band contributes twice its area (the mirrored overlap on
// the negative side is included).
void BandKernel::add_rectangles(double power, double xi0, double width) {
  if (power == 0.0) return;
  const double height = power / (2.0 * width);
  for (double centre : {xi0, -xi0}) {
    const double lo = std::max(centre - 0.5 * width, band_.a());
    const double hi = std::min(centre + 0.5 * width, band_.b());
    if (hi <= lo) continue;
    pieces_.push_back({2.0 * height * (hi - lo), 0.5 * (lo + hi), hi - lo});
  }
}

void BandKernel::add_smooth(const KernelSpec& source) {
  const double width = band_.delta() / order_;
  if (nodes_.empty()) {
    nodes_.resize(static_cast<std::size_t>(order_));
    weights_.assign(static_cast<std::size_t>(order_), 0.0);
    for (int i = 0; i < order_; ++i) nodes_[static_cast<std::size_t>(i)] = band_.a() + (i + 0.5) * width;
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double s = kernel_psd(source, nodes_[i]);
    if (!std::isfinite(s) || s < 0.0) {
      std::ostringstream os;
      os << "band kernel: source density is undefined at xi=" << nodes_[i];
      throw ValidationError(os.str());
    }
    weights_[i] += 2.0 * s * width;
  }
}

double BandKernel::operator()(double tau) const {
  double sum = 0.0;
  for (const Piece& p : pieces_) {
    sum += p.power * normalized_sinc(p.width * tau) * cos_pi(2.0 * p.centre * tau);
  }
  if (nodes_.empty()) return sum;

  const double width = band_.delta() / static_cast<double>(nodes_.size());
  // Rotating phasor e^{2 pi i xi_k tau}; error grows only linearly in N.
  const std::complex<double> step(cos_pi(2.0 * width * tau), sin_pi(2.0 * width * tau));
  std::complex<double> z(cos_pi(2.0 * nodes_.front() * tau), sin_pi(2.0 * nodes_.front() * tau));
  double smooth = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    smooth += weights_[i] * z.real();
    z *= step;
  }
  return sum + normalized_sinc(width * tau) * smooth;
}

double BandKernel::power() const {
  double sum = 0.0;
  for (const Piece& p : pieces_) sum += p.power;
  for (double w : weights_) sum += w;
  return sum;
}

Eigen::MatrixXd BandKernel::gram(std::span<const double> a, std::span<const double> b) const {
  Eigen::MatrixXd k(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(a[i] - b[j]);
    }
  }
  return k;
}

Eigen::MatrixXd BandKernel::gram(std::span<const double> times) const {
  const auto n = static_cast<Eigen::Index>(times.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = power();
    for (Eigen::Index j = 0; j < i; ++j) {
      k(i, j) = k(j, i) =
          (*this)(times[static_cast<std::size_t>(i)] - times[static_cast<std::size_t>(j)]);
    }
  }
  return k;
}

double band_kernel(const KernelSpec& source, const Band& band, int order, double tau) {
  return BandKernel(source, band, order)(tau);
}

PosteriorSummary bandpass_posterior(const TimeSeries& obs, const KernelSpec& source,
                                    const Band& band, double noise_var,
                                    std::span<const double> query, int order, bool means_only,
                                    Jitter jitter) {
  if (!(noise_var >= 0.0)) throw ValidationError("bandpass: noise_var must be >= 0");
  const BandKernel kb(source, band, order);
  Eigen::MatrixXd lambda = gram_matrix(source, obs.times());
  lambda.diagonal().array() += noise_var;
  if (means_only) {
    PosteriorSummary out;
    out.query_times.assign(query.begin(), query.end());
    if (obs.empty()) {
      out.mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(query.size()));
    } else {
      const JitteredCholesky chol(lambda, jitter);
      out.mean = kb.gram(query, obs.times()) * chol.solve(obs.values_vector());
    }
    return out;
  }
  return condition_gaussian(lambda, kb.gram(query, obs.times()), kb.gram(query),
                            obs.values_vector(), query, kb.power(), jitter);
}

Eigen::VectorXd brick_wall(const TimeSeries& obs, const Band& band, std::span<const double> query) {
  const auto t = obs.times();
  const auto y = obs.values();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(query.size()));
  for (std::size_t q = 0; q < query.size(); ++q) {
    double sum = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double d = query[q] - t[i];
      sum += normalized_sinc(band.delta() * d) * cos_pi(2.0 * band.xi0() * d) * y[i];
    }
    out[static_cast<Eigen::Index>(q)] = sum;
  }
  return out;
}

}  // namespace blgp
