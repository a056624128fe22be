#include "blgp/training.hpp"

#include "blgp/error.hpp"
#include "blgp/optimize.hpp"
#include "blgp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace blgp {

void TrainingConfig::validate() const {
  if (max_iters < 1) throw ValidationError("training: max_iters must be >= 1");
  if (restarts < 1) throw ValidationError("training: restarts must be >= 1");
  if (!(log_lower < log_upper)) throw ValidationError("training: log_lower must be < log_upper");
  if (!(rel_tol > 0.0)) throw ValidationError("training: rel_tol must be > 0");
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Unpacker {
  const Eigen::VectorXd& x;
  double lo;
  double hi;
  double log_min_delta;
  Eigen::Index pos = 0;

  double positive() { return std::exp(std::clamp(x[pos++], lo, hi)); }
  double bandwidth() { return std::exp(std::clamp(x[pos++], std::max(lo, log_min_delta), hi)); }
  double spectral_variance() {
    // gamma >= (min_delta / 4)^2 mirrors the width-to-variance map of the
    // periodogram initialisation.
    const double floor = 2.0 * (log_min_delta - std::log(4.0));
    return std::exp(std::clamp(x[pos++], std::max(lo, floor), hi));
  }
  double linear() { return std::max(0.0, x[pos++]); }
};

KernelSpec unpack_kernel(Unpacker& u, const KernelSpec& shape) {
  return std::visit(
      [&](const auto& k) -> KernelSpec {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, CentredSinc>) {
          const double s2 = u.positive();
          return KernelSpec::centred_sinc(s2, u.bandwidth());
        } else if constexpr (std::is_same_v<T, Sinc>) {
          const double s2 = u.positive();
          const double xi0 = u.linear();
          return KernelSpec::sinc(SincParams(s2, xi0, u.bandwidth()));
        } else if constexpr (std::is_same_v<T, GeneralisedSinc>) {
          const double s2 = u.positive();
          const double xi0 = u.linear();
          return KernelSpec::generalised_sinc(SincParams(s2, xi0, u.bandwidth()), k.envelope,
                                              k.order);
        } else if constexpr (std::is_same_v<T, SpectralMixture>) {
          const double s2 = u.positive();
          const double xi0 = u.linear();
          return KernelSpec::spectral_mixture(s2, xi0, u.spectral_variance());
        } else if constexpr (std::is_same_v<T, WhiteNoise>) {
          return KernelSpec::white_noise(u.positive());
        } else {
          std::vector<KernelSpec> parts;
          for (const auto& c : k.components) parts.push_back(unpack_kernel(u, c));
          return KernelSpec::sum(std::move(parts));
        }
      },
      shape.variant());
}

void pack_kernel(const KernelSpec& spec, std::vector<double>& out) {
  auto log_of = [](double v) { return std::log(std::max(v, 1e-300)); };
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, CentredSinc>) {
          out.insert(out.end(), {log_of(k.sigma2), log_of(k.delta)});
        } else if constexpr (std::is_same_v<T, Sinc> || std::is_same_v<T, GeneralisedSinc>) {
          out.insert(out.end(),
                     {log_of(k.params.sigma2()), k.params.xi0(), log_of(k.params.delta())});
        } else if constexpr (std::is_same_v<T, SpectralMixture>) {
          out.insert(out.end(), {log_of(k.sigma2), k.xi0, log_of(k.gamma)});
        } else if constexpr (std::is_same_v<T, WhiteNoise>) {
          out.push_back(log_of(k.sigma2));
        } else {
          for (const auto& c : k.components) pack_kernel(c, out);
        }
      },
      spec.variant());
}

// Marks which packed coordinates are linear (xi0) so the optimizer can use a
// frequency-sized step there.
void linear_mask(const KernelSpec& spec, std::vector<bool>& out) {
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, CentredSinc>) {
          out.insert(out.end(), {false, false});
        } else if constexpr (std::is_same_v<T, WhiteNoise>) {
          out.push_back(false);
        } else if constexpr (std::is_same_v<T, KernelSum>) {
          for (const auto& c : k.components) linear_mask(c, out);
        } else {
          out.insert(out.end(), {false, true, false});
        }
      },
      spec.variant());
}

TraceRow describe(int iter, double objective, const GPModel& model) {
  TraceRow row{iter, objective, kNaN, kNaN, kNaN, model.noise_var()};
  const KernelSpec* spec = &model.kernel();
  while (const auto* sum = std::get_if<KernelSum>(&spec->variant())) {
    if (sum->components.empty()) return row;
    spec = &sum->components.front();
  }
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, CentredSinc>) {
          row.sigma2 = k.sigma2;
          row.xi0 = 0.0;
          row.delta = k.delta;
        } else if constexpr (std::is_same_v<T, Sinc> || std::is_same_v<T, GeneralisedSinc>) {
          row.sigma2 = k.params.sigma2();
          row.xi0 = k.params.xi0();
          row.delta = k.params.delta();
        } else if constexpr (std::is_same_v<T, SpectralMixture>) {
          row.sigma2 = k.sigma2;
          row.xi0 = k.xi0;
        } else if constexpr (std::is_same_v<T, WhiteNoise>) {
          row.sigma2 = k.sigma2;
        }
      },
      spec->variant());
  return row;
}

double sample_variance(std::span<const double> v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size());
}

struct PeakRegion {
  double centre;
  double lo;
  double hi;
};

// Region around a periodogram peak where power stays above 10% of the peak,
// bridging dips of a few bins (single bins of a noisy periodogram often fall
// below the threshold inside a flat band).
PeakRegion peak_region(const PsdEstimate& psd, std::size_t k) {
  const auto& f = psd.frequencies;
  const auto& p = psd.power;
  const double level = 0.1 * p[k];
  constexpr std::size_t kMaxGap = 4;
  std::size_t first = k, last = k;
  for (std::size_t j = k + 1; j < p.size() && j - last <= kMaxGap; ++j) {
    if (p[j] >= level) last = j;
  }
  for (std::size_t j = k; j-- > 0 && first - j <= kMaxGap;) {
    if (p[j] >= level) first = j;
  }
  const double bin = f.size() > 1 ? f[1] - f[0] : f[0];
  return {f[k], std::max(0.0, f[first] - 0.5 * bin), f[last] + 0.5 * bin};
}

KernelSpec seed_kernel(const KernelSpec& shape, const std::vector<PeakRegion>& regions,
                       std::size_t& next, double power, double bin) {
  auto region = [&]() {
    const PeakRegion r = regions[next % regions.size()];
    ++next;
    return r;
  };
  return std::visit(
      [&](const auto& k) -> KernelSpec {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, CentredSinc>) {
          const auto r = region();
          return KernelSpec::centred_sinc(power, std::max(2.0 * r.hi, 2.0 * bin));
        } else if constexpr (std::is_same_v<T, Sinc>) {
          const auto r = region();
          return KernelSpec::sinc(SincParams(power, r.centre, std::max(r.hi - r.lo, 2.0 * bin)));
        } else if constexpr (std::is_same_v<T, GeneralisedSinc>) {
          const auto r = region();
          return KernelSpec::generalised_sinc(
              SincParams(power, r.centre, std::max(r.hi - r.lo, 2.0 * bin)), k.envelope, k.order);
        } else if constexpr (std::is_same_v<T, SpectralMixture>) {
          const auto r = region();
          const double width = std::max(r.hi - r.lo, 2.0 * bin);
          return KernelSpec::spectral_mixture(power, r.centre, 0.0625 * width * width);
        } else if constexpr (std::is_same_v<T, WhiteNoise>) {
          return KernelSpec::white_noise(power);
        } else {
          const double share = power / static_cast<double>(std::max<std::size_t>(1, k.components.size()));
          std::vector<KernelSpec> parts;
          for (const auto& c : k.components) parts.push_back(seed_kernel(c, regions, next, share, bin));
          return KernelSpec::sum(std::move(parts));
        }
      },
      shape.variant());
}

GPModel perturb(const GPModel& model, const TrainingConfig& config, int restart) {
  std::mt19937_64 gen(config.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(restart));
  std::normal_distribution<double> normal(0.0, 0.5);
  Eigen::VectorXd x = pack_parameters(model);
  std::vector<bool> linear;
  linear_mask(model.kernel(), linear);
  linear.push_back(false);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (linear[static_cast<std::size_t>(i)]) {
      x[i] *= std::exp(0.2 * normal(gen));
    } else {
      x[i] += normal(gen);
    }
  }
  return unpack_parameters(x, model, config.log_lower, config.log_upper, config.min_delta);
}

std::string format_vector(const Eigen::VectorXd& x) {
  std::ostringstream os;
  os << '[';
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ']';
  return os.str();
}

}  // namespace

Eigen::VectorXd pack_parameters(const GPModel& model) {
  std::vector<double> out;
  pack_kernel(model.kernel(), out);
  out.push_back(std::log(std::max(model.noise_var(), 1e-300)));
  return Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

GPModel unpack_parameters(const Eigen::VectorXd& x, const GPModel& shape, double log_lower,
                          double log_upper, double min_delta) {
  const double log_min = min_delta > 0.0 ? std::log(min_delta) : -std::numeric_limits<double>::infinity();
  Unpacker u{x, log_lower, log_upper, log_min};
  KernelSpec kernel = unpack_kernel(u, shape.kernel());
  const double noise = u.positive();
  if (u.pos != x.size()) throw ValidationError("training: parameter vector has the wrong length");
  return GPModel(std::move(kernel), noise);
}

GPModel initial_guess(const TimeSeries& obs, const GPModel& initial, const TrainingConfig& config,
                      int restart) {
  if (config.init == InitStrategy::Manual) {
    return restart == 0 ? initial : perturb(initial, config, restart);
  }
  if (obs.size() < 4) throw ValidationError("training: need at least 4 observations");

  double variance = sample_variance(obs.values());
  if (!(variance > 0.0)) {
    const auto v = obs.values();
    variance = std::max(1e-6, 1e-6 * v.front() * v.front());
  }

  const PsdEstimate psd = periodogram(obs);
  const double bin = psd.frequencies.size() > 1 ? psd.frequencies[1] - psd.frequencies[0]
                                                : psd.frequencies.front();
  std::vector<PeakRegion> regions;
  for (std::size_t k : spectral_peaks(psd, 3)) regions.push_back(peak_region(psd, k));
  if (regions.empty()) {
    regions.push_back({0.0, 0.0, 0.5 * psd.frequencies.back()});
  }

  std::size_t next = static_cast<std::size_t>(restart);
  KernelSpec kernel = seed_kernel(initial.kernel(), regions, next, variance, bin);
  GPModel guess(std::move(kernel), 0.1 * variance);
  if (static_cast<std::size_t>(restart) >= regions.size()) guess = perturb(guess, config, restart);
  return guess;
}

FitResult fit(const TimeSeries& obs, const GPModel& initial, const TrainingConfig& user_config) {
  user_config.validate();
  if (obs.size() < 4) throw ValidationError("fit: need at least 4 observations");
  TrainingConfig config = user_config;
  if (config.min_delta <= 0.0) config.min_delta = 1.0 / obs.span();

  FitResult best{initial, -std::numeric_limits<double>::infinity(), {}, false, true, {}};
  bool any_finite = false;

  for (int r = 0; r < config.restarts; ++r) {
    GPModel start = initial;
    try {
      start = initial_guess(obs, initial, config, r);
    } catch (const Error& e) {
      best.warnings.push_back("restart " + std::to_string(r) + ": " + e.what());
      continue;
    }

    bool reported = false;
    std::vector<std::string> restart_warnings;
    Objective objective = [&](const Eigen::VectorXd& x) {
      double value = std::numeric_limits<double>::quiet_NaN();
      try {
        value = -log_marginal_likelihood(
            unpack_parameters(x, start, config.log_lower, config.log_upper, config.min_delta), obs);
      } catch (const Error&) {
      }
      if (!std::isfinite(value) && !reported) {
        reported = true;
        restart_warnings.push_back("restart " + std::to_string(r) +
                                   ": non-finite objective at parameters " + format_vector(x));
      }
      return value;
    };

    const Eigen::VectorXd x0 = pack_parameters(start);
    const double f0 = objective(x0);
    if (!std::isfinite(f0)) {
      best.warnings.insert(best.warnings.end(), restart_warnings.begin(), restart_warnings.end());
      continue;
    }

    std::vector<bool> linear;
    linear_mask(start.kernel(), linear);
    linear.push_back(false);
    OptimizerOptions options;
    options.max_iters = config.max_iters;
    options.rel_tol = config.rel_tol;
    options.initial_step = Eigen::VectorXd::Ones(x0.size());
    for (Eigen::Index i = 0; i < x0.size(); ++i) {
      if (linear[static_cast<std::size_t>(i)]) {
        options.initial_step[i] = std::max(0.05 * std::fabs(x0[i]), 1e-3);
      }
    }

    std::vector<TraceRow> trace{describe(0, -f0, start)};
    IterationCallback record = [&](int iter, const Eigen::VectorXd& x, double fx) {
      trace.push_back(
          describe(iter, -fx, unpack_parameters(x, start, config.log_lower, config.log_upper, config.min_delta)));
    };
    const OptimizerResult res = config.optimizer == OptimizerKind::DirectionSet
                                    ? minimize_powell(objective, x0, options, record)
                                    : minimize_bfgs(objective, x0, options, record);

    const double lml = -res.value;
    if (!std::isfinite(lml) || res.value >= 1e299) continue;
    any_finite = true;
    if (lml > best.log_likelihood) {
      best.model = unpack_parameters(res.x, start, config.log_lower, config.log_upper, config.min_delta);
      best.log_likelihood = lml;
      best.trace = std::move(trace);
      best.converged = res.converged;
    }
    best.warnings.insert(best.warnings.end(), restart_warnings.begin(), restart_warnings.end());
  }

  best.best_effort = !any_finite;
  if (best.best_effort) {
    best.warnings.emplace_back("fit: every restart failed; returning the initial model");
  }
  return best;
}

}  // namespace blgp
