#include "blgp/synthetic.hpp"

#include "blgp/error.hpp"
#include "blgp/gp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace blgp {

std::string to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::GpSincDraw: return "gp-sinc-draw";
    case SyntheticKind::BandLimitedNoise: return "band-limited-noise";
    case SyntheticKind::SinusoidMixture: return "sinusoid-mixture";
    case SyntheticKind::ModulatedStereo: return "modulated-stereo";
  }
  return "unknown";
}

SyntheticKind synthetic_kind_from_string(const std::string& s) {
  for (auto k : {SyntheticKind::GpSincDraw, SyntheticKind::BandLimitedNoise,
                 SyntheticKind::SinusoidMixture, SyntheticKind::ModulatedStereo}) {
    if (to_string(k) == s) return k;
  }
  throw ValidationError("unknown synthetic recipe '" + s + "'");
}

std::string to_string(Sampling sampling) {
  switch (sampling) {
    case Sampling::Uniform: return "uniform";
    case Sampling::JitteredUniform: return "jittered-uniform";
    case Sampling::UniformRandom: return "uniform-random";
  }
  return "unknown";
}

Sampling sampling_from_string(const std::string& s) {
  for (auto k : {Sampling::Uniform, Sampling::JitteredUniform, Sampling::UniformRandom}) {
    if (to_string(k) == s) return k;
  }
  throw ValidationError("unknown sampling scheme '" + s + "'");
}

double FourierSeries::operator()(double t) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    sum += cos_coef[k] * cos_pi(2.0 * freqs[k] * t) + sin_coef[k] * sin_pi(2.0 * freqs[k] * t);
  }
  return sum;
}

std::vector<double> FourierSeries::operator()(std::span<const double> t) const {
  std::vector<double> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = (*this)(t[i]);
  return out;
}

double FourierSeries::power() const {
  double p = 0.0;
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    p += 0.5 * (cos_coef[k] * cos_coef[k] + sin_coef[k] * sin_coef[k]);
  }
  return p;
}

FourierSeries random_fourier_series(Rng& rng, double lo, double hi, double period, double power) {
  if (!(period > 0.0) || !(hi > lo) || lo < 0.0) {
    throw ValidationError("fourier series: need period > 0 and 0 <= lo < hi");
  }
  FourierSeries fs;
  const auto k0 = static_cast<long>(std::max(1.0, std::ceil(lo * period - 1e-9)));
  for (long k = k0;; ++k) {
    const double f = static_cast<double>(k) / period;
    if (f >= hi - 1e-12) break;
    fs.freqs.push_back(f);
    fs.cos_coef.push_back(rng.normal());
    fs.sin_coef.push_back(rng.normal());
  }
  if (fs.freqs.empty()) throw ValidationError("fourier series: no harmonics fall in the band");
  const double scale = std::sqrt(power / fs.power());
  for (auto& c : fs.cos_coef) c *= scale;
  for (auto& c : fs.sin_coef) c *= scale;
  return fs;
}

void SyntheticRecipe::validate() const {
  if (length < 1) throw ValidationError("recipe: length must be >= 1");
  if (!(dt > 0.0)) throw ValidationError("recipe: dt must be > 0");
  if (!(jitter >= 0.0 && jitter < 0.5)) throw ValidationError("recipe: jitter must lie in [0, 0.5)");
  switch (kind) {
    case SyntheticKind::GpSincDraw:
      if (!kernel) throw ValidationError("recipe gp-sinc-draw: kernel required");
      break;
    case SyntheticKind::BandLimitedNoise:
      if (!(cutoff > 0.0)) throw ValidationError("recipe band-limited-noise: cutoff must be > 0");
      break;
    case SyntheticKind::SinusoidMixture:
      if (frequencies.empty() || amplitudes.size() != frequencies.size() ||
          (!phases.empty() && phases.size() != frequencies.size())) {
        throw ValidationError("recipe sinusoid-mixture: frequencies/amplitudes/phases mismatch");
      }
      break;
    case SyntheticKind::ModulatedStereo:
      if (!(carrier > 0.0) || !(channel_delta > 0.0) || !(leak >= 0.0 && leak < 1.0)) {
        throw ValidationError("recipe modulated-stereo: need carrier > 0, delta > 0, 0 <= leak < 1");
      }
      break;
  }
}

namespace {

std::vector<double> sample_times(const SyntheticRecipe& r, Rng rng) {
  std::vector<double> t(r.length);
  const double stop = static_cast<double>(r.length - 1) * r.dt;
  switch (r.sampling) {
    case Sampling::Uniform:
      for (std::size_t i = 0; i < r.length; ++i) t[i] = static_cast<double>(i) * r.dt;
      break;
    case Sampling::JitteredUniform:
      for (std::size_t i = 0; i < r.length; ++i) {
        t[i] = static_cast<double>(i) * r.dt + rng.uniform(-r.jitter, r.jitter) * r.dt;
      }
      break;
    case Sampling::UniformRandom:
      for (auto& x : t) x = rng.uniform(0.0, std::max(stop, r.dt));
      std::sort(t.begin(), t.end());
      break;
  }
  // Collisions have probability zero but would break strict ordering.
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) t[i] = std::nextafter(t[i - 1], INFINITY);
  }
  return t;
}

}  // namespace

SyntheticData make_synthetic(const SyntheticRecipe& recipe, std::uint64_t seed) {
  recipe.validate();
  const Rng root(seed);
  std::vector<double> t = sample_times(recipe, root.split("times"));
  const double period = static_cast<double>(recipe.length) * recipe.dt;

  switch (recipe.kind) {
    case SyntheticKind::GpSincDraw: {
      const GPModel model(*recipe.kernel, 0.0);
      const Eigen::MatrixXd draw = sample(model, t, root.split("draw").seed(), 1);
      std::vector<double> v(draw.data(), draw.data() + draw.size());
      return {TimeSeries(std::move(t), std::move(v)), std::nullopt};
    }
    case SyntheticKind::BandLimitedNoise: {
      Rng rng = root.split("noise");
      const auto fs = random_fourier_series(rng, 0.0, recipe.cutoff, period, 1.0);
      auto v = fs(t);
      return {TimeSeries(std::move(t), std::move(v)), std::nullopt};
    }
    case SyntheticKind::SinusoidMixture: {
      std::vector<double> v(t.size(), 0.0);
      for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t k = 0; k < recipe.frequencies.size(); ++k) {
          const double phase = recipe.phases.empty() ? 0.0 : recipe.phases[k];
          v[i] += recipe.amplitudes[k] *
                  std::sin(2.0 * std::numbers::pi * recipe.frequencies[k] * t[i] + phase);
        }
      }
      return {TimeSeries(std::move(t), std::move(v)), std::nullopt};
    }
    case SyntheticKind::ModulatedStereo: {
      const double half = 0.5 * recipe.channel_delta;
      auto channel = [&](const char* label) {
        Rng rng = root.split(label);
        auto fs = random_fourier_series(rng, 0.0, half, period, 1.0 - recipe.leak);
        if (recipe.leak > 0.0) {
          const auto extra = random_fourier_series(rng, half, 1.5 * half, period, recipe.leak);
          fs.freqs.insert(fs.freqs.end(), extra.freqs.begin(), extra.freqs.end());
          fs.cos_coef.insert(fs.cos_coef.end(), extra.cos_coef.begin(), extra.cos_coef.end());
          fs.sin_coef.insert(fs.sin_coef.end(), extra.sin_coef.begin(), extra.sin_coef.end());
        }
        return TimeSeries(t, fs(t));
      };
      StereoChannels ch(channel("x1"), channel("x2"));
      TimeSeries x = modulate(ch, recipe.carrier, t);
      return {std::move(x), std::move(ch)};
    }
  }
  throw ValidationError("unknown recipe kind");
}

TimeSeries corrupt(const TimeSeries& ts, double noise_fraction, std::size_t subsample_count,
                   std::uint64_t seed) {
  if (!(noise_fraction >= 0.0)) throw ValidationError("corrupt: noise fraction must be >= 0");
  if (subsample_count > ts.size()) {
    throw ValidationError("corrupt: subsample count exceeds series length");
  }
  const Rng root(seed);
  std::vector<std::size_t> idx(ts.size());
  std::iota(idx.begin(), idx.end(), 0);
  if (subsample_count < ts.size()) {
    Rng pick = root.split("subsample");
    // Partial Fisher-Yates.
    for (std::size_t i = 0; i < subsample_count; ++i) {
      std::uniform_int_distribution<std::size_t> d(i, idx.size() - 1);
      std::swap(idx[i], idx[d(pick.engine())]);
    }
    idx.resize(subsample_count);
    std::sort(idx.begin(), idx.end());
  }

  double scale = 0.0;
  if (noise_fraction > 0.0 && !ts.empty()) {
    const auto v = ts.values();
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    scale = noise_fraction * std::sqrt(ss / static_cast<double>(v.size()));
  }

  Rng noise = root.split("noise");
  std::vector<double> t, y;
  t.reserve(idx.size());
  y.reserve(idx.size());
  for (std::size_t i : idx) {
    t.push_back(ts.times()[i]);
    y.push_back(ts.values()[i] + (scale > 0.0 ? scale * noise.normal() : 0.0));
  }
  std::optional<double> noise_std = scale > 0.0 ? std::optional<double>(scale) : ts.noise_std();
  return TimeSeries(std::move(t), std::move(y), noise_std);
}

}  // namespace blgp
