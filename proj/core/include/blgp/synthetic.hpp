#pragma once

#include "blgp/demod.hpp"
#include "blgp/kernels.hpp"
#include "blgp/rng.hpp"
#include "blgp/time_series.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace blgp {

enum class SyntheticKind { GpSincDraw, BandLimitedNoise, SinusoidMixture, ModulatedStereo };
enum class Sampling { Uniform, JitteredUniform, UniformRandom };

std::string to_string(SyntheticKind kind);
SyntheticKind synthetic_kind_from_string(const std::string& s);
std::string to_string(Sampling sampling);
Sampling sampling_from_string(const std::string& s);

/// Real random Fourier series sum_k a_k cos(2 pi f_k t) + b_k sin(2 pi f_k t).
struct FourierSeries {
  std::vector<double> freqs;
  std::vector<double> cos_coef;
  std::vector<double> sin_coef;

  double operator()(double t) const;
  std::vector<double> operator()(std::span<const double> t) const;
  /// Time-averaged power, sum (a_k^2 + b_k^2) / 2.
  double power() const;
};

/// Harmonics k / period with frequencies in [lo, hi), independent Gaussian
/// coefficients, scaled to total power `power`.
FourierSeries random_fourier_series(Rng& rng, double lo, double hi, double period, double power);

struct SyntheticRecipe {
  SyntheticKind kind = SyntheticKind::BandLimitedNoise;
  std::size_t length = 1000;
  /// Nominal spacing; the series covers [0, (length - 1) dt].
  double dt = 1.0;
  Sampling sampling = Sampling::Uniform;
  /// Jitter half-width as a fraction of dt for jittered-uniform sampling.
  double jitter = 0.25;

  /// gp-sinc-draw: the kernel to draw from.
  std::optional<KernelSpec> kernel;

  /// band-limited-noise: white noise truncated to [0, cutoff), unit variance.
  double cutoff = 0.1;

  /// sinusoid-mixture: sum of amplitude * sin(2 pi f t + phase).
  std::vector<double> frequencies;
  std::vector<double> amplitudes;
  std::vector<double> phases;

  /// modulated-stereo: channels band-limited to channel_delta / 2 with unit
  /// variance, except for a `leak` share of power in
  /// [channel_delta / 2, 0.75 channel_delta].
  double carrier = 2.0;
  double channel_delta = 1.0;
  double leak = 0.0;

  void validate() const;
};

struct SyntheticData {
  TimeSeries series;
  /// Latent channels (modulated-stereo only).
  std::optional<StereoChannels> channels;
};

/// Deterministic in `seed`.
SyntheticData make_synthetic(const SyntheticRecipe& recipe, std::uint64_t seed);

/// Uniform-random subsample without replacement, then Gaussian noise with
/// std noise_fraction * std(values). Deterministic in `seed`.
TimeSeries corrupt(const TimeSeries& ts, double noise_fraction, std::size_t subsample_count,
                   std::uint64_t seed);

}  // namespace blgp
