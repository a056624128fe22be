#pragma once

#include "blgp/band.hpp"
#include "blgp/time_series.hpp"

#include <span>
#include <string>
#include <vector>

namespace blgp {

enum class PsdMethod { LombScargle, WelchUniform };

std::string to_string(PsdMethod method);

/// Power per frequency bin. Bins sum to the sample variance of the input.
struct PsdEstimate {
  std::vector<double> frequencies;
  std::vector<double> power;
  PsdMethod method = PsdMethod::LombScargle;
  std::vector<std::string> warnings;

  double total() const;
};

/// Grid from 1/(oversample * span) up to 0.5 / median spacing in steps of
/// 1/(oversample * span).
std::vector<double> default_frequency_grid(const TimeSeries& ts, double oversample = 4.0);

/// Lomb-Scargle periodogram of the mean-centred series. A constant series
/// gives zero power and a warning.
PsdEstimate periodogram(const TimeSeries& ts, std::span<const double> freq_grid);
PsdEstimate periodogram(const TimeSeries& ts);

/// Averaged Hann-windowed periodogram of uniformly sampled values (spacing
/// dt), split into `segments` half-overlapping segments. Frequencies are the
/// DFT bins k / (L dt), k = 0..L/2.
PsdEstimate welch_uniform(std::span<const double> values, double dt, int segments = 1);

/// Maximal runs of bins with power >= threshold * max(power), returned as
/// bands whose edges sit halfway between neighbouring bins.
std::vector<Band> support_estimate(const PsdEstimate& psd, double threshold);

/// Share of total power in bins that are more than `guard_bins` bins away
/// from every band.
double out_of_band_fraction(const PsdEstimate& psd, std::span<const Band> bands,
                            int guard_bins = 0);

/// Indices of local maxima, strongest first, at most `count` of them.
std::vector<std::size_t> spectral_peaks(const PsdEstimate& psd, std::size_t count);

}  // namespace blgp
