#include "blgp/spectral.hpp"

#include "blgp/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace blgp {

std::string to_string(PsdMethod method) {
  return method == PsdMethod::LombScargle ? "lomb-scargle" : "welch-uniform";
}

double PsdEstimate::total() const { return std::accumulate(power.begin(), power.end(), 0.0); }

namespace {

double sample_variance(std::span<const double> v) {
  if (v.empty()) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size());
}

void normalise_to(std::vector<double>& power, double target) {
  const double sum = std::accumulate(power.begin(), power.end(), 0.0);
  if (sum <= 0.0) {
    std::fill(power.begin(), power.end(), 0.0);
    return;
  }
  for (double& p : power) p *= target / sum;
}

double median_spacing(std::span<const double> t) {
  std::vector<double> d(t.size() - 1);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) d[i] = t[i + 1] - t[i];
  auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  return *mid;
}

}  // namespace

std::vector<double> default_frequency_grid(const TimeSeries& ts, double oversample) {
  if (ts.size() < 2 || ts.span() <= 0.0) {
    throw ValidationError("frequency grid: need at least two distinct times");
  }
  if (!(oversample > 0.0)) throw ValidationError("frequency grid: oversample must be > 0");
  const double df = 1.0 / (oversample * ts.span());
  const double fmax = 0.5 / median_spacing(ts.times());
  std::vector<double> grid;
  for (std::size_t k = 1;; ++k) {
    const double f = static_cast<double>(k) * df;
    if (f > fmax * (1.0 + 1e-12)) break;
    grid.push_back(f);
  }
  if (grid.empty()) grid.push_back(fmax);
  return grid;
}

PsdEstimate periodogram(const TimeSeries& ts, std::span<const double> freq_grid) {
  if (ts.size() < 4) throw ValidationError("periodogram: need at least 4 observations");
  for (std::size_t k = 0; k < freq_grid.size(); ++k) {
    if (!(freq_grid[k] > 0.0) || !std::isfinite(freq_grid[k]) ||
        (k > 0 && !(freq_grid[k] > freq_grid[k - 1]))) {
      throw ValidationError("periodogram: frequency grid must be positive and increasing");
    }
  }

  PsdEstimate out;
  out.method = PsdMethod::LombScargle;
  out.frequencies.assign(freq_grid.begin(), freq_grid.end());
  out.power.assign(freq_grid.size(), 0.0);

  const auto t = ts.times();
  const auto v = ts.values();
  const std::size_t n = ts.size();
  const double variance = sample_variance(v);
  if (variance <= 0.0) {
    out.warnings.emplace_back("periodogram: constant series, power is zero");
    return out;
  }
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = v[i] - mean;

  // Times are shifted to the series midpoint to keep the phases small.
  const double t0 = 0.5 * (t.front() + t.back());
  for (std::size_t k = 0; k < freq_grid.size(); ++k) {
    const double w = 2.0 * std::numbers::pi * freq_grid[k];
    double s2 = 0.0, c2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double arg = 2.0 * w * (t[i] - t0);
      s2 += std::sin(arg);
      c2 += std::cos(arg);
    }
    const double tau = 0.5 * std::atan2(s2, c2) / w;
    double yc = 0.0, ys = 0.0, cc = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double arg = w * (t[i] - t0 - tau);
      const double c = std::cos(arg);
      const double s = std::sin(arg);
      yc += y[i] * c;
      ys += y[i] * s;
      cc += c * c;
      ss += s * s;
    }
    const double eps = 1e-12 * static_cast<double>(n);
    double p = 0.0;
    if (cc > eps) p += yc * yc / cc;
    if (ss > eps) p += ys * ys / ss;
    out.power[k] = 0.5 * p;
  }
  normalise_to(out.power, variance);
  return out;
}

PsdEstimate periodogram(const TimeSeries& ts) {
  const auto grid = default_frequency_grid(ts);
  return periodogram(ts, grid);
}

PsdEstimate welch_uniform(std::span<const double> values, double dt, int segments) {
  if (values.size() < 4) throw ValidationError("welch: need at least 4 samples");
  if (!(dt > 0.0)) throw ValidationError("welch: dt must be > 0");
  if (segments < 1) throw ValidationError("welch: segments must be >= 1");

  const std::size_t n = values.size();
  const std::size_t len = segments == 1 ? n : 2 * n / static_cast<std::size_t>(segments + 1);
  if (len < 4) throw ValidationError("welch: too many segments for the series length");
  const std::size_t hop = segments == 1 ? 0 : len / 2;

  std::vector<double> window(len);
  for (std::size_t i = 0; i < len; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                     static_cast<double>(len));
  }

  PsdEstimate out;
  out.method = PsdMethod::WelchUniform;
  const std::size_t bins = len / 2 + 1;
  out.frequencies.resize(bins);
  out.power.assign(bins, 0.0);
  for (std::size_t k = 0; k < bins; ++k) {
    out.frequencies[k] = static_cast<double>(k) / (static_cast<double>(len) * dt);
  }

  std::vector<double> seg(len);
  for (int s = 0; s < segments; ++s) {
    const std::size_t start = static_cast<std::size_t>(s) * hop;
    const double mean =
        std::accumulate(values.begin() + static_cast<std::ptrdiff_t>(start),
                        values.begin() + static_cast<std::ptrdiff_t>(start + len), 0.0) /
        static_cast<double>(len);
    for (std::size_t i = 0; i < len; ++i) seg[i] = (values[start + i] - mean) * window[i];
    for (std::size_t k = 0; k < bins; ++k) {
      // k / len as a fraction keeps the phase exact for large i.
      double re = 0.0, im = 0.0;
      for (std::size_t i = 0; i < len; ++i) {
        const double x = 2.0 * static_cast<double>((k * i) % len) / static_cast<double>(len);
        re += seg[i] * std::cos(std::numbers::pi * x);
        im -= seg[i] * std::sin(std::numbers::pi * x);
      }
      const double weight = (k == 0 || 2 * k == len) ? 1.0 : 2.0;
      out.power[k] += weight * (re * re + im * im);
    }
  }
  normalise_to(out.power, sample_variance(values));
  if (out.total() == 0.0) out.warnings.emplace_back("welch: constant series, power is zero");
  return out;
}

std::vector<Band> support_estimate(const PsdEstimate& psd, double threshold) {
  if (!(threshold > 0.0) || threshold > 1.0) {
    throw ValidationError("support estimate: threshold must lie in (0, 1]");
  }
  const auto& f = psd.frequencies;
  const auto& p = psd.power;
  std::vector<Band> bands;
  if (p.empty()) return bands;
  const double peak = *std::max_element(p.begin(), p.end());
  if (peak <= 0.0) return bands;
  const double level = threshold * peak;

  auto lower_edge = [&](std::size_t i) {
    if (i == 0) return f.size() > 1 ? std::max(0.0, f[0] - 0.5 * (f[1] - f[0])) : 0.0;
    return 0.5 * (f[i - 1] + f[i]);
  };
  auto upper_edge = [&](std::size_t i) {
    if (i + 1 == f.size()) return f.size() > 1 ? f[i] + 0.5 * (f[i] - f[i - 1]) : f[i] + 1.0;
    return 0.5 * (f[i] + f[i + 1]);
  };

  std::size_t i = 0;
  while (i < p.size()) {
    if (p[i] < level) {
      ++i;
      continue;
    }
    const std::size_t first = i;
    while (i + 1 < p.size() && p[i + 1] >= level) ++i;
    bands.emplace_back(lower_edge(first), upper_edge(i));
    ++i;
  }
  return bands;
}

double out_of_band_fraction(const PsdEstimate& psd, std::span<const Band> bands, int guard_bins) {
  const double total = psd.total();
  if (total <= 0.0) return 0.0;
  const auto& f = psd.frequencies;
  const std::size_t nb = f.size();
  std::vector<bool> inside(nb, false);
  for (std::size_t k = 0; k < nb; ++k) {
    for (const Band& b : bands) {
      if (b.contains(f[k])) inside[k] = true;
    }
  }
  std::vector<bool> guarded = inside;
  if (guard_bins > 0) {
    const auto g = static_cast<std::size_t>(guard_bins);
    for (std::size_t k = 0; k < nb; ++k) {
      if (!inside[k]) continue;
      for (std::size_t j = k >= g ? k - g : 0; j <= std::min(nb - 1, k + g); ++j) {
        guarded[j] = true;
      }
    }
  }
  double outside = 0.0;
  for (std::size_t k = 0; k < nb; ++k) {
    if (!guarded[k]) outside += psd.power[k];
  }
  return outside / total;
}

std::vector<std::size_t> spectral_peaks(const PsdEstimate& psd, std::size_t count) {
  const auto& p = psd.power;
  std::vector<std::size_t> peaks;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const bool left = k == 0 || p[k] > p[k - 1];
    const bool right = k + 1 == p.size() || p[k] >= p[k + 1];
    if (left && right && p[k] > 0.0) peaks.push_back(k);
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });
  if (peaks.size() > count) peaks.resize(count);
  return peaks;
}

}  // namespace blgp
