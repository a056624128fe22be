#include "blgp/error.hpp"
#include "blgp/spectral.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace blgp;

namespace {

TimeSeries sinusoid(double f, std::size_t n, double dt) {
  const auto t = linspace(0.0, dt * static_cast<double>(n - 1), n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = std::sin(2.0 * std::numbers::pi * f * t[i]);
  return TimeSeries(t, y);
}

double variance(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("default frequency grid") {
  const auto ts = sinusoid(0.1, 101, 1.0);
  const auto g = default_frequency_grid(ts);
  CHECK(g.front() == doctest::Approx(1.0 / 400.0));
  CHECK(g.back() <= 0.5 + 1e-12);
  CHECK(std::is_sorted(g.begin(), g.end()));
}

TEST_CASE("sinusoid peak within one bin") {
  for (double f : {0.05, 0.137, 0.31}) {
    const auto psd = periodogram(sinusoid(f, 400, 1.0));
    const auto peak = spectral_peaks(psd, 1);
    REQUIRE(peak.size() == 1);
    const double bin = psd.frequencies[1] - psd.frequencies[0];
    CHECK(std::fabs(psd.frequencies[peak[0]] - f) <= bin);
  }
}

TEST_CASE("power is non-negative and sums to the sample variance") {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::normal_distribution<double> normal;
  std::vector<double> t(150);
  for (auto& x : t) x = u(gen);
  std::sort(t.begin(), t.end());
  std::vector<double> y(t.size());
  for (auto& v : y) v = 3.0 + normal(gen);
  const TimeSeries ts(t, y);
  const auto psd = periodogram(ts);
  CHECK(psd.method == PsdMethod::LombScargle);
  CHECK(psd.total() == doctest::Approx(variance(y)));
  for (double p : psd.power) CHECK(p >= 0.0);

  const auto w = welch_uniform(y, 0.5, 3);
  CHECK(w.method == PsdMethod::WelchUniform);
  CHECK(w.total() == doctest::Approx(variance(y)));
}

TEST_CASE("constant series gives zero power with a warning") {
  const TimeSeries ts({0.0, 1.0, 2.0, 3.0, 4.5}, {2.0, 2.0, 2.0, 2.0, 2.0});
  const auto psd = periodogram(ts);
  for (double p : psd.power) CHECK(p == 0.0);
  CHECK_FALSE(psd.warnings.empty());
}

TEST_CASE("periodogram input checks") {
  CHECK_THROWS_AS(periodogram(TimeSeries({0.0, 1.0, 2.0}, {1.0, 2.0, 3.0})), ValidationError);
  const auto ts = sinusoid(0.1, 20, 1.0);
  const std::vector<double> bad = {0.2, 0.1};
  CHECK_THROWS_AS(periodogram(ts, bad), ValidationError);
}

TEST_CASE("white noise exceedance rate") {
  // Each bin is close to exponential, so P(bin > 5 median) = 2^-5.
  std::size_t exceed = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 200.0);
    std::normal_distribution<double> normal;
    std::vector<double> t(200);
    for (auto& x : t) x = u(gen);
    std::sort(t.begin(), t.end());
    std::vector<double> y(t.size());
    for (auto& v : y) v = normal(gen);
    const auto psd = periodogram(TimeSeries(t, y));
    std::vector<double> sorted = psd.power;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];
    for (double p : psd.power) exceed += p > 5.0 * median ? 1 : 0;
    total += psd.power.size();
  }
  const double rate = static_cast<double>(exceed) / static_cast<double>(total);
  CHECK(rate > 0.02);
  CHECK(rate < 0.045);
}

TEST_CASE("support estimate") {
  PsdEstimate psd;
  psd.frequencies = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
  psd.power = {0.0, 1.0, 5.0, 0.5, 0.0, 4.0, 0.0};
  const auto one = support_estimate(psd, 0.9);
  REQUIRE(one.size() == 1);
  CHECK(one[0].contains(0.3));
  CHECK(one[0].a() == doctest::Approx(0.25));
  CHECK(one[0].b() == doctest::Approx(0.35));
  const auto two = support_estimate(psd, 0.5);
  REQUIRE(two.size() == 2);
  CHECK(two[0].b() < two[1].a());
  CHECK(two[1].contains(0.6));
  const auto top = support_estimate(psd, 1.0);
  REQUIRE(top.size() == 1);
  CHECK(top[0].contains(0.3));
  CHECK_FALSE(top[0].contains(0.2));
  CHECK_THROWS_AS(support_estimate(psd, 0.0), ValidationError);
}

TEST_CASE("two separated sinusoids give two bands") {
  const auto t = linspace(0.0, 399.0, 400);
  std::vector<double> y(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    y[i] = std::sin(2.0 * std::numbers::pi * 0.1 * t[i]) + std::sin(2.0 * std::numbers::pi * 0.35 * t[i]);
  }
  const auto bands = support_estimate(periodogram(TimeSeries(t, y)), 0.2);
  REQUIRE(bands.size() == 2);
  CHECK(bands[0].contains(0.1));
  CHECK(bands[1].contains(0.35));
}

TEST_CASE("out of band fraction and peaks") {
  PsdEstimate psd;
  psd.frequencies = {0.1, 0.2, 0.3, 0.4, 0.5};
  psd.power = {1.0, 2.0, 1.0, 0.0, 1.0};
  const Band b(0.15, 0.25);
  CHECK(out_of_band_fraction(psd, std::span<const Band>(&b, 1)) == doctest::Approx(3.0 / 5.0));
  CHECK(out_of_band_fraction(psd, std::span<const Band>(&b, 1), 1) == doctest::Approx(1.0 / 5.0));
  const auto peaks = spectral_peaks(psd, 5);
  REQUIRE(peaks.size() >= 2);
  CHECK(peaks[0] == 1);
}
