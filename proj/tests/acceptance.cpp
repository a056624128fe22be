// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Tolerances and runtime budgets are fixed
// below; a criterion that exceeds its budget fails as well.

#include "blgp/bandpass.hpp"
#include "blgp/demod.hpp"
#include "blgp/experiment.hpp"
#include "blgp/gp.hpp"
#include "blgp/kernels.hpp"
#include "blgp/linalg.hpp"
#include "blgp/nyquist.hpp"
#include "blgp/synthetic.hpp"
#include "blgp/training.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace blgp;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

// ---------------------------------------------------------------------------
// 1. Generalised sinc with a flat envelope equals the sinc kernel.

constexpr double kGskRelTol = 1e-10;

Outcome gsk_exactness() {
  const SincParams p(1.7, 2.3, 0.9);
  const auto one = SpectralEnvelope::constant(1.0);
  const auto taus = linspace(-10.3, 10.3, 200);
  double worst = 0.0;
  for (int n : {1, 2, 4, 8, 16, 64}) {
    for (double tau : taus) {
      const double ref = static_cast<double>(oracle::sinc_kernel(p.sigma2(), p.xi0(), p.delta(), tau));
      const double err = std::fabs(gsk_approx(p, one, n, tau) - ref) / std::fabs(ref);
      worst = std::max(worst, err);
    }
  }
  return {worst <= kGskRelTol, "max relative error " + fmt(worst) + " (tol " + fmt(kGskRelTol) + ")"};
}

// ---------------------------------------------------------------------------
// 2. Quadrature of each density reproduces its kernel.

constexpr double kFourierTol = 1e-6;
constexpr int kFourierNodes = 200000;

struct FourierCase {
  std::string name;
  KernelSpec spec;
  std::function<double(double)> psd;
  std::vector<std::pair<double, double>> intervals;
  double tau_max;
};

Outcome fourier_pairing() {
  std::vector<FourierCase> cases;
  {
    const auto s = KernelSpec::centred_sinc(1.3, 0.8);
    cases.push_back({"centred_sinc", s, [s](double xi) { return kernel_psd(s, xi); }, {{0.0, 0.4}},
                     10.0 / 0.8});
  }
  {
    const auto s = KernelSpec::sinc(SincParams(0.9, 1.5, 0.6));
    cases.push_back({"sinc", s, [s](double xi) { return kernel_psd(s, xi); }, {{1.2, 1.8}},
                     10.0 / 0.6});
  }
  {
    // Overlapping rectangles: split at the discontinuity.
    const auto s = KernelSpec::sinc(SincParams(1.0, 0.2, 1.0));
    cases.push_back({"sinc_overlap", s, [s](double xi) { return kernel_psd(s, xi); },
                     {{0.0, 0.3}, {0.3, 0.7}}, 10.0});
  }
  {
    // An order-N generalised sinc is a sum of N narrow sinc kernels, so its
    // density is a staircase: power sigma2 Gamma(c_i) / N spread over width
    // delta / N around each centre c_i.
    const SincParams p(1.0, 1.0, 0.8);
    const auto env = SpectralEnvelope::triangular(1.0, 0.4, 2.0);
    const int order = 4096;
    const auto s = KernelSpec::generalised_sinc(p, env, order);
    const double lo = p.xi0() - 0.5 * p.delta();
    const double w = p.delta() / order;
    auto stair = [=](double xi) {
      const double a = std::fabs(xi);
      if (a < lo || a > lo + p.delta()) return 0.0;
      const int i = std::min(order - 1, static_cast<int>((a - lo) / w));
      const double centre = lo + (i + 0.5) * w;
      return p.sigma2() / order * env(centre) / (2.0 * w);
    };
    cases.push_back({"gsk", s, stair, {{lo, lo + p.delta()}}, 10.0 / 0.8});
  }
  {
    const double gamma = 0.001;
    const auto s = KernelSpec::spectral_mixture(1.0, 0.5, gamma);
    const double r = 10.0 * std::sqrt(gamma);
    cases.push_back({"sm", s, [s](double xi) { return kernel_psd(s, xi); }, {{0.5 - r, 0.5 + r}},
                     10.0 / (4.0 * std::sqrt(gamma))});
  }
  {
    const auto s = KernelSpec::sum({KernelSpec::sinc(SincParams(0.5, 0.3, 0.2)),
                                    KernelSpec::sinc(SincParams(1.5, 1.0, 0.4))});
    cases.push_back({"sum", s, [s](double xi) { return kernel_psd(s, xi); },
                     {{0.2, 0.4}, {0.8, 1.2}}, 10.0 / 0.2});
  }

  double worst = 0.0;
  std::string worst_name;
  for (const auto& c : cases) {
    for (double tau : linspace(-c.tau_max, c.tau_max, 41)) {
      const double q = oracle::inverse_fourier(c.psd, c.intervals, tau, kFourierNodes);
      const double err = std::fabs(q - kernel_eval(c.spec, tau));
      if (err > worst) {
        worst = err;
        worst_name = c.name;
      }
    }
  }
  return {worst <= kFourierTol,
          "max abs error " + fmt(worst) + " (" + worst_name + ", tol " + fmt(kFourierTol) + ")"};
}

// ---------------------------------------------------------------------------
// 3. Closed-form posterior on a Nyquist grid.

constexpr double kOracleTol = 1e-7;
constexpr double kMidpointVarTol = 0.01;

Outcome nyquist_oracle() {
  const double sigma2 = 1.4, delta = 0.75;
  std::mt19937_64 gen(3);
  std::normal_distribution<double> normal;
  const auto t = NyquistGrid(2.0, 32, delta).times();
  std::vector<double> y(t.size());
  for (auto& v : y) v = std::sqrt(sigma2) * normal(gen);
  const auto q = linspace(0.0, 2.0 + 34.0 / delta, 301);
  const auto r = oracle_match(sigma2, delta, TimeSeries(t, y), q);

  const auto grid = NyquistGrid(0.0, 201, 1.0).times();
  const double mid = nyquist_variance(grid, 1.0, sigma2, 100.5) / sigma2;

  const bool ok = r.max_mean_deviation <= kOracleTol && r.max_variance_deviation <= kOracleTol &&
                  mid < kMidpointVarTol;
  return {ok, "mean dev " + fmt(r.max_mean_deviation) + ", var dev " +
                  fmt(r.max_variance_deviation) + " (tol " + fmt(kOracleTol) +
                  "); midpoint var " + fmt(mid) + " sigma2 (tol " + fmt(kMidpointVarTol) + ")"};
}

// ---------------------------------------------------------------------------
// 4. Band posterior of a white-noise source is the brick-wall filter.

constexpr double kBrickTol = 1e-10;

Outcome brick_wall_equivalence() {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(0.0, 40.0);
  std::normal_distribution<double> normal;
  std::vector<double> t(120);
  for (auto& x : t) x = u(gen);
  std::sort(t.begin(), t.end());
  std::vector<double> y(t.size());
  for (auto& v : y) v = normal(gen);
  const TimeSeries obs(t, y);
  std::vector<double> q(100);
  for (auto& x : q) x = u(gen);

  // Zero jitter keeps Lambda exactly the identity. The white source has
  // density 1 on both sides, so the band posterior carries a factor 2 delta
  // that is 1 for this band.
  const Band band(0.75, 1.25);
  const auto post =
      bandpass_posterior(obs, KernelSpec::white_noise(1.0), band, 0.0, q, 512, true,
                         Jitter{0.0, 1e-6});
  const Eigen::VectorXd brick = brick_wall(obs, band, q);
  const double err = (post.mean - brick).cwiseAbs().maxCoeff();
  return {err <= kBrickTol, "max abs difference " + fmt(err) + " (tol " + fmt(kBrickTol) + ")"};
}

// ---------------------------------------------------------------------------
// 5. Band kernel idempotence and additivity.

constexpr double kIdempotenceTol = 1e-3;
constexpr double kAdditivityTol = 1e-6;

Outcome band_kernel_properties() {
  const SincParams p(1.2, 0.9, 0.4);
  const auto src = KernelSpec::sinc(p);
  const BandKernel own(src, Band(0.7, 1.1), 512);
  const auto taus = linspace(-50.0, 50.0, 1001);
  double idem = 0.0;
  for (double tau : taus) idem = std::max(idem, std::fabs(own(tau) - sinc_kernel(p, tau)));

  // Disjoint bands whose orders are proportional to their widths share the
  // sub-band grid of the union.
  double add = 0.0;
  for (const auto& s : {KernelSpec::centred_sinc(1.0, 2.0), KernelSpec::spectral_mixture(1.0, 0.5, 0.02),
                        src}) {
    const BandKernel whole(s, Band(0.0, 1.0), 500);
    const BandKernel low(s, Band(0.0, 0.4), 200);
    const BandKernel high(s, Band(0.4, 1.0), 300);
    for (double tau : taus) add = std::max(add, std::fabs(whole(tau) - low(tau) - high(tau)));
  }
  return {idem <= kIdempotenceTol && add <= kAdditivityTol,
          "own-band error " + fmt(idem) + " (tol " + fmt(kIdempotenceTol) + "), additivity error " +
              fmt(add) + " (tol " + fmt(kAdditivityTol) + ")"};
}

// ---------------------------------------------------------------------------
// 6. Monte-Carlo covariance of a modulated pair of independent channels.

constexpr int kDraws = 20000;
constexpr double kStdErrors = 4.0;

Outcome factor_model_covariance() {
  const double xi0 = 1.3;
  const SincParams base(1.0, 0.0, 0.6);
  const GPModel channel(KernelSpec::centred_sinc(base.sigma2(), base.delta()), 0.0);
  const double t0 = 0.37;
  const std::vector<double> lags = {0.1, 0.25, 0.5, 0.8, 1.2, 1.7, 2.3, 3.0, 4.1, 5.5};
  std::vector<double> times = {t0};
  for (double l : lags) times.push_back(t0 + l);

  const Eigen::MatrixXd x1 = sample(channel, times, 101, kDraws);
  const Eigen::MatrixXd x2 = sample(channel, times, 202, kDraws);
  Eigen::MatrixXd y(kDraws, static_cast<Eigen::Index>(times.size()));
  for (int d = 0; d < kDraws; ++d) {
    const StereoChannels ch(TimeSeries(times, std::vector<double>(x1.row(d).begin(), x1.row(d).end())),
                            TimeSeries(times, std::vector<double>(x2.row(d).begin(), x2.row(d).end())));
    const TimeSeries m = modulate(ch, xi0, times);
    for (std::size_t j = 0; j < times.size(); ++j) y(d, static_cast<Eigen::Index>(j)) = m.values()[j];
  }

  double worst = 0.0;
  for (std::size_t j = 0; j < lags.size(); ++j) {
    const auto m = oracle::product_moment(y.col(0), y.col(static_cast<Eigen::Index>(j + 1)));
    const double expected = sinc_kernel(SincParams(base.sigma2(), xi0, base.delta()), lags[j]);
    worst = std::max(worst, std::fabs(m.mean - expected) / m.stderr_);
  }
  return {worst <= kStdErrors, "worst deviation " + fmt(worst) + " standard errors over 10 lags (tol " +
                                   fmt(kStdErrors) + ")"};
}

// ---------------------------------------------------------------------------
// 7. Multi-output decomposition of the sinc kernel.

constexpr double kMogpTol = 1e-12;

Outcome mogp_decomposition() {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(-20.0, 20.0), pos(0.1, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const SincParams p(pos(gen), 0.0, pos(gen));
    worst = std::max(worst, mogp_cov_check(p, pos(gen), u(gen), u(gen)));
  }
  return {worst <= kMogpTol, "max residual " + fmt(worst) + " (tol " + fmt(kMogpTol) + ")"};
}

// ---------------------------------------------------------------------------
// 8. Demodulation error against sampling rate.

constexpr double kPlateauTol = 0.05;
constexpr double kDenseRmseTol = 0.1;

Outcome demodulation_sweep() {
  auto c = default_experiment(ExperimentKind::Demodulate);
  c.rates = {2, 4, 8, 16, 32, 48, 64};
  c.sweep_seeds = 35;
  c.seed = 1;
  const auto sweep = run_demod_sweep(c);
  const double plateau = sweep.upper_half_relative_change();

  auto dense = default_experiment(ExperimentKind::Demodulate);
  dense.recipe.leak = 0.0;
  dense.noise_fraction = 0.0;
  dense.subsample = 1920;
  dense.seed = 2;
  const auto d = run_demodulate(dense);
  const double rmse = std::max(d.rmse_ch1, d.rmse_ch2);

  std::string medians;
  for (std::size_t r = 0; r < sweep.rates.size(); ++r) {
    medians += (r ? " " : "") + fmt(sweep.rates[r]) + ":" + fmt(sweep.p50[r]);
  }
  return {plateau <= kPlateauTol && rmse <= kDenseRmseTol,
          "upper-half change " + fmt(plateau) + " (tol " + fmt(kPlateauTol) + "), dense rmse " +
              fmt(rmse) + " std (tol " + fmt(kDenseRmseTol) + "), medians " + medians};
}

// ---------------------------------------------------------------------------
// 9. Out-of-band leakage of reconstructions, sinc against the baseline.

constexpr double kLeakTol = 0.01;
constexpr int kReconstructSeeds = 5;

Outcome reconstruction_leakage() {
  double worst_sinc = 0.0, mean_sinc = 0.0, mean_sm = 0.0;
  for (int s = 0; s < kReconstructSeeds; ++s) {
    auto c = default_experiment(ExperimentKind::Reconstruct);
    c.seed = static_cast<std::uint64_t>(s);
    const auto sinc = run_reconstruct(c);
    c.model = GPModel(KernelSpec::spectral_mixture(1.0, 0.0, 0.0004), 0.1);
    const auto sm = run_reconstruct(c);
    worst_sinc = std::max(worst_sinc, sinc.out_of_band_fraction);
    mean_sinc += sinc.out_of_band_fraction / kReconstructSeeds;
    mean_sm += sm.out_of_band_fraction / kReconstructSeeds;
  }
  return {worst_sinc <= kLeakTol && mean_sm > mean_sinc,
          "sinc leakage worst " + fmt(worst_sinc) + " (tol " + fmt(kLeakTol) + "), mean sinc " +
              fmt(mean_sinc) + " vs spectral mixture " + fmt(mean_sm)};
}

// ---------------------------------------------------------------------------
// 10. Sparse posterior with Nyquist-spaced inducing points.

constexpr double kSparseTol = 0.02;
constexpr int kSparseSeeds = 3;

Outcome sparse_nyquist() {
  double worst = 0.0;
  bool sizes = true;
  std::size_t m = 0;
  for (int s = 0; s < kSparseSeeds; ++s) {
    auto c = default_experiment(ExperimentKind::Sparse);
    c.seed = static_cast<std::uint64_t>(s);
    const auto r = run_sparse(c);
    m = r.inducing.size();
    sizes = sizes && m == 54 && r.observations.size() == 600;
    worst = std::max(worst, r.rmse_vs_exact);
  }
  return {sizes && worst <= kSparseTol, "M = " + std::to_string(m) + ", worst rmse " + fmt(worst) +
                                            " of signal std (tol " + fmt(kSparseTol) + ")"};
}

// ---------------------------------------------------------------------------
// 11. Jittered Cholesky on random sinc Gram matrices.

Outcome positive_definiteness() {
  std::mt19937_64 gen(99);
  std::uniform_int_distribution<int> size(2, 200);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int ok = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const SincParams p(0.01 + 10.0 * u(gen), 5.0 * u(gen), 0.01 + 5.0 * u(gen));
    std::vector<double> t(static_cast<std::size_t>(size(gen)));
    const double span = 0.1 + 100.0 * u(gen);
    for (auto& x : t) x = span * u(gen);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    try {
      JitteredCholesky chol(gram_matrix(KernelSpec::sinc(p), t));
      ++ok;
    } catch (const std::exception&) {
    }
  }
  return {ok == 200, std::to_string(ok) + "/200 factorisations succeeded"};
}

// ---------------------------------------------------------------------------
// 12. Bandwidth recovery by maximum likelihood.

constexpr double kRecoveryBand = 0.2;
constexpr int kRecoveryRuns = 20;
constexpr int kRecoveryNeeded = 16;

Outcome training_recovery() {
  const double delta = 0.5;
  int hits = 0;
  std::string fitted;
  for (int s = 0; s < kRecoveryRuns; ++s) {
    SyntheticRecipe r;
    r.kind = SyntheticKind::GpSincDraw;
    r.length = 300;
    r.dt = 0.5;
    r.sampling = Sampling::JitteredUniform;
    r.kernel = KernelSpec::centred_sinc(1.0, delta);
    const auto data = make_synthetic(r, static_cast<std::uint64_t>(1000 + s));
    const auto obs = corrupt(data.series, 0.1, data.series.size(), static_cast<std::uint64_t>(2000 + s));
    TrainingConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(s);
    const auto res = fit(obs, GPModel(KernelSpec::centred_sinc(1.0, 1.0), 0.1), cfg);
    const double d = std::get<CentredSinc>(res.model.kernel().variant()).delta;
    if (std::fabs(d - delta) <= kRecoveryBand * delta) ++hits;
    fitted += (s ? " " : "") + fmt(d);
  }
  return {hits >= kRecoveryNeeded, std::to_string(hits) + "/" + std::to_string(kRecoveryRuns) +
                                       " within 20% (need " + std::to_string(kRecoveryNeeded) +
                                       "); fitted " + fitted};
}

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "gsk-exactness", 1.0, gsk_exactness},
      {2, "fourier-pairing", 10.0, fourier_pairing},
      {3, "nyquist-oracle", 5.0, nyquist_oracle},
      {4, "brick-wall-equivalence", 1.0, brick_wall_equivalence},
      {5, "band-idempotence-additivity", 10.0, band_kernel_properties},
      {6, "factor-model-covariance", 60.0, factor_model_covariance},
      {7, "mogp-decomposition", 1.0, mogp_decomposition},
      {8, "demodulation-plateau", 600.0, demodulation_sweep},
      {9, "reconstruction-leakage", 300.0, reconstruction_leakage},
      {10, "sparse-nyquist", 120.0, sparse_nyquist},
      {11, "positive-definiteness", 30.0, positive_definiteness},
      {12, "training-recovery", 600.0, training_recovery},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = secs <= c.budget_seconds;
    const bool pass = out.pass && in_budget;
    if (!pass) ++failures;
    std::printf("%s %2d %s: %s; %.2f s (budget %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), out.detail.c_str(), secs, c.budget_seconds,
                in_budget ? "" : ", exceeded");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
