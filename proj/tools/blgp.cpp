#include "blgp/bandpass.hpp"
#include "blgp/demod.hpp"
#include "blgp/error.hpp"
#include "blgp/experiment.hpp"
#include "blgp/io.hpp"
#include "blgp/kernel_json.hpp"
#include "blgp/nyquist.hpp"
#include "blgp/sparse.hpp"
#include "blgp/spectral.hpp"
#include "blgp/training.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace blgp;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("blgp");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("BLGP_LOG")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

struct Options {
  std::string input;
  std::string model;
  std::string band;
  std::optional<double> carrier;
  std::optional<double> bandwidth;
  std::optional<double> noise_frac;
  std::optional<std::size_t> subsample;
  std::uint64_t seed = 0;
  std::string out_dir = ".";

  // fit
  std::string optimizer = "direction-set";
  std::string init = "periodogram";
  int restarts = 3;
  int max_iters = 500;

  // predict / reconstruct
  std::size_t grid_points = 500;
  std::optional<double> sigma2;

  // psd
  double oversample = 4.0;
  std::optional<double> support_threshold;

  // demodulate
  std::string truth;

  // experiment
  std::string kind;
  std::vector<double> rates;
  int sweep_seeds = 35;
  bool no_fit = false;
  double forecast_fraction = 0.0;
};

Band parse_band(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ValidationError("--band expects a,b");
  try {
    return Band(std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1)));
  } catch (const std::logic_error&) {
    throw ValidationError("--band expects two numbers a,b, got '" + text + "'");
  }
}

TimeSeries require_input(const Options& o) {
  if (o.input.empty()) throw ValidationError("--input is required");
  TimeSeries ts = load_csv(o.input);
  spdlog::info("loaded {} observations from {}", ts.size(), o.input);
  return ts;
}

std::optional<GPModel> optional_model(const Options& o) {
  if (o.model.empty()) return std::nullopt;
  return model_from_json(read_json(o.model));
}

double variance_of(std::span<const double> v) {
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size());
}

std::vector<double> query_grid(const TimeSeries& ts, std::size_t points) {
  if (points < 1) throw ValidationError("--grid-points must be >= 1");
  if (ts.empty()) throw ValidationError("no observations");
  return linspace(ts.times().front(), ts.times().back(), points);
}

TrainingConfig training_config(const Options& o) {
  TrainingConfig tc;
  if (o.optimizer == "direction-set") {
    tc.optimizer = OptimizerKind::DirectionSet;
  } else if (o.optimizer == "quasi-newton") {
    tc.optimizer = OptimizerKind::QuasiNewton;
  } else {
    throw ValidationError("--optimizer must be direction-set or quasi-newton");
  }
  if (o.init == "periodogram") {
    tc.init = InitStrategy::Periodogram;
  } else if (o.init == "manual") {
    tc.init = InitStrategy::Manual;
  } else {
    throw ValidationError("--init must be periodogram or manual");
  }
  tc.restarts = o.restarts;
  tc.max_iters = o.max_iters;
  tc.seed = o.seed;
  return tc;
}

FitResult fit_logged(const TimeSeries& obs, const GPModel& start, const TrainingConfig& tc) {
  FitResult res = fit(obs, start, tc);
  for (const auto& w : res.warnings) spdlog::warn("{}", w);
  spdlog::info("fit: log likelihood {:.6g} after {} iterations", res.log_likelihood,
               res.trace.empty() ? 0 : res.trace.back().iter);
  if (res.best_effort) throw NumericalError("fit: no restart produced a finite likelihood");
  return res;
}

int cmd_fit(const Options& o) {
  const TimeSeries obs = require_input(o);
  const GPModel start = optional_model(o).value_or(GPModel(KernelSpec::centred_sinc(1.0, 1.0), 0.1));
  const FitResult res = fit_logged(obs, start, training_config(o));
  write_json(fs::path(o.out_dir) / "model.json", model_to_json(res.model));
  write_trace_csv(fs::path(o.out_dir) / "trace.csv", res.trace);
  return 0;
}

int cmd_predict(const Options& o) {
  const TimeSeries obs = require_input(o);
  const auto model = optional_model(o);
  if (!model) throw ValidationError("--model is required");
  const auto query = query_grid(obs, o.grid_points);
  write_posterior_csv(fs::path(o.out_dir) / "posterior.csv", posterior(*model, obs, query));
  return 0;
}

int cmd_reconstruct(const Options& o) {
  const TimeSeries obs = require_input(o);
  if (!o.bandwidth) throw ValidationError("--bandwidth is required");
  const double sigma2 = o.sigma2.value_or(variance_of(obs.values()));
  check_nyquist_grid(obs.times(), *o.bandwidth);
  const auto query = query_grid(obs, o.grid_points);
  std::vector<double> mean, var;
  for (double t : query) {
    mean.push_back(whittaker_mean(obs, *o.bandwidth, t));
    var.push_back(nyquist_variance(obs.times(), *o.bandwidth, sigma2, t));
  }
  write_csv(fs::path(o.out_dir) / "reconstruction.csv", {"t", "mean", "variance"},
            {query, mean, var});
  return 0;
}

int cmd_demodulate(const Options& o) {
  const TimeSeries obs = require_input(o);
  if (!o.carrier || !o.bandwidth) throw ValidationError("--carrier and --bandwidth are required");
  const double nf = o.noise_frac.value_or(0.2);
  if (nf < 0.0) throw ValidationError("--noise-frac must be >= 0");
  // The modulated signal has variance sigma2; observations add nf^2 of that.
  const double sigma2 = o.sigma2.value_or(variance_of(obs.values()) / (1.0 + nf * nf));
  const CarrierConfig carrier(*o.carrier, sigma2, *o.bandwidth);
  for (const auto& w : carrier.warnings()) spdlog::warn("{}", w);

  const auto query = query_grid(obs, o.grid_points);
  const DemodResult post = demodulate(obs, carrier.modulated(), nf * nf * sigma2, query);
  write_posterior_csv(fs::path(o.out_dir) / "channel1.csv", post.ch1);
  write_posterior_csv(fs::path(o.out_dir) / "channel2.csv", post.ch2);

  const double margin = 2.0 / *o.bandwidth;
  nlohmann::json m{{"rmse_ch1", nullptr}, {"rmse_ch2", nullptr}, {"margin", margin}};
  if (!o.truth.empty()) {
    // Truth file columns: t,x1,x2 on the same grid as the query.
    std::ifstream in(o.truth);
    if (!in) throw ValidationError("cannot open " + o.truth);
    std::string line;
    std::getline(in, line);
    std::vector<double> tt, a, b;
    while (std::getline(in, line)) {
      double t = 0, x1 = 0, x2 = 0;
      if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &x1, &x2) != 3) {
        throw ValidationError("malformed truth row '" + line + "'");
      }
      tt.push_back(t);
      a.push_back(x1);
      b.push_back(x2);
    }
    const auto truth_post = demodulate(obs, carrier.modulated(), nf * nf * sigma2, tt, true);
    auto sd = [](const std::vector<double>& v) { return std::sqrt(variance_of(v)); };
    m["rmse_ch1"] = interior_rmse(tt, truth_post.ch1.mean, a, margin, sd(a));
    m["rmse_ch2"] = interior_rmse(tt, truth_post.ch2.mean, b, margin, sd(b));
  }
  write_json(fs::path(o.out_dir) / "metrics.json", m);
  return 0;
}

int cmd_filter(const Options& o) {
  const TimeSeries obs = require_input(o);
  if (o.band.empty()) throw ValidationError("--band is required");
  const Band band = parse_band(o.band);
  GPModel source = [&] {
    if (auto m = optional_model(o)) return *m;
    spdlog::info("filter: no --model given, fitting a two-component sinc mixture first");
    const GPModel shape(KernelSpec::sum({KernelSpec::sinc(SincParams(0.5, 0.1, 0.02)),
                                         KernelSpec::sinc(SincParams(0.5, 0.4, 0.02))}),
                        0.01);
    const FitResult res = fit_logged(obs, shape, training_config(o));
    write_json(fs::path(o.out_dir) / "model.json", model_to_json(res.model));
    return res.model;
  }();
  const auto query = query_grid(obs, o.grid_points);
  write_posterior_csv(fs::path(o.out_dir) / "filtered.csv",
                      bandpass_posterior(obs, source.kernel(), band, source.noise_var(), query));
  const Eigen::VectorXd bw = brick_wall(obs, band, query);
  write_csv(fs::path(o.out_dir) / "brick_wall.csv", {"t", "estimate"},
            {query, std::vector<double>(bw.data(), bw.data() + bw.size())});
  return 0;
}

int cmd_psd(const Options& o) {
  const TimeSeries obs = require_input(o);
  const PsdEstimate psd = periodogram(obs, default_frequency_grid(obs, o.oversample));
  for (const auto& w : psd.warnings) spdlog::warn("{}", w);
  write_psd_csv(fs::path(o.out_dir) / "psd.csv", psd);
  if (o.support_threshold) {
    nlohmann::json bands = nlohmann::json::array();
    for (const Band& b : support_estimate(psd, *o.support_threshold)) bands.push_back({b.a(), b.b()});
    write_json(fs::path(o.out_dir) / "support.json", {{"bands", bands}});
  }
  return 0;
}

int cmd_sparse_fit(const Options& o) {
  const TimeSeries obs = require_input(o);
  GPModel model = [&] {
    if (auto m = optional_model(o)) return *m;
    spdlog::info("sparse-fit: no --model given, fitting a centred sinc kernel first");
    return fit_logged(obs, GPModel(KernelSpec::centred_sinc(1.0, 1.0), 0.1), training_config(o)).model;
  }();
  const auto t = obs.times();
  const InducingSet inducing = nyquist_inducing(model.kernel(), t.front(), t.back());
  if (inducing.size() > obs.size()) {
    spdlog::warn("sparse-fit: {} inducing points exceed the {} observations", inducing.size(),
                 obs.size());
  }
  const auto query = query_grid(obs, o.grid_points);

  auto start = std::chrono::steady_clock::now();
  const Eigen::VectorXd exact = posterior_mean(model, obs, query);
  const double t_exact = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  start = std::chrono::steady_clock::now();
  const auto sp = sparse_posterior(obs, model.kernel(), model.noise_var(), inducing, query);
  const double t_sparse = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const double sd = std::sqrt(variance_of(obs.values()));
  const double rmse = std::sqrt((sp.mean - exact).squaredNorm() / static_cast<double>(query.size()));
  write_csv(fs::path(o.out_dir) / "inducing.csv", {"t"}, {inducing.locations()});
  write_posterior_csv(fs::path(o.out_dir) / "sparse_posterior.csv", sp);
  write_json(fs::path(o.out_dir) / "report.json",
             {{"M", inducing.size()},
              {"n", obs.size()},
              {"rmse_vs_exact", sd > 0 ? rmse / sd : rmse},
              {"runtime_exact", t_exact},
              {"runtime_sparse", t_sparse}});
  return 0;
}

int cmd_experiment(const Options& o) {
  ExperimentConfig c = default_experiment(experiment_kind_from_string(o.kind));
  if (!o.input.empty()) c.data = o.input;
  if (o.noise_frac) c.noise_fraction = *o.noise_frac;
  if (o.subsample) c.subsample = *o.subsample;
  c.seed = o.seed;
  if (auto m = optional_model(o)) c.model = *m;
  if (o.no_fit) c.fit = false;
  if (!o.band.empty()) c.band = parse_band(o.band);
  if (o.carrier) c.recipe.carrier = *o.carrier;
  if (o.bandwidth) c.recipe.channel_delta = *o.bandwidth;
  c.rates = o.rates;
  c.sweep_seeds = o.sweep_seeds;
  c.forecast_fraction = o.forecast_fraction;
  c.training = training_config(o);
  c.out_dir = o.out_dir;
  const auto metrics = run_experiment(c);
  spdlog::info("metrics: {}", metrics.dump());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Band-limited Gaussian process modelling with sinc kernels"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--input", o.input, "Observations CSV with header time,value");
    sub->add_option("--model", o.model, "Model JSON (kernel plus noise_var)");
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--out-dir", o.out_dir, "Output directory")->capture_default_str();
  };
  auto training = [&](CLI::App* sub) {
    sub->add_option("--optimizer", o.optimizer, "direction-set or quasi-newton")
        ->capture_default_str();
    sub->add_option("--init", o.init, "periodogram or manual")->capture_default_str();
    sub->add_option("--restarts", o.restarts)->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--max-iters", o.max_iters)->capture_default_str()->check(CLI::PositiveNumber);
  };
  auto grid = [&](CLI::App* sub) {
    sub->add_option("--grid-points", o.grid_points, "Query grid size over the data span")
        ->capture_default_str();
  };

  auto* fit_cmd = app.add_subcommand("fit", "Maximum-likelihood training");
  common(fit_cmd);
  training(fit_cmd);

  auto* predict_cmd = app.add_subcommand("predict", "Posterior mean and variance on a grid");
  common(predict_cmd);
  grid(predict_cmd);

  auto* demod_cmd = app.add_subcommand("demodulate", "Recover two channels from a modulated signal");
  common(demod_cmd);
  grid(demod_cmd);
  demod_cmd->add_option("--carrier", o.carrier, "Carrier frequency")->required();
  demod_cmd->add_option("--bandwidth", o.bandwidth, "Channel bandwidth")->required();
  demod_cmd->add_option("--noise-frac", o.noise_frac, "Noise std as a fraction of signal std");
  demod_cmd->add_option("--sigma2", o.sigma2, "Channel power");
  demod_cmd->add_option("--truth", o.truth, "CSV t,x1,x2 of true channels for RMSE");

  auto* filter_cmd = app.add_subcommand("filter", "Bayesian band-pass filter");
  common(filter_cmd);
  grid(filter_cmd);
  training(filter_cmd);
  filter_cmd->add_option("--band", o.band, "Band edges a,b")->required();

  auto* psd_cmd = app.add_subcommand("psd", "Lomb-Scargle periodogram");
  common(psd_cmd);
  psd_cmd->add_option("--oversample", o.oversample)->capture_default_str();
  psd_cmd->add_option("--support-threshold", o.support_threshold,
                      "Also write bands above this fraction of the peak");

  auto* recon_cmd = app.add_subcommand("reconstruct", "Whittaker-Shannon reconstruction");
  common(recon_cmd);
  grid(recon_cmd);
  recon_cmd->add_option("--bandwidth", o.bandwidth, "Bandwidth; samples must be 1/bandwidth apart")
      ->required();
  recon_cmd->add_option("--sigma2", o.sigma2, "Prior power for the variance");

  auto* sparse_cmd = app.add_subcommand("sparse-fit", "Sparse prediction with Nyquist inducing points");
  common(sparse_cmd);
  grid(sparse_cmd);
  training(sparse_cmd);

  auto* exp_cmd = app.add_subcommand("experiment", "Run a synthetic experiment end to end");
  common(exp_cmd);
  training(exp_cmd);
  exp_cmd->add_option("kind", o.kind, "reconstruct, demodulate, filter or sparse")->required();
  exp_cmd->add_option("--noise-frac", o.noise_frac, "Noise std as a fraction of signal std");
  exp_cmd->add_option("--subsample", o.subsample, "Number of observations kept");
  exp_cmd->add_option("--band", o.band, "Band edges a,b (filter)");
  exp_cmd->add_option("--carrier", o.carrier, "Carrier frequency (demodulate)");
  exp_cmd->add_option("--bandwidth", o.bandwidth, "Channel bandwidth (demodulate)");
  exp_cmd->add_option("--rates", o.rates, "Sampling-rate sweep (demodulate)")->delimiter(',');
  exp_cmd->add_option("--sweep-seeds", o.sweep_seeds)->capture_default_str();
  exp_cmd->add_option("--forecast-fraction", o.forecast_fraction)->capture_default_str();
  exp_cmd->add_flag("--no-fit", o.no_fit, "Use --model as given");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*fit_cmd) return cmd_fit(o);
    if (*predict_cmd) return cmd_predict(o);
    if (*demod_cmd) return cmd_demodulate(o);
    if (*filter_cmd) return cmd_filter(o);
    if (*psd_cmd) return cmd_psd(o);
    if (*recon_cmd) return cmd_reconstruct(o);
    if (*sparse_cmd) return cmd_sparse_fit(o);
    if (*exp_cmd) return cmd_experiment(o);
  } catch (const ValidationError& e) {
    spdlog::error("{}", e.what());
    return kExitValidation;
  } catch (const NumericalError& e) {
    spdlog::error("{}", e.what());
    return kExitNumerical;
  } catch (const nlohmann::json::exception& e) {
    spdlog::error("{}", e.what());
    return kExitValidation;
  } catch (const fs::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
