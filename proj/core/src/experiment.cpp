#include "blgp/experiment.hpp"

#include "blgp/bandpass.hpp"
#include "blgp/error.hpp"
#include "blgp/io.hpp"
#include "blgp/kernel_json.hpp"
#include "blgp/rng.hpp"
#include "blgp/sparse.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace blgp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_of(std::span<const double> v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double std_of(std::span<const double> v) {
  if (v.empty()) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

TimeSeries clean_series(const ExperimentConfig& c) {
  if (c.data) return load_csv(*c.data);
  return make_synthetic(c.recipe, Rng(c.seed).split("data").seed()).series;
}

std::size_t subsample_count(const ExperimentConfig& c, std::size_t available) {
  return c.subsample == 0 ? available : std::min(c.subsample, available);
}

bool uniform_synthetic(const ExperimentConfig& c) {
  return !c.data && c.recipe.sampling == Sampling::Uniform;
}

double rms(std::span<const double> a, std::span<const double> b) {
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i]) * (a[i] - b[i]);
  return a.empty() ? kNaN : std::sqrt(ss / static_cast<double>(a.size()));
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// RMSE of `estimate` against the in-band sinusoids of the recipe over the
// central half of the span.
double central_half_rmse(const ExperimentConfig& c, const Band& band, std::span<const double> t,
                         const Eigen::VectorXd& estimate) {
  const double span = t.back() - t.front();
  std::vector<double> est, ref;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t.front() + 0.25 * span || t[i] > t.back() - 0.25 * span) continue;
    double v = 0.0;
    for (std::size_t k = 0; k < c.recipe.frequencies.size(); ++k) {
      if (!band.contains(c.recipe.frequencies[k])) continue;
      const double phase = c.recipe.phases.empty() ? 0.0 : c.recipe.phases[k];
      v += c.recipe.amplitudes[k] *
           std::sin(2.0 * std::numbers::pi * c.recipe.frequencies[k] * t[i] + phase);
    }
    est.push_back(estimate[static_cast<Eigen::Index>(i)]);
    ref.push_back(v);
  }
  return rms(est, ref);
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Reconstruct: return "reconstruct";
    case ExperimentKind::Demodulate: return "demodulate";
    case ExperimentKind::Filter: return "filter";
    case ExperimentKind::Sparse: return "sparse";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
  for (auto k : {ExperimentKind::Reconstruct, ExperimentKind::Demodulate, ExperimentKind::Filter,
                 ExperimentKind::Sparse}) {
    if (to_string(k) == s) return k;
  }
  throw ValidationError("unknown experiment '" + s + "'");
}

void ExperimentConfig::validate() const {
  if (!(noise_fraction >= 0.0)) throw ValidationError("experiment: noise fraction must be >= 0");
  if (!data) {
    recipe.validate();
    if (subsample > recipe.length) {
      throw ValidationError("experiment: subsample count exceeds dataset length");
    }
  }
  if (!(forecast_fraction >= 0.0 && forecast_fraction < 1.0)) {
    throw ValidationError("experiment: forecast fraction must lie in [0, 1)");
  }
  if (sweep_seeds < 1) throw ValidationError("experiment: sweep needs at least one seed");
  for (double r : rates) {
    if (!(r > 0.0)) throw ValidationError("experiment: sampling rates must be > 0");
  }
  training.validate();
}

ExperimentConfig default_experiment(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  switch (kind) {
    case ExperimentKind::Reconstruct:
      c.recipe.kind = SyntheticKind::BandLimitedNoise;
      c.recipe.length = 1000;
      c.recipe.dt = 1.0;
      c.recipe.cutoff = 0.08;
      c.subsample = 200;
      c.noise_fraction = 0.1;
      break;
    case ExperimentKind::Demodulate:
      c.recipe.kind = SyntheticKind::ModulatedStereo;
      c.recipe.dt = 1.0 / 128.0;
      c.recipe.length = 30 * 128 + 1;
      c.recipe.carrier = 2.0;
      c.recipe.channel_delta = 1.0;
      c.recipe.leak = 0.1;
      c.subsample = 480;
      c.noise_fraction = 0.2;
      c.fit = false;
      break;
    case ExperimentKind::Filter:
      c.recipe.kind = SyntheticKind::SinusoidMixture;
      c.recipe.length = 500;
      c.recipe.dt = 0.5;
      c.recipe.frequencies = {0.1, 0.4};
      c.recipe.amplitudes = {1.0, 1.0};
      c.subsample = 500;
      c.noise_fraction = 0.0;
      c.band = Band(0.3, 0.5);
      break;
    case ExperimentKind::Sparse: {
      std::vector<double> f, g;
      for (int i = 0; i <= 64; ++i) {
        f.push_back(0.5 * i / 64.0);
        const double c2 = std::cos(std::numbers::pi * f.back());
        g.push_back(c2 * c2);
      }
      c.recipe.kind = SyntheticKind::GpSincDraw;
      c.recipe.kernel = KernelSpec::generalised_sinc(
          SincParams(1.0, 0.0, 1.0), SpectralEnvelope::table(std::move(f), std::move(g)), 64);
      c.recipe.length = 600;
      c.recipe.dt = 53.0 / 599.0;
      c.subsample = 600;
      c.noise_fraction = 0.1;
      c.fit = false;
      break;
    }
  }
  return c;
}

ReconstructOutcome run_reconstruct(const ExperimentConfig& c) {
  c.validate();
  const Rng root(c.seed);
  TimeSeries truth = clean_series(c);
  const auto t = truth.times();
  const double split = t.front() + (1.0 - c.forecast_fraction) * truth.span();

  std::vector<double> pt, pv;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (t[i] <= split) {
      pt.push_back(t[i]);
      pv.push_back(truth.values()[i]);
    }
  }
  const TimeSeries pool(pt, pv);
  TimeSeries obs = corrupt(pool, c.noise_fraction, subsample_count(c, pool.size()),
                           root.split("corrupt").seed());

  GPModel model = c.model.value_or(
      GPModel(KernelSpec::centred_sinc(1.0, 0.1 / truth.span() * static_cast<double>(truth.size())),
              0.1));
  std::optional<FitResult> fitted;
  if (c.fit) {
    TrainingConfig tc = c.training;
    tc.seed = root.split("fit").seed();
    fitted = fit(obs, model, tc);
    model = fitted->model;
  }

  PosteriorSummary post = posterior(model, obs, t);
  std::vector<double> in_est, in_true, out_est, out_true;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double m = post.mean[static_cast<Eigen::Index>(i)];
    if (t[i] <= split) {
      in_est.push_back(m);
      in_true.push_back(truth.values()[i]);
    } else {
      out_est.push_back(m);
      out_true.push_back(truth.values()[i]);
    }
  }

  double leak = kNaN;
  if (uniform_synthetic(c) && c.recipe.kind == SyntheticKind::BandLimitedNoise && truth.size() >= 4) {
    const auto mean = to_vector(post.mean);
    const PsdEstimate psd = welch_uniform(mean, c.recipe.dt);
    const Band band(0.0, c.recipe.cutoff);
    leak = out_of_band_fraction(psd, std::span<const Band>(&band, 1), 1);
  }

  PsdEstimate psd_obs;
  if (obs.size() >= 4) psd_obs = periodogram(obs);

  return {std::move(truth), std::move(obs), std::move(model), std::move(fitted), std::move(post),
          rms(in_est, in_true), rms(out_est, out_true), leak, std::move(psd_obs)};
}

namespace {

struct DemodSetup {
  SincParams params;
  double margin;
};

DemodSetup demod_setup(const ExperimentConfig& c) {
  double sigma2 = 1.0;
  double delta = c.recipe.channel_delta;
  if (c.model) {
    const auto* cs = std::get_if<CentredSinc>(&c.model->kernel().variant());
    if (!cs) throw ValidationError("demodulate: the channel model must be a centred_sinc kernel");
    sigma2 = cs->sigma2;
    delta = cs->delta;
  }
  return {SincParams(sigma2, c.recipe.carrier, delta), c.margin >= 0.0 ? c.margin : 2.0 / delta};
}

double demod_noise_var(const ExperimentConfig& c, const TimeSeries& obs) {
  if (c.model) return c.model->noise_var();
  const double s = obs.noise_std().value_or(0.0);
  return s * s;
}

std::vector<double> strided(std::span<const double> t, std::size_t target) {
  const std::size_t stride = std::max<std::size_t>(1, t.size() / target);
  std::vector<double> out;
  for (std::size_t i = 0; i < t.size(); i += stride) out.push_back(t[i]);
  return out;
}

std::pair<double, double> channel_errors(const DemodResult& post, const StereoChannels& truth,
                                         std::span<const double> query,
                                         std::span<const double> grid, double margin) {
  // Channels are stored on the dense grid; query points are a subset of it.
  std::vector<double> a, b;
  std::size_t j = 0;
  for (double q : query) {
    while (grid[j] != q) ++j;
    a.push_back(truth.x1().values()[j]);
    b.push_back(truth.x2().values()[j]);
  }
  auto interior_std = [&](const std::vector<double>& v) {
    std::vector<double> in;
    for (std::size_t i = 0; i < query.size(); ++i) {
      if (query[i] >= query.front() + margin && query[i] <= query.back() - margin) in.push_back(v[i]);
    }
    return std_of(in);
  };
  return {interior_rmse(query, post.ch1.mean, a, margin, interior_std(a)),
          interior_rmse(query, post.ch2.mean, b, margin, interior_std(b))};
}

}  // namespace

DemodOutcome run_demodulate(const ExperimentConfig& c) {
  c.validate();
  if (c.data) throw ValidationError("demodulate experiment needs the modulated-stereo recipe");
  if (c.recipe.kind != SyntheticKind::ModulatedStereo) {
    throw ValidationError("demodulate experiment needs the modulated-stereo recipe");
  }
  const Rng root(c.seed);
  SyntheticData data = make_synthetic(c.recipe, root.split("data").seed());
  TimeSeries obs = corrupt(data.series, c.noise_fraction, subsample_count(c, data.series.size()),
                           root.split("corrupt").seed());
  const DemodSetup setup = demod_setup(c);
  const auto query = strided(data.series.times(), 1000);
  DemodResult post = demodulate(obs, setup.params, demod_noise_var(c, obs), query);
  const auto [e1, e2] = channel_errors(post, *data.channels, query, data.series.times(), setup.margin);
  return {std::move(obs), std::move(*data.channels), std::move(post), e1, e2, setup.margin};
}

double DemodSweep::upper_half_relative_change() const {
  if (rates.empty()) return kNaN;
  const double top = *std::max_element(rates.begin(), rates.end());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t r = 0; r < rates.size(); ++r) {
    if (rates[r] < 0.5 * top) continue;
    lo = std::min(lo, p50[r]);
    hi = std::max(hi, p50[r]);
  }
  return (hi - lo) / lo;
}

DemodSweep run_demod_sweep(const ExperimentConfig& c) {
  c.validate();
  if (c.data || c.recipe.kind != SyntheticKind::ModulatedStereo) {
    throw ValidationError("demodulation sweep needs the modulated-stereo recipe");
  }
  if (c.rates.empty()) throw ValidationError("demodulation sweep needs at least one rate");
  const Rng root(c.seed);
  const DemodSetup setup = demod_setup(c);
  const double span = static_cast<double>(c.recipe.length - 1) * c.recipe.dt;

  DemodSweep sweep;
  sweep.rates = c.rates;
  sweep.rmse.assign(c.rates.size(), std::vector<double>(static_cast<std::size_t>(c.sweep_seeds)));
  for (int s = 0; s < c.sweep_seeds; ++s) {
    const Rng run = root.split("sweep-" + std::to_string(s));
    const SyntheticData data = make_synthetic(c.recipe, run.split("data").seed());
    const auto query = strided(data.series.times(), 400);
    for (std::size_t r = 0; r < c.rates.size(); ++r) {
      const auto n = std::min(data.series.size(),
                              static_cast<std::size_t>(std::lround(c.rates[r] * span)));
      const TimeSeries obs = corrupt(data.series, c.noise_fraction, n,
                                     run.split("corrupt-" + std::to_string(r)).seed());
      const DemodResult post =
          demodulate(obs, setup.params, demod_noise_var(c, obs), query, /*means_only=*/true);
      const auto [e1, e2] =
          channel_errors(post, *data.channels, query, data.series.times(), setup.margin);
      sweep.rmse[r][static_cast<std::size_t>(s)] = 0.5 * (e1 + e2);
    }
  }
  for (const auto& row : sweep.rmse) {
    sweep.p10.push_back(percentile(row, 0.1));
    sweep.p50.push_back(percentile(row, 0.5));
    sweep.p90.push_back(percentile(row, 0.9));
  }
  return sweep;
}

FilterOutcome run_filter(const ExperimentConfig& c) {
  c.validate();
  const Rng root(c.seed);
  const TimeSeries truth = clean_series(c);
  TimeSeries obs = corrupt(truth, c.noise_fraction, subsample_count(c, truth.size()),
                           root.split("corrupt").seed());
  const Band band = c.band.value_or(Band(0.3, 0.5));

  GPModel model = c.model.value_or(
      GPModel(KernelSpec::sum({KernelSpec::sinc(SincParams(0.5, 0.1, 0.02)),
                               KernelSpec::sinc(SincParams(0.5, 0.4, 0.02))}),
              0.01));
  std::optional<FitResult> fitted;
  if (c.fit) {
    TrainingConfig tc = c.training;
    tc.seed = root.split("fit").seed();
    fitted = fit(obs, model, tc);
    model = fitted->model;
  }

  const auto t = truth.times();
  PosteriorSummary post = bandpass_posterior(obs, model.kernel(), band, model.noise_var(), t);
  Eigen::VectorXd brick = brick_wall(obs, band, t);

  const bool mixture = !c.data && c.recipe.kind == SyntheticKind::SinusoidMixture;
  const double rmse = mixture ? central_half_rmse(c, band, t, post.mean) : kNaN;

  double leak = kNaN;
  if (uniform_synthetic(c) && truth.size() >= 4) {
    const PsdEstimate psd = welch_uniform(to_vector(post.mean), c.recipe.dt);
    const double out = out_of_band_fraction(psd, std::span<const Band>(&band, 1), 1);
    leak = out < 1.0 ? out / (1.0 - out) : std::numeric_limits<double>::infinity();
  }

  return {std::move(obs), model.kernel(), model.noise_var(), std::move(fitted), std::move(post),
          std::move(brick), rmse, leak};
}

SparseOutcome run_sparse(const ExperimentConfig& c) {
  c.validate();
  const Rng root(c.seed);
  const TimeSeries truth = clean_series(c);
  TimeSeries obs = corrupt(truth, c.noise_fraction, subsample_count(c, truth.size()),
                           root.split("corrupt").seed());
  if (obs.size() < 2) throw ValidationError("sparse experiment needs at least two observations");

  GPModel model = [&] {
    if (c.model) return *c.model;
    if (!c.data && c.recipe.kernel) {
      const double s = obs.noise_std().value_or(0.0);
      return GPModel(*c.recipe.kernel, s * s);
    }
    throw ValidationError("sparse experiment needs a model (--model) for user data");
  }();
  if (c.fit) {
    TrainingConfig tc = c.training;
    tc.seed = root.split("fit").seed();
    model = fit(obs, model, tc).model;
  }

  const auto t = obs.times();
  const InducingSet inducing = nyquist_inducing(model.kernel(), t.front(), t.back());
  std::vector<double> query(truth.times().begin(), truth.times().end());

  auto start = std::chrono::steady_clock::now();
  Eigen::VectorXd exact = posterior_mean(model, obs, query);
  const double runtime_exact = seconds_since(start);
  start = std::chrono::steady_clock::now();
  PosteriorSummary sp =
      sparse_posterior(obs, model.kernel(), model.noise_var(), inducing, query, /*means_only=*/true);
  const double runtime_sparse = seconds_since(start);

  const double sd = std_of(truth.values());
  const double err = rms(to_vector(sp.mean), to_vector(exact));
  return {std::move(obs), inducing.locations(), std::move(query), std::move(exact), std::move(sp),
          sd, sd > 0.0 ? err / sd : err, runtime_exact, runtime_sparse};
}

const nlohmann::json& metrics_schema() {
  static const nlohmann::json schema = nlohmann::json::parse(R"({
    "reconstruct": {
      "type": "object",
      "required": ["experiment", "seed", "n_total", "n_obs", "noise_std", "rmse_interpolation",
                   "rmse_forecast", "out_of_band_fraction", "log_likelihood", "model"],
      "properties": {
        "experiment": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0},
        "n_total": {"type": "integer", "minimum": 0},
        "n_obs": {"type": "integer", "minimum": 0},
        "noise_std": {"type": "number", "minimum": 0},
        "rmse_interpolation": {"type": ["number", "null"], "minimum": 0},
        "rmse_forecast": {"type": ["number", "null"], "minimum": 0},
        "out_of_band_fraction": {"type": ["number", "null"], "minimum": 0},
        "log_likelihood": {"type": ["number", "null"]},
        "model": {"type": "object", "required": ["variant", "noise_var"]}
      }
    },
    "demodulate": {
      "type": "object",
      "required": ["experiment", "seed", "n_obs", "rmse_ch1", "rmse_ch2", "margin"],
      "properties": {
        "experiment": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0},
        "n_obs": {"type": "integer", "minimum": 0},
        "rmse_ch1": {"type": ["number", "null"], "minimum": 0},
        "rmse_ch2": {"type": ["number", "null"], "minimum": 0},
        "margin": {"type": "number", "minimum": 0},
        "sweep": {
          "type": "object",
          "required": ["rates", "p10", "p50", "p90", "seeds", "upper_half_relative_change"],
          "properties": {
            "rates": {"type": "array", "items": {"type": "number", "minimum": 0}},
            "p10": {"type": "array", "items": {"type": "number"}},
            "p50": {"type": "array", "items": {"type": "number"}},
            "p90": {"type": "array", "items": {"type": "number"}},
            "seeds": {"type": "integer", "minimum": 1},
            "upper_half_relative_change": {"type": ["number", "null"]}
          }
        }
      }
    },
    "filter": {
      "type": "object",
      "required": ["experiment", "seed", "n_obs", "band", "rmse_in_band", "leakage_ratio",
                   "brick_wall_rmse_in_band", "model"],
      "properties": {
        "experiment": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0},
        "n_obs": {"type": "integer", "minimum": 0},
        "band": {"type": "array", "items": {"type": "number", "minimum": 0}},
        "rmse_in_band": {"type": ["number", "null"], "minimum": 0},
        "leakage_ratio": {"type": ["number", "null"], "minimum": 0},
        "brick_wall_rmse_in_band": {"type": ["number", "null"], "minimum": 0},
        "model": {"type": "object", "required": ["variant", "noise_var"]}
      }
    },
    "sparse": {
      "type": "object",
      "required": ["experiment", "seed", "M", "n", "rmse_vs_exact", "runtime_exact",
                   "runtime_sparse"],
      "properties": {
        "experiment": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0},
        "M": {"type": "integer", "minimum": 1},
        "n": {"type": "integer", "minimum": 0},
        "rmse_vs_exact": {"type": "number", "minimum": 0},
        "runtime_exact": {"type": "number", "minimum": 0},
        "runtime_sparse": {"type": "number", "minimum": 0}
      }
    }
  })");
  return schema;
}

namespace {

bool has_type(const nlohmann::json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "integer") return v.is_number_integer();
  if (type == "number") return v.is_number();
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  return false;
}

}  // namespace

void validate_json(const nlohmann::json& value, const nlohmann::json& schema,
                   const std::string& where) {
  if (schema.contains("type")) {
    const auto& t = schema["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = has_type(value, t.get<std::string>());
    } else {
      for (const auto& alt : t) ok = ok || has_type(value, alt.get<std::string>());
    }
    if (!ok) throw ValidationError("metrics schema: " + where + " has type " + value.type_name());
  }
  if (schema.contains("minimum") && value.is_number() &&
      value.get<double>() < schema["minimum"].get<double>()) {
    throw ValidationError("metrics schema: " + where + " is below its minimum");
  }
  if (value.is_object()) {
    if (schema.contains("required")) {
      for (const auto& key : schema["required"]) {
        if (!value.contains(key.get<std::string>())) {
          throw ValidationError("metrics schema: " + where + " lacks '" + key.get<std::string>() +
                                "'");
        }
      }
    }
    if (schema.contains("properties")) {
      for (const auto& [key, sub] : schema["properties"].items()) {
        if (value.contains(key)) validate_json(value[key], sub, where + "." + key);
      }
    }
  }
  if (value.is_array() && schema.contains("items")) {
    for (std::size_t i = 0; i < value.size(); ++i) {
      validate_json(value[i], schema["items"], where + "[" + std::to_string(i) + "]");
    }
  }
}

nlohmann::json run_experiment(const ExperimentConfig& c) {
  namespace fs = std::filesystem;
  const fs::path dir = c.out_dir;
  nlohmann::json m;
  m["experiment"] = to_string(c.kind);
  m["seed"] = c.seed;

  switch (c.kind) {
    case ExperimentKind::Reconstruct: {
      const auto r = run_reconstruct(c);
      write_series_csv(dir / "truth.csv", r.truth);
      write_series_csv(dir / "observations.csv", r.observations);
      write_posterior_csv(dir / "posterior.csv", r.posterior);
      if (!r.psd_observations.frequencies.empty()) {
        write_psd_csv(dir / "psd_observations.csv", r.psd_observations);
        write_psd_csv(dir / "psd_posterior_mean.csv",
                      periodogram(TimeSeries(r.posterior.query_times, to_vector(r.posterior.mean)),
                                  r.psd_observations.frequencies));
      }
      write_json(dir / "model.json", model_to_json(r.model));
      if (r.fit) write_trace_csv(dir / "trace.csv", r.fit->trace);
      m["n_total"] = r.truth.size();
      m["n_obs"] = r.observations.size();
      m["noise_std"] = r.observations.noise_std().value_or(0.0);
      m["rmse_interpolation"] = number_or_null(r.rmse_interpolation);
      m["rmse_forecast"] = number_or_null(r.rmse_forecast);
      m["out_of_band_fraction"] = number_or_null(r.out_of_band_fraction);
      m["log_likelihood"] = r.fit ? number_or_null(r.fit->log_likelihood) : nlohmann::json(nullptr);
      m["model"] = model_to_json(r.model);
      break;
    }
    case ExperimentKind::Demodulate: {
      const auto r = run_demodulate(c);
      write_series_csv(dir / "observations.csv", r.observations);
      write_posterior_csv(dir / "channel1.csv", r.posterior.ch1);
      write_posterior_csv(dir / "channel2.csv", r.posterior.ch2);
      write_csv(dir / "truth_channels.csv", {"t", "x1", "x2"},
                {{r.truth.x1().times().begin(), r.truth.x1().times().end()},
                 {r.truth.x1().values().begin(), r.truth.x1().values().end()},
                 {r.truth.x2().values().begin(), r.truth.x2().values().end()}});
      m["n_obs"] = r.observations.size();
      m["rmse_ch1"] = number_or_null(r.rmse_ch1);
      m["rmse_ch2"] = number_or_null(r.rmse_ch2);
      m["margin"] = r.margin;
      if (!c.rates.empty()) {
        const auto s = run_demod_sweep(c);
        write_csv(dir / "sweep.csv", {"rate", "p10", "p50", "p90"}, {s.rates, s.p10, s.p50, s.p90});
        m["sweep"] = {{"rates", s.rates},
                      {"p10", s.p10},
                      {"p50", s.p50},
                      {"p90", s.p90},
                      {"seeds", c.sweep_seeds},
                      {"upper_half_relative_change", number_or_null(s.upper_half_relative_change())}};
      }
      break;
    }
    case ExperimentKind::Filter: {
      const auto r = run_filter(c);
      write_series_csv(dir / "observations.csv", r.observations);
      write_posterior_csv(dir / "filtered.csv", r.posterior);
      write_csv(dir / "brick_wall.csv", {"t", "estimate"},
                {r.posterior.query_times, to_vector(r.brick_wall)});
      const GPModel model(r.source, r.noise_var);
      write_json(dir / "model.json", model_to_json(model));
      if (r.fit) write_trace_csv(dir / "trace.csv", r.fit->trace);
      const Band band = c.band.value_or(Band(0.3, 0.5));
      const double brick_rmse = std::isfinite(r.rmse_in_band)
                                    ? central_half_rmse(c, band, r.posterior.query_times, r.brick_wall)
                                    : kNaN;
      m["n_obs"] = r.observations.size();
      m["band"] = {band.a(), band.b()};
      m["rmse_in_band"] = number_or_null(r.rmse_in_band);
      m["leakage_ratio"] = number_or_null(r.leakage_fraction);
      m["brick_wall_rmse_in_band"] = number_or_null(brick_rmse);
      m["model"] = model_to_json(model);
      break;
    }
    case ExperimentKind::Sparse: {
      const auto r = run_sparse(c);
      write_series_csv(dir / "observations.csv", r.observations);
      write_csv(dir / "inducing.csv", {"t"}, {r.inducing});
      write_csv(dir / "predictions.csv", {"t", "exact_mean", "sparse_mean"},
                {r.query, to_vector(r.exact_mean), to_vector(r.sparse.mean)});
      m["M"] = r.inducing.size();
      m["n"] = r.observations.size();
      m["rmse_vs_exact"] = r.rmse_vs_exact;
      m["runtime_exact"] = r.runtime_exact;
      m["runtime_sparse"] = r.runtime_sparse;
      break;
    }
  }

  validate_json(m, metrics_schema()[to_string(c.kind)]);
  write_json(dir / "metrics.json", m);
  return m;
}

}  // namespace blgp
