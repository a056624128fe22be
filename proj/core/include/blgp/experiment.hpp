#pragma once

#include "blgp/band.hpp"
#include "blgp/demod.hpp"
#include "blgp/gp.hpp"
#include "blgp/spectral.hpp"
#include "blgp/synthetic.hpp"
#include "blgp/training.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace blgp {

enum class ExperimentKind { Reconstruct, Demodulate, Filter, Sparse };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& s);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Reconstruct;
  /// User-supplied clean series; replaces the synthetic recipe when set.
  std::optional<std::filesystem::path> data;
  SyntheticRecipe recipe;
  std::size_t subsample = 0;
  double noise_fraction = 0.0;
  std::uint64_t seed = 0;

  /// Starting (or, with fit = false, final) model. Empty means a default
  /// shape for the experiment.
  std::optional<GPModel> model;
  bool fit = true;
  TrainingConfig training;

  /// reconstruct: trailing share of the span held out as a forecast region.
  double forecast_fraction = 0.0;
  /// filter: band to extract.
  std::optional<Band> band;
  /// demodulate: edge margin (time units) excluded from the RMSE; negative
  /// means 2 / channel bandwidth.
  double margin = -1.0;
  /// demodulate: average sampling rates (samples per time unit) for the
  /// sweep; empty runs a single demodulation at `subsample`.
  std::vector<double> rates;
  int sweep_seeds = 35;

  std::filesystem::path out_dir = ".";

  void validate() const;
};

/// Default synthetic setup for each experiment kind.
ExperimentConfig default_experiment(ExperimentKind kind);

struct ReconstructOutcome {
  TimeSeries truth;
  TimeSeries observations;
  GPModel model;
  std::optional<FitResult> fit;
  PosteriorSummary posterior;
  double rmse_interpolation;
  /// NaN without a forecast region.
  double rmse_forecast;
  /// Share of posterior-mean power outside the recipe band, from a
  /// Hann-windowed periodogram with one guard bin. NaN when the band or a
  /// uniform grid is not available.
  double out_of_band_fraction;
  PsdEstimate psd_observations;
};

ReconstructOutcome run_reconstruct(const ExperimentConfig& config);

struct DemodOutcome {
  TimeSeries observations;
  StereoChannels truth;
  DemodResult posterior;
  double rmse_ch1;
  double rmse_ch2;
  double margin;
};

DemodOutcome run_demodulate(const ExperimentConfig& config);

struct DemodSweep {
  std::vector<double> rates;
  /// rmse[r][s]: mean of both channels' normalised RMSE for rate r, seed s.
  std::vector<std::vector<double>> rmse;
  std::vector<double> p10;
  std::vector<double> p50;
  std::vector<double> p90;

  /// (max - min) / min of the median curve over rates >= max rate / 2.
  double upper_half_relative_change() const;
};

DemodSweep run_demod_sweep(const ExperimentConfig& config);

struct FilterOutcome {
  TimeSeries observations;
  KernelSpec source;
  double noise_var;
  std::optional<FitResult> fit;
  PosteriorSummary posterior;
  Eigen::VectorXd brick_wall;
  /// RMSE of the posterior mean against the in-band sinusoids over the
  /// central half of the span; NaN unless the recipe is a sinusoid mixture.
  double rmse_in_band;
  double leakage_fraction;
};

FilterOutcome run_filter(const ExperimentConfig& config);

struct SparseOutcome {
  TimeSeries observations;
  std::vector<double> inducing;
  std::vector<double> query;
  Eigen::VectorXd exact_mean;
  PosteriorSummary sparse;
  double signal_std;
  double rmse_vs_exact;
  double runtime_exact;
  double runtime_sparse;
};

SparseOutcome run_sparse(const ExperimentConfig& config);

/// Runs the experiment, writes its CSV artefacts and metrics.json into
/// config.out_dir and returns the metrics.
nlohmann::json run_experiment(const ExperimentConfig& config);

/// Schema every metrics.json is checked against before it is written.
const nlohmann::json& metrics_schema();

/// Throws ValidationError describing the first violation. Supports the
/// type, required, properties, items and minimum keywords.
void validate_json(const nlohmann::json& value, const nlohmann::json& schema,
                   const std::string& where = "$");

}  // namespace blgp
