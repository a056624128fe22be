#pragma once

#include "blgp/gp.hpp"
#include "blgp/spectral.hpp"
#include "blgp/time_series.hpp"
#include "blgp/training.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace blgp {

/// Reads a "time,value" CSV. Rows are sorted by time; a repeated time is an
/// error naming that time, and malformed rows report their line number.
TimeSeries load_csv(const std::filesystem::path& path);

/// Writes to a temporary file next to `path` and renames it into place.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

/// CSV with a header row; all columns must have the same length. Values are
/// written with 17 significant digits so files round-trip exactly.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

void write_series_csv(const std::filesystem::path& path, const TimeSeries& ts);
void write_posterior_csv(const std::filesystem::path& path, const PosteriorSummary& post);
void write_psd_csv(const std::filesystem::path& path, const PsdEstimate& psd);
void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& trace);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

nlohmann::json read_json(const std::filesystem::path& path);

/// Kernel JSON with an extra "noise_var" field (0 when absent on input).
nlohmann::json model_to_json(const GPModel& model);
GPModel model_from_json(const nlohmann::json& j);

}  // namespace blgp
