#include "blgp/io.hpp"

#include "blgp/error.hpp"
#include "blgp/kernel_json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <system_error>
#include <utility>

namespace blgp {

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

bool parse_double(const std::string& field, double& out) {
  const std::string f = trim(field);
  if (f.empty()) return false;
  const char* first = f.data();
  const char* last = f.data() + f.size();
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

TimeSeries load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());

  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  std::vector<std::pair<double, double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (!header_seen) {
      std::string h = line;
      h.erase(std::remove_if(h.begin(), h.end(), [](unsigned char c) { return std::isspace(c); }),
              h.end());
      if (h != "time,value") {
        throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                              ": expected header \"time,value\"");
      }
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    double t = 0.0, v = 0.0;
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos ||
        !parse_double(line.substr(0, comma), t) || !parse_double(line.substr(comma + 1), v)) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": malformed row \"" +
                            line + "\"");
    }
    rows.emplace_back(t, v);
  }
  if (!header_seen) throw ValidationError(path.string() + ": empty file");
  if (rows.empty()) throw ValidationError(path.string() + ": no data rows");

  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<double> times, values;
  times.reserve(rows.size());
  values.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].first == rows[i - 1].first) {
      throw ValidationError(path.string() + ": duplicate time " + format_double(rows[i].first));
    }
    times.push_back(rows[i].first);
    values.push_back(rows[i].second);
  }
  return TimeSeries(std::move(times), std::move(values));
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw ValidationError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw ValidationError("csv: header/column count mismatch");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != rows) throw ValidationError("csv: columns differ in length");
  }
  std::ostringstream os;
  for (std::size_t j = 0; j < header.size(); ++j) os << (j ? "," : "") << header[j];
  os << '\n';
  os << std::setprecision(17);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) os << (j ? "," : "") << columns[j][i];
    os << '\n';
  }
  write_text_atomic(path, os.str());
}

void write_series_csv(const std::filesystem::path& path, const TimeSeries& ts) {
  write_csv(path, {"time", "value"},
            {{ts.times().begin(), ts.times().end()}, {ts.values().begin(), ts.values().end()}});
}

void write_posterior_csv(const std::filesystem::path& path, const PosteriorSummary& post) {
  std::vector<double> var(post.query_times.size(), std::nan(""));
  if (post.variance.size() == static_cast<Eigen::Index>(var.size())) {
    for (std::size_t i = 0; i < var.size(); ++i) var[i] = post.variance[static_cast<Eigen::Index>(i)];
  }
  write_csv(path, {"t", "mean", "variance"},
            {post.query_times, {post.mean.data(), post.mean.data() + post.mean.size()}, var});
}

void write_psd_csv(const std::filesystem::path& path, const PsdEstimate& psd) {
  write_csv(path, {"frequency", "power"}, {psd.frequencies, psd.power});
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& trace) {
  std::vector<std::vector<double>> cols(6);
  for (const auto& r : trace) {
    cols[0].push_back(r.iter);
    cols[1].push_back(r.objective);
    cols[2].push_back(r.sigma2);
    cols[3].push_back(r.xi0);
    cols[4].push_back(r.delta);
    cols[5].push_back(r.noise_var);
  }
  write_csv(path, {"iter", "objective", "sigma2", "xi0", "delta", "noise_var"}, cols);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

nlohmann::json model_to_json(const GPModel& model) {
  nlohmann::json j = kernel_to_json(model.kernel());
  j["noise_var"] = model.noise_var();
  return j;
}

GPModel model_from_json(const nlohmann::json& j) {
  double noise = 0.0;
  if (j.contains("noise_var")) {
    if (!j["noise_var"].is_number()) throw ValidationError("model json: noise_var must be a number");
    noise = j["noise_var"].get<double>();
  }
  return GPModel(kernel_from_json(j), noise);
}

}  // namespace blgp
