#include "blgp/sparse.hpp"

#include "blgp/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace blgp {

InducingSet::InducingSet(std::vector<double> locations, double delta_total)
    : locations_(std::move(locations)), delta_total_(delta_total) {
  if (!(delta_total > 0.0) || !std::isfinite(delta_total)) {
    throw ValidationError("inducing set: delta_total must be finite and > 0");
  }
  const double spacing = 1.0 / delta_total;
  for (std::size_t i = 1; i < locations_.size(); ++i) {
    const double d = locations_[i] - locations_[i - 1];
    if (std::fabs(d - spacing) > 1e-12 * spacing * std::max(1.0, std::fabs(locations_[i]) / spacing)) {
      throw ValidationError("inducing set: locations must be uniformly spaced at 1/delta_total");
    }
  }
}

InducingSet nyquist_inducing(const KernelSpec& spec, double t_min, double t_max) {
  if (!std::isfinite(t_min) || !std::isfinite(t_max) || t_max < t_min) {
    throw ValidationError("nyquist inducing: need finite t_min <= t_max");
  }
  const double total = support_measure(spec);
  if (!(total > 0.0)) throw ValidationError("nyquist inducing: kernel has empty spectral support");
  // The small slack keeps a span that is an exact multiple of the spacing
  // from gaining a point through round-off.
  const double cells = std::ceil((t_max - t_min) * total - 1e-9);
  const auto count = static_cast<std::size_t>(std::max(0.0, cells)) + 1;
  std::vector<double> loc(count);
  for (std::size_t k = 0; k < count; ++k) loc[k] = t_min + static_cast<double>(k) / total;
  return InducingSet(std::move(loc), total);
}

PosteriorSummary sparse_posterior(const TimeSeries& obs, const KernelSpec& spec, double noise_var,
                                  std::span<const double> inducing, std::span<const double> query,
                                  bool means_only, Jitter jitter) {
  if (!(noise_var >= 0.0)) throw ValidationError("sparse: noise_var must be >= 0");
  if (inducing.empty()) throw ValidationError("sparse: need at least one inducing location");

  PosteriorSummary out;
  out.query_times.assign(query.begin(), query.end());
  const auto m = static_cast<Eigen::Index>(query.size());
  const double prior = prior_variance(spec);

  const JitteredCholesky kuu(gram_matrix(spec, inducing), jitter);
  const Eigen::MatrixXd w = kuu.solve_lower(gram_matrix(spec, inducing, query));

  if (obs.empty()) {
    out.mean = Eigen::VectorXd::Zero(m);
  } else {
    const Eigen::MatrixXd v = kuu.solve_lower(gram_matrix(spec, inducing, obs.times()));
    Eigen::MatrixXd b = v * v.transpose();
    b.diagonal().array() += noise_var;
    const JitteredCholesky bc(b, jitter);
    out.mean = w.transpose() * bc.solve(Eigen::VectorXd(v * obs.values_vector()));
    if (!means_only) {
      const Eigen::MatrixXd r = bc.solve_lower(w);
      out.covariance = gram_matrix(spec, query) - w.transpose() * w +
                       noise_var * (r.transpose() * r);
    }
  }
  if (means_only) return out;
  if (obs.empty()) out.covariance = gram_matrix(spec, query);

  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  for (Eigen::Index i = 0; i < m; ++i) {
    double& v = out.covariance(i, i);
    if (v < 0.0) {
      if (v < -1e-9 * prior) {
        std::ostringstream os;
        os << "sparse: variance " << v << " at query index " << i << " is negative beyond round-off";
        throw NumericalError(os.str());
      }
      v = 0.0;
    }
  }
  out.variance = out.covariance.diagonal();
  return out;
}

}  // namespace blgp
