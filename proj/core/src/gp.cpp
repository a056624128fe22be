#include "blgp/gp.hpp"

#include "blgp/error.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace blgp {

GPModel::GPModel(KernelSpec kernel, double noise_var)
    : kernel_(std::move(kernel)), noise_var_(noise_var) {
  if (!std::isfinite(noise_var) || noise_var < 0.0) {
    throw ValidationError("gp model: noise_var must be finite and >= 0");
  }
}

namespace {

Eigen::MatrixXd observation_covariance(const GPModel& model, std::span<const double> times) {
  Eigen::MatrixXd k = gram_matrix(model.kernel(), times);
  k.diagonal().array() += model.noise_var();
  return k;
}

void clamp_variances(Eigen::MatrixXd& cov, double prior_scale) {
  const double floor = -1e-9 * std::max(prior_scale, 0.0);
  for (Eigen::Index i = 0; i < cov.rows(); ++i) {
    double& v = cov(i, i);
    if (!std::isfinite(v)) throw NumericalError("posterior: non-finite variance");
    if (v < 0.0) {
      if (v < floor) {
        std::ostringstream os;
        os << "posterior: variance " << v << " at query index " << i
           << " is negative beyond round-off";
        throw NumericalError(os.str());
      }
      v = 0.0;
    }
  }
}

}  // namespace

PosteriorSummary condition_gaussian(const Eigen::MatrixXd& obs_cov, const Eigen::MatrixXd& cross,
                                    const Eigen::MatrixXd& query_cov, const Eigen::VectorXd& y,
                                    std::span<const double> query, double prior_scale,
                                    Jitter jitter) {
  PosteriorSummary out;
  out.query_times.assign(query.begin(), query.end());
  if (y.size() == 0) {
    out.mean = Eigen::VectorXd::Zero(query_cov.rows());
    out.covariance = query_cov;
  } else {
    const JitteredCholesky chol(obs_cov, jitter);
    out.mean = cross * chol.solve(y);
    const Eigen::MatrixXd v = chol.solve_lower(cross.transpose());
    out.covariance = query_cov - v.transpose() * v;
  }
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  clamp_variances(out.covariance, prior_scale);
  out.variance = out.covariance.diagonal();
  return out;
}

PosteriorSummary posterior(const GPModel& model, const TimeSeries& obs,
                           std::span<const double> query, Jitter jitter) {
  const auto t = obs.times();
  return condition_gaussian(observation_covariance(model, t), gram_matrix(model.kernel(), query, t),
                            gram_matrix(model.kernel(), query), obs.values_vector(), query,
                            prior_variance(model.kernel()), jitter);
}

Eigen::VectorXd posterior_mean(const GPModel& model, const TimeSeries& obs,
                               std::span<const double> query, Jitter jitter) {
  if (obs.empty()) return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(query.size()));
  const JitteredCholesky chol(observation_covariance(model, obs.times()), jitter);
  return gram_matrix(model.kernel(), query, obs.times()) * chol.solve(obs.values_vector());
}

double log_marginal_likelihood(const GPModel& model, const TimeSeries& obs, Jitter jitter) {
  if (obs.empty()) return 0.0;
  const JitteredCholesky chol(observation_covariance(model, obs.times()), jitter);
  const Eigen::VectorXd y = obs.values_vector();
  const double n = static_cast<double>(obs.size());
  return -0.5 * y.dot(chol.solve(y)) - 0.5 * chol.log_determinant() -
         0.5 * n * std::log(2.0 * std::numbers::pi);
}

Eigen::MatrixXd sample(const GPModel& model, std::span<const double> times, std::uint64_t seed,
                       int count, Jitter jitter) {
  if (count < 0) throw ValidationError("sample: count must be >= 0");
  const auto m = static_cast<Eigen::Index>(times.size());
  Eigen::MatrixXd draws = Eigen::MatrixXd::Zero(count, m);
  if (m == 0 || count == 0) return draws;
  const Eigen::MatrixXd k = gram_matrix(model.kernel(), times);
  if (k.diagonal().maxCoeff() <= 0.0) return draws;

  const JitteredCholesky chol(k, jitter);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd z(m, count);
  for (Eigen::Index c = 0; c < count; ++c) {
    for (Eigen::Index i = 0; i < m; ++i) z(i, c) = normal(gen);
  }
  draws = (chol.matrix_l() * z).transpose();
  return draws;
}

}  // namespace blgp
