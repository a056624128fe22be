#include "blgp/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace blgp {

namespace {

constexpr double kHuge = 1e300;
constexpr double kGold = 1.618033988749895;
constexpr double kCGold = 0.3819660112501051;
constexpr double kTiny = 1e-20;

// Wraps the objective so non-finite values become a large finite penalty
// (keeps the parabolic steps in the line search well defined).
class Counted {
 public:
  explicit Counted(const Objective& f) : f_(f) {}
  double operator()(const Eigen::VectorXd& x) {
    ++evaluations;
    const double v = f_(x);
    return std::isfinite(v) ? v : kHuge;
  }
  int evaluations = 0;

 private:
  const Objective& f_;
};

struct LineResult {
  double step;
  double value;
};

// Minimises g(a) = f(x + a d): bracket by golden expansion, then Brent.
LineResult line_minimize(Counted& f, const Eigen::VectorXd& x, const Eigen::VectorXd& d,
                         double f0) {
  auto g = [&](double a) { return f(x + a * d); };

  double ax = 0.0, bx = 1.0;
  double fa = f0, fb = g(bx);
  if (fb > fa) {
    std::swap(ax, bx);
    std::swap(fa, fb);
  }
  double cx = bx + kGold * (bx - ax);
  double fc = g(cx);
  for (int guard = 0; fb > fc && guard < 60; ++guard) {
    const double r = (bx - ax) * (fb - fc);
    const double q = (bx - cx) * (fb - fa);
    double denom = 2.0 * std::copysign(std::max(std::fabs(q - r), kTiny), q - r);
    double u = bx - ((bx - cx) * q - (bx - ax) * r) / denom;
    const double ulim = bx + 100.0 * (cx - bx);
    double fu;
    if ((bx - u) * (u - cx) > 0.0) {
      fu = g(u);
      if (fu < fc) {
        ax = bx;
        bx = u;
        fa = fb;
        fb = fu;
        break;
      }
      if (fu > fb) {
        cx = u;
        fc = fu;
        break;
      }
      u = cx + kGold * (cx - bx);
      fu = g(u);
    } else if ((cx - u) * (u - ulim) > 0.0) {
      fu = g(u);
      if (fu < fc) {
        bx = cx;
        cx = u;
        u = cx + kGold * (cx - bx);
        fb = fc;
        fc = fu;
        fu = g(u);
      }
    } else if ((u - ulim) * (ulim - cx) >= 0.0) {
      u = ulim;
      fu = g(u);
    } else {
      u = cx + kGold * (cx - bx);
      fu = g(u);
    }
    ax = bx;
    bx = cx;
    cx = u;
    fa = fb;
    fb = fc;
    fc = fu;
  }

  // Brent's method on the bracket (ax, bx, cx).
  double a = std::min(ax, cx), b = std::max(ax, cx);
  double xm = bx, w = bx, v = bx;
  double fx = fb, fw = fb, fv = fb;
  double d_step = 0.0, e = 0.0;
  constexpr double kTol = 1e-6;
  for (int iter = 0; iter < 100; ++iter) {
    const double mid = 0.5 * (a + b);
    const double tol1 = kTol * std::fabs(xm) + 1e-10;
    const double tol2 = 2.0 * tol1;
    if (std::fabs(xm - mid) <= tol2 - 0.5 * (b - a)) break;
    if (std::fabs(e) > tol1) {
      const double r = (xm - w) * (fx - fv);
      double q = (xm - v) * (fx - fw);
      double p = (xm - v) * q - (xm - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::fabs(q);
      const double etemp = e;
      e = d_step;
      if (std::fabs(p) >= std::fabs(0.5 * q * etemp) || p <= q * (a - xm) || p >= q * (b - xm)) {
        e = xm >= mid ? a - xm : b - xm;
        d_step = kCGold * e;
      } else {
        d_step = p / q;
        const double u = xm + d_step;
        if (u - a < tol2 || b - u < tol2) d_step = std::copysign(tol1, mid - xm);
      }
    } else {
      e = xm >= mid ? a - xm : b - xm;
      d_step = kCGold * e;
    }
    const double u = std::fabs(d_step) >= tol1 ? xm + d_step : xm + std::copysign(tol1, d_step);
    const double fu = g(u);
    if (fu <= fx) {
      if (u >= xm) a = xm; else b = xm;
      v = w; w = xm; xm = u;
      fv = fw; fw = fx; fx = fu;
    } else {
      if (u < xm) a = u; else b = u;
      if (fu <= fw || w == xm) {
        v = w; w = u;
        fv = fw; fw = fu;
      } else if (fu <= fv || v == xm || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  if (fx > f0) return {0.0, f0};
  return {xm, fx};
}

bool relatively_converged(double f_old, double f_new, double rel_tol) {
  return 2.0 * std::fabs(f_old - f_new) <= rel_tol * (std::fabs(f_old) + std::fabs(f_new)) + kTiny;
}

Eigen::VectorXd step_sizes(const OptimizerOptions& options, Eigen::Index n) {
  if (options.initial_step.size() == n) return options.initial_step;
  return Eigen::VectorXd::Ones(n);
}

}  // namespace

OptimizerResult minimize_powell(const Objective& objective, Eigen::VectorXd x0,
                                const OptimizerOptions& options,
                                const IterationCallback& on_iteration) {
  Counted f(objective);
  const Eigen::Index n = x0.size();
  Eigen::MatrixXd dirs = step_sizes(options, n).asDiagonal();
  OptimizerResult res;
  res.x = std::move(x0);
  res.value = f(res.x);

  for (int iter = 1; iter <= options.max_iters; ++iter) {
    const double f_start = res.value;
    const Eigen::VectorXd x_start = res.x;
    Eigen::Index biggest = 0;
    double biggest_drop = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double before = res.value;
      const auto line = line_minimize(f, res.x, dirs.col(i), res.value);
      res.x += line.step * dirs.col(i);
      res.value = line.value;
      if (before - res.value > biggest_drop) {
        biggest_drop = before - res.value;
        biggest = i;
      }
    }
    res.iterations = iter;
    if (on_iteration) on_iteration(iter, res.x, res.value);
    if (relatively_converged(f_start, res.value, options.rel_tol)) {
      res.converged = true;
      break;
    }

    // Replace the direction of largest decrease by the net displacement when
    // the extrapolated point says it is worthwhile.
    const Eigen::VectorXd displacement = res.x - x_start;
    const double f_ext = f(2.0 * res.x - x_start);
    if (f_ext < f_start) {
      const double t = 2.0 * (f_start - 2.0 * res.value + f_ext) *
                           std::pow(f_start - res.value - biggest_drop, 2) -
                       biggest_drop * std::pow(f_start - f_ext, 2);
      if (t < 0.0) {
        const auto line = line_minimize(f, res.x, displacement, res.value);
        res.x += line.step * displacement;
        res.value = line.value;
        dirs.col(biggest) = dirs.col(n - 1);
        dirs.col(n - 1) = displacement;
      }
    }
  }
  res.evaluations = f.evaluations;
  return res;
}

Eigen::VectorXd finite_difference_gradient(const Objective& f, const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd grad(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double step = h * std::max(1.0, std::fabs(x[i]));
    probe[i] = x[i] + step;
    const double up = f(probe);
    probe[i] = x[i] - step;
    const double down = f(probe);
    probe[i] = x[i];
    grad[i] = (up - down) / (2.0 * step);
  }
  return grad;
}

OptimizerResult minimize_bfgs(const Objective& objective, Eigen::VectorXd x0,
                              const OptimizerOptions& options,
                              const IterationCallback& on_iteration) {
  Counted f(objective);
  const Eigen::Index n = x0.size();
  const Eigen::VectorXd scale = step_sizes(options, n);
  auto gradient = [&](const Eigen::VectorXd& x) {
    Objective wrapped = [&f](const Eigen::VectorXd& p) { return f(p); };
    return finite_difference_gradient(wrapped, x);
  };

  OptimizerResult res;
  res.x = std::move(x0);
  res.value = f(res.x);
  Eigen::VectorXd g = gradient(res.x);
  Eigen::MatrixXd h_inv = scale.array().square().matrix().asDiagonal();

  for (int iter = 1; iter <= options.max_iters; ++iter) {
    if (!g.allFinite()) break;
    Eigen::VectorXd dir = -h_inv * g;
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      h_inv = scale.array().square().matrix().asDiagonal();
      dir = -h_inv * g;
      slope = g.dot(dir);
      if (!(slope < 0.0)) {
        res.converged = true;
        break;
      }
    }

    double alpha = 1.0;
    double f_new = f(res.x + alpha * dir);
    int backtracks = 0;
    while (!(f_new <= res.value + 1e-4 * alpha * slope) && backtracks < 40) {
      alpha *= 0.5;
      f_new = f(res.x + alpha * dir);
      ++backtracks;
    }
    if (!(f_new < res.value)) {
      res.converged = true;
      break;
    }

    const Eigen::VectorXd s = alpha * dir;
    const Eigen::VectorXd x_new = res.x + s;
    const Eigen::VectorXd g_new = gradient(x_new);
    const Eigen::VectorXd yv = g_new - g;
    const double sy = s.dot(yv);
    const double f_old = res.value;
    res.x = x_new;
    res.value = f_new;
    g = g_new;
    res.iterations = iter;
    if (on_iteration) on_iteration(iter, res.x, res.value);

    if (sy > 1e-12 * s.norm() * yv.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
      h_inv = (eye - rho * s * yv.transpose()) * h_inv * (eye - rho * yv * s.transpose()) +
              rho * s * s.transpose();
    }
    if (relatively_converged(f_old, f_new, options.rel_tol) ||
        g.norm() <= 1e-10 * std::max(1.0, std::fabs(f_new))) {
      res.converged = true;
      break;
    }
  }
  res.evaluations = f.evaluations;
  return res;
}

}  // namespace blgp
