// Quasi-Newton minimization with numeric derivatives.
//
// Gradients and Hessians are central finite differences with step
// h_j = max(1e-5, 1e-5*|x_j|); the Hessian is symmetrized as (H+H')/2.
// The BFGS loop uses an Armijo backtracking line search with quadratic
// interpolation and skips the inverse-Hessian update when the curvature
// condition fails.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>

namespace pgjsb {

using Objective = std::function<double(const Eigen::VectorXd&)>;

inline double fd_step(double x) { return std::max(1e-5, 1e-5 * std::fabs(x)); }

inline Eigen::VectorXd fd_gradient(const Objective& f, const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  Eigen::VectorXd g(n), xp = x;
  for (int j = 0; j < n; ++j) {
    const double h = fd_step(x[j]);
    xp[j] = x[j] + h;
    const double fp = f(xp);
    xp[j] = x[j] - h;
    const double fm = f(xp);
    xp[j] = x[j];
    g[j] = (fp - fm) / (2.0 * h);
  }
  return g;
}

inline Eigen::MatrixXd fd_hessian(const Objective& f, const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd H(n, n);
  Eigen::VectorXd xp = x;
  const double f0 = f(x);
  for (int j = 0; j < n; ++j) {
    const double hj = fd_step(x[j]);
    xp[j] = x[j] + hj;
    const double fp = f(xp);
    xp[j] = x[j] - hj;
    const double fm = f(xp);
    xp[j] = x[j];
    H(j, j) = (fp - 2.0 * f0 + fm) / (hj * hj);
    for (int i = j + 1; i < n; ++i) {
      const double hi = fd_step(x[i]);
      xp[i] = x[i] + hi; xp[j] = x[j] + hj;
      const double fpp = f(xp);
      xp[j] = x[j] - hj;
      const double fmp = f(xp);
      xp[i] = x[i] - hi;
      const double fmm = f(xp);
      xp[j] = x[j] + hj;
      const double fpm = f(xp);
      xp[i] = x[i]; xp[j] = x[j];
      const double v = (fpp - fpm - fmp + fmm) / (4.0 * hi * hj);
      H(i, j) = v;
      H(j, i) = v;
    }
  }
  return 0.5 * (H + H.transpose());
}

struct BfgsOptions {
  int max_iter = 500;
  double grad_tol = 1e-6;   // converged when ||g||_inf < grad_tol*(1+|f|)
  double f_tol = 1e-10;     // stall when relative decrease below this
};

struct BfgsResult {
  Eigen::VectorXd x;
  double f = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd grad;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

inline BfgsResult bfgs_minimize(const Objective& f, const Eigen::VectorXd& x0,
                                const BfgsOptions& opt = {}) {
  const int n = static_cast<int>(x0.size());
  BfgsResult res;
  res.x = x0;

  auto eval = [&](const Eigen::VectorXd& x) {
    ++res.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  double fx = eval(res.x);
  if (!std::isfinite(fx)) return res;
  Eigen::VectorXd g = fd_gradient(f, res.x);
  if (!g.allFinite()) return res;

  Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(n, n);
  int stalls = 0;

  for (int iter = 0; iter < opt.max_iter; ++iter) {
    res.iterations = iter;
    if (g.lpNorm<Eigen::Infinity>() < opt.grad_tol * (1.0 + std::fabs(fx))) {
      res.converged = true;
      break;
    }

    Eigen::VectorXd d = -Hinv * g;
    double slope = g.dot(d);
    if (!(slope < 0.0)) {  // not a descent direction: reset
      Hinv.setIdentity();
      d = -g;
      slope = g.dot(d);
    }

    // Armijo backtracking with one quadratic interpolation per cut
    double step = 1.0;
    double f_new = std::numeric_limits<double>::infinity();
    Eigen::VectorXd x_new;
    bool ok = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = res.x + step * d;
      f_new = eval(x_new);
      if (f_new <= fx + 1e-4 * step * slope) {
        ok = true;
        break;
      }
      double cut = 0.5;
      if (std::isfinite(f_new)) {
        const double denom = 2.0 * (f_new - fx - step * slope);
        if (denom > 0.0) cut = std::clamp(-slope * step / denom, 0.1, 0.5);
      }
      step *= cut;
    }
    if (!ok) {
      // restart once from steepest descent before giving up
      if ((-Hinv * g - (-g)).norm() > 1e-14) {
        Hinv.setIdentity();
        continue;
      }
      break;
    }

    Eigen::VectorXd g_new = fd_gradient(f, x_new);
    if (!g_new.allFinite()) break;

    const Eigen::VectorXd s = x_new - res.x;
    const Eigen::VectorXd yv = g_new - g;
    const double sy = s.dot(yv);
    if (sy > 1e-10 * s.norm() * yv.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
      Hinv = (I - rho * s * yv.transpose()) * Hinv *
                 (I - rho * yv * s.transpose()) +
             rho * s * s.transpose();
    }

    const double decrease = fx - f_new;
    res.x = x_new;
    g = g_new;
    fx = f_new;

    if (decrease < opt.f_tol * (1.0 + std::fabs(fx))) {
      if (++stalls >= 2) {
        // progress exhausted; accept if the gradient is small at a looser
        // tolerance (FD noise floor), else report non-convergence
        res.converged =
            g.lpNorm<Eigen::Infinity>() < 1e2 * opt.grad_tol * (1.0 + std::fabs(fx));
        break;
      }
    } else {
      stalls = 0;
    }
  }

  res.f = fx;
  res.grad = g;
  if (res.iterations == opt.max_iter - 1 &&
      g.lpNorm<Eigen::Infinity>() < opt.grad_tol * (1.0 + std::fabs(fx)))
    res.converged = true;
  return res;
}

}  // namespace pgjsb
