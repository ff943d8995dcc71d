// Regression structures on the quantile and dispersion parameters,
// log-likelihoods for both reparameterizations, maximum-likelihood fitting
// with the zero-init / random-restart protocol, and Wald-type inference.
//
// Functional relations: Q(psi_i) = x_i'beta and log(delta_i) = z_i'nu.
// Under the first variant alpha enters the parameter vector on the log
// scale so the optimizer stays unconstrained; the second variant pins
// alpha = alpha_of_q(q).
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pgjsb/distribution.hpp"
#include "pgjsb/optim.hpp"

namespace pgjsb {

enum class Variant { rpgjsb1, rpgjsb2 };

inline const char* to_string(Variant v) {
  return v == Variant::rpgjsb1 ? "rpgjsb1" : "rpgjsb2";
}

inline Variant variant_from_string(const std::string& s) {
  if (s == "rpgjsb1") return Variant::rpgjsb1;
  if (s == "rpgjsb2") return Variant::rpgjsb2;
  throw std::invalid_argument("unknown variant: " + s);
}

struct ModelSpec {
  Variant variant;
  double q;
  Kernel kernel;
  Link link;
  Eigen::MatrixXd X;  // n x p quantile design
  Eigen::MatrixXd Z;  // n x r scale design
  std::vector<std::string> x_names;
  std::vector<std::string> z_names;

  ModelSpec(Variant v, double q_, Kernel k, Link l, Eigen::MatrixXd X_,
            Eigen::MatrixXd Z_, std::vector<std::string> xn = {},
            std::vector<std::string> zn = {})
      : variant(v), q(q_), kernel(k), link(l), X(std::move(X_)),
        Z(std::move(Z_)), x_names(std::move(xn)), z_names(std::move(zn)) {
    if (!(q > 0.0 && q < 1.0))
      throw std::invalid_argument("ModelSpec: q must be in (0,1)");
    const auto n = X.rows();
    if (n == 0 || Z.rows() != n)
      throw std::invalid_argument("ModelSpec: X and Z must have the same, positive number of rows");
    if (static_cast<Eigen::Index>(p()) + static_cast<Eigen::Index>(r()) >= n)
      throw std::invalid_argument("ModelSpec: requires p + r < n");
    if (X.cols() > 0) {
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
      if (qr.rank() < X.cols())
        throw std::invalid_argument("ModelSpec: quantile design X is rank deficient");
    } else {
      throw std::invalid_argument("ModelSpec: X must have at least one column");
    }
    if (Z.cols() > 0) {
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Z);
      if (qr.rank() < Z.cols())
        throw std::invalid_argument("ModelSpec: scale design Z is rank deficient");
    }
    if (x_names.empty())
      for (int j = 0; j < p(); ++j) x_names.push_back("x" + std::to_string(j));
    if (z_names.empty())
      for (int j = 0; j < r(); ++j) z_names.push_back("z" + std::to_string(j));
    if (static_cast<int>(x_names.size()) != p() ||
        static_cast<int>(z_names.size()) != r())
      throw std::invalid_argument("ModelSpec: design name lengths do not match");
  }

  int n() const { return static_cast<int>(X.rows()); }
  int p() const { return static_cast<int>(X.cols()); }
  int r() const { return static_cast<int>(Z.cols()); }
  bool has_alpha() const { return variant == Variant::rpgjsb1; }
  int dim() const { return p() + r() + (has_alpha() ? 1 : 0); }

  // flattened coefficient names: beta..., nu..., log_alpha
  std::vector<std::string> coef_names() const {
    std::vector<std::string> out;
    for (int j = 0; j < p(); ++j) out.push_back("beta" + std::to_string(j));
    for (int j = 0; j < r(); ++j) out.push_back("nu" + std::to_string(j));
    if (has_alpha()) out.push_back("log_alpha");
    return out;
  }
  std::vector<std::string> coef_terms() const {
    std::vector<std::string> out = x_names;
    out.insert(out.end(), z_names.begin(), z_names.end());
    if (has_alpha()) out.push_back("");
    return out;
  }
};

// theta = (beta_1..beta_p, nu_1..nu_r [, log_alpha])
struct ParamVector {
  Eigen::VectorXd beta;
  Eigen::VectorXd nu;
  std::optional<double> log_alpha;

  int dim() const {
    return static_cast<int>(beta.size() + nu.size()) + (log_alpha ? 1 : 0);
  }
  Eigen::VectorXd flatten() const {
    Eigen::VectorXd out(dim());
    out.head(beta.size()) = beta;
    out.segment(beta.size(), nu.size()) = nu;
    if (log_alpha) out[out.size() - 1] = *log_alpha;
    return out;
  }
  static ParamVector unflatten(const Eigen::VectorXd& th, int p, int r,
                               bool has_alpha) {
    if (th.size() != p + r + (has_alpha ? 1 : 0))
      throw std::invalid_argument("ParamVector: size mismatch");
    ParamVector pv;
    pv.beta = th.head(p);
    pv.nu = th.segment(p, r);
    if (has_alpha) pv.log_alpha = th[p + r];
    return pv;
  }
};

namespace detail {
constexpr double resp_clamp_eps = 1e-12;
constexpr double neg_inf = -std::numeric_limits<double>::infinity();
constexpr double pos_inf = std::numeric_limits<double>::infinity();
}  // namespace detail

// Per-dataset evaluation cache: Q(y_i) and log|dQ/dy_i| do not depend on
// theta, so they are computed once. Responses are clamped to
// [1e-12, 1-1e-12] before Q here (and only here).
class LikelihoodEval {
 public:
  LikelihoodEval(const ModelSpec& spec, const Eigen::VectorXd& y)
      : spec_(&spec), y_(y) {
    const int n = spec.n();
    if (y.size() != n)
      throw std::invalid_argument("response length does not match design");
    Qy_.resize(n);
    logQp_.resize(n);
    for (int i = 0; i < n; ++i) {
      if (!(y[i] > 0.0 && y[i] < 1.0))
        throw std::domain_error("response value outside (0,1) at row " +
                                std::to_string(i + 1));
      const double yc = std::clamp(y[i], detail::resp_clamp_eps,
                                   1.0 - detail::resp_clamp_eps);
      Qy_[i] = link_forward(spec.link, yc);
      logQp_[i] = link_log_deriv(spec.link, yc);
    }
  }

  const ModelSpec& spec() const { return *spec_; }
  const Eigen::VectorXd& y() const { return y_; }

  struct Shape {
    double alpha = 1.0;
    double log_alpha = 0.0;
    double xs = 0.0;
    bool valid = false;
  };

  Shape shape(const Eigen::VectorXd& theta) const {
    Shape s;
    if (spec_->has_alpha()) {
      const double la = theta[theta.size() - 1];
      if (!(la > -200.0 && la < 200.0)) return s;
      s.alpha = std::exp(la);
      s.log_alpha = la;
      s.xs = xstar(spec_->kernel, spec_->q, s.alpha);
    } else {
      s.alpha = alpha_of_q(spec_->q);
      s.log_alpha = std::log(s.alpha);
      s.xs = 0.0;
    }
    s.valid = std::isfinite(s.xs);
    return s;
  }

  // log density contribution of observation i; -inf marks an invalid
  // region. Evaluated fully in log space so finite t never yields NaN.
  double term(const Shape& s, double eta1, double eta2, double Qy,
              double logQp) const {
    if (!s.valid || !(eta2 < 300.0)) return detail::neg_inf;
    const double delta = std::exp(eta2);
    const double t = delta * (Qy - eta1) + s.xs;
    if (!std::isfinite(t)) return detail::neg_inf;
    const double v = eta2 + s.log_alpha +
                     (s.alpha - 1.0) * g_log_cdf(spec_->kernel, t) +
                     g_log_pdf(spec_->kernel, t) + logQp;
    return std::isnan(v) ? detail::neg_inf : v;
  }

  double eta1(const Eigen::VectorXd& theta, int i) const {
    return spec_->X.row(i).dot(theta.head(spec_->p()));
  }
  double eta2(const Eigen::VectorXd& theta, int i) const {
    return spec_->Z.row(i).dot(theta.segment(spec_->p(), spec_->r()));
  }

  double obs_term(const Eigen::VectorXd& theta, int i) const {
    return term(shape(theta), eta1(theta, i), eta2(theta, i), Qy_[i], logQp_[i]);
  }

  // observation i evaluated at a replacement response value (response
  // perturbation); optional xs override supports the literal-tau reading.
  double obs_term_response(const Eigen::VectorXd& theta, int i, double yi,
                           std::optional<double> xs_override = {}) const {
    if (!(yi > 0.0 && yi < 1.0)) return detail::neg_inf;
    Shape s = shape(theta);
    if (xs_override) s.xs = *xs_override;
    const double yc =
        std::clamp(yi, detail::resp_clamp_eps, 1.0 - detail::resp_clamp_eps);
    return term(s, eta1(theta, i), eta2(theta, i), link_forward(spec_->link, yc),
                link_log_deriv(spec_->link, yc));
  }

  // observation i with both linear predictors scaled by w (predictor
  // perturbation)
  double obs_term_predictor(const Eigen::VectorXd& theta, int i, double w) const {
    return term(shape(theta), eta1(theta, i) * w, eta2(theta, i) * w, Qy_[i],
                logQp_[i]);
  }

  Eigen::VectorXd terms(const Eigen::VectorXd& theta) const {
    const int n = spec_->n();
    const Shape s = shape(theta);
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i)
      out[i] = term(s, eta1(theta, i), eta2(theta, i), Qy_[i], logQp_[i]);
    return out;
  }

  // negative log-likelihood with +inf surrogate outside the valid region
  double neg_loglik(const Eigen::VectorXd& theta) const {
    const int n = spec_->n();
    const Shape s = shape(theta);
    if (!s.valid) return detail::pos_inf;
    const int p = spec_->p(), r = spec_->r();
    const Eigen::VectorXd e1 = spec_->X * theta.head(p);
    const Eigen::VectorXd e2 = spec_->Z * theta.segment(p, r);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = term(s, e1[i], e2[i], Qy_[i], logQp_[i]);
      if (!std::isfinite(v)) return detail::pos_inf;
      sum += v;
    }
    return -sum;
  }

 private:
  const ModelSpec* spec_;
  Eigen::VectorXd y_;
  Eigen::VectorXd Qy_, logQp_;
};

inline double neg_loglik(const ModelSpec& spec, const Eigen::VectorXd& theta,
                         const Eigen::VectorXd& y) {
  if (theta.size() != spec.dim())
    throw std::invalid_argument("neg_loglik: theta dimension mismatch");
  return LikelihoodEval(spec, y).neg_loglik(theta);
}

inline Eigen::VectorXd loglik_terms(const ModelSpec& spec,
                                    const Eigen::VectorXd& theta,
                                    const Eigen::VectorXd& y) {
  return LikelihoodEval(spec, y).terms(theta);
}

// Observed information: numeric Hessian of the negative log-likelihood,
// symmetrized. Throws on nonfinite entries.
inline Eigen::MatrixXd observed_information(const ModelSpec& spec,
                                            const Eigen::VectorXd& theta_hat,
                                            const Eigen::VectorXd& y) {
  LikelihoodEval eval(spec, y);
  Eigen::MatrixXd H =
      fd_hessian([&](const Eigen::VectorXd& th) { return eval.neg_loglik(th); },
                 theta_hat);
  if (!H.allFinite())
    throw std::runtime_error("observed_information: nonfinite entries");
  return H;
}

struct FitOptions {
  int max_restarts = 100;
  std::uint64_t seed = 20201103;
  BfgsOptions bfgs{};
  double pd_tol = 1e-8;  // eigenvalue threshold relative to the largest
};

struct FitResult {
  ParamVector theta_hat;
  Eigen::VectorXd theta;  // flattened copy of theta_hat
  double loglik = 0.0;
  Eigen::MatrixXd observed_info;
  Eigen::MatrixXd vcov;
  Eigen::VectorXd se;
  double aic = 0.0;
  double bic = 0.0;
  bool converged = false;
  bool zero_init_converged = false;
  int restarts_used = 0;
  Eigen::VectorXd fitted_quantile;  // psi_hat_i or xi_hat_i
  Eigen::VectorXd fitted_delta;
  int n_obs = 0;
  std::vector<std::string> names;
  std::vector<std::string> terms;
};

inline std::pair<double, double> aic_bic(double loglik, int dim, int n) {
  return {-2.0 * loglik + 2.0 * dim, -2.0 * loglik + std::log(double(n)) * dim};
}

inline std::pair<double, double> aic_bic(const FitResult& fit) {
  return {fit.aic, fit.bic};
}

namespace detail {

struct PdCheck {
  bool ok = false;
  Eigen::MatrixXd vcov;
  Eigen::VectorXd se;
};

inline PdCheck pd_inverse(const Eigen::MatrixXd& H, double pd_tol) {
  PdCheck out;
  if (!H.allFinite()) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success) return out;
  const auto& ev = es.eigenvalues();
  const double emax = ev.maxCoeff();
  if (!(emax > 0.0) || ev.minCoeff() <= pd_tol * emax) return out;
  out.vcov = es.eigenvectors() * ev.cwiseInverse().asDiagonal() *
             es.eigenvectors().transpose();
  out.se = out.vcov.diagonal().cwiseSqrt();
  out.ok = true;
  return out;
}

// standard-normal draws for restart initialization (Box-Muller free:
// inverse cdf of the shared unit-uniform stream)
inline Eigen::VectorXd normal_draw(pgjsb::detail::UnitUniform& rng, int dim) {
  Eigen::VectorXd v(dim);
  for (int j = 0; j < dim; ++j) v[j] = norm_quantile(rng());
  return v;
}

}  // namespace detail

inline FitResult fit(const ModelSpec& spec, const Eigen::VectorXd& y,
                     const FitOptions& options = {}) {
  LikelihoodEval eval(spec, y);
  const int dim = spec.dim();
  auto nll = [&](const Eigen::VectorXd& th) { return eval.neg_loglik(th); };

  FitResult out;
  out.n_obs = spec.n();
  out.names = spec.coef_names();
  out.terms = spec.coef_terms();

  pgjsb::detail::UnitUniform rng(options.seed);
  BfgsResult best;  // best-effort fallback across failed attempts
  bool have_best = false;

  for (int attempt = 0; attempt <= options.max_restarts; ++attempt) {
    const Eigen::VectorXd x0 = attempt == 0 ? Eigen::VectorXd::Zero(dim)
                                            : detail::normal_draw(rng, dim);
    BfgsResult rb = bfgs_minimize(nll, x0, options.bfgs);
    if (std::isfinite(rb.f) && (!have_best || rb.f < best.f)) {
      best = rb;
      have_best = true;
    }
    if (!rb.converged) continue;
    Eigen::MatrixXd H;
    try {
      H = fd_hessian(nll, rb.x);
    } catch (...) {
      continue;
    }
    auto pd = detail::pd_inverse(H, options.pd_tol);
    if (!pd.ok) continue;

    out.converged = true;
    out.zero_init_converged = attempt == 0;
    out.restarts_used = attempt;
    out.theta = rb.x;
    out.loglik = -rb.f;
    out.observed_info = 0.5 * (H + H.transpose());
    out.vcov = pd.vcov;
    out.se = pd.se;
    break;
  }

  if (!out.converged) {
    out.restarts_used = options.max_restarts;
    out.theta = have_best ? best.x : Eigen::VectorXd::Zero(dim);
    out.loglik = have_best ? -best.f : -nll(out.theta);
    try {
      out.observed_info = fd_hessian(nll, out.theta);
      auto pd = detail::pd_inverse(out.observed_info, options.pd_tol);
      if (pd.ok) {
        out.vcov = pd.vcov;
        out.se = pd.se;
      }
    } catch (...) {
    }
  }

  out.theta_hat = ParamVector::unflatten(out.theta, spec.p(), spec.r(),
                                         spec.has_alpha());
  auto [a, b] = aic_bic(out.loglik, dim, spec.n());
  out.aic = a;
  out.bic = b;

  out.fitted_quantile.resize(spec.n());
  out.fitted_delta.resize(spec.n());
  const Eigen::VectorXd e1 = spec.X * out.theta_hat.beta;
  const Eigen::VectorXd e2 = spec.Z * out.theta_hat.nu;
  for (int i = 0; i < spec.n(); ++i) {
    out.fitted_quantile[i] = link_inverse(spec.link, e1[i]);
    out.fitted_delta[i] = std::exp(e2[i]);
  }
  return out;
}

struct WaldRow {
  std::string name;
  std::string term;
  double estimate;
  double se;
  double t_value;
  double p_one_sided;  // 1 - Phi(|t|)
  double p_two_sided;  // 2 * (1 - Phi(|t|))
};

inline std::vector<WaldRow> wald_table(const FitResult& fit) {
  std::vector<WaldRow> rows;
  for (int j = 0; j < fit.theta.size(); ++j) {
    WaldRow r;
    r.name = j < static_cast<int>(fit.names.size()) ? fit.names[j]
                                                    : "theta" + std::to_string(j);
    r.term = j < static_cast<int>(fit.terms.size()) ? fit.terms[j] : "";
    r.estimate = fit.theta[j];
    r.se = fit.se.size() == fit.theta.size() ? fit.se[j]
                                             : std::numeric_limits<double>::quiet_NaN();
    r.t_value = r.estimate == 0.0 ? 0.0 : r.estimate / r.se;
    const double tail = r.estimate == 0.0 ? 0.5 : norm_cdf(-std::fabs(r.t_value));
    r.p_one_sided = tail;
    r.p_two_sided = 2.0 * tail;
    rows.push_back(std::move(r));
  }
  return rows;
}

// Conditional quantiles at new covariate rows for the requested levels;
// row i, column k holds the level-k quantile at (new_x_i, new_z_i).
inline Eigen::MatrixXd predict_quantile(const FitResult& fit,
                                        const ModelSpec& spec,
                                        const Eigen::MatrixXd& new_x,
                                        const Eigen::MatrixXd& new_z,
                                        const std::vector<double>& levels) {
  if (!fit.converged)
    throw std::runtime_error("predict_quantile: fit did not converge");
  if (new_x.cols() != spec.p() || new_z.cols() != spec.r() ||
      new_x.rows() != new_z.rows())
    throw std::invalid_argument("predict_quantile: design shape mismatch");
  for (double p : levels)
    if (!(p > 0.0 && p < 1.0))
      throw std::domain_error("predict_quantile: levels must be in (0,1)");

  const double alpha = spec.has_alpha() ? std::exp(*fit.theta_hat.log_alpha)
                                        : alpha_of_q(spec.q);
  const double xs =
      spec.has_alpha() ? xstar(spec.kernel, spec.q, alpha) : 0.0;
  Eigen::MatrixXd out(new_x.rows(), static_cast<Eigen::Index>(levels.size()));
  for (Eigen::Index i = 0; i < new_x.rows(); ++i) {
    const double e1 = new_x.row(i).dot(fit.theta_hat.beta);
    const double e2 = new_z.row(i).dot(fit.theta_hat.nu);
    const double delta = std::exp(e2);
    for (std::size_t k = 0; k < levels.size(); ++k) {
      const double p = levels[k];
      // at p == q the anchoring identity gives psi_hat itself
      out(i, static_cast<Eigen::Index>(k)) =
          p == spec.q ? link_inverse(spec.link, e1)
                      : detail::quantile_at(spec.kernel, spec.link, p, alpha,
                                            xs, e1, delta);
    }
  }
  return out;
}

struct ScanRow {
  double q;
  Variant variant;
  double loglik = std::numeric_limits<double>::quiet_NaN();
  double aic = std::numeric_limits<double>::quiet_NaN();
  double bic = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
  std::string error;
};

// One fit per (variant, q); failures are recorded per cell and the scan
// continues.
inline std::vector<ScanRow> quantile_scan(const ModelSpec& spec_template,
                                          const Eigen::VectorXd& y,
                                          const std::vector<double>& q_grid,
                                          const FitOptions& options = {}) {
  std::vector<double> grid = q_grid;
  std::sort(grid.begin(), grid.end());
  std::vector<ScanRow> rows;
  for (double q : grid) {
    for (Variant v : {Variant::rpgjsb1, Variant::rpgjsb2}) {
      ScanRow row;
      row.q = q;
      row.variant = v;
      try {
        ModelSpec spec(v, q, spec_template.kernel, spec_template.link,
                       spec_template.X, spec_template.Z, spec_template.x_names,
                       spec_template.z_names);
        FitResult fr = fit(spec, y, options);
        row.loglik = fr.loglik;
        row.aic = fr.aic;
        row.bic = fr.bic;
        row.converged = fr.converged;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace pgjsb
