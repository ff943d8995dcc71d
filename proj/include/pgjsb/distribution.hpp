// The PGJSB family on (0,1) under its two quantile reparameterizations.
//
// Shared structure: with t = delta*(Q(y) - Q(psi)) + xstar(q, alpha),
//   cdf(y) = G(t)^alpha
//   pdf(y) = delta * alpha * G(t)^(alpha-1) * g(t) * |dQ/dy|
// The first form (Rpgjsb1) keeps alpha free and anchors the 100q-th
// quantile at psi through xstar = G^{-1}(q^{1/alpha}); the second (Rpgjsb2)
// fixes alpha(q) = -log(q)/log(2) so that G(0)^{alpha(q)} = q and no shift
// is needed.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pgjsb/kernel.hpp"
#include "pgjsb/link.hpp"

namespace pgjsb {

struct Rpgjsb1 {
  double psi;    // 100q-th quantile, in (0,1)
  double delta;  // dispersion, > 0
  double alpha;  // shape, > 0
  double q;      // quantile level, in (0,1)
  Kernel kernel = Kernel::logistic;
  Link link = Link::logit;
};

struct Rpgjsb2 {
  double xi;     // 100q-th quantile, in (0,1)
  double delta;  // dispersion, > 0
  double q;      // quantile level, in (0,1)
  Kernel kernel = Kernel::logistic;
  Link link = Link::logit;
};

inline double alpha_of_q(double q) {
  if (!(q > 0.0 && q < 1.0))
    throw std::domain_error("alpha_of_q: q must be in (0,1)");
  return -std::log(q) / std::log(2.0);
}

// xstar(q, alpha) = G^{-1}(q^{1/alpha})
inline double xstar(Kernel k, double q, double alpha) {
  if (!(q > 0.0 && q < 1.0))
    throw std::domain_error("xstar: q must be in (0,1)");
  if (!(alpha > 0.0)) throw std::domain_error("xstar: alpha must be > 0");
  double p = std::exp(std::log(q) / alpha);
  if (p >= 1.0) p = 1.0 - DBL_EPSILON / 2.0;
  if (p < DBL_MIN) p = DBL_MIN;
  return g_quantile(k, p);
}

namespace detail {

inline void check_rpgjsb1(const Rpgjsb1& p) {
  if (!(p.psi > 0.0 && p.psi < 1.0 && p.delta > 0.0 && p.alpha > 0.0 &&
        p.q > 0.0 && p.q < 1.0))
    throw std::domain_error("Rpgjsb1: need psi,q in (0,1) and delta,alpha > 0");
}

inline void check_rpgjsb2(const Rpgjsb2& p) {
  if (!(p.xi > 0.0 && p.xi < 1.0 && p.delta > 0.0 && p.q > 0.0 && p.q < 1.0))
    throw std::domain_error("Rpgjsb2: need xi,q in (0,1) and delta > 0");
}

// log pdf at a precomputed t. The whole expression is a sum of logs, so it
// stays finite for every finite t; -inf (never NaN) marks genuinely
// unrepresentable corners.
inline double log_pdf_at(Kernel k, double t, double alpha, double log_delta,
                         double log_qderiv) {
  if (!std::isfinite(t)) return -std::numeric_limits<double>::infinity();
  const double v = log_delta + std::log(alpha) +
                   (alpha - 1.0) * g_log_cdf(k, t) + g_log_pdf(k, t) +
                   log_qderiv;
  return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
}

inline double cdf_at(Kernel k, double t, double alpha) {
  return std::exp(alpha * g_log_cdf(k, t));
}

// closed-form inversion: y = Q^{-1}(Q(psi) + (G^{-1}(p^{1/alpha}) - xs)/delta)
inline double quantile_at(Kernel k, Link l, double p, double alpha, double xs,
                          double q_psi, double delta) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("quantile: p must be in (0,1)");
  double pa = std::exp(std::log(p) / alpha);
  if (pa >= 1.0) pa = 1.0 - DBL_EPSILON / 2.0;
  if (pa < DBL_MIN) pa = DBL_MIN;
  return link_inverse(l, q_psi + (g_quantile(k, pa) - xs) / delta);
}

// Uniform draws strictly inside (0,1): 53-bit mantissa centered on bin
// midpoints so neither endpoint can be hit.
class UnitUniform {
 public:
  explicit UnitUniform(std::uint64_t seed) : state_(seed) {
    // splitmix64 warm-up decorrelates small seeds
    next_raw();
  }
  double operator()() {
    return (static_cast<double>(next_raw() >> 11) + 0.5) * 0x1p-53;
  }

 private:
  std::uint64_t next_raw() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::uint64_t state_;
};

}  // namespace detail

// ---- RPGJSB1 ----

inline double log_pdf(const Rpgjsb1& p, double y) {
  detail::check_rpgjsb1(p);
  detail::check_unit_open(y, "log_pdf");
  const double xs = xstar(p.kernel, p.q, p.alpha);
  const double t = p.delta * (link_forward(p.link, y) - link_forward(p.link, p.psi)) + xs;
  return detail::log_pdf_at(p.kernel, t, p.alpha, std::log(p.delta),
                            link_log_deriv(p.link, y));
}

inline double pdf(const Rpgjsb1& p, double y) {
  const double lp = log_pdf(p, y);
  return std::isfinite(lp) ? std::exp(lp) : 0.0;
}

inline double cdf(const Rpgjsb1& p, double y) {
  detail::check_rpgjsb1(p);
  detail::check_unit_open(y, "cdf");
  const double xs = xstar(p.kernel, p.q, p.alpha);
  const double t = p.delta * (link_forward(p.link, y) - link_forward(p.link, p.psi)) + xs;
  return detail::cdf_at(p.kernel, t, p.alpha);
}

inline double quantile(const Rpgjsb1& p, double pr) {
  detail::check_rpgjsb1(p);
  return detail::quantile_at(p.kernel, p.link, pr, p.alpha,
                             xstar(p.kernel, p.q, p.alpha),
                             link_forward(p.link, p.psi), p.delta);
}

inline std::vector<double> sample(const Rpgjsb1& p, std::size_t n,
                                  std::uint64_t seed) {
  detail::check_rpgjsb1(p);
  const double xs = xstar(p.kernel, p.q, p.alpha);
  const double q_psi = link_forward(p.link, p.psi);
  detail::UnitUniform rng(seed);
  std::vector<double> out(n);
  for (auto& v : out)
    v = detail::quantile_at(p.kernel, p.link, rng(), p.alpha, xs, q_psi, p.delta);
  return out;
}

// ---- RPGJSB2 ----

inline double log_pdf(const Rpgjsb2& p, double y) {
  detail::check_rpgjsb2(p);
  detail::check_unit_open(y, "log_pdf");
  const double a = alpha_of_q(p.q);
  const double t = p.delta * (link_forward(p.link, y) - link_forward(p.link, p.xi));
  return detail::log_pdf_at(p.kernel, t, a, std::log(p.delta),
                            link_log_deriv(p.link, y));
}

inline double pdf(const Rpgjsb2& p, double y) {
  const double lp = log_pdf(p, y);
  return std::isfinite(lp) ? std::exp(lp) : 0.0;
}

inline double cdf(const Rpgjsb2& p, double y) {
  detail::check_rpgjsb2(p);
  detail::check_unit_open(y, "cdf");
  const double a = alpha_of_q(p.q);
  const double t = p.delta * (link_forward(p.link, y) - link_forward(p.link, p.xi));
  return detail::cdf_at(p.kernel, t, a);
}

inline double quantile(const Rpgjsb2& p, double pr) {
  detail::check_rpgjsb2(p);
  return detail::quantile_at(p.kernel, p.link, pr, alpha_of_q(p.q), 0.0,
                             link_forward(p.link, p.xi), p.delta);
}

inline std::vector<double> sample(const Rpgjsb2& p, std::size_t n,
                                  std::uint64_t seed) {
  detail::check_rpgjsb2(p);
  const double a = alpha_of_q(p.q);
  const double q_xi = link_forward(p.link, p.xi);
  detail::UnitUniform rng(seed);
  std::vector<double> out(n);
  for (auto& v : out)
    v = detail::quantile_at(p.kernel, p.link, rng(), a, 0.0, q_xi, p.delta);
  return out;
}

}  // namespace pgjsb
