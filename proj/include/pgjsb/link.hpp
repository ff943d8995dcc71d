// Link transforms Q: (0,1) -> R with inverses and derivatives. The same Q
// appears inside the density (through |dQ/dy|) and as the regression link
// for the quantile parameter.
//
// Conventions: loglog is Q(y) = -log(-log y) (Gumbel quantile), cloglog is
// Q(y) = log(-log(1-y)) (reverse-Gumbel quantile), matching standard GLM
// usage.
#pragma once

#include <cfloat>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pgjsb/kernel.hpp"
#include "pgjsb/math.hpp"

namespace pgjsb {

enum class Link { logit, probit, cauchit, loglog, cloglog };

namespace detail {
inline void check_unit_open(double y, const char* who) {
  if (!(y > 0.0 && y < 1.0))
    throw std::domain_error(std::string(who) + ": y must be in (0,1)");
}
// Inverse values saturate to the open interval so downstream code never
// sees an exact 0 or 1.
inline double clamp_unit_open(double y) {
  if (y < DBL_MIN) return DBL_MIN;
  if (y > 1.0 - DBL_EPSILON / 2.0) return 1.0 - DBL_EPSILON / 2.0;
  return y;
}
}  // namespace detail

inline double link_forward(Link l, double y) {
  detail::check_unit_open(y, "link_forward");
  switch (l) {
    case Link::logit: return std::log(y) - std::log1p(-y);
    case Link::probit: return norm_quantile(y);
    case Link::cauchit: return g_quantile(Kernel::cauchy, y);
    case Link::loglog: return -std::log(-std::log(y));
    case Link::cloglog: return std::log(-std::log1p(-y));
  }
  return 0.0;
}

inline double link_inverse(Link l, double x) {
  double y = 0.0;
  switch (l) {
    case Link::logit: y = 1.0 / (1.0 + std::exp(-x)); break;
    case Link::probit: y = norm_cdf(x); break;
    case Link::cauchit: y = g_cdf(Kernel::cauchy, x); break;
    case Link::loglog: y = std::exp(-std::exp(-x)); break;
    case Link::cloglog: y = -std::expm1(-std::exp(x)); break;
  }
  return detail::clamp_unit_open(y);
}

inline double link_deriv(Link l, double y) {
  detail::check_unit_open(y, "link_deriv");
  switch (l) {
    case Link::logit: return 1.0 / (y * (1.0 - y));
    case Link::probit: return 1.0 / norm_pdf(norm_quantile(y));
    case Link::cauchit: {
      const double u = g_quantile(Kernel::cauchy, y);
      return pi * (1.0 + u * u);
    }
    case Link::loglog: return -1.0 / (y * std::log(y));
    case Link::cloglog: return -1.0 / ((1.0 - y) * std::log1p(-y));
  }
  return 0.0;
}

inline double link_log_deriv(Link l, double y) {
  detail::check_unit_open(y, "link_log_deriv");
  switch (l) {
    case Link::logit: return -std::log(y) - std::log1p(-y);
    case Link::probit: {
      const double u = norm_quantile(y);
      return 0.5 * u * u + log_sqrt_2pi;
    }
    case Link::cauchit: {
      const double u = g_quantile(Kernel::cauchy, y);
      const double a = std::fabs(u);
      if (a > 1e140) return std::log(pi) + 2.0 * std::log(a);
      return std::log(pi) + std::log1p(u * u);
    }
    case Link::loglog: return -std::log(y) - std::log(-std::log(y));
    case Link::cloglog: return -std::log1p(-y) - std::log(-std::log1p(-y));
  }
  return 0.0;
}

inline const char* to_string(Link l) {
  switch (l) {
    case Link::logit: return "logit";
    case Link::probit: return "probit";
    case Link::cauchit: return "cauchit";
    case Link::loglog: return "loglog";
    case Link::cloglog: return "cloglog";
  }
  return "?";
}

inline Link link_from_string(const std::string& s) {
  if (s == "logit") return Link::logit;
  if (s == "probit") return Link::probit;
  if (s == "cauchit") return Link::cauchit;
  if (s == "loglog") return Link::loglog;
  if (s == "cloglog") return Link::cloglog;
  throw std::invalid_argument("unknown link: " + s);
}

}  // namespace pgjsb
