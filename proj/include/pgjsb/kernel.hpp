// Symmetric kernel families G used by the PGJSB construction: standard
// normal, logistic and Cauchy. Each exposes the density, the cdf, the
// quantile, and log-space forms that stay finite deep in the tails.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "pgjsb/math.hpp"

namespace pgjsb {

enum class Kernel { normal, logistic, cauchy };

inline double g_pdf(Kernel k, double u) {
  switch (k) {
    case Kernel::normal:
      return norm_pdf(u);
    case Kernel::logistic: {
      const double e = std::exp(-std::fabs(u));
      const double den = 1.0 + e;
      return e / (den * den);
    }
    case Kernel::cauchy:
      return 1.0 / (pi * (1.0 + u * u));
  }
  return 0.0;
}

inline double g_log_pdf(Kernel k, double u) {
  switch (k) {
    case Kernel::normal:
      return norm_log_pdf(u);
    case Kernel::logistic: {
      const double a = std::fabs(u);
      return -a - 2.0 * log1pexp(-a);
    }
    case Kernel::cauchy: {
      const double a = std::fabs(u);
      // log1p(u^2) overflows the multiply first for |u| > ~1e154
      if (a > 1e140) return -std::log(pi) - 2.0 * std::log(a);
      return -std::log(pi) - std::log1p(u * u);
    }
  }
  return -std::numeric_limits<double>::infinity();
}

inline double g_cdf(Kernel k, double u) {
  switch (k) {
    case Kernel::normal:
      return norm_cdf(u);
    case Kernel::logistic:
      return 1.0 / (1.0 + std::exp(-u));
    case Kernel::cauchy:
      // atan(1/|u|) keeps full relative accuracy in the tails
      if (u == 0.0) return 0.5;
      if (u < 0.0) return std::atan(-1.0 / u) / pi;
      return 1.0 - std::atan(1.0 / u) / pi;
  }
  return 0.0;
}

inline double g_log_cdf(Kernel k, double u) {
  switch (k) {
    case Kernel::normal:
      return norm_log_cdf(u);
    case Kernel::logistic:
      return -log1pexp(-u);
    case Kernel::cauchy:
      if (u < 0.0) return std::log(std::atan(-1.0 / u)) - std::log(pi);
      return std::log(g_cdf(Kernel::cauchy, u));
  }
  return -std::numeric_limits<double>::infinity();
}

inline double g_quantile(Kernel k, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("g_quantile: p must be in (0,1)");
  switch (k) {
    case Kernel::normal:
      return norm_quantile(p);
    case Kernel::logistic:
      return std::log(p) - std::log1p(-p);
    case Kernel::cauchy:
      // tan(pi(p-1/2)) rewritten as +-cot(pi*min(p,1-p)) for tail accuracy
      if (p == 0.5) return 0.0;
      if (p < 0.5) return -1.0 / std::tan(pi * p);
      return 1.0 / std::tan(pi * (1.0 - p));
  }
  return 0.0;
}

inline const char* to_string(Kernel k) {
  switch (k) {
    case Kernel::normal: return "normal";
    case Kernel::logistic: return "logistic";
    case Kernel::cauchy: return "cauchy";
  }
  return "?";
}

inline Kernel kernel_from_string(const std::string& s) {
  if (s == "normal") return Kernel::normal;
  if (s == "logistic") return Kernel::logistic;
  if (s == "cauchy") return Kernel::cauchy;
  throw std::invalid_argument("unknown kernel: " + s);
}

}  // namespace pgjsb
