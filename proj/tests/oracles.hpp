// Test-only oracles, independent of the library implementation paths they
// check: adaptive quadrature, Richardson-extrapolated derivatives, and a
// small deterministic RNG for property-test generators.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

// Adaptive Simpson with absolute tolerance; recursion depth handles steep
// integrable endpoint behaviour.
inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol, int depth = 60) {
  struct Rec {
    const std::function<double(double)>& f;
    double operator()(double a, double m, double b, double fa, double fm,
                      double fb, double whole, double tol, int depth) const {
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
      return (*this)(a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
             (*this)(m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
  } rec{f};
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return rec(a, m, b, fa, fm, fb, whole, tol, depth);
}

// Richardson-extrapolated central-difference gradient (two step sizes,
// fourth-order combination).
inline std::vector<double> richardson_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x, double h0 = 1e-3) {
  std::vector<double> g(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double h = h0 * std::max(1.0, std::fabs(x[j]));
    auto central = [&](double step) {
      std::vector<double> xp = x, xm = x;
      xp[j] += step;
      xm[j] -= step;
      return (f(xp) - f(xm)) / (2.0 * step);
    };
    const double d1 = central(h), d2 = central(0.5 * h);
    g[j] = (4.0 * d2 - d1) / 3.0;
  }
  return g;
}

// Richardson-extrapolated Hessian entry
inline double richardson_hessian_entry(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x, std::size_t i, std::size_t j, double h0 = 1e-3) {
  auto mixed = [&](double hi, double hj) {
    auto at = [&](double di, double dj) {
      std::vector<double> xx = x;
      xx[i] += di;
      xx[j] += dj;
      return f(xx);
    };
    if (i == j) {
      return (at(hi, 0.0) - 2.0 * at(0.0, 0.0) + at(-hi, 0.0)) / (hi * hi);
    }
    return (at(hi, hj) - at(hi, -hj) - at(-hi, hj) + at(-hi, -hj)) /
           (4.0 * hi * hj);
  };
  const double hi = h0 * std::max(1.0, std::fabs(x[i]));
  const double hj = h0 * std::max(1.0, std::fabs(x[j]));
  const double d1 = mixed(hi, hj), d2 = mixed(0.5 * hi, 0.5 * hj);
  return (4.0 * d2 - d1) / 3.0;
}

// Normalization check for a density on (0,1): adaptive quadrature over the
// representable bulk, split at the distribution's own quantiles so steep
// integrable edges are bracketed tightly, plus the closed-form tail masses
// below/above the cut points. Heavy-tailed cells can hold real probability
// mass at y below DBL_MIN, where no y-space quadrature can reach; the cdf
// supplies that mass exactly (same role as the tail correction used for
// the kernel normalization checks).
inline double density_total_mass(const std::function<double(double)>& pdf,
                                 const std::function<double(double)>& cdf,
                                 const std::function<double(double)>& quantile,
                                 double y_lo = 1e-12, double y_hi = 1.0 - 1e-12,
                                 double tol = 1e-8) {
  std::vector<double> cuts{y_lo, y_hi};
  for (double p : {0.001, 0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99, 0.999}) {
    const double yq = quantile(p);
    if (yq > y_lo && yq < y_hi) cuts.push_back(yq);
  }
  std::sort(cuts.begin(), cuts.end());
  double total = cdf(y_lo) + (1.0 - cdf(y_hi));
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] < 1e-300) continue;
    total += adaptive_simpson(pdf, cuts[i], cuts[i + 1], tol / cuts.size());
  }
  return total;
}

// splitmix64 generator for property-test draws
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

}  // namespace oracle
