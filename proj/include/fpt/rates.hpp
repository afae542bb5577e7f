#pragma once

// Growth-rate numerics for first passage on PWIT-type trees. The expected
// exponential sum over one node's arrivals reduces to the Laplace transform
// of the intensity, L(D) = int_0^inf e^{-Dt} lambda(t) dt; the rate function
// is mu(a) = inf_{D} e^{Da} L(D) (convex in D on the finite ray), and the
// speed is alpha = inf{a : mu(a) > 1}.

#include <cmath>
#include <functional>
#include <vector>

#include "fpt/errors.hpp"
#include "fpt/intensity.hpp"

namespace fpt {

struct MuResult {
  double value = kInf;
  double d_star = 0.0;
};

struct RateReport {
  std::vector<double> a_grid;
  std::vector<double> mu_values;
  std::vector<double> minimizer_d;
  double alpha = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

inline double laplace_functional(const IntensityFunction& lam, double D) {
  if (!(D > 0)) throw InvalidParameter("laplace: D must be positive");
  switch (lam.family) {
    case IntensityFamily::Constant:
      return lam.param / D;
    case IntensityFamily::Linear:
      return lam.param / (D * D);
    case IntensityFamily::ExpGrowth: {
      double logC = std::log(lam.param);
      return D > logC ? logC / (D - logC) : kInf;
    }
    case IntensityFamily::SuperExp:
      return kInf;  // t^2 beats Dt for every D
    case IntensityFamily::Custom: {
      auto f = [&](double t) { return std::exp(-D * t) * lam.intensity(t); };
      double head = detail::integrate(f, 0.0, 1e-6);
      if (!std::isfinite(head))
        throw InvalidParameter("laplace: intensity not integrable near 0");
      // Extend in doubling windows until the contribution is negligible.
      double total = head, hi = 1e-6;
      for (int k = 0; k < 80; ++k) {
        double next = hi * 2 + 1.0;
        double piece = detail::integrate(f, hi, next);
        if (!std::isfinite(piece)) return kInf;
        total += piece;
        hi = next;
        if (piece < 1e-12 * std::max(total, 1e-300) && hi > 8.0 / D) break;
      }
      return total;
    }
  }
  return kInf;
}

namespace detail {

// Infimum of the feasible D-ray (L finite for D beyond it).
inline double laplace_feasible_min(const IntensityFunction& lam) {
  switch (lam.family) {
    case IntensityFamily::Constant:
    case IntensityFamily::Linear:
      return 0.0;
    case IntensityFamily::ExpGrowth:
      return std::log(lam.param);
    case IntensityFamily::SuperExp:
      return kInf;
    case IntensityFamily::Custom: {
      if (std::isfinite(laplace_functional(lam, 1e-9))) return 0.0;
      double lo = 1e-9, hi = 1.0;
      int guard = 0;
      while (!std::isfinite(laplace_functional(lam, hi))) {
        lo = hi;
        hi *= 2;
        if (++guard > 200) return kInf;
      }
      while (hi - lo > 1e-9 * hi) {
        double mid = 0.5 * (lo + hi);
        (std::isfinite(laplace_functional(lam, mid)) ? hi : lo) = mid;
      }
      return hi;
    }
  }
  return kInf;
}

}  // namespace detail

// mu(a) with its minimizing D. Golden-section on the convex
// g(D) = D a + ln L(D) over the feasible ray.
inline MuResult mu_detail(const IntensityFunction& lam, double a) {
  if (!(a > 0)) throw InvalidParameter("mu: a must be positive");
  double dmin = detail::laplace_feasible_min(lam);
  if (dmin == kInf)
    throw RateUndefined("mu: Laplace transform of the intensity diverges for all D");
  auto g = [&](double D) {
    double L = laplace_functional(lam, D);
    return L == kInf ? kInf : D * a + std::log(L);
  };

  // Bracket a minimum: walk right from just above dmin while g decreases.
  const double d_cap = 1e12;
  double step = std::max(1.0, dmin);
  double d0 = dmin + step * 1e-6 + 1e-12;
  while (g(d0) == kInf) {  // guard quadrature wobble at the boundary
    d0 = dmin + (d0 - dmin) * 2;
    if (d0 > d_cap) throw RateUndefined("mu: no finite Laplace value found");
  }
  double d1 = d0 + step;
  while (d1 < d_cap && g(d1) < g(d0)) {
    double w = d1 - d0;
    d0 = d1;
    d1 += 2 * w;
  }
  double lo = std::max(dmin + (d0 - dmin) * 1e-3, d0 - 2 * (d1 - d0));
  lo = std::max(lo, dmin + 1e-15);
  if (d1 >= d_cap) return {std::exp(g(d_cap)), d_cap};

  // Golden section on [lo, d1].
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = d1 - phi * (d1 - lo);
  double x2 = lo + phi * (d1 - lo);
  double f1 = g(x1), f2 = g(x2);
  while (d1 - lo > 1e-10 * std::max(1.0, d1) + 1e-13) {
    if (f1 < f2) {
      d1 = x2;
      x2 = x1;
      f2 = f1;
      x1 = d1 - phi * (d1 - lo);
      f1 = g(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (d1 - lo);
      f2 = g(x2);
    }
  }
  double d_star = 0.5 * (lo + d1);
  return {std::exp(g(d_star)), d_star};
}

inline double mu(const IntensityFunction& lam, double a) {
  return mu_detail(lam, a).value;
}

// alpha = inf{a : mu(a) > 1} by bisection with mu(a_lo) <= 1 < mu(a_hi).
inline double speed_alpha(const IntensityFunction& lam, double a_cap = 1e3) {
  double a_hi = 1.0;
  while (mu(lam, a_hi) <= 1.0) {
    a_hi *= 2;
    if (a_hi > a_cap)
      throw CapExceeded("speed_alpha: mu(a) <= 1 up to the a-cap");
  }
  double a_lo = a_hi / 2;
  while (mu(lam, a_lo) > 1.0) {
    a_lo /= 2;
    if (a_lo < 1e-14) return 0.0;
  }
  while (a_hi - a_lo > 1e-9) {
    double mid = 0.5 * (a_lo + a_hi);
    (mu(lam, mid) <= 1.0 ? a_lo : a_hi) = mid;
  }
  return 0.5 * (a_lo + a_hi);
}

// Pr[m_n <= a n] <= mu(a)^n.
inline double tail_bound(const IntensityFunction& lam, double a, int n) {
  double m = mu(lam, a);
  if (m == kInf) throw RateUndefined("tail_bound: mu(a) is infinite");
  return std::pow(m, n);
}

inline RateReport rate_report(const IntensityFunction& lam,
                              const std::vector<double>& a_grid) {
  RateReport r;
  r.a_grid = a_grid;
  for (double a : a_grid) {
    MuResult m = mu_detail(lam, a);
    r.mu_values.push_back(m.value);
    r.minimizer_d.push_back(m.d_star);
  }
  r.alpha = speed_alpha(lam);
  r.bracket_lo = std::max(r.alpha - 1e-7, 0.0);
  r.bracket_hi = r.alpha + 1e-7;
  return r;
}

}  // namespace fpt
