#pragma once

// Intensity functions for inhomogeneous Poisson processes on [0,inf):
// lambda, its cumulative Lambda (Lambda(0)=0, nondecreasing, -> inf) and the
// inverse of Lambda. Registered families carry closed forms; anything else
// falls back to adaptive quadrature and bisection (tolerance 1e-12).

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fpt/distribution.hpp"  // kInf
#include "fpt/errors.hpp"
#include "fpt/random.hpp"

namespace fpt {

enum class IntensityFamily { Custom, Constant, Linear, ExpGrowth, SuperExp };

class IntensityFunction {
 public:
  std::function<double(double)> intensity;
  std::function<double(double)> cumulative;
  std::function<double(double)> inverse_cumulative;
  IntensityFamily family = IntensityFamily::Custom;
  double param = 0.0;  // c for const/lin, C for expgrow
  std::string spec;
};

namespace detail {

inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double fa, double fm, double fb,
                               double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6 * (fa + 4 * flm + fm);
  double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15 * tol)
    return left + right + (left + right - whole) / 15;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12) {
  if (b <= a) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Increasing function inversion by doubling bracket plus bisection.
inline double invert_increasing(const std::function<double(double)>& g,
                                double target, double tol = 1e-12) {
  double hi = 1.0;
  int guard = 0;
  while (g(hi) < target) {
    hi *= 2;
    if (++guard > 1200) return kInf;
  }
  double lo = 0.0;
  while (hi - lo > tol * std::max(1.0, hi)) {
    double mid = 0.5 * (lo + hi);
    (g(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

inline IntensityFunction make_const_intensity(double c) {
  if (!(c > 0)) throw InvalidParameter("const intensity: c must be positive");
  IntensityFunction f;
  f.intensity = [c](double) { return c; };
  f.cumulative = [c](double x) { return c * x; };
  f.inverse_cumulative = [c](double s) { return s / c; };
  f.family = IntensityFamily::Constant;
  f.param = c;
  f.spec = "const(" + std::to_string(c) + ")";
  return f;
}

// lambda(t) = c t, so Lambda(x) = c x^2 / 2.
inline IntensityFunction make_linear_intensity(double c) {
  if (!(c > 0)) throw InvalidParameter("lin intensity: c must be positive");
  IntensityFunction f;
  f.intensity = [c](double t) { return c * t; };
  f.cumulative = [c](double x) { return 0.5 * c * x * x; };
  f.inverse_cumulative = [c](double s) { return std::sqrt(2 * s / c); };
  f.family = IntensityFamily::Linear;
  f.param = c;
  f.spec = "lin(" + std::to_string(c) + ")";
  return f;
}

// lambda(t) = ln(C) C^t, so Lambda(x) = C^x - 1.
inline IntensityFunction make_expgrow_intensity(double C) {
  if (!(C > 1)) throw InvalidParameter("expgrow: C must exceed 1");
  const double logC = std::log(C);
  IntensityFunction f;
  f.intensity = [C, logC](double t) { return logC * std::pow(C, t); };
  f.cumulative = [logC](double x) { return std::expm1(logC * x); };
  f.inverse_cumulative = [logC](double s) { return std::log1p(s) / logC; };
  f.family = IntensityFamily::ExpGrowth;
  f.param = C;
  f.spec = "expgrow(" + std::to_string(C) + ")";
  return f;
}

// lambda(t) = 2 t e^{t^2}, so Lambda(x) = e^{x^2} - 1; grows faster than any C^x.
inline IntensityFunction make_supexp_intensity() {
  IntensityFunction f;
  f.intensity = [](double t) { return 2 * t * std::exp(t * t); };
  f.cumulative = [](double x) { return std::expm1(x * x); };
  f.inverse_cumulative = [](double s) { return std::sqrt(std::log1p(s)); };
  f.family = IntensityFamily::SuperExp;
  f.spec = "supexp()";
  return f;
}

inline IntensityFunction make_custom_intensity(
    std::function<double(double)> lambda,
    std::function<double(double)> cumulative = nullptr,
    std::string name = "custom") {
  IntensityFunction f;
  f.intensity = std::move(lambda);
  if (cumulative) {
    f.cumulative = std::move(cumulative);
  } else {
    auto lam = f.intensity;
    f.cumulative = [lam](double x) { return detail::integrate(lam, 0.0, x); };
  }
  auto cum = f.cumulative;
  f.inverse_cumulative = [cum](double s) {
    return detail::invert_increasing(cum, s);
  };
  f.family = IntensityFamily::Custom;
  f.spec = std::move(name);
  return f;
}

// Arrival positions P(1) < P(2) < ... by inversion of a running sum of unit
// exponentials; deterministic given the exponential inputs.
inline std::vector<double> arrivals_from_exponentials(
    const IntensityFunction& lam, std::span<const double> exponentials,
    double weight_budget = kInf) {
  std::vector<double> out;
  double s = 0.0;
  for (double e : exponentials) {
    s += e;
    double t = lam.inverse_cumulative(s);
    if (t > weight_budget) break;
    out.push_back(t);
  }
  return out;
}

inline std::vector<double> sample_arrivals(const IntensityFunction& lam,
                                           const RandomStream& stream,
                                           std::size_t count_budget,
                                           double weight_budget) {
  if (count_budget == 0 || !(weight_budget > 0))
    throw InvalidParameter("sample_arrivals: budgets must be positive");
  std::vector<double> out;
  double s = 0.0;
  for (std::uint64_t j = 1; out.size() < count_budget; ++j) {
    s += stream.exponential_at(j);
    double t = lam.inverse_cumulative(s);
    if (t > weight_budget) break;
    out.push_back(t);
  }
  return out;
}

}  // namespace fpt
