#pragma once

// Static criterion checkers: summability reports, the linear-growth
// dichotomy for intensities, controlled-near-0 diagnostics with the envelope
// construction, the counterexample ratio-condition scanner, and deterministic
// lemma utilities. Convergence verdicts are finite-N hints, never claims
// about limits.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "fpt/branching.hpp"
#include "fpt/distribution.hpp"
#include "fpt/errors.hpp"
#include "fpt/intensity.hpp"
#include "fpt/stick.hpp"

namespace fpt {

enum class VerdictHint {
  ConsistentWithConvergence,
  ConsistentWithDivergence,
  ContainsInfiniteTerm,
  Indeterminate
};

inline const char* to_string(VerdictHint v) {
  switch (v) {
    case VerdictHint::ConsistentWithConvergence: return "consistent-with-convergence";
    case VerdictHint::ConsistentWithDivergence: return "consistent-with-divergence";
    case VerdictHint::ContainsInfiniteTerm: return "contains-infinite-term";
    case VerdictHint::Indeterminate: return "indeterminate";
  }
  return "?";
}

struct PartialSumReport {
  std::vector<double> terms;         // 0-indexed storage; terms[i] is the i-th term
  std::vector<double> partial_sums;  // running sums
  double tail_exponent_fit = 0.0;    // log-log slope over the last decade
  double increment_ratio = 0.0;      // (S(N)-S(N/2)) / (S(N/2)-S(N/4))
  VerdictHint verdict_hint = VerdictHint::Indeterminate;
};

inline PartialSumReport make_partial_sum_report(std::vector<double> terms) {
  PartialSumReport r;
  r.terms = std::move(terms);
  r.partial_sums.reserve(r.terms.size());
  double s = 0.0;
  bool has_inf = false;
  for (double t : r.terms) {
    if (t == kInf) has_inf = true;
    s += t;
    r.partial_sums.push_back(s);
  }
  if (has_inf) {
    r.verdict_hint = VerdictHint::ContainsInfiniteTerm;
    return r;
  }
  const std::size_t n = r.terms.size();
  if (n < 8) return r;

  // Least-squares slope of log(term) against log(index) over the last decade.
  std::size_t lo = std::max<std::size_t>(1, n / 10);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  for (std::size_t i = lo; i < n; ++i) {
    if (!(r.terms[i] > 0)) continue;
    double x = std::log(static_cast<double>(i + 1));
    double y = std::log(r.terms[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++cnt;
  }
  if (cnt >= 4) {
    double denom = cnt * sxx - sx * sx;
    r.tail_exponent_fit = denom != 0 ? (cnt * sxy - sx * sy) / denom : 0.0;
  }

  auto s_at = [&](std::size_t i) { return r.partial_sums[std::min(i, n - 1)]; };
  double inc1 = s_at(n - 1) - s_at(n / 2);
  double inc2 = s_at(n / 2) - s_at(n / 4);
  r.increment_ratio = inc2 > 0 ? inc1 / inc2 : 0.0;

  if (cnt >= 4) {
    bool diverging = r.increment_ratio >= 0.85 || r.tail_exponent_fit > -1.02;
    bool converging = r.increment_ratio <= 0.70 && r.tail_exponent_fit < -1.05;
    if (diverging)
      r.verdict_hint = VerdictHint::ConsistentWithDivergence;
    else if (converging)
      r.verdict_hint = VerdictHint::ConsistentWithConvergence;
  }
  return r;
}

// Terms a(n) = G^{-1}(1/f(n)) for n = 0..N.
inline PartialSumReport g_small_partial_sums(const WeightDistribution& g,
                                             const BranchingFunction& f, int n_max) {
  if (n_max < 1) throw InvalidParameter("g_small: N must be >= 1");
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n)
    terms.push_back(g.quantile(1.0 / static_cast<double>(f(n))));
  return make_partial_sum_report(std::move(terms));
}

// Terms G^{-1}((1+eps)/f(n)); arguments at or above 1 surface quantile(1).
inline PartialSumReport onepluseps_sums(const WeightDistribution& g,
                                        const BranchingFunction& f, double eps,
                                        int n_max) {
  if (!(eps > 0)) throw InvalidParameter("onepluseps: eps must be positive");
  if (n_max < 1) throw InvalidParameter("onepluseps: N must be >= 1");
  std::vector<double> terms;
  for (int n = 0; n <= n_max; ++n) {
    double y = (1.0 + eps) / static_cast<double>(f(n));
    terms.push_back(g.quantile(std::min(y, 1.0)));
  }
  return make_partial_sum_report(std::move(terms));
}

// ---------------------------------------------------------------------------

enum class GrowthKind { ZeroNearOrigin, ExponentiallyDominated, SuperExponential };

struct GrowthDichotomy {
  GrowthKind kind = GrowthKind::ExponentiallyDominated;
  double value = 0.0;  // t / C witness / x witness
  bool exact = true;   // closed-form family; false = flagged heuristic
};

inline GrowthDichotomy growth_dichotomy(const IntensityFunction& lam,
                                        double x_max, int grid) {
  if (!(x_max > 1) || grid < 8)
    throw InvalidParameter("dichotomy: need x_max > 1 and a usable grid");
  // Leading zero stretch of Lambda.
  double zero_until = 0.0;
  for (int i = 1; i <= grid; ++i) {
    double x = x_max * i / grid;
    if (lam.cumulative(x) == 0.0)
      zero_until = x;
    else
      break;
  }
  if (zero_until > 0.0) {
    double lo = zero_until, hi = std::min(x_max, zero_until * 2 + 1e-9);
    for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
      double mid = 0.5 * (lo + hi);
      (lam.cumulative(mid) == 0.0 ? lo : hi) = mid;
    }
    return {GrowthKind::ZeroNearOrigin, lo, true};
  }

  switch (lam.family) {
    case IntensityFamily::Constant:
      // sup_x (cx)^{1/x} = e^{c/e}, attained at x = e/c.
      return {GrowthKind::ExponentiallyDominated,
              std::exp(lam.param / std::exp(1.0)) * (1 + 1e-12), true};
    case IntensityFamily::Linear:
      // sup_x (c x^2 / 2)^{1/x} = e^{sqrt(2c)/e}.
      return {GrowthKind::ExponentiallyDominated,
              std::exp(std::sqrt(2 * lam.param) / std::exp(1.0)) * (1 + 1e-12),
              true};
    case IntensityFamily::ExpGrowth:
      return {GrowthKind::ExponentiallyDominated, lam.param, true};
    case IntensityFamily::SuperExp:
      return {GrowthKind::SuperExponential, x_max, true};
    case IntensityFamily::Custom:
      break;
  }

  // Heuristic fit of s(x) = ln Lambda(x) / x on the grid.
  std::vector<double> xs, ss;
  for (int i = 1; i <= grid; ++i) {
    double x = x_max * i / grid;
    double v = lam.cumulative(x);
    if (v > 0) {
      xs.push_back(x);
      ss.push_back(std::log(v) / x);
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < ss.size(); ++i)
    if (ss[i] > ss[best]) best = i;
  bool at_edge = best + 1 >= ss.size();
  bool rising = ss.size() >= 4 && ss[ss.size() - 1] > ss[3 * ss.size() / 4 - 1];
  if (at_edge && rising)
    return {GrowthKind::SuperExponential, xs[best], false};
  return {GrowthKind::ExponentiallyDominated, std::exp(ss[best]) * (1 + 1e-9), false};
}

// ---------------------------------------------------------------------------

struct ControlledReport {
  double c = 0.0;
  std::vector<std::pair<double, double>> ratio_grid;  // (x, G(cx)/G(x))
  double liminf_est = 0.0;
  double limsup_est = 0.0;
};

inline ControlledReport check_controlled(const WeightDistribution& g, double c,
                                         double x_lo, double x_hi, int grid) {
  if (!(c > 1)) throw InvalidParameter("controlled: c must exceed 1");
  if (!(0 < x_lo && x_lo < x_hi) || grid < 2)
    throw InvalidParameter("controlled: need 0 < x_lo < x_hi and grid >= 2");
  ControlledReport r;
  r.c = c;
  double step = std::pow(x_hi / x_lo, 1.0 / (grid - 1));
  bool any = false;
  for (int i = 0; i < grid; ++i) {
    double x = x_lo * std::pow(step, i);
    double gx = g.cdf(x);
    if (gx <= 0) continue;
    any = true;
    r.ratio_grid.emplace_back(x, g.cdf(c * x) / gx);
  }
  if (!any) throw UninformativeGrid("controlled: G vanishes on the whole grid");
  r.liminf_est = kInf;
  r.limsup_est = 0.0;
  for (const auto& [x, ratio] : r.ratio_grid) {
    if (x > 10 * x_lo) break;  // estimates over the lowest decade
    r.liminf_est = std::min(r.liminf_est, ratio);
    r.limsup_est = std::max(r.limsup_est, ratio);
  }
  return r;
}

// Piecewise power envelope h controlling the shape of a controlled G around
// any zoom point, with the induced intensity lambda = 2 h' (Lambda = 2h) and
// a constant C with 2 h(x) <= C^x on the probe grid.
struct ControlledEnvelope {
  double k = 0.0;
  double c = 0.0;
  double exponent_below = 0.0;  // log(1 + 1/K) / log c, for z <= 1
  double exponent_above = 0.0;  // log K / log c, for z > 1
  IntensityFunction lam;
  double c_bound = 0.0;

  [[nodiscard]] double h(double z) const {
    if (z <= 0) return 0.0;
    return z <= 1 ? k * std::pow(z, exponent_below) : k * std::pow(z, exponent_above);
  }
};

inline ControlledEnvelope controlled_to_h(double c, double k) {
  if (!(c > 1) || !(k >= 2))
    throw InvalidParameter("controlled_to_h: need c > 1 and K >= 2");
  ControlledEnvelope env;
  env.c = c;
  env.k = k;
  env.exponent_below = std::log1p(1.0 / k) / std::log(c);
  env.exponent_above = std::log(k) / std::log(c);
  const double p = env.exponent_below, q = env.exponent_above, kk = k;
  IntensityFunction lam;
  lam.intensity = [p, q, kk](double t) {
    if (t <= 0) return 0.0;
    return t <= 1 ? 2 * kk * p * std::pow(t, p - 1) : 2 * kk * q * std::pow(t, q - 1);
  };
  lam.cumulative = [p, q, kk](double x) {
    if (x <= 0) return 0.0;
    return x <= 1 ? 2 * kk * std::pow(x, p) : 2 * kk * std::pow(x, q);
  };
  lam.inverse_cumulative = [p, q, kk](double s) {
    if (s <= 0) return 0.0;
    return s <= 2 * kk ? std::pow(s / (2 * kk), 1.0 / p)
                       : std::pow(s / (2 * kk), 1.0 / q);
  };
  lam.family = IntensityFamily::Custom;
  lam.spec = "envelope(c=" + std::to_string(c) + ",K=" + std::to_string(k) + ")";
  env.lam = std::move(lam);

  double c_bound = 1.0;
  for (int i = 1; i <= 4096; ++i) {
    double x = 0.01 + (50.0 - 0.01) * i / 4096.0;
    c_bound = std::max(c_bound, std::pow(env.lam.cumulative(x), 1.0 / x));
  }
  env.c_bound = c_bound * (1 + 1e-9);
  return env;
}

// ---------------------------------------------------------------------------

enum class CondKind { Cond1Witness, Cond2Witness, NoWitness };

struct CondScanResult {
  CondKind kind = CondKind::NoWitness;
  std::vector<std::size_t> witness;  // indices into xs
  double limsup_lower = 0.0, limsup_upper = 0.0;  // tail extremes of G(x)/G(x/c)
  double liminf_lower = 0.0, liminf_upper = 0.0;  // tail extremes of G(cx)/G(x)
};

// Finite-sample scan of the two ratio conditions along xs (decreasing to 0):
// an upper-ratio blow-up with bounded lower ratios, or lower ratios pinned at
// 1 with upper ratios bounded away from 1.
inline CondScanResult cond_scanner(const WeightDistribution& g, double c,
                                   const std::vector<double>& xs) {
  if (!(c > 1)) throw InvalidParameter("cond_scanner: c must exceed 1");
  if (xs.size() < 8) throw InvalidParameter("cond_scanner: need at least 8 points");
  std::vector<double> lower, upper;  // R1(i), R2(i)
  for (double x : xs) {
    double gx = g.cdf(x);
    double gdn = g.cdf(x / c);
    if (!(gx > 0) || !(gdn > 0)) break;  // ratios below are uninformative
    lower.push_back(gx / gdn);
    upper.push_back(g.cdf(c * x) / gx);
  }
  if (lower.size() < 8)
    throw UninformativeGrid("cond_scanner: G vanishes along the sequence");
  CondScanResult r;
  std::size_t tail = lower.size() / 2;
  double lo1 = kInf, hi1 = 0, lo2 = kInf, hi2 = 0;
  for (std::size_t i = tail; i < lower.size(); ++i) {
    lo1 = std::min(lo1, lower[i]);
    hi1 = std::max(hi1, lower[i]);
    lo2 = std::min(lo2, upper[i]);
    hi2 = std::max(hi2, upper[i]);
  }
  r.limsup_lower = hi1;
  r.liminf_lower = lo1;
  r.limsup_upper = hi2;
  r.liminf_upper = lo2;

  double first_half_max2 = 0;
  for (std::size_t i = 0; i < tail; ++i)
    first_half_max2 = std::max(first_half_max2, upper[i]);

  bool upper_blows_up = hi2 >= 1e3 && hi2 >= 4 * first_half_max2;
  bool lower_bounded = hi1 <= hi2 / 16;
  if (upper_blows_up && lower_bounded) {
    r.kind = CondKind::Cond1Witness;
    for (std::size_t i = tail; i < upper.size(); ++i)
      if (upper[i] >= 1e3) r.witness.push_back(i);
    return r;
  }
  bool lower_at_one = lo1 <= 1.05;
  bool upper_separated = lo2 >= lo1 + 0.25;
  if (lower_at_one && upper_separated) {
    r.kind = CondKind::Cond2Witness;
    for (std::size_t i = tail; i < lower.size(); ++i)
      if (lower[i] <= 1.05) r.witness.push_back(i);
    return r;
  }
  return r;
}

// ---------------------------------------------------------------------------

// D-set of Lemma-style dominance: indices n where ell(2^n) strictly exceeds
// ell(2^m) 2^{-(n-m)/2} for every 1 <= m < n (n = 1 vacuously qualifies).
inline std::vector<int> dominating_set_D(const LengthSequence& ell, int n_max) {
  if (n_max < 1) throw InvalidParameter("dominating_set: N must be >= 1");
  std::vector<int> out;
  for (int n = 1; n <= n_max; ++n) {
    bool dominates = true;
    double ln = ell(std::exp2(n));
    for (int m = 1; m < n; ++m) {
      double rhs = ell(std::exp2(m)) /
                   std::exp2(0.5 * static_cast<double>(n - m));
      if (!(ln > rhs)) {
        dominates = false;
        break;
      }
    }
    if (dominates) out.push_back(n);
  }
  return out;
}

// Least m >= 1 with ell(2^n) <= ell(2^m) 2^{-(n-m)/2}; a projection onto the
// D-set (pi(n) = n exactly when n is in it).
inline int pi_projection(const LengthSequence& ell, int n) {
  double ln = ell(std::exp2(n));
  for (int m = 1; m <= n; ++m) {
    double rhs = ell(std::exp2(m)) /
                 std::exp2(0.5 * static_cast<double>(n - m));
    if (ln <= rhs) return m;
  }
  return n;
}

struct StickSums {
  PartialSumReport dyadic;    // sum of ell(2^n)
  PartialSumReport harmonic;  // sum of ell(n)/n
  bool consistent = true;     // verdict hints do not contradict each other
};

inline StickSums stick_summability(const LengthSequence& ell, int n_max) {
  if (n_max < 2) throw InvalidParameter("stick_summability: N must be >= 2");
  std::vector<double> dyadic, harmonic;
  // Indices 2^n leave double range past n ~ 1000; cap the dyadic report there.
  for (int n = 1; n <= std::min(n_max, 1000); ++n)
    dyadic.push_back(ell(std::exp2(n)));
  for (int n = 1; n <= n_max; ++n)
    harmonic.push_back(ell(n) / static_cast<double>(n));
  StickSums s;
  s.dyadic = make_partial_sum_report(std::move(dyadic));
  s.harmonic = make_partial_sum_report(std::move(harmonic));
  auto a = s.dyadic.verdict_hint, b = s.harmonic.verdict_hint;
  bool a_conv = a == VerdictHint::ConsistentWithConvergence;
  bool a_div = a == VerdictHint::ConsistentWithDivergence;
  bool b_conv = b == VerdictHint::ConsistentWithConvergence;
  bool b_div = b == VerdictHint::ConsistentWithDivergence;
  s.consistent = !((a_conv && b_div) || (a_div && b_conv));
  return s;
}

struct LiminfCheck {
  bool precondition_ok = true;
  int violating_n = -1;     // first n in [n0, N] with sum b/a < eps n
  bool conclusion_ok = true;  // sum_{i<=n} b >= eps sum_{j=n0..n} a for all n
};

// Deterministic verification of the divergence-transfer inequality on finite
// inputs: given prefix ratio sums >= eps n from n0 on and decreasing a,
// partial sums of b dominate eps times the tail sums of a.
inline LiminfCheck liminf_lemma_check(const std::vector<double>& b,
                                      const std::vector<double>& a, double eps,
                                      int n0) {
  if (b.size() != a.size() || b.empty())
    throw InvalidParameter("liminf_check: b and a must have equal positive size");
  if (!(eps > 0) || n0 < 1 || n0 > static_cast<int>(b.size()))
    throw InvalidParameter("liminf_check: bad eps or n0");
  for (std::size_t i = 0; i + 1 < a.size(); ++i)
    if (a[i + 1] > a[i] + 1e-15)
      throw InvalidParameter("liminf_check: a must be decreasing");
  LiminfCheck out;
  const int n_max = static_cast<int>(b.size());
  double ratio_sum = 0.0;
  std::vector<double> ratio_prefix(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (int i = 1; i <= n_max; ++i) {
    ratio_sum += b[static_cast<std::size_t>(i) - 1] / a[static_cast<std::size_t>(i) - 1];
    ratio_prefix[static_cast<std::size_t>(i)] = ratio_sum;
    if (i >= n0 && out.precondition_ok &&
        ratio_sum < eps * static_cast<double>(i) - 1e-12) {
      out.precondition_ok = false;
      out.violating_n = i;
    }
  }
  if (!out.precondition_ok) return out;
  double sb = 0.0, sa = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    sb += b[static_cast<std::size_t>(n) - 1];
    if (n >= n0) sa += a[static_cast<std::size_t>(n) - 1];
    if (n >= n0 && sb < eps * sa - 1e-9 * std::max(1.0, eps * sa)) {
      out.conclusion_ok = false;
      out.violating_n = n;
      return out;
    }
  }
  return out;
}

}  // namespace fpt
