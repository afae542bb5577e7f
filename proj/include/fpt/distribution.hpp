#pragma once

// Edge-weight distributions G on [0,inf). The quantile is always the
// generalized inverse inf{x : G(x) >= y} with G right-continuous, which is
// what gives step CDFs a well-defined inverse. quantile(1) may be +inf.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fpt/errors.hpp"

namespace fpt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// One flat piece of a step CDF: G(t) = value for t in [lower_x, next piece).
struct Step {
  double lower_x;
  double value;
};

struct StepData {
  // Sorted by lower_x descending; steps[0] is the top piece, extending to
  // +inf. Below steps.back().lower_x the CDF equals tail_value.
  std::vector<Step> steps;
  double tail_value = 0.0;

  // Jump locations with masses, top first.
  [[nodiscard]] std::vector<std::pair<double, double>> atoms() const {
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      double below = (i + 1 < steps.size()) ? steps[i + 1].value : tail_value;
      if (steps[i].value > below)
        out.emplace_back(steps[i].lower_x, steps[i].value - below);
    }
    return out;
  }
};

class WeightDistribution {
 public:
  std::function<double(double)> cdf;
  std::function<double(double)> quantile;
  double support_lower = 0.0;
  std::string spec;
  std::shared_ptr<const StepData> step;  // non-null for step CDFs
};

inline WeightDistribution make_exponential(double rate) {
  if (!(rate > 0)) throw InvalidParameter("exp: rate must be positive");
  WeightDistribution d;
  d.cdf = [rate](double x) { return x <= 0 ? 0.0 : -std::expm1(-rate * x); };
  d.quantile = [rate](double y) {
    if (y >= 1) return kInf;
    if (y <= 0) return 0.0;
    return -std::log1p(-y) / rate;
  };
  d.support_lower = 0.0;
  d.spec = "exp(" + std::to_string(rate) + ")";
  return d;
}

// G(x) = min(1, c x^alpha); the family with an exact power-law limit at 0.
inline WeightDistribution make_power_law_zero(double alpha, double c) {
  if (!(alpha > 0) || !(c > 0))
    throw InvalidParameter("pow0: alpha and c must be positive");
  WeightDistribution d;
  d.cdf = [alpha, c](double x) {
    return x <= 0 ? 0.0 : std::min(1.0, c * std::pow(x, alpha));
  };
  d.quantile = [alpha, c](double y) {
    if (y <= 0) return 0.0;
    return std::pow(std::min(y, 1.0) / c, 1.0 / alpha);
  };
  d.support_lower = 0.0;
  d.spec = "pow0(" + std::to_string(alpha) + "," + std::to_string(c) + ")";
  return d;
}

inline WeightDistribution make_degenerate(double w) {
  if (!(w >= 0)) throw InvalidParameter("const: point mass must be >= 0");
  WeightDistribution d;
  d.cdf = [w](double x) { return x >= w ? 1.0 : 0.0; };
  d.quantile = [w](double y) { return y > 0 ? w : 0.0; };
  d.support_lower = w;
  d.spec = "const(" + std::to_string(w) + ")";
  auto sd = std::make_shared<StepData>();
  sd->steps = {{w, 1.0}};
  d.step = std::move(sd);
  return d;
}

// Step CDF from pieces given top-down: G(t) = values[i] on
// [breakpoints[i], breakpoints[i-1]), G = values[0] above breakpoints[0],
// and tail_value below the last breakpoint.
inline WeightDistribution make_step_distribution(std::vector<double> breakpoints,
                                                 std::vector<double> values,
                                                 double tail_value = 0.0) {
  if (breakpoints.empty() || breakpoints.size() != values.size())
    throw InvalidParameter("step: need matching breakpoint/value lists");
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i] > 0))
      throw InvalidParameter("step: breakpoints must be positive");
    if (!(values[i] > 0) || values[i] > 1.0)
      throw InvalidParameter("step: values must lie in (0,1]");
    if (i > 0 && !(breakpoints[i] < breakpoints[i - 1]))
      throw InvalidParameter("step: breakpoints must be strictly decreasing");
    if (i > 0 && !(values[i] < values[i - 1]))
      throw InvalidParameter("step: values must decrease with the breakpoints");
  }
  if (!(tail_value >= 0) || !(tail_value < values.back()))
    throw InvalidParameter("step: tail value must lie below the last step");

  auto sd = std::make_shared<StepData>();
  sd->tail_value = tail_value;
  for (std::size_t i = 0; i < breakpoints.size(); ++i)
    sd->steps.push_back({breakpoints[i], values[i]});

  WeightDistribution d;
  d.step = sd;
  d.support_lower = tail_value > 0 ? 0.0 : sd->steps.back().lower_x;
  d.cdf = [sd](double x) {
    // First piece whose lower edge is <= x, searching top-down.
    for (const Step& s : sd->steps)
      if (x >= s.lower_x) return s.value;
    return sd->tail_value;
  };
  d.quantile = [sd](double y) {
    if (y <= sd->tail_value) return 0.0;
    if (y > sd->steps.front().value) return kInf;
    // Smallest x with G(x) >= y: the lowest piece still at or above y.
    double x = sd->steps.front().lower_x;
    for (const Step& s : sd->steps) {
      if (s.value >= y)
        x = s.lower_x;
      else
        break;
    }
    return x;
  };
  d.spec = "step(...)";
  return d;
}

namespace detail {

struct Knot {
  double x;
  double y;
};

}  // namespace detail

// Continuous, (for positive residual_mass) strictly increasing version of a
// step CDF: the atom at a_i is spread uniformly over [a_i, 2a_i], and each gap
// (2a_i, a_{i-1}) receives a linear ramp of mass residual_mass * 2^-(i+1).
inline WeightDistribution perturb_continuous(const WeightDistribution& step_dist,
                                             double residual_mass) {
  if (!step_dist.step)
    throw InvalidParameter("perturb: input must be a step distribution");
  if (!(residual_mass >= 0))
    throw InvalidParameter("perturb: residual mass must be >= 0");
  const StepData& sd = *step_dist.step;
  if (sd.steps.front().value != 1.0)
    throw InvalidParameter("perturb: step CDF must reach 1 at its top piece");
  if (sd.tail_value != 0.0)
    throw InvalidParameter("perturb: nonzero tail not supported");

  auto atoms = sd.atoms();  // top first
  for (std::size_t i = 1; i < atoms.size(); ++i)
    if (2 * atoms[i].first > atoms[i - 1].first)
      throw InvalidParameter("perturb: spread intervals overlap (2a_i > a_{i-1})");

  // Knots of the unnormalized piecewise-linear CDF, built bottom-up.
  auto knots = std::make_shared<std::vector<detail::Knot>>();
  double mass = 0.0;
  knots->push_back({atoms.back().first, 0.0});
  for (std::size_t r = atoms.size(); r-- > 0;) {
    const auto& [x, atom_mass] = atoms[r];
    if (knots->back().x < x) knots->push_back({x, mass});  // flat gap end
    mass += atom_mass;
    knots->push_back({2 * x, mass});
    if (r > 0) {
      double gap_hi = atoms[r - 1].first;
      if (gap_hi > 2 * x && residual_mass > 0) {
        mass += residual_mass * std::ldexp(1.0, -static_cast<int>(r) - 1);
        knots->push_back({gap_hi, mass});
      }
    }
  }
  const double total = mass;
  for (auto& k : *knots) k.y /= total;

  WeightDistribution d;
  d.support_lower = knots->front().x;
  d.cdf = [knots](double x) {
    const auto& ks = *knots;
    if (x <= ks.front().x) return 0.0;
    if (x >= ks.back().x) return 1.0;
    auto it = std::upper_bound(ks.begin(), ks.end(), x,
                               [](double v, const detail::Knot& k) { return v < k.x; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    if (hi.x == lo.x) return hi.y;
    return lo.y + (hi.y - lo.y) * (x - lo.x) / (hi.x - lo.x);
  };
  d.quantile = [knots](double y) {
    const auto& ks = *knots;
    if (y <= 0) return 0.0;
    if (y > ks.back().y) return kInf;
    auto it = std::lower_bound(ks.begin(), ks.end(), y,
                               [](const detail::Knot& k, double v) { return k.y < v; });
    if (it == ks.begin()) return ks.front().x;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    if (hi.y == lo.y) return hi.x;  // flat piece: inf of the level set
    return lo.x + (hi.x - lo.x) * (y - lo.y) / (hi.y - lo.y);
  };
  d.spec = "perturbed(" + step_dist.spec + ")";
  return d;
}

}  // namespace fpt
