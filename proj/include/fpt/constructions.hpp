#pragma once

// The two explicit (f, G0) constructions separating G-smallness from
// explosivity, plus the critical-percolation depth quantity they rely on.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fpt/branching.hpp"
#include "fpt/distribution.hpp"
#include "fpt/errors.hpp"

namespace fpt {

// Pr[some root-to-depth-h path of the B-ary tree uses fewer than m closed
// edges], bonds open independently with probability 1/B. Recursion:
// s = (1/B) p_{h-1}(m) + (1-1/B) p_{h-1}(m-1), p_h(m) = 1 - (1-s)^B.
inline std::vector<double> percolation_path_probabilities(int b, int m_required,
                                                          int h) {
  if (b < 2 || m_required < 1 || h < 0)
    throw InvalidParameter("percolation: need B >= 2, m >= 1, h >= 0");
  std::vector<double> p(static_cast<std::size_t>(m_required) + 1, 1.0);
  p[0] = 0.0;
  const double open = 1.0 / b, closed = 1.0 - open;
  for (int level = 0; level < h; ++level) {
    for (int mm = m_required; mm >= 1; --mm) {
      // In-place right-to-left update: p[mm] and p[mm-1] are still level-1 values.
      double s = open * p[static_cast<std::size_t>(mm)] +
                 closed * p[static_cast<std::size_t>(mm) - 1];
      p[static_cast<std::size_t>(mm)] = 1.0 - std::pow(1.0 - s, b);
    }
  }
  return p;
}

// Minimal depth h with p_h(m_required) <= eps.
inline int xi_percolation(int b, int m_required, double eps,
                          int cap = 1'000'000) {
  if (b < 2 || m_required < 1 || !(eps > 0) || !(eps < 1))
    throw InvalidParameter("xi: need B >= 2, m >= 1, eps in (0,1)");
  std::vector<double> p(static_cast<std::size_t>(m_required) + 1, 1.0);
  p[0] = 0.0;
  const double open = 1.0 / b, closed = 1.0 - open;
  for (int h = 1; h <= cap; ++h) {
    for (int mm = m_required; mm >= 1; --mm) {
      double s = open * p[static_cast<std::size_t>(mm)] +
                 closed * p[static_cast<std::size_t>(mm) - 1];
      p[static_cast<std::size_t>(mm)] = 1.0 - std::pow(1.0 - s, b);
    }
    if (p[static_cast<std::size_t>(m_required)] <= eps) return h;
  }
  throw CapExceeded("xi: depth cap " + std::to_string(cap) +
                    " reached at p = " +
                    std::to_string(p[static_cast<std::size_t>(m_required)]));
}

struct Paper41 {
  BranchingFunction f;
  WeightDistribution g0;
  std::vector<double> a;        // a_0..a_levels
  std::vector<std::int64_t> n;  // n_0..n_levels
  std::vector<int> xi;          // xi_1..xi_levels
};

// Recursive G-small-but-not-explosive construction: blocks of f = B_k long
// enough (via the percolation depth) that each block forces unit path weight
// with good probability; G0 = 1/B_k on [a_k, a_{k-1}), a_k = 1/(2^k n_k).
inline Paper41 build_paper41(const std::vector<std::int64_t>& bs, int levels,
                             int xi_cap = 1'000'000) {
  if (levels < 1 || levels > static_cast<int>(bs.size()))
    throw InvalidParameter("paper41: levels must be in [1, |Bs|]");
  for (std::size_t i = 0; i < bs.size(); ++i) {
    if (bs[i] < 2) throw InvalidParameter("paper41: B values must be >= 2");
    if (i > 0 && bs[i] <= bs[i - 1])
      throw InvalidParameter("paper41: B values must be strictly increasing");
  }
  Paper41 out;
  out.a = {1.0};
  out.n = {0};
  std::vector<std::int64_t> edges, values;
  double f_product = 1.0;  // F(n_{k-1})
  for (int k = 1; k <= levels; ++k) {
    auto b = bs[static_cast<std::size_t>(k - 1)];
    double eps = 1.0 / (2.0 * f_product);
    auto m_required =
        static_cast<int>(std::ceil(1.0 / out.a.back() - 1e-9));
    int xi = xi_percolation(static_cast<int>(b), m_required, eps, xi_cap);
    std::int64_t nk = out.n.back() + xi;
    out.xi.push_back(xi);
    out.n.push_back(nk);
    out.a.push_back(1.0 / (std::ldexp(1.0, k) * static_cast<double>(nk)));
    edges.push_back(nk);
    values.push_back(b);
    for (int i = 0; i < xi; ++i) f_product *= static_cast<double>(b);
  }
  out.f = branching_from_blocks(edges, values, "paper41(...)");
  // Step CDF: value 1/B_k on [a_k, a_{k-1}), 1 above a_0 = 1.
  std::vector<double> bp = {1.0}, vals = {1.0};
  for (int k = 1; k <= levels; ++k) {
    bp.push_back(out.a[static_cast<std::size_t>(k)]);
    vals.push_back(1.0 / static_cast<double>(bs[static_cast<std::size_t>(k - 1)]));
  }
  out.g0 = make_step_distribution(bp, vals);
  return out;
}

struct Paper42 {
  BranchingFunction f;
  WeightDistribution g0;
  std::vector<double> a;         // a_0..a_levels, a_k = 1/k!
  std::vector<std::int64_t> n;   // n_0..n_levels
  std::vector<double> band_value;  // G0 value on [a_k, a_{k-1}), k = 2..levels
};

// Explosive-but-not-G-small construction: a_k = 1/k!, n_k = (k-2)!,
// f = B_k on [n_{k-1}, n_k), G0 = (1 - 1/(k-1)!)/B_k on [a_k, a_{k-1}).
// The k = 2 band of the literal formula is 0, which is not a CDF value and
// breaks the inverse identity at k = 3; it is replaced by 1/(2 B_2), the
// boundary value that keeps G0 nondecreasing and G0^{-1}(1/B_k) = a_{k-1}
// for every admissible B sequence.
inline Paper42 build_paper42(const std::vector<std::int64_t>& bs, int levels) {
  if (levels < 4 || levels > static_cast<int>(bs.size()))
    throw InvalidParameter("paper42: levels must be in [4, |Bs|]");
  if (levels > 20) throw InvalidParameter("paper42: levels beyond 20 overflow n_k");
  for (std::size_t i = 0; i < bs.size(); ++i) {
    if (bs[i] < 2) throw InvalidParameter("paper42: B values must be >= 2");
    if (i > 0 && bs[i] < 2 * bs[i - 1])
      throw InvalidParameter("paper42: needs B_{i+1} >= 2 B_i");
  }
  auto factorial = [](int k) {
    std::int64_t v = 1;
    for (int i = 2; i <= k; ++i) v *= i;
    return v;
  };
  Paper42 out;
  out.a.resize(static_cast<std::size_t>(levels) + 1);
  out.n.resize(static_cast<std::size_t>(levels) + 1);
  for (int k = 0; k <= levels; ++k)
    out.a[static_cast<std::size_t>(k)] = 1.0 / static_cast<double>(factorial(k));
  out.n[0] = 0;
  out.n[1] = 1;
  for (int k = 2; k <= levels; ++k)
    out.n[static_cast<std::size_t>(k)] = factorial(k - 2);

  std::vector<std::int64_t> edges, values;
  for (int k = 1; k <= levels; ++k) {
    if (out.n[static_cast<std::size_t>(k)] > out.n[static_cast<std::size_t>(k - 1)]) {
      edges.push_back(out.n[static_cast<std::size_t>(k)]);
      values.push_back(bs[static_cast<std::size_t>(k - 1)]);
    }
  }
  out.f = branching_from_blocks(edges, values, "paper42(...)");

  std::vector<double> bp = {1.0}, vals = {1.0};
  for (int k = 2; k <= levels; ++k) {
    double v = k == 2 ? 1.0 / (2.0 * static_cast<double>(bs[1]))
                      : (1.0 - 1.0 / static_cast<double>(factorial(k - 1))) /
                            static_cast<double>(bs[static_cast<std::size_t>(k - 1)]);
    bp.push_back(out.a[static_cast<std::size_t>(k)]);
    vals.push_back(v);
    out.band_value.push_back(v);
  }
  out.g0 = make_step_distribution(bp, vals);
  return out;
}

}  // namespace fpt
