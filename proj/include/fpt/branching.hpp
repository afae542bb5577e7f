#pragma once

// Branching functions f: N0 -> N for spherically symmetric trees, with the
// generation-size product F(n) = prod_{i<n} f(i).

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fpt/errors.hpp"

namespace fpt {

class BranchingFunction {
 public:
  std::function<std::int64_t(int)> value;
  std::string spec;

  std::int64_t operator()(int n) const { return value(n); }

  // F(n); returns +inf once the product overflows double range.
  [[nodiscard]] double cumulative_product(int n) const {
    double p = 1.0;
    for (int i = 0; i < n; ++i) p *= static_cast<double>(value(i));
    return p;
  }

  // First generation in [0,n) where f decreases, if any. The growth theorems
  // assume nondecreasing f; callers warn rather than fail.
  [[nodiscard]] std::optional<int> first_decrease(int n) const {
    for (int i = 0; i + 1 < n; ++i)
      if (value(i + 1) < value(i)) return i + 1;
    return std::nullopt;
  }
};

inline BranchingFunction branching_const(std::int64_t k) {
  if (k < 1) throw InvalidParameter("f const: k must be >= 1");
  return {[k](int) { return k; }, "const(" + std::to_string(k) + ")"};
}

// f(n) = round((n+1)^p).
inline BranchingFunction branching_poly(double p) {
  if (!(p >= 0)) throw InvalidParameter("f poly: exponent must be >= 0");
  return {[p](int n) {
            double v = std::pow(static_cast<double>(n) + 1.0, p);
            if (v > 9.0e18) throw CapExceeded("f poly: value exceeds 2^63");
            return static_cast<std::int64_t>(std::llround(v));
          },
          "poly(" + std::to_string(p) + ")"};
}

// f(n) = 2^{n+k}.
inline BranchingFunction branching_pow2shift(int k) {
  if (k < 0) throw InvalidParameter("f pow2shift: shift must be >= 0");
  return {[k](int n) {
            if (n + k >= 62) throw CapExceeded("f pow2shift: value exceeds 2^62");
            return std::int64_t{1} << (n + k);
          },
          "pow2shift(" + std::to_string(k) + ")"};
}

// Explicit values for n = 0..size-1; the last value continues afterwards.
inline BranchingFunction branching_table(std::vector<std::int64_t> vals) {
  if (vals.empty()) throw InvalidParameter("f table: needs at least one value");
  for (auto v : vals)
    if (v < 1) throw InvalidParameter("f table: values must be >= 1");
  auto shared = std::make_shared<std::vector<std::int64_t>>(std::move(vals));
  return {[shared](int n) {
            const auto& t = *shared;
            return n < static_cast<int>(t.size()) ? t[n] : t.back();
          },
          "table(...)"};
}

// Blockwise-constant f: value_k on [edges[k-1], edges[k]); extended by the
// last block. Empty blocks are allowed.
inline BranchingFunction branching_from_blocks(std::vector<std::int64_t> edges,
                                               std::vector<std::int64_t> block_values,
                                               std::string spec) {
  if (edges.size() != block_values.size() || edges.empty())
    throw InvalidParameter("f blocks: edge/value size mismatch");
  auto e = std::make_shared<std::vector<std::int64_t>>(std::move(edges));
  auto v = std::make_shared<std::vector<std::int64_t>>(std::move(block_values));
  return {[e, v](int n) {
            for (std::size_t k = 0; k < e->size(); ++k)
              if (n < (*e)[k]) return (*v)[k];
            return v->back();
          },
          std::move(spec)};
}

}  // namespace fpt
