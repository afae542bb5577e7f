#pragma once

// Stick-breaking random real trees: segment i+1 attaches at a uniform point
// of the tree built from segments 1..i. The genealogy tree records which
// segment attached to which, with edge weight ln(child index / parent index).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fpt/errors.hpp"
#include "fpt/random.hpp"

namespace fpt {

class LengthSequence {
 public:
  // 1-indexed; takes a double so that dyadic indices far beyond 2^63 can be
  // queried exactly (powers of two are exact doubles).
  std::function<double(double)> ell;
  bool decreasing_hint = true;
  std::string spec;

  double operator()(double i) const { return ell(i); }
};

inline LengthSequence length_invpow(double p) {
  if (!(p > 0)) throw InvalidParameter("invpow: exponent must be positive");
  return {[p](double i) { return std::pow(i, -p); }, true,
          "invpow(" + std::to_string(p) + ")"};
}

inline LengthSequence length_invlog() {
  return {[](double i) { return 1.0 / std::log2(i + 1.0); }, true, "invlog()"};
}

inline LengthSequence length_const(double c) {
  if (!(c > 0)) throw InvalidParameter("const length: must be positive");
  return {[c](double) { return c; }, true, "const(" + std::to_string(c) + ")"};
}

inline LengthSequence length_table(std::vector<double> vals) {
  if (vals.empty()) throw InvalidParameter("length table: needs values");
  for (double v : vals)
    if (!(v > 0)) throw InvalidParameter("length table: values must be positive");
  bool dec = std::is_sorted(vals.rbegin(), vals.rend());
  auto shared = std::make_shared<std::vector<double>>(std::move(vals));
  return {[shared](double i) {
            const auto& t = *shared;
            auto idx = static_cast<std::size_t>(i);
            return idx <= t.size() ? t[idx - 1] : t.back();
          },
          dec, "table(...)"};
}

struct SegmentTree {
  // All arrays are 1-indexed by segment; index 0 is unused padding.
  std::vector<double> length;
  std::vector<std::int32_t> parent;        // parent segment; 0 for segment 1
  std::vector<double> attach_offset;       // in [0, length[parent])
  std::vector<double> attach_root_dist;    // distance of the attach point to the root
  std::vector<double> cumulative;          // C_j = sum_{i<=j} length[i]

  [[nodiscard]] std::int64_t segments() const {
    return static_cast<std::int64_t>(length.size()) - 1;
  }
};

// Locate the segment containing arc position x in (0, C_n], by binary search
// over the prefix sums; returns {segment, offset from its attach end}.
inline std::pair<std::int32_t, double> locate_segment(
    const std::vector<double>& cumulative, double x) {
  auto it = std::lower_bound(cumulative.begin() + 1, cumulative.end(), x);
  if (it == cumulative.end()) it = cumulative.end() - 1;
  auto j = static_cast<std::int32_t>(it - cumulative.begin());
  return {j, x - cumulative[static_cast<std::size_t>(j) - 1]};
}

inline SegmentTree build_tree(const LengthSequence& ell, std::int64_t n,
                              const RandomStream& stream) {
  if (n < 1) throw InvalidParameter("build_tree: need at least one segment");
  SegmentTree t;
  auto nn = static_cast<std::size_t>(n);
  t.length.reserve(nn + 1);
  t.parent.reserve(nn + 1);
  t.attach_offset.reserve(nn + 1);
  t.attach_root_dist.reserve(nn + 1);
  t.cumulative.reserve(nn + 1);
  t.length = {0.0, ell(1)};
  t.parent = {0, 0};
  t.attach_offset = {0.0, 0.0};
  t.attach_root_dist = {0.0, 0.0};
  t.cumulative = {0.0, ell(1)};
  for (std::int64_t i = 2; i <= n; ++i) {
    double u = stream.uniform_at(static_cast<std::uint64_t>(i));
    double x = u * t.cumulative.back();
    auto [seg, offset] = locate_segment(t.cumulative, x);
    offset = std::min(offset, t.length[static_cast<std::size_t>(seg)]);
    t.length.push_back(ell(static_cast<double>(i)));
    t.parent.push_back(seg);
    t.attach_offset.push_back(offset);
    t.attach_root_dist.push_back(
        t.attach_root_dist[static_cast<std::size_t>(seg)] + offset);
    t.cumulative.push_back(t.cumulative.back() + t.length.back());
  }
  return t;
}

// Height of A(n'): the farthest point of any attached segment from the root.
inline double height(const SegmentTree& t, std::int64_t upto = -1) {
  std::int64_t n = upto < 0 ? t.segments() : std::min(upto, t.segments());
  double h = 0.0;
  for (std::int64_t i = 1; i <= n; ++i) {
    auto ii = static_cast<std::size_t>(i);
    h = std::max(h, t.attach_root_dist[ii] + t.length[ii]);
  }
  return h;
}

struct GenealogyTree {
  std::vector<std::vector<std::int32_t>> children;  // 1-indexed by segment
  std::vector<std::int32_t> depth;                  // depth[1] = 0

  [[nodiscard]] double edge_weight(std::int32_t child_segment,
                                   std::int32_t parent_segment) const {
    return std::log(static_cast<double>(child_segment)) -
           std::log(static_cast<double>(parent_segment));
  }
};

inline GenealogyTree genealogy(const SegmentTree& t) {
  GenealogyTree g;
  auto n = static_cast<std::size_t>(t.segments());
  g.children.assign(n + 1, {});
  g.depth.assign(n + 1, 0);
  for (std::size_t i = 2; i <= n; ++i) {
    auto p = static_cast<std::size_t>(t.parent[i]);
    g.children[p].push_back(static_cast<std::int32_t>(i));
    g.depth[i] = g.depth[p] + 1;
  }
  return g;
}

// td per segment: total segment length along the genealogy chain from the
// root down to (and including) the segment.
inline std::vector<double> td_per_segment(const SegmentTree& t) {
  auto n = static_cast<std::size_t>(t.segments());
  std::vector<double> td(n + 1, 0.0);
  td[1] = t.length[1];
  for (std::size_t i = 2; i <= n; ++i)
    td[i] = td[static_cast<std::size_t>(t.parent[i])] + t.length[i];
  return td;
}

// Maximum over genealogy root-paths, truncated at the given depth, of the
// summed segment lengths.
inline double td_max_to_depth(const SegmentTree& t, int depth) {
  if (depth < 1) throw InvalidParameter("td_max: depth must be >= 1");
  GenealogyTree g = genealogy(t);
  auto td = td_per_segment(t);
  double best = td[1];
  for (std::size_t i = 1; i < td.size(); ++i)
    if (g.depth[i] < depth) best = std::max(best, td[i]);
  return best;
}

inline double td_max(const SegmentTree& t) {
  auto td = td_per_segment(t);
  return *std::max_element(td.begin() + 1, td.end());
}

// Minimum segment index per genealogy depth; index 0 of the result is depth 0
// (always segment 1).
inline std::vector<std::int64_t> index_growth_profile(const SegmentTree& t) {
  GenealogyTree g = genealogy(t);
  std::vector<std::int64_t> min_index;
  for (std::size_t i = 1; i < g.depth.size(); ++i) {
    auto d = static_cast<std::size_t>(g.depth[i]);
    if (d >= min_index.size()) min_index.resize(d + 1, 0);
    if (min_index[d] == 0 || static_cast<std::int64_t>(i) < min_index[d])
      min_index[d] = static_cast<std::int64_t>(i);
  }
  return min_index;
}

// Counting-dominance comparison of indexed sums: if |R cap [1,j]| <=
// |S cap [1,j]| for all j and ell is decreasing, then sum_R ell <= sum_S ell.
inline bool subset_sum_dominates(const LengthSequence& ell,
                                 const std::vector<std::int64_t>& r,
                                 const std::vector<std::int64_t>& s) {
  double sr = 0.0, ss = 0.0;
  for (auto i : r) sr += ell(static_cast<double>(i));
  for (auto i : s) ss += ell(static_cast<double>(i));
  return sr <= ss + 1e-12 * std::max(1.0, ss);
}

}  // namespace fpt
