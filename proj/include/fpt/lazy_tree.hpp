#pragma once

// Lazy, address-keyed generation of infinite weighted trees. Child weights
// are pure functions of (seed, node address), so any exploration order sees
// the same realization, and transforms (renormalizing, trimming) are flags
// over the same underlying weights.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "fpt/branching.hpp"
#include "fpt/distribution.hpp"
#include "fpt/errors.hpp"
#include "fpt/intensity.hpp"
#include "fpt/random.hpp"

namespace fpt {

struct NodeAddress {
  std::vector<std::uint32_t> path;  // empty = root; entries are >= 1

  [[nodiscard]] int generation() const { return static_cast<int>(path.size()); }
  [[nodiscard]] NodeAddress child(std::uint32_t j) const {
    NodeAddress a = *this;
    a.path.push_back(j);
    return a;
  }
};

// Finite explicitly weighted tree, used as a search oracle target.
struct ExplicitTree {
  struct Edge {
    double weight;
    std::uint32_t child;  // node index
  };
  std::vector<std::vector<Edge>> children;  // node 0 is the root
};

enum class TreeKind { Pwit, SphericallySymmetric, Explicit };

struct WeightedEdge {
  std::uint32_t index;  // child index within the node, >= 1, stable under trim
  double weight;        // after renormalization, when active
};

class LazyTree {
 public:
  static LazyTree pwit(IntensityFunction lam, std::uint64_t seed) {
    LazyTree t;
    t.kind_ = TreeKind::Pwit;
    t.lam_ = std::move(lam);
    t.root_ = RandomStream(seed).child(0x726565);  // domain-separate tree draws
    return t;
  }

  static LazyTree spherically_symmetric(BranchingFunction f, WeightDistribution g,
                                        std::uint64_t seed) {
    LazyTree t;
    t.kind_ = TreeKind::SphericallySymmetric;
    t.f_ = std::move(f);
    t.g_ = std::move(g);
    t.root_ = RandomStream(seed).child(0x726565);
    return t;
  }

  static LazyTree explicit_tree(std::shared_ptr<const ExplicitTree> tree) {
    LazyTree t;
    t.kind_ = TreeKind::Explicit;
    t.explicit_ = std::move(tree);
    return t;
  }

  // Edge weights divided by a(n) = G^{-1}(1/f(n)), n the parent generation.
  [[nodiscard]] LazyTree renormalized() const {
    if (kind_ != TreeKind::SphericallySymmetric)
      throw InvalidParameter("renormalize: requires a spherically symmetric tree");
    LazyTree t = *this;
    t.renormalized_ = true;
    return t;
  }

  // Drop edges whose pre-renormalization weight is >= eta.
  [[nodiscard]] LazyTree trimmed(double eta) const {
    if (!(eta > 0)) throw InvalidParameter("trim: eta must be positive");
    LazyTree t = *this;
    t.trim_eta_ = eta;
    return t;
  }

  [[nodiscard]] TreeKind kind() const { return kind_; }
  [[nodiscard]] bool is_renormalized() const { return renormalized_; }
  [[nodiscard]] double trim_eta() const { return trim_eta_; }
  [[nodiscard]] const IntensityFunction& intensity() const { return lam_; }
  [[nodiscard]] const BranchingFunction& branching() const { return f_; }
  [[nodiscard]] const WeightDistribution& weight_dist() const { return g_; }
  [[nodiscard]] const ExplicitTree& explicit_data() const { return *explicit_; }
  [[nodiscard]] const RandomStream& root_stream() const { return root_; }

  [[nodiscard]] std::uint64_t node_state(const NodeAddress& node) const {
    return root_.descend(node.path).state();
  }

  // a(n); errors when the normalizer degenerates to 0 or +inf.
  [[nodiscard]] double renormalizer(int generation) const {
    double a = g_.quantile(1.0 / static_cast<double>(f_(generation)));
    if (a == 0.0)
      throw DegenerateNormalizer("renormalizer a(n) = 0 at generation " +
                                 std::to_string(generation));
    if (a == kInf)
      throw DegenerateNormalizer("renormalizer a(n) = +inf at generation " +
                                 std::to_string(generation));
    return a;
  }

 private:
  TreeKind kind_ = TreeKind::Pwit;
  IntensityFunction lam_;
  BranchingFunction f_;
  WeightDistribution g_;
  std::shared_ptr<const ExplicitTree> explicit_;
  RandomStream root_{0};
  bool renormalized_ = false;
  double trim_eta_ = kInf;
};

// First k arrivals of the node's own point process, increasing in the index.
inline std::vector<double> pwit_child_weights(const LazyTree& tree,
                                              const NodeAddress& node, int k) {
  if (tree.kind() != TreeKind::Pwit)
    throw InvalidParameter("pwit_child_weights: not a PWIT-kind tree");
  if (k < 1) throw InvalidParameter("pwit_child_weights: k must be >= 1");
  RandomStream s = RandomStream::from_state(tree.node_state(node));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k));
  double acc = 0.0;
  for (int j = 1; j <= k; ++j) {
    acc += s.exponential_at(static_cast<std::uint64_t>(j));
    out.push_back(tree.intensity().inverse_cumulative(acc));
  }
  return out;
}

// The f(|node|) i.i.d. edge weights below a spherically symmetric node.
inline std::vector<double> ssym_child_weights(const LazyTree& tree,
                                              const NodeAddress& node) {
  if (tree.kind() != TreeKind::SphericallySymmetric)
    throw InvalidParameter("ssym_child_weights: not a spherically symmetric tree");
  RandomStream s = RandomStream::from_state(tree.node_state(node));
  std::int64_t count = tree.branching()(node.generation());
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t j = 1; j <= count; ++j)
    out.push_back(tree.weight_dist().quantile(s.uniform_at(static_cast<std::uint64_t>(j))));
  return out;
}

// Surviving child edges of a node under the tree's trim/renormalization
// flags, with their original indices.
inline std::vector<WeightedEdge> child_edges(const LazyTree& tree,
                                             const NodeAddress& node) {
  std::vector<WeightedEdge> out;
  const double eta = tree.trim_eta();
  switch (tree.kind()) {
    case TreeKind::SphericallySymmetric: {
      auto raw = ssym_child_weights(tree, node);
      double a = tree.is_renormalized() ? tree.renormalizer(node.generation()) : 1.0;
      for (std::size_t j = 0; j < raw.size(); ++j)
        if (raw[j] < eta)
          out.push_back({static_cast<std::uint32_t>(j + 1), raw[j] / a});
      break;
    }
    case TreeKind::Pwit: {
      // Arrivals increase, so trimming keeps a prefix.
      RandomStream s = RandomStream::from_state(tree.node_state(node));
      double acc = 0.0;
      for (std::uint64_t j = 1;; ++j) {
        acc += s.exponential_at(j);
        double w = tree.intensity().inverse_cumulative(acc);
        if (w >= eta) break;
        out.push_back({static_cast<std::uint32_t>(j), w});
        if (out.size() > (1u << 22))
          throw CapExceeded("child_edges: unboundedly many PWIT children below eta");
      }
      break;
    }
    case TreeKind::Explicit: {
      std::uint32_t id = 0;
      const ExplicitTree& et = tree.explicit_data();
      for (std::uint32_t p : node.path) {
        if (p == 0 || p > et.children[id].size())
          throw InvalidParameter("child_edges: address leaves the explicit tree");
        id = et.children[id][p - 1].child;
      }
      const auto& edges = et.children[id];
      for (std::size_t j = 0; j < edges.size(); ++j)
        if (edges[j].weight < eta)
          out.push_back({static_cast<std::uint32_t>(j + 1), edges[j].weight});
      break;
    }
  }
  return out;
}

}  // namespace fpt
