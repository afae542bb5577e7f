#pragma once

// First-passage search on lazy trees. Best-first expansion pops partial paths
// in nondecreasing total weight, so the first pop at generation n is exactly
// m_n. PWIT nodes have infinitely many children; since their edge weights
// increase with the child index, popping child j pushes a handle for sibling
// j+1 and correctness is preserved with finitely many live entries.

#include <cassert>
#include <cstdint>
#include <queue>
#include <vector>

#include "fpt/lazy_tree.hpp"

namespace fpt {

enum class StopReason { Completed, NodeBudget, WeightBudget };

struct PassageProfile {
  // m[n] = m_n for n = 1..max_gen_recorded; NaN where not reached.
  std::vector<double> m;
  int max_gen_recorded = 0;
  std::uint64_t nodes_expanded = 0;
  StopReason stop_reason = StopReason::Completed;
};

enum class ProbeVerdict { Reached, Exceeded, Inconclusive };

struct ProbeResult {
  ProbeVerdict verdict = ProbeVerdict::Inconclusive;
  // Reached: the exact passage weight to the target generation.
  // Exceeded: the frontier minimum that first surpassed the budget.
  double value = 0.0;
  std::uint64_t nodes_expanded = 0;
};

namespace detail {

struct FrontierEntry {
  double total;         // path weight including own edge; primary key
  double parent_total;  // path weight up to the parent
  double s;             // PWIT only: cumulative exponential for own arrival
  std::uint64_t key;    // parent node state (lazy) or parent node id (explicit)
  std::uint64_t seq;    // insertion order, final tie break
  std::uint32_t sibling;  // own child index within the parent
  std::uint32_t gen;      // own generation
};

// Min-order on weight; ties prefer deeper entries so zero-weight chains dive
// instead of flooding a level.
struct EntryAfter {
  bool operator()(const FrontierEntry& a, const FrontierEntry& b) const {
    if (a.total != b.total) return a.total > b.total;
    if (a.gen != b.gen) return a.gen < b.gen;
    return a.seq > b.seq;
  }
};

class BestFirst {
 public:
  BestFirst(const LazyTree& tree, double weight_budget, int gen_cap)
      : tree_(tree),
        weight_budget_(weight_budget),
        gen_cap_(gen_cap),
        eta_(tree.trim_eta()) {
    expand_root();
  }

  [[nodiscard]] bool empty() const { return heap_.empty(); }
  [[nodiscard]] double frontier_min() const { return heap_.top().total; }
  [[nodiscard]] std::uint64_t pops() const { return pops_; }
  // Smallest path weight rejected by the weight budget; the exact frontier
  // minimum beyond the budget once the in-budget ball is exhausted.
  [[nodiscard]] double min_rejected() const { return min_rejected_; }

  // Pops the lightest entry and expands it; returns (generation, weight).
  std::pair<int, double> pop_and_expand() {
    FrontierEntry e = heap_.top();
    heap_.pop();
    ++pops_;
    assert(e.total >= last_popped_);
    last_popped_ = e.total;
    if (static_cast<int>(e.gen) < gen_cap_) expand(e);
    return {static_cast<int>(e.gen), e.total};
  }

 private:
  void push(FrontierEntry e) {
    e.seq = seq_++;
    heap_.push(e);
  }

  void expand_root() {
    switch (tree_.kind()) {
      case TreeKind::Pwit:
        push_pwit_child(0.0, 0.0, tree_.root_stream().state(), 1, 1);
        break;
      case TreeKind::SphericallySymmetric:
        expand_ssym(0.0, tree_.root_stream().state(), 0);
        break;
      case TreeKind::Explicit:
        expand_explicit(0.0, 0, 0);
        break;
    }
  }

  void expand(const FrontierEntry& e) {
    switch (tree_.kind()) {
      case TreeKind::Pwit: {
        std::uint64_t own = detail_absorb(e.key, e.sibling);
        push_pwit_child(e.total, 0.0, own, 1, e.gen + 1);
        push_pwit_sibling(e);
        break;
      }
      case TreeKind::SphericallySymmetric: {
        std::uint64_t own = detail_absorb(e.key, e.sibling);
        expand_ssym(e.total, own, static_cast<int>(e.gen));
        break;
      }
      case TreeKind::Explicit: {
        const auto& edges = tree_.explicit_data().children[e.key];
        expand_explicit(e.total, edges[e.sibling - 1].child,
                        static_cast<int>(e.gen));
        break;
      }
    }
  }

  static std::uint64_t detail_absorb(std::uint64_t state, std::uint32_t j) {
    return fpt::detail::absorb(state, j);
  }

  // First unrealized arrival of `node_state`, as child `j` with running sum
  // base `s_base` (0 for the first child).
  void push_pwit_child(double parent_total, double s_base,
                       std::uint64_t node_state, std::uint32_t j,
                       std::uint32_t gen) {
    double s = s_base + RandomStream::from_state(node_state).exponential_at(j);
    double w = tree_.intensity().inverse_cumulative(s);
    if (w >= eta_) return;  // later arrivals only grow
    double total = parent_total + w;
    if (total > weight_budget_) {
      min_rejected_ = std::min(min_rejected_, total);
      return;
    }
    push({total, parent_total, s, node_state, 0, j, gen});
  }

  void push_pwit_sibling(const FrontierEntry& e) {
    push_pwit_child(e.parent_total, e.s, e.key, e.sibling + 1, e.gen);
  }

  void expand_ssym(double total, std::uint64_t node_state, int gen) {
    std::int64_t count = tree_.branching()(gen);
    if (count > kExpansionCap)
      throw CapExceeded("search: branching factor too large to expand");
    RandomStream s = RandomStream::from_state(node_state);
    const auto& g = tree_.weight_dist();
    double a = tree_.is_renormalized() ? tree_.renormalizer(gen) : 1.0;
    for (std::int64_t j = 1; j <= count; ++j) {
      double w = g.quantile(s.uniform_at(static_cast<std::uint64_t>(j)));
      if (w >= eta_) continue;
      double child_total = total + w / a;
      if (child_total > weight_budget_) {
        min_rejected_ = std::min(min_rejected_, child_total);
        continue;
      }
      push({child_total, total, 0.0, node_state, 0,
            static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(gen + 1)});
    }
  }

  void expand_explicit(double total, std::uint64_t node_id, int gen) {
    const auto& edges = tree_.explicit_data().children[node_id];
    for (std::size_t j = 0; j < edges.size(); ++j) {
      double w = edges[j].weight;
      if (w >= eta_) continue;
      double child_total = total + w;
      if (child_total > weight_budget_) {
        min_rejected_ = std::min(min_rejected_, child_total);
        continue;
      }
      push({child_total, total, 0.0, node_id, 0, static_cast<std::uint32_t>(j + 1),
            static_cast<std::uint32_t>(gen + 1)});
    }
  }

  static constexpr std::int64_t kExpansionCap = 1 << 24;

  const LazyTree& tree_;
  double weight_budget_;
  int gen_cap_;
  double eta_;
  std::priority_queue<FrontierEntry, std::vector<FrontierEntry>, EntryAfter> heap_;
  std::uint64_t seq_ = 0;
  std::uint64_t pops_ = 0;
  double last_popped_ = 0.0;
  double min_rejected_ = kInf;
};

}  // namespace detail

// Exact m_n profile for n = 1..n_max, stopping at the first exhausted budget.
// Every recorded m[n] is exact: the search never prunes below the budget.
inline PassageProfile first_passage_profile(const LazyTree& tree, int n_max,
                                            std::uint64_t node_budget,
                                            double weight_budget = kInf) {
  if (n_max < 1) throw InvalidParameter("profile: n_max must be >= 1");
  if (node_budget == 0 || !(weight_budget > 0))
    throw InvalidParameter("profile: budgets must be positive");
  PassageProfile out;
  out.m.assign(static_cast<std::size_t>(n_max) + 1,
               std::numeric_limits<double>::quiet_NaN());
  out.m[0] = 0.0;
  detail::BestFirst search(tree, weight_budget, n_max);
  while (true) {
    if (search.empty()) {
      // Pruned pushes are the only way an infinite tree's frontier empties.
      out.stop_reason = search.min_rejected() == kInf ? StopReason::Completed
                                                      : StopReason::WeightBudget;
      break;
    }
    if (search.pops() >= node_budget) {
      out.stop_reason = StopReason::NodeBudget;
      break;
    }
    auto [gen, w] = search.pop_and_expand();
    if (gen <= n_max && std::isnan(out.m[static_cast<std::size_t>(gen)])) {
      out.m[static_cast<std::size_t>(gen)] = w;
      out.max_gen_recorded = std::max(out.max_gen_recorded, gen);
      if (gen == n_max) {
        out.stop_reason = StopReason::Completed;
        break;
      }
    }
  }
  out.nodes_expanded = search.pops();
  return out;
}

// Reached: some path attains the target generation within the weight budget
// (value = its exact passage weight). Exceeded: the realized ball below the
// budget was exhausted first, so no such path exists. Inconclusive: the node
// budget ran out before either fact was established.
inline ProbeResult explosion_probe(const LazyTree& tree, double weight_budget,
                                   int gen_target, std::uint64_t node_budget) {
  if (gen_target < 1) throw InvalidParameter("probe: target must be >= 1");
  if (node_budget == 0 || !(weight_budget > 0))
    throw InvalidParameter("probe: budgets must be positive");
  ProbeResult out;
  detail::BestFirst search(tree, weight_budget, gen_target);
  while (true) {
    if (search.empty()) {
      // The realized ball within the budget was exhausted: no path exists,
      // and the lightest rejected extension is the exact frontier minimum.
      out.verdict = ProbeVerdict::Exceeded;
      out.value = search.min_rejected();
      break;
    }
    if (search.pops() >= node_budget) {
      out.verdict = ProbeVerdict::Inconclusive;
      out.value = search.frontier_min();
      break;
    }
    auto [gen, w] = search.pop_and_expand();
    if (gen == gen_target) {
      out.verdict = ProbeVerdict::Reached;
      out.value = w;
      break;
    }
  }
  out.nodes_expanded = search.pops();
  return out;
}

// Follow the minimum-weight child for n levels; returns the chosen edge
// weights (shorter if trimming leaves a node childless).
inline std::vector<double> greedy_path(const LazyTree& tree, int n) {
  if (tree.kind() != TreeKind::SphericallySymmetric)
    throw InvalidParameter("greedy_path: requires a spherically symmetric tree");
  if (n < 1) throw InvalidParameter("greedy_path: n must be >= 1");
  std::vector<double> out;
  NodeAddress node;
  for (int level = 0; level < n; ++level) {
    auto edges = child_edges(tree, node);
    if (edges.empty()) break;
    const WeightedEdge* best = &edges.front();
    for (const auto& e : edges)
      if (e.weight < best->weight) best = &e;
    out.push_back(best->weight);
    node = node.child(best->index);
  }
  return out;
}

// Exact minimum over all root-to-generation-n paths by full enumeration.
// Refuses when the number of paths exceeds 10^6.
inline double exhaustive_min_path(const ExplicitTree& tree, int n) {
  if (n < 1) throw InvalidParameter("exhaustive: n must be >= 1");
  // Count paths level by level first.
  std::vector<std::uint32_t> level = {0};
  for (int g = 0; g < n; ++g) {
    std::vector<std::uint32_t> next;
    for (auto id : level)
      for (const auto& e : tree.children[id]) next.push_back(e.child);
    if (next.size() > 1'000'000)
      throw PathCountOverflow("exhaustive: more than 1e6 paths");
    level = std::move(next);
    if (level.empty()) return kInf;
  }
  // Depth-first accumulation.
  double best = kInf;
  struct Item {
    std::uint32_t id;
    int gen;
    double total;
  };
  std::vector<Item> stack = {{0, 0, 0.0}};
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    if (it.gen == n) {
      if (it.total < best) best = it.total;
      continue;
    }
    for (const auto& e : tree.children[it.id])
      stack.push_back({e.child, it.gen + 1, it.total + e.weight});
  }
  return best;
}

}  // namespace fpt
