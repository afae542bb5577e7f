#pragma once

// Experiment orchestration: replica fan-out with derived seeds, CSV/JSONL
// persistence with a self-describing header, and summary statistics. Output
// records are sorted by (replica, n) before writing, so files are
// byte-identical across reruns and across worker counts. Wall-clock timing
// lives only in the summary, never in the record files.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "fpt/criteria.hpp"
#include "fpt/errors.hpp"
#include "fpt/parser.hpp"
#include "fpt/rates.hpp"
#include "fpt/search.hpp"
#include "fpt/stick.hpp"

namespace fpt {

using json = nlohmann::json;

struct Budgets {
  std::uint64_t node_budget = 5'000'000;
  double weight_budget = kInf;
  int n_max = 40;
};

struct ExperimentConfig {
  std::string experiment;  // pwit-speed | ssym-explosion | stick-height |
                           // sublinear | counterexample
  std::string tree;        // tree spec (pwit-speed, ssym-explosion)
  std::string intensity;   // intensity spec (sublinear)
  std::string ell;         // length spec (stick-height)
  std::string which;       // 41 | 42 (counterexample)
  int replicas = 30;
  std::uint64_t seed = 1;
  Budgets budgets;
  int gen_target = 400;
  std::vector<int> ns;     // checkpoints (stick-height, sublinear)
  int depth_k = 5;         // genealogy depth reported by stick-height
  std::string format = "csv";
};

namespace detail {

inline std::string fmt(double v) {
  if (v == kInf) return "inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

inline std::vector<int> split_ints(const std::string& s) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    out.push_back(std::stoi(s.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

inline double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Run fn(replica) over a worker pool; fn must not touch shared state.
template <class Fn>
void parallel_replicas(int replicas, int threads, Fn&& fn) {
  int workers = threads > 0 ? threads
                            : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<int>(workers, replicas);
  if (workers <= 1) {
    for (int r = 0; r < replicas; ++r) fn(r);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int r = next.fetch_add(1); r < replicas; r = next.fetch_add(1)) fn(r);
    });
  for (auto& t : pool) t.join();
}

}  // namespace detail

inline std::vector<std::pair<std::string, std::string>> serialize_config(
    const ExperimentConfig& c) {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("schema", "1");
  kv.emplace_back("experiment", c.experiment);
  if (!c.tree.empty()) kv.emplace_back("tree", c.tree);
  if (!c.intensity.empty()) kv.emplace_back("intensity", c.intensity);
  if (!c.ell.empty()) kv.emplace_back("ell", c.ell);
  if (!c.which.empty()) kv.emplace_back("which", c.which);
  kv.emplace_back("replicas", std::to_string(c.replicas));
  kv.emplace_back("seed", std::to_string(c.seed));
  kv.emplace_back("node_budget", std::to_string(c.budgets.node_budget));
  kv.emplace_back("weight_budget", detail::fmt(c.budgets.weight_budget));
  kv.emplace_back("n_max", std::to_string(c.budgets.n_max));
  kv.emplace_back("gen_target", std::to_string(c.gen_target));
  if (!c.ns.empty()) kv.emplace_back("ns", detail::join_ints(c.ns));
  kv.emplace_back("depth_k", std::to_string(c.depth_k));
  kv.emplace_back("format", c.format);
  return kv;
}

inline ExperimentConfig parse_config_header(std::istream& in) {
  ExperimentConfig c;
  c.format.clear();
  std::string line;
  while (in.peek() == '#' && std::getline(in, line)) {
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(2, eq - 2);
    std::string val = line.substr(eq + 1);
    if (key == "experiment") c.experiment = val;
    else if (key == "tree") c.tree = val;
    else if (key == "intensity") c.intensity = val;
    else if (key == "ell") c.ell = val;
    else if (key == "which") c.which = val;
    else if (key == "replicas") c.replicas = std::stoi(val);
    else if (key == "seed") c.seed = std::stoull(val);
    else if (key == "node_budget") c.budgets.node_budget = std::stoull(val);
    else if (key == "weight_budget")
      c.budgets.weight_budget = val == "inf" ? kInf : std::stod(val);
    else if (key == "n_max") c.budgets.n_max = std::stoi(val);
    else if (key == "gen_target") c.gen_target = std::stoi(val);
    else if (key == "ns") c.ns = detail::split_ints(val);
    else if (key == "depth_k") c.depth_k = std::stoi(val);
    else if (key == "format") c.format = val;
  }
  return c;
}

class RecordWriter {
 public:
  RecordWriter(const std::string& path, const ExperimentConfig& cfg,
               std::vector<std::string> columns)
      : jsonl_(cfg.format == "jsonl"), columns_(std::move(columns)) {
    out_.open(path, std::ios::binary);
    if (!out_) throw Error("cannot open output file: " + path);
    if (jsonl_) {
      json hdr;
      for (const auto& [k, v] : serialize_config(cfg)) hdr[k] = v;
      out_ << json{{"config", hdr}}.dump() << "\n";
    } else {
      for (const auto& [k, v] : serialize_config(cfg))
        out_ << "# " << k << "=" << v << "\n";
      for (std::size_t i = 0; i < columns_.size(); ++i)
        out_ << (i ? "," : "") << columns_[i];
      out_ << "\n";
    }
  }

  void row(const std::vector<std::string>& cells) {
    if (jsonl_) {
      json o;
      for (std::size_t i = 0; i < cells.size(); ++i) o[columns_[i]] = cells[i];
      out_ << o.dump() << "\n";
    } else {
      for (std::size_t i = 0; i < cells.size(); ++i)
        out_ << (i ? "," : "") << cells[i];
      out_ << "\n";
    }
  }

 private:
  std::ofstream out_;
  bool jsonl_;
  std::vector<std::string> columns_;
};

inline std::uint64_t replica_seed(std::uint64_t seed, int replica) {
  return RandomStream(seed).child(0x52u).child(static_cast<std::uint64_t>(replica)).state();
}

// ---------------------------------------------------------------------------

// m_n profiles on a tree spec; summary reports median m_{n_max}/n_max and,
// for PWIT trees with finite rates, the theoretical speed for reference.
inline json run_pwit_speed(const ExperimentConfig& cfg, const std::string& out_path,
                           int threads = 0) {
  auto t0 = std::chrono::steady_clock::now();
  const int n_max = cfg.budgets.n_max;
  std::vector<PassageProfile> profiles(static_cast<std::size_t>(cfg.replicas));
  detail::parallel_replicas(cfg.replicas, threads, [&](int r) {
    LazyTree tree = parse_tree(cfg.tree, replica_seed(cfg.seed, r));
    profiles[static_cast<std::size_t>(r)] = first_passage_profile(
        tree, n_max, cfg.budgets.node_budget, cfg.budgets.weight_budget);
  });

  RecordWriter w(out_path, cfg,
                 {"replica_id", "n", "m_n", "nodes_expanded", "stop_reason"});
  std::vector<double> final_ratio;
  int exhausted = 0;
  for (int r = 0; r < cfg.replicas; ++r) {
    const auto& p = profiles[static_cast<std::size_t>(r)];
    const char* stop = p.stop_reason == StopReason::Completed ? "completed"
                       : p.stop_reason == StopReason::NodeBudget ? "node_budget"
                                                                 : "weight_budget";
    for (int n = 1; n <= p.max_gen_recorded; ++n) {
      if (std::isnan(p.m[static_cast<std::size_t>(n)])) continue;
      w.row({std::to_string(r), std::to_string(n),
             detail::fmt(p.m[static_cast<std::size_t>(n)]),
             std::to_string(p.nodes_expanded), stop});
    }
    if (p.max_gen_recorded >= n_max)
      final_ratio.push_back(p.m[static_cast<std::size_t>(n_max)] / n_max);
    else
      ++exhausted;
  }

  json summary;
  summary["experiment"] = cfg.experiment;
  summary["replicas"] = cfg.replicas;
  summary["replicas_completed"] = cfg.replicas - exhausted;
  summary["median_final_ratio"] = detail::median(final_ratio);
  try {
    LazyTree probe_tree = parse_tree(cfg.tree, 0);
    if (probe_tree.kind() == TreeKind::Pwit)
      summary["alpha_reference"] = speed_alpha(probe_tree.intensity());
  } catch (const Error&) {
    // no finite rate for this intensity; reference omitted
  }
  summary["timing_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - t0)
          .count();
  return summary;
}

// Explosion probes; summary reports the fraction of Reached verdicts.
inline json run_ssym_explosion(const ExperimentConfig& cfg,
                               const std::string& out_path, int threads = 0) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<ProbeResult> results(static_cast<std::size_t>(cfg.replicas));
  detail::parallel_replicas(cfg.replicas, threads, [&](int r) {
    LazyTree tree = parse_tree(cfg.tree, replica_seed(cfg.seed, r));
    results[static_cast<std::size_t>(r)] =
        explosion_probe(tree, cfg.budgets.weight_budget, cfg.gen_target,
                        cfg.budgets.node_budget);
  });

  RecordWriter w(out_path, cfg, {"replica_id", "verdict", "value", "nodes_expanded"});
  int reached = 0, exceeded = 0, inconclusive = 0;
  for (int r = 0; r < cfg.replicas; ++r) {
    const auto& p = results[static_cast<std::size_t>(r)];
    const char* v = p.verdict == ProbeVerdict::Reached      ? "reached"
                    : p.verdict == ProbeVerdict::Exceeded   ? "exceeded"
                                                            : "inconclusive";
    (p.verdict == ProbeVerdict::Reached      ? reached
     : p.verdict == ProbeVerdict::Exceeded   ? exceeded
                                             : inconclusive)++;
    w.row({std::to_string(r), v, detail::fmt(p.value), std::to_string(p.nodes_expanded)});
  }
  json summary;
  summary["experiment"] = cfg.experiment;
  summary["replicas"] = cfg.replicas;
  summary["reached"] = reached;
  summary["exceeded"] = exceeded;
  summary["inconclusive"] = inconclusive;
  summary["fraction_reached"] = static_cast<double>(reached) / cfg.replicas;
  summary["timing_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - t0)
          .count();
  return summary;
}

// Stick-breaking heights at nested checkpoints.
inline json run_stick_height(const ExperimentConfig& cfg,
                             const std::string& out_path, int threads = 0) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<int> ns = cfg.ns.empty() ? std::vector<int>{1000, 100000} : cfg.ns;
  std::sort(ns.begin(), ns.end());
  const int n_total = ns.back();
  struct Row {
    int n;
    double height, td, min_index;
  };
  std::vector<std::vector<Row>> rows(static_cast<std::size_t>(cfg.replicas));
  LengthSequence ell = parse_length(cfg.ell);
  detail::parallel_replicas(cfg.replicas, threads, [&](int r) {
    RandomStream stream =
        RandomStream::from_state(replica_seed(cfg.seed, r));
    SegmentTree t = build_tree(ell, n_total, stream);
    auto td = td_per_segment(t);
    auto profile = index_growth_profile(t);
    for (int n : ns) {
      double h = height(t, n);
      double tdm = 0.0;
      for (int i = 1; i <= n; ++i) tdm = std::max(tdm, td[static_cast<std::size_t>(i)]);
      double mi = cfg.depth_k < static_cast<int>(profile.size())
                      ? static_cast<double>(profile[static_cast<std::size_t>(cfg.depth_k)])
                      : std::numeric_limits<double>::quiet_NaN();
      rows[static_cast<std::size_t>(r)].push_back({n, h, tdm, mi});
    }
  });

  RecordWriter w(out_path, cfg,
                 {"run_id", "N", "height", "td_max", "min_index_depth_k"});
  std::map<int, std::vector<double>> heights;
  for (int r = 0; r < cfg.replicas; ++r)
    for (const auto& row : rows[static_cast<std::size_t>(r)]) {
      w.row({std::to_string(r), std::to_string(row.n), detail::fmt(row.height),
             detail::fmt(row.td), detail::fmt(row.min_index)});
      heights[row.n].push_back(row.height);
    }
  json summary;
  summary["experiment"] = cfg.experiment;
  summary["ell"] = cfg.ell;
  for (auto& [n, hs] : heights)
    summary["median_height"][std::to_string(n)] = detail::median(hs);
  summary["timing_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - t0)
          .count();
  return summary;
}

// m_n / n across a list of n for a PWIT intensity, with the dichotomy
// classification and the fitted trend of the medians.
inline json run_sublinear(const ExperimentConfig& cfg, const std::string& out_path,
                          int threads = 0) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<int> ns = cfg.ns.empty() ? std::vector<int>{5, 10, 20} : cfg.ns;
  std::sort(ns.begin(), ns.end());
  IntensityFunction lam = parse_intensity(cfg.intensity);
  GrowthDichotomy cls = growth_dichotomy(lam, 16.0, 64);

  const int n_max = ns.back();
  std::vector<PassageProfile> profiles(static_cast<std::size_t>(cfg.replicas));
  detail::parallel_replicas(cfg.replicas, threads, [&](int r) {
    LazyTree tree = LazyTree::pwit(lam, replica_seed(cfg.seed, r));
    profiles[static_cast<std::size_t>(r)] = first_passage_profile(
        tree, n_max, cfg.budgets.node_budget, cfg.budgets.weight_budget);
  });

  RecordWriter w(out_path, cfg,
                 {"replica_id", "n", "m_n", "ratio", "nodes_expanded", "stop_reason"});
  std::map<int, std::vector<double>> ratios;
  int budget_stops = 0;
  for (int r = 0; r < cfg.replicas; ++r) {
    const auto& p = profiles[static_cast<std::size_t>(r)];
    if (p.stop_reason == StopReason::NodeBudget) ++budget_stops;
    const char* stop = p.stop_reason == StopReason::Completed ? "completed"
                       : p.stop_reason == StopReason::NodeBudget ? "node_budget"
                                                                 : "weight_budget";
    for (int n : ns) {
      if (n > p.max_gen_recorded || std::isnan(p.m[static_cast<std::size_t>(n)]))
        continue;
      double m = p.m[static_cast<std::size_t>(n)];
      w.row({std::to_string(r), std::to_string(n), detail::fmt(m),
             detail::fmt(m / n), std::to_string(p.nodes_expanded), stop});
      ratios[n].push_back(m / n);
    }
  }

  json summary;
  summary["experiment"] = cfg.experiment;
  summary["classification"] = cls.kind == GrowthKind::SuperExponential
                                  ? "super-exponential"
                              : cls.kind == GrowthKind::ZeroNearOrigin
                                  ? "zero-near-origin"
                                  : "exponentially-dominated";
  summary["budget_stopped_replicas"] = budget_stops;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (auto& [n, rs] : ratios) {
    double med = detail::median(rs);
    summary["median_ratio"][std::to_string(n)] = med;
    summary["samples"][std::to_string(n)] = rs.size();
    sx += n; sy += med; sxx += static_cast<double>(n) * n; sxy += n * med;
    ++cnt;
  }
  if (cnt >= 2) {
    double denom = cnt * sxx - sx * sx;
    summary["ratio_trend_slope"] = denom != 0 ? (cnt * sxy - sx * sy) / denom : 0.0;
  }
  summary["timing_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - t0)
          .count();
  return summary;
}

// Desk-scale reproduction of the two separation constructions.
inline json run_counterexample(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  json summary;
  summary["experiment"] = cfg.experiment;
  summary["which"] = cfg.which;
  if (cfg.which == "41") {
    // One level is the computable regime; the next depth requirement is
    // astronomically beyond the percolation-depth cap.
    Paper41 c = build_paper41({2, 3, 4}, 1);
    summary["n"] = c.n;
    summary["a"] = c.a;
    summary["xi"] = c.xi;
    auto p4 = percolation_path_probabilities(2, 1, c.xi[0]);
    summary["path_escape_probability"] = p4[1];
    auto rep = g_small_partial_sums(c.g0, c.f, static_cast<int>(c.n[1]) - 1);
    summary["gsmall_partial_sum"] = rep.partial_sums.back();
    int unit_weight_blocks = 0;
    const int replicas = cfg.replicas;
    for (int r = 0; r < replicas; ++r) {
      LazyTree tree = LazyTree::spherically_symmetric(
          c.f, c.g0, replica_seed(cfg.seed, r));
      auto profile = first_passage_profile(tree, static_cast<int>(c.n[1]),
                                           cfg.budgets.node_budget);
      if (profile.max_gen_recorded >= c.n[1] &&
          profile.m[static_cast<std::size_t>(c.n[1])] >= 1.0)
        ++unit_weight_blocks;
    }
    summary["replicas"] = replicas;
    summary["fraction_block_weight_ge_1"] =
        static_cast<double>(unit_weight_blocks) / replicas;
  } else if (cfg.which == "42") {
    Paper42 c = build_paper42({2, 4, 8, 16, 32, 64, 128, 256, 512, 1024}, 10);
    summary["n"] = c.n;
    summary["a"] = c.a;
    auto rep = g_small_partial_sums(c.g0, c.f, static_cast<int>(c.n[8]) - 1);
    summary["gsmall_partial_sum"] = rep.partial_sums.back();
    summary["gsmall_verdict"] = to_string(rep.verdict_hint);
    int reached = 0;
    for (int r = 0; r < cfg.replicas; ++r) {
      LazyTree tree = LazyTree::spherically_symmetric(
          c.f, c.g0, replica_seed(cfg.seed, r));
      auto probe = explosion_probe(tree, 1.0, static_cast<int>(c.n[7]),
                                   cfg.budgets.node_budget);
      if (probe.verdict == ProbeVerdict::Reached) ++reached;
    }
    summary["replicas"] = cfg.replicas;
    summary["probe_target"] = c.n[7];
    summary["fraction_reached_weight_1"] =
        static_cast<double>(reached) / cfg.replicas;
  } else {
    throw InvalidParameter("counterexample: --which must be 41 or 42");
  }
  summary["timing_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - t0)
          .count();
  return summary;
}

}  // namespace fpt
