// fpt-lab: batch experiments for first-passage growth on random infinite
// trees. Subcommands run canned experiments (CSV/JSONL records plus a JSON
// summary on stdout) or evaluate rate/criterion numerics directly.
// Exit codes: 0 ok, 2 specification parse error, 3 budget-wide failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fpt/constructions.hpp"
#include "fpt/criteria.hpp"
#include "fpt/experiment.hpp"
#include "fpt/parser.hpp"
#include "fpt/rates.hpp"

using fpt::json;

namespace {

struct Opts {
  std::uint64_t seed = 1;
  int replicas = 30;
  int threads = 0;
  std::string out = "fpt-records.csv";
  std::string format = "csv";
  std::uint64_t node_budget = 5'000'000;
  double weight_budget = fpt::kInf;
  std::string config_file;

  std::string tree, intensity, dist, fspec, ell, which;
  std::string ns_arg, a_arg, tail_arg, build_arg, controlled_c, scan_c, dset_n;
  int n_max = 40;
  int gen_target = 400;
  int depth_k = 5;
  int levels = 0;
  bool want_alpha = false;
};

void add_global(CLI::App* cmd, Opts& o) {
  cmd->add_option("--seed", o.seed, "base seed; replica r uses a derived stream");
  cmd->add_option("--replicas", o.replicas, "independent replicas");
  cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)");
  cmd->add_option("--out", o.out, "record file path");
  cmd->add_option("--format", o.format, "csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  cmd->add_option("--node-budget", o.node_budget, "max expansions per replica");
  cmd->add_option("--weight-budget", o.weight_budget, "max path weight");
  cmd->add_option("--config", o.config_file,
                  "key=value or JSON config file; flags take precedence");
}

// key=value lines or one JSON object. Command-line flags win; the file fills
// in only values the user did not set.
void apply_config_file(Opts& o, const CLI::App* cmd) {
  std::ifstream in(o.config_file);
  if (!in) throw fpt::Error("cannot open config file: " + o.config_file);
  std::map<std::string, std::string> kv;
  if (static_cast<char>(in.peek()) == '{') {
    json j;
    in >> j;
    for (auto& [k, v] : j.items())
      kv[k] = v.is_string() ? v.get<std::string>() : v.dump();
  } else {
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      auto eq = line.find('=');
      if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
  }
  auto file_wins = [&](const char* flag) { return cmd->count(flag) == 0; };
  if (kv.count("seed") && file_wins("--seed")) o.seed = std::stoull(kv["seed"]);
  if (kv.count("replicas") && file_wins("--replicas"))
    o.replicas = std::stoi(kv["replicas"]);
  if (kv.count("threads") && file_wins("--threads"))
    o.threads = std::stoi(kv["threads"]);
  if (kv.count("out") && file_wins("--out")) o.out = kv["out"];
  if (kv.count("format") && file_wins("--format")) o.format = kv["format"];
  if (kv.count("node_budget") && file_wins("--node-budget"))
    o.node_budget = std::stoull(kv["node_budget"]);
  if (kv.count("weight_budget") && file_wins("--weight-budget"))
    o.weight_budget =
        kv["weight_budget"] == "inf" ? fpt::kInf : std::stod(kv["weight_budget"]);
  if (kv.count("tree") && file_wins("--tree")) o.tree = kv["tree"];
  if (kv.count("intensity") && file_wins("--intensity")) o.intensity = kv["intensity"];
  if (kv.count("ell") && file_wins("--ell")) o.ell = kv["ell"];
  if (kv.count("n_max") && file_wins("--n-max")) o.n_max = std::stoi(kv["n_max"]);
  if (kv.count("gen_target") && file_wins("--gen-target"))
    o.gen_target = std::stoi(kv["gen_target"]);
}

fpt::ExperimentConfig make_config(const Opts& o, const std::string& name) {
  fpt::ExperimentConfig cfg;
  cfg.experiment = name;
  cfg.tree = o.tree;
  cfg.intensity = o.intensity;
  cfg.ell = o.ell;
  cfg.which = o.which;
  cfg.replicas = o.replicas;
  cfg.seed = o.seed;
  cfg.budgets.node_budget = o.node_budget;
  cfg.budgets.weight_budget = o.weight_budget;
  cfg.budgets.n_max = o.n_max;
  cfg.gen_target = o.gen_target;
  cfg.depth_k = o.depth_k;
  cfg.format = o.format;
  if (!o.ns_arg.empty()) cfg.ns = fpt::detail::split_ints(o.ns_arg);
  return cfg;
}

json run_rate(const Opts& o) {
  json summary;
  fpt::IntensityFunction lam = fpt::parse_intensity(o.intensity);
  summary["intensity"] = o.intensity;
  if (!o.a_arg.empty()) {
    std::stringstream ss(o.a_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      double a = std::stod(tok);
      auto m = fpt::mu_detail(lam, a);
      summary["mu"].push_back({{"a", a}, {"mu", m.value}, {"D_star", m.d_star}});
    }
  }
  if (o.want_alpha) summary["alpha"] = fpt::speed_alpha(lam);
  if (!o.tail_arg.empty()) {
    auto comma = o.tail_arg.find(',');
    if (comma == std::string::npos) throw fpt::InvalidParameter("--tail needs n,a");
    int n = std::stoi(o.tail_arg.substr(0, comma));
    double a = std::stod(o.tail_arg.substr(comma + 1));
    summary["tail"] = {{"n", n}, {"a", a}, {"bound", fpt::tail_bound(lam, a, n)}};
  }
  return summary;
}

json run_criteria(const Opts& o, const CLI::App* cmd) {
  json summary;
  if (cmd->count("--gsmall")) {
    auto gd = fpt::parse_distribution(o.dist);
    auto f = fpt::parse_branching(o.fspec);
    auto rep = fpt::g_small_partial_sums(gd, f, o.n_max);
    summary["gsmall"] = {{"partial_sum", rep.partial_sums.back()},
                         {"tail_exponent_fit", rep.tail_exponent_fit},
                         {"increment_ratio", rep.increment_ratio},
                         {"verdict", fpt::to_string(rep.verdict_hint)}};
    if (auto dec = f.first_decrease(o.n_max))
      summary["warning"] = "f decreases at generation " + std::to_string(*dec);
  }
  if (cmd->count("--dichotomy")) {
    auto lam = fpt::parse_intensity(o.intensity);
    auto d = fpt::growth_dichotomy(lam, 16.0, 64);
    const char* kind = d.kind == fpt::GrowthKind::ZeroNearOrigin ? "zero-near-origin"
                       : d.kind == fpt::GrowthKind::ExponentiallyDominated
                           ? "exponentially-dominated"
                           : "super-exponential";
    summary["dichotomy"] = {{"kind", kind}, {"value", d.value}, {"exact", d.exact}};
  }
  if (cmd->count("--controlled")) {
    auto gd = fpt::parse_distribution(o.dist);
    auto rep = fpt::check_controlled(gd, std::stod(o.controlled_c), 1e-6, 1.0, 200);
    summary["controlled"] = {{"liminf", rep.liminf_est}, {"limsup", rep.limsup_est}};
  }
  if (cmd->count("--dset")) {
    auto ell = fpt::parse_length(o.ell);
    summary["dset"] = fpt::dominating_set_D(ell, std::stoi(o.dset_n));
  }
  if (cmd->count("--stick-sums")) {
    auto ell = fpt::parse_length(o.ell);
    auto s = fpt::stick_summability(ell, o.n_max);
    summary["stick_sums"] = {
        {"dyadic_sum", s.dyadic.partial_sums.back()},
        {"dyadic_verdict", fpt::to_string(s.dyadic.verdict_hint)},
        {"harmonic_sum", s.harmonic.partial_sums.back()},
        {"harmonic_verdict", fpt::to_string(s.harmonic.verdict_hint)},
        {"consistent", s.consistent}};
  }
  if (cmd->count("--scan-cond")) {
    auto gd = fpt::parse_distribution(o.dist);
    double c = std::stod(o.scan_c);
    std::vector<double> xs;
    for (int i = 1; i <= 40; ++i) xs.push_back(std::pow(0.6, i));
    auto r = fpt::cond_scanner(gd, c, xs);
    const char* kind = r.kind == fpt::CondKind::Cond1Witness   ? "cond1"
                       : r.kind == fpt::CondKind::Cond2Witness ? "cond2"
                                                               : "none";
    summary["scan"] = {{"kind", kind},
                       {"limsup_upper", r.limsup_upper},
                       {"liminf_lower", r.liminf_lower}};
  }
  if (cmd->count("--build")) {
    if (o.build_arg == "41") {
      auto c = fpt::build_paper41({2, 3, 4}, o.levels > 0 ? o.levels : 1);
      summary["paper41"] = {{"n", c.n}, {"a", c.a}, {"xi", c.xi}};
    } else if (o.build_arg == "42") {
      auto c = fpt::build_paper42({2, 4, 8, 16, 32, 64, 128, 256, 512, 1024},
                                  o.levels > 0 ? o.levels : 10);
      summary["paper42"] = {{"n", c.n}, {"a", c.a}, {"bands", c.band_value}};
    } else {
      throw fpt::InvalidParameter("--build takes 41 or 42");
    }
  }
  return summary;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"first-passage percolation laboratory for random infinite trees"};
  app.require_subcommand(1);
  Opts o;

  auto* speed = app.add_subcommand("pwit-speed", "m_n profiles and speed on a tree");
  add_global(speed, o);
  speed->add_option("--tree", o.tree, "tree spec, e.g. pwit(const(1))");
  speed->add_option("--n-max", o.n_max, "deepest generation to record");

  auto* expl = app.add_subcommand("ssym-explosion", "explosion probes on a tree");
  add_global(expl, o);
  expl->add_option("--tree", o.tree, "tree spec, e.g. ssym(f=poly(2), g=exp(1))");
  expl->add_option("--gen-target", o.gen_target, "target generation");

  auto* stick = app.add_subcommand("stick-height", "stick-breaking tree heights");
  add_global(stick, o);
  stick->add_option("--ell", o.ell, "length spec, e.g. invpow(0.5)");
  stick->add_option("--profile", o.ns_arg, "checkpoint segment counts N1,N2,...");
  stick->add_option("--depth-k", o.depth_k, "genealogy depth for min-index column");

  auto* sub = app.add_subcommand("sublinear", "m_n/n table for a PWIT intensity");
  add_global(sub, o);
  sub->add_option("--intensity", o.intensity, "intensity spec, e.g. supexp()");
  sub->add_option("--ns", o.ns_arg, "generation list n1,n2,...");

  auto* ctr = app.add_subcommand("counterexample",
                                 "desk-scale runs of the separation constructions");
  add_global(ctr, o);
  ctr->add_option("--which", o.which, "41 or 42")->required();

  auto* rate = app.add_subcommand("rate", "Kingman rate numerics for an intensity");
  rate->add_option("--intensity", o.intensity, "intensity spec")->required();
  rate->add_option("--a", o.a_arg, "evaluate mu at these a values, comma separated");
  rate->add_flag("--alpha", o.want_alpha, "solve for the speed alpha");
  rate->add_option("--tail", o.tail_arg, "tail bound: n,a");

  auto* crit = app.add_subcommand("criteria", "static criterion checkers");
  crit->add_option("--g", o.dist, "weight distribution spec");
  crit->add_option("--f", o.fspec, "branching function spec");
  crit->add_option("--ell", o.ell, "length sequence spec");
  crit->add_option("--intensity", o.intensity, "intensity spec");
  crit->add_flag("--gsmall", "G-small partial sums (needs --g, --f)");
  crit->add_flag("--dichotomy", "growth dichotomy (needs --intensity)");
  crit->add_option("--controlled", o.controlled_c,
                   "controlled-near-0 ratios at this c (needs --g)");
  crit->add_option("--dset", o.dset_n, "D-set up to N (needs --ell)");
  crit->add_flag("--stick-sums", "dyadic vs harmonic sums (needs --ell)");
  crit->add_option("--scan-cond", o.scan_c, "ratio-condition scan at this c (needs --g)");
  crit->add_option("--build", o.build_arg, "run construction 41 or 42");
  crit->add_option("--n", o.n_max, "term/index budget N");
  crit->add_option("--levels", o.levels, "construction levels");

  CLI11_PARSE(app, argc, argv);

  try {
    json summary;
    if (speed->parsed()) {
      if (!o.config_file.empty()) apply_config_file(o, speed);
      if (o.tree.empty()) throw fpt::InvalidParameter("pwit-speed needs --tree");
      summary = fpt::run_pwit_speed(make_config(o, "pwit-speed"), o.out, o.threads);
      if (summary["replicas_completed"].get<int>() == 0) {
        std::cout << summary.dump(2) << "\n";
        return 3;
      }
    } else if (expl->parsed()) {
      if (!o.config_file.empty()) apply_config_file(o, expl);
      if (o.tree.empty()) throw fpt::InvalidParameter("ssym-explosion needs --tree");
      summary = fpt::run_ssym_explosion(make_config(o, "ssym-explosion"), o.out,
                                        o.threads);
      if (summary["inconclusive"].get<int>() == o.replicas) {
        std::cout << summary.dump(2) << "\n";
        return 3;
      }
    } else if (stick->parsed()) {
      if (!o.config_file.empty()) apply_config_file(o, stick);
      if (o.ell.empty()) throw fpt::InvalidParameter("stick-height needs --ell");
      summary = fpt::run_stick_height(make_config(o, "stick-height"), o.out,
                                      o.threads);
    } else if (sub->parsed()) {
      if (!o.config_file.empty()) apply_config_file(o, sub);
      if (o.intensity.empty()) throw fpt::InvalidParameter("sublinear needs --intensity");
      summary = fpt::run_sublinear(make_config(o, "sublinear"), o.out, o.threads);
      if (summary["median_ratio"].empty()) {
        std::cout << summary.dump(2) << "\n";
        return 3;
      }
    } else if (ctr->parsed()) {
      if (!o.config_file.empty()) apply_config_file(o, ctr);
      summary = fpt::run_counterexample(make_config(o, "counterexample"));
    } else if (rate->parsed()) {
      summary = run_rate(o);
    } else if (crit->parsed()) {
      summary = run_criteria(o, crit);
    }
    std::cout << summary.dump(2) << "\n";
  } catch (const fpt::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const fpt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
