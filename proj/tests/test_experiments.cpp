#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "fpt/experiment.hpp"

using namespace fpt;
using Catch::Approx;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_speed_config() {
  ExperimentConfig cfg;
  cfg.experiment = "pwit-speed";
  cfg.tree = "pwit(const(1))";
  cfg.replicas = 4;
  cfg.seed = 7;
  cfg.budgets.n_max = 12;
  cfg.budgets.node_budget = 500000;
  return cfg;
}

}  // namespace

TEST_CASE("pwit-speed records and summary") {
  auto cfg = small_speed_config();
  auto path = std::string("speed_a.csv");
  json s = run_pwit_speed(cfg, path, 1);
  REQUIRE(s["replicas_completed"].get<int>() == 4);
  REQUIRE(s["alpha_reference"].get<double>() ==
          Approx(1.0 / std::exp(1.0)).margin(1e-6));
  REQUIRE(s["median_final_ratio"].get<double>() > 0.0);
  std::remove(path.c_str());
}

TEST_CASE("identical config and seed give byte-identical files") {
  auto cfg = small_speed_config();
  run_pwit_speed(cfg, "det_a.csv", 1);
  run_pwit_speed(cfg, "det_b.csv", 1);
  REQUIRE(slurp("det_a.csv") == slurp("det_b.csv"));
  std::remove("det_a.csv");
  std::remove("det_b.csv");
}

TEST_CASE("worker count does not change the records") {
  auto cfg = small_speed_config();
  run_pwit_speed(cfg, "thr_1.csv", 1);
  run_pwit_speed(cfg, "thr_4.csv", 4);
  REQUIRE(slurp("thr_1.csv") == slurp("thr_4.csv"));
  std::remove("thr_1.csv");
  std::remove("thr_4.csv");
}

TEST_CASE("the header round-trips the configuration") {
  auto cfg = small_speed_config();
  run_pwit_speed(cfg, "hdr.csv", 1);
  std::ifstream in("hdr.csv");
  ExperimentConfig back = parse_config_header(in);
  REQUIRE(back.experiment == cfg.experiment);
  REQUIRE(back.tree == cfg.tree);
  REQUIRE(back.replicas == cfg.replicas);
  REQUIRE(back.seed == cfg.seed);
  REQUIRE(back.budgets.node_budget == cfg.budgets.node_budget);
  REQUIRE(back.budgets.weight_budget == cfg.budgets.weight_budget);
  REQUIRE(back.budgets.n_max == cfg.budgets.n_max);
  REQUIRE(back.format == cfg.format);
  std::remove("hdr.csv");
}

TEST_CASE("summary statistics recompute from the CSV records") {
  auto cfg = small_speed_config();
  json s = run_pwit_speed(cfg, "recompute.csv", 2);
  std::ifstream in("recompute.csv");
  (void)parse_config_header(in);
  std::string line;
  std::getline(in, line);  // column header
  std::map<int, double> final_m;
  while (std::getline(in, line)) {
    std::stringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');
    int replica = std::stoi(cell);
    std::getline(row, cell, ',');
    int n = std::stoi(cell);
    std::getline(row, cell, ',');
    double m = std::stod(cell);
    if (n == cfg.budgets.n_max) final_m[replica] = m / n;
  }
  std::vector<double> ratios;
  for (auto& [r, v] : final_m) ratios.push_back(v);
  REQUIRE(detail::median(ratios) ==
          Approx(s["median_final_ratio"].get<double>()).margin(1e-12));
  std::remove("recompute.csv");
}

TEST_CASE("jsonl format mirrors the records") {
  auto cfg = small_speed_config();
  cfg.format = "jsonl";
  run_pwit_speed(cfg, "records.jsonl", 1);
  std::ifstream in("records.jsonl");
  std::string line;
  REQUIRE(std::getline(in, line));
  json hdr = json::parse(line);
  REQUIRE(hdr["config"]["experiment"] == "pwit-speed");
  int rows = 0;
  while (std::getline(in, line)) {
    json rec = json::parse(line);
    REQUIRE(rec.contains("m_n"));
    ++rows;
  }
  REQUIRE(rows == 4 * 12);
  std::remove("records.jsonl");
}

TEST_CASE("explosion experiment aggregates verdicts") {
  ExperimentConfig cfg;
  cfg.experiment = "ssym-explosion";
  cfg.tree = "ssym(f=poly(2), g=exp(1))";
  cfg.replicas = 6;
  cfg.seed = 5;
  cfg.gen_target = 60;
  cfg.budgets.weight_budget = 3.0;
  cfg.budgets.node_budget = 2000000;
  json s = run_ssym_explosion(cfg, "expl.csv", 2);
  REQUIRE(s["reached"].get<int>() + s["exceeded"].get<int>() +
              s["inconclusive"].get<int>() ==
          6);
  REQUIRE(s["fraction_reached"].get<double>() >= 0.5);  // explosive regime
  std::remove("expl.csv");
}

TEST_CASE("stick experiment writes nested heights") {
  ExperimentConfig cfg;
  cfg.experiment = "stick-height";
  cfg.ell = "invpow(0.5)";
  cfg.replicas = 3;
  cfg.seed = 2;
  cfg.ns = {100, 1000};
  json s = run_stick_height(cfg, "stick.csv", 2);
  double h100 = s["median_height"]["100"].get<double>();
  double h1000 = s["median_height"]["1000"].get<double>();
  REQUIRE(h100 > 0.0);
  REQUIRE(h1000 >= h100);
  std::remove("stick.csv");
}

TEST_CASE("sublinear experiment classifies and tabulates") {
  ExperimentConfig cfg;
  cfg.experiment = "sublinear";
  cfg.intensity = "supexp()";
  cfg.replicas = 4;
  cfg.seed = 3;
  cfg.ns = {2, 3, 4};
  cfg.budgets.node_budget = 300000;
  json s = run_sublinear(cfg, "sub.csv", 2);
  REQUIRE(s["classification"] == "super-exponential");
  REQUIRE(s["median_ratio"].contains("2"));
  std::remove("sub.csv");
}

TEST_CASE("counterexample runs report the block facts") {
  ExperimentConfig cfg;
  cfg.experiment = "counterexample";
  cfg.which = "41";
  cfg.replicas = 40;
  cfg.seed = 11;
  cfg.budgets.node_budget = 100000;
  json s = run_counterexample(cfg);
  REQUIRE(s["xi"][0].get<int>() == 4);
  REQUIRE(s["path_escape_probability"].get<double>() == Approx(0.4499).margin(5e-4));
  // Every path across the first block carries unit weight with probability
  // at least 1 - eps_1 = 1/2; empirically comfortably above 0.3.
  REQUIRE(s["fraction_block_weight_ge_1"].get<double>() > 0.3);
}
