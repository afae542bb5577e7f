#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fpt/distribution.hpp"
#include "fpt/random.hpp"

using namespace fpt;
using Catch::Approx;

namespace {

// Kolmogorov-Smirnov distance of quantile(uniform) samples against the cdf.
double ks_distance(const WeightDistribution& d, int n, std::uint64_t seed) {
  RandomStream s(seed);
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    xs.push_back(d.quantile(s.uniform_at(static_cast<std::uint64_t>(i))));
  std::sort(xs.begin(), xs.end());
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double f = d.cdf(xs[static_cast<std::size_t>(i)]);
    worst = std::max(worst, std::abs(f - (i + 1.0) / n));
    worst = std::max(worst, std::abs(f - static_cast<double>(i) / n));
  }
  return worst;
}

void check_galois(const WeightDistribution& d, std::uint64_t seed,
                  double x_scale, bool exact) {
  RandomStream s(seed);
  for (int i = 0; i < 1000; ++i) {
    double x = x_scale * s.uniform_at(2 * static_cast<std::uint64_t>(i));
    double y = s.uniform_at(2 * static_cast<std::uint64_t>(i) + 1);
    double gx = d.cdf(x);
    double qy = d.quantile(y);
    if (exact) {
      REQUIRE((qy <= x) == (y <= gx));
    } else {
      // Skip razor-edge cases where double rounding decides the comparison.
      if (std::abs(y - gx) < 1e-12) continue;
      if (y <= gx) REQUIRE(qy <= x + 1e-12);
      if (qy <= x) REQUIRE(y <= gx + 1e-12);
    }
  }
}

}  // namespace

TEST_CASE("exponential closed forms") {
  auto d = make_exponential(1.0);
  REQUIRE(d.cdf(0.0) == 0.0);
  REQUIRE(d.quantile(1.0 - std::exp(-1.0)) == Approx(1.0).epsilon(1e-12));
  REQUIRE(d.quantile(1.0) == kInf);
  REQUIRE_THROWS_AS(make_exponential(0.0), InvalidParameter);
  REQUIRE_THROWS_AS(make_exponential(-2.0), InvalidParameter);
}

TEST_CASE("exponential sampling matches the analytic mean") {
  auto d = make_exponential(2.0);
  RandomStream s(11);
  const int n = 100000;
  double sum = 0;
  for (int i = 0; i < n; ++i) sum += d.quantile(s.uniform_at(static_cast<std::uint64_t>(i)));
  double sigma_mean = 0.5 / std::sqrt(static_cast<double>(n));
  REQUIRE(std::abs(sum / n - 0.5) < 3 * sigma_mean);
}

TEST_CASE("power law at zero") {
  auto u = make_power_law_zero(1.0, 1.0);
  REQUIRE(u.cdf(0.3) == Approx(0.3));
  auto d = make_power_law_zero(2.0, 1.0);
  REQUIRE(d.quantile(0.25) == Approx(0.5));
  auto capped = make_power_law_zero(2.0, 4.0);
  REQUIRE(capped.cdf(0.5) == 1.0);
  REQUIRE_THROWS_AS(make_power_law_zero(0.0, 1.0), InvalidParameter);
  REQUIRE_THROWS_AS(make_power_law_zero(1.0, -1.0), InvalidParameter);
}

TEST_CASE("quantile is the generalized inverse (Galois property)") {
  check_galois(make_exponential(1.0), 21, 3.0, false);
  check_galois(make_power_law_zero(2.0, 1.0), 22, 1.5, false);
  check_galois(make_degenerate(1.0), 23, 2.0, true);
  check_galois(make_step_distribution({1.0, 0.5, 0.25}, {1.0, 0.5, 0.125}), 24,
               2.0, true);
}

TEST_CASE("samples fit the distribution at desk scale") {
  // 99.9% KS quantile is about 1.95 / sqrt(n).
  REQUIRE(ks_distance(make_exponential(1.0), 10000, 31) < 1.95 / 100.0);
  REQUIRE(ks_distance(make_power_law_zero(2.0, 1.0), 10000, 32) < 1.95 / 100.0);
}

TEST_CASE("step distribution basics") {
  // G = 0.5 on [0.5, 1), 1 on [1, inf).
  auto d = make_step_distribution({1.0, 0.5}, {1.0, 0.5});
  REQUIRE(d.quantile(0.5) == 0.5);
  REQUIRE(d.quantile(0.500001) == 1.0);
  REQUIRE(d.cdf(0.75) == 0.5);
  REQUIRE(d.cdf(0.4999) == 0.0);  // default truncation below the last breakpoint
  REQUIRE(d.cdf(1.0) == 1.0);
  REQUIRE(d.support_lower == 0.5);

  SECTION("atoms") {
    auto atoms = d.step->atoms();
    REQUIRE(atoms.size() == 2);
    REQUIRE(atoms[0].first == 1.0);
    REQUIRE(atoms[0].second == Approx(0.5));
    REQUIRE(atoms[1].first == 0.5);
    REQUIRE(atoms[1].second == Approx(0.5));
  }

  SECTION("caller-provided tail rule") {
    auto t = make_step_distribution({1.0, 0.5}, {1.0, 0.5}, 0.25);
    REQUIRE(t.cdf(0.4999) == 0.25);
    REQUIRE(t.quantile(0.1) == 0.0);
  }
}

TEST_CASE("step distribution rejects non-monotone input") {
  REQUIRE_THROWS_AS(make_step_distribution({0.5, 1.0}, {0.5, 1.0}), InvalidParameter);
  REQUIRE_THROWS_AS(make_step_distribution({1.0, 0.5}, {0.5, 1.0}), InvalidParameter);
  REQUIRE_THROWS_AS(make_step_distribution({1.0, 1.0}, {1.0, 0.5}), InvalidParameter);
  REQUIRE_THROWS_AS(make_step_distribution({1.0}, {1.5}), InvalidParameter);
}

TEST_CASE("perturbation spreads one atom linearly") {
  auto step = make_step_distribution({1.0, 0.25}, {1.0, 0.5});
  auto d = perturb_continuous(step, 0.0);
  REQUIRE(d.cdf(1.0) == Approx(0.5));
  REQUIRE(d.cdf(1.5) == Approx(0.75));
  REQUIRE(d.cdf(2.0) == Approx(1.0));
  REQUIRE(d.cdf(1.25) == Approx(0.625));  // linear on [1, 2]
  REQUIRE(d.quantile(0.625) == Approx(1.25));
}

TEST_CASE("perturbation stays close to the step CDF") {
  auto step = make_step_distribution({1.0, 0.25, 0.0625}, {1.0, 0.5, 0.25});
  const double residual = 1e-3;
  auto d = perturb_continuous(step, residual);
  for (double a : {0.25, 0.0625}) {
    double before = step.cdf(a * (1 - 1e-9));
    REQUIRE(std::abs(d.cdf(a) - before) < residual);
  }
}

TEST_CASE("perturbation yields a strictly increasing CDF") {
  auto step = make_step_distribution({1.0, 0.25, 0.0625}, {1.0, 0.5, 0.25});
  auto d = perturb_continuous(step, 0.01);
  double prev = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    double x = 0.0625 + (2.0 - 0.0625) * i / 1000.0;
    double v = d.cdf(x);
    REQUIRE(v > prev);
    prev = v;
  }
  check_galois(d, 25, 2.5, false);
}

TEST_CASE("perturbation rejects overlapping spread intervals") {
  auto step = make_step_distribution({1.0, 0.8}, {1.0, 0.5});
  REQUIRE_THROWS_AS(perturb_continuous(step, 0.0), InvalidParameter);
}
