#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fpt/intensity.hpp"
#include "fpt/random.hpp"

using namespace fpt;
using Catch::Approx;

TEST_CASE("arrivals by inversion, deterministic inputs") {
  std::vector<double> exps = {0.3, 0.7};
  auto flat = make_const_intensity(1.0);
  auto a = arrivals_from_exponentials(flat, exps);
  REQUIRE(a.size() == 2);
  REQUIRE(a[0] == Approx(0.3));
  REQUIRE(a[1] == Approx(1.0));

  std::vector<double> exps2 = {1.0, 3.0};
  auto lin = make_linear_intensity(2.0);  // Lambda(x) = x^2
  auto b = arrivals_from_exponentials(lin, exps2);
  REQUIRE(b[0] == Approx(1.0));
  REQUIRE(b[1] == Approx(2.0));
}

TEST_CASE("cumulative and inverse are consistent on every family") {
  std::vector<IntensityFunction> fams = {
      make_const_intensity(1.0), make_const_intensity(2.5),
      make_linear_intensity(2.0), make_expgrow_intensity(2.0),
      make_supexp_intensity(),
      make_custom_intensity([](double t) { return 2 * t; })};
  for (const auto& lam : fams) {
    REQUIRE(lam.cumulative(0.0) == Approx(0.0).margin(1e-12));
    double prev = 0.0;
    for (double x : {0.25, 0.5, 1.0, 2.0, 3.0}) {
      double c = lam.cumulative(x);
      REQUIRE(c >= prev);
      prev = c;
      REQUIRE(lam.inverse_cumulative(c) == Approx(x).margin(1e-9));
    }
  }
}

TEST_CASE("custom intensity quadrature matches the closed form") {
  auto lam = make_custom_intensity([](double t) { return 2 * t; });
  REQUIRE(lam.cumulative(1.0) == Approx(1.0).margin(1e-9));
  REQUIRE(lam.cumulative(2.5) == Approx(6.25).margin(1e-8));
}

TEST_CASE("sample_arrivals is strictly increasing and respects budgets") {
  auto lam = make_linear_intensity(2.0);
  RandomStream s(77);
  auto a = sample_arrivals(lam, s.child(1), 500, kInf);
  REQUIRE(a.size() == 500);
  for (std::size_t i = 1; i < a.size(); ++i) REQUIRE(a[i] > a[i - 1]);

  auto b = sample_arrivals(lam, s.child(1), 1000000, 2.0);
  REQUIRE(!b.empty());
  REQUIRE(b.back() <= 2.0);
  auto c = sample_arrivals(lam, s.child(1), 3, kInf);
  REQUIRE(c.size() == 3);
  REQUIRE_THROWS_AS(sample_arrivals(lam, s, 0, 1.0), InvalidParameter);
}

TEST_CASE("counts in an interval have the Poisson mean and variance") {
  // Lambda(1) = 1 for lambda(t) = 2t.
  auto lam = make_linear_intensity(2.0);
  RandomStream s(2027);
  const int runs = 10000;
  double sum = 0, sumsq = 0;
  for (int r = 0; r < runs; ++r) {
    auto a = sample_arrivals(lam, s.child(static_cast<std::uint64_t>(r)), 1000, 1.0);
    double k = static_cast<double>(a.size());
    sum += k;
    sumsq += k * k;
  }
  double mean = sum / runs;
  double var = sumsq / runs - mean * mean;
  double sigma_mean = 1.0 / std::sqrt(static_cast<double>(runs));
  // Var of the sample variance of Poisson(1): (mu4 - sigma^4)/n = 3/n.
  double sigma_var = std::sqrt(3.0 / runs);
  REQUIRE(std::abs(mean - 1.0) < 4 * sigma_mean);
  REQUIRE(std::abs(var - 1.0) < 4 * sigma_var);
}

TEST_CASE("counts in disjoint intervals are uncorrelated") {
  auto lam = make_linear_intensity(2.0);
  RandomStream s(555);
  const int runs = 10000;
  // Lambda on [0,1] is 1; on [1,1.5] it is 1.25.
  double s1 = 0, s2 = 0, s12 = 0, q1 = 0, q2 = 0;
  for (int r = 0; r < runs; ++r) {
    auto a = sample_arrivals(lam, s.child(static_cast<std::uint64_t>(r)), 4000, 1.5);
    double n1 = 0, n2 = 0;
    for (double t : a) (t <= 1.0 ? n1 : n2) += 1;
    s1 += n1; s2 += n2; s12 += n1 * n2; q1 += n1 * n1; q2 += n2 * n2;
  }
  double m1 = s1 / runs, m2 = s2 / runs;
  double v1 = q1 / runs - m1 * m1, v2 = q2 / runs - m2 * m2;
  double corr = (s12 / runs - m1 * m2) / std::sqrt(v1 * v2);
  REQUIRE(std::abs(m1 - 1.0) < 4.0 / std::sqrt(static_cast<double>(runs)));
  REQUIRE(std::abs(m2 - 1.25) < 4.0 * std::sqrt(1.25 / runs));
  REQUIRE(std::abs(corr) < 4.0 / std::sqrt(static_cast<double>(runs)));
}

TEST_CASE("intensity parameter validation") {
  REQUIRE_THROWS_AS(make_const_intensity(0.0), InvalidParameter);
  REQUIRE_THROWS_AS(make_linear_intensity(-1.0), InvalidParameter);
  REQUIRE_THROWS_AS(make_expgrow_intensity(1.0), InvalidParameter);
}
