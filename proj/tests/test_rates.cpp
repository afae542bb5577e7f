#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fpt/random.hpp"
#include "fpt/rates.hpp"

using namespace fpt;
using Catch::Approx;

namespace {

// Independent bisection on a monotone function, for speed oracles.
double bisect_root(double lo, double hi, const std::function<double(double)>& f) {
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("Laplace transforms of the registered families") {
  REQUIRE(laplace_functional(make_const_intensity(1.0), 2.0) == Approx(0.5));
  REQUIRE(laplace_functional(make_linear_intensity(3.0), 2.0) == Approx(0.75));
  auto eg = make_expgrow_intensity(std::exp(1.0));
  REQUIRE(laplace_functional(eg, 2.0) == Approx(1.0).epsilon(1e-12));
  REQUIRE(laplace_functional(eg, 0.5) == kInf);
  REQUIRE(laplace_functional(make_supexp_intensity(), 100.0) == kInf);
  REQUIRE_THROWS_AS(laplace_functional(make_const_intensity(1.0), 0.0),
                    InvalidParameter);
}

TEST_CASE("custom-family Laplace agrees with the closed form by quadrature") {
  auto lam = make_custom_intensity([](double t) { return std::exp(-t); },
                                   [](double x) { return -std::expm1(-x); },
                                   "decay");
  // integral of e^{-t} e^{-Dt} = 1/(1+D)
  for (double d : {0.5, 1.0, 3.0})
    REQUIRE(laplace_functional(lam, d) == Approx(1.0 / (1.0 + d)).epsilon(1e-8));
}

TEST_CASE("mu closed forms") {
  auto flat = make_const_intensity(1.0);
  REQUIRE(mu(flat, 0.5) == Approx(0.5 * std::exp(1.0)).epsilon(1e-9));
  auto m = mu_detail(flat, 0.5);
  REQUIRE(m.d_star == Approx(2.0).epsilon(1e-5));

  auto flat3 = make_const_intensity(3.0);
  REQUIRE(mu(flat3, 1.0) == Approx(3.0 * std::exp(1.0)).epsilon(1e-9));

  auto eg = make_expgrow_intensity(std::exp(1.0));
  REQUIRE(mu(eg, 0.2) == Approx(0.2 * std::exp(1.2)).epsilon(1e-9));
  REQUIRE_THROWS_AS(mu(make_supexp_intensity(), 0.5), RateUndefined);
}

TEST_CASE("mu matches e*a to 1e-6 relative for the unit intensity") {
  auto flat = make_const_intensity(1.0);
  for (double a : {0.1, 0.3, 1.0})
    REQUIRE(std::abs(mu(flat, a) - std::exp(1.0) * a) <
            1e-6 * std::exp(1.0) * a);
}

TEST_CASE("mu is nondecreasing in a") {
  auto eg = make_expgrow_intensity(2.0);
  double prev = 0.0;
  for (int i = 1; i <= 40; ++i) {
    double v = mu(eg, 0.05 * i);
    REQUIRE(v >= prev - 1e-12);
    prev = v;
  }
}

TEST_CASE("g(D) = D a + ln L(D) is convex on random feasible triples") {
  auto eg = make_expgrow_intensity(std::exp(1.0));
  const double dmin = 1.0;
  RandomStream s(404);
  auto g = [&](double d) { return d * 0.3 + std::log(laplace_functional(eg, d)); };
  for (int i = 0; i < 100; ++i) {
    double d1 = dmin + 0.01 + 5 * s.uniform_at(3 * static_cast<std::uint64_t>(i));
    double d3 = d1 + 0.1 + 5 * s.uniform_at(3 * static_cast<std::uint64_t>(i) + 1);
    double t = s.uniform_at(3 * static_cast<std::uint64_t>(i) + 2);
    double d2 = d1 + t * (d3 - d1);
    double chord = g(d1) + (g(d3) - g(d1)) * (d2 - d1) / (d3 - d1);
    REQUIRE(g(d2) <= chord + 1e-9);
  }
}

TEST_CASE("speed alpha against closed forms and an independent oracle") {
  REQUIRE(speed_alpha(make_const_intensity(1.0)) ==
          Approx(1.0 / std::exp(1.0)).margin(1e-7));
  REQUIRE(speed_alpha(make_const_intensity(2.0)) ==
          Approx(0.5 / std::exp(1.0)).margin(1e-7));
  // alpha for lambda(t) = e^t solves a e^{a+1} = 1.
  double oracle = bisect_root(0.1, 1.0, [](double a) {
    return std::log(a) + a + 1.0;
  });
  REQUIRE(speed_alpha(make_expgrow_intensity(std::exp(1.0))) ==
          Approx(oracle).margin(1e-6));
}

TEST_CASE("alpha consistency window") {
  for (const auto& lam : {make_const_intensity(1.0), make_const_intensity(2.0)}) {
    double alpha = speed_alpha(lam);
    REQUIRE(mu(lam, alpha - 1e-4) <= 1.0 + 1e-6);
    REQUIRE(mu(lam, alpha + 1e-4) >= 1.0 - 1e-6);
  }
}

TEST_CASE("tail bound values") {
  auto flat = make_const_intensity(1.0);
  REQUIRE(tail_bound(flat, 1.0 / std::exp(1.0), 17) == Approx(1.0).margin(1e-6));
  double b = tail_bound(flat, 0.2, 12);
  REQUIRE(b == Approx(std::pow(0.2 * std::exp(1.0), 12)).epsilon(1e-6));
  REQUIRE(b == Approx(6.67e-4).epsilon(2e-3));
}

TEST_CASE("speed alpha reports a cap for rates pinned below one") {
  // Shifted intensity: no arrivals before t = 1, so m_n >= n and
  // mu(a) < 1 for small a but also mu stays <= 1 up to a huge cap? No:
  // mu grows past 1 once a > 1; this checks the cap path with a tiny cap.
  auto flat = make_const_intensity(1e-9);
  // mu(a) = e a c stays below 1 until a = 1/(e c) ~ 3.7e8 > cap.
  REQUIRE_THROWS_AS(speed_alpha(flat, 1000.0), CapExceeded);
}

TEST_CASE("rate report grid") {
  auto flat = make_const_intensity(1.0);
  auto rep = rate_report(flat, {0.1, 0.2, 0.3, 0.5});
  for (std::size_t i = 1; i < rep.mu_values.size(); ++i)
    REQUIRE(rep.mu_values[i] >= rep.mu_values[i - 1]);
  REQUIRE(rep.alpha == Approx(1.0 / std::exp(1.0)).margin(1e-7));
  REQUIRE(mu(flat, rep.bracket_lo) <= 1.0 + 1e-6);
  REQUIRE(mu(flat, rep.bracket_hi) >= 1.0 - 1e-6);
}
