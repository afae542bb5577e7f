#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fpt/constructions.hpp"
#include "fpt/criteria.hpp"
#include "fpt/random.hpp"

using namespace fpt;
using Catch::Approx;

TEST_CASE("percolation path probabilities, hand-computed values") {
  auto p1 = percolation_path_probabilities(2, 1, 1);
  REQUIRE(p1[1] == 0.75);  // exact dyadic
  auto p2 = percolation_path_probabilities(2, 1, 2);
  REQUIRE(p2[1] == 39.0 / 64.0);
  auto p3 = percolation_path_probabilities(2, 1, 3);
  REQUIRE(p3[1] == Approx(0.5165).margin(5e-4));
  auto p4 = percolation_path_probabilities(2, 1, 4);
  REQUIRE(p4[1] == Approx(0.4499).margin(5e-4));
}

TEST_CASE("percolation DP against a Monte Carlo oracle") {
  // Simulate bond percolation (open w.p. 1/B) on the full B-ary tree of
  // depth h and test for a path with fewer than m closed edges.
  const int b = 3, h = 4, m = 2;
  RandomStream s(8181);
  std::uint64_t counter = 0;
  auto simulate = [&]() {
    // level-order: does any node at depth h have < m closed edges above it?
    std::vector<int> closed_counts = {0};
    for (int level = 0; level < h; ++level) {
      std::vector<int> next;
      for (int cc : closed_counts)
        for (int j = 0; j < b; ++j) {
          bool open = s.uniform_at(counter++) < 1.0 / b;
          int nc = cc + (open ? 0 : 1);
          if (nc < m) next.push_back(nc);
        }
      closed_counts = std::move(next);
      if (closed_counts.empty()) return false;
    }
    return true;
  };
  const int runs = 100000;
  int hits = 0;
  for (int r = 0; r < runs; ++r) hits += simulate() ? 1 : 0;
  double empirical = static_cast<double>(hits) / runs;
  double dp = percolation_path_probabilities(b, m, h)[m];
  double sigma = std::sqrt(dp * (1 - dp) / runs);
  REQUIRE(std::abs(empirical - dp) < 4 * sigma);
}

TEST_CASE("xi percolation depth") {
  REQUIRE(xi_percolation(2, 1, 0.5) == 4);
  REQUIRE_THROWS_AS(xi_percolation(2, 1, 0.5, 3), CapExceeded);
  // With multiple allowed closed edges the decay in h is only polynomial
  // with polylog corrections, so small eps targets sit beyond any usable cap.
  REQUIRE_THROWS_AS(xi_percolation(3, 8, 1.0 / 32.0, 30000), CapExceeded);
  REQUIRE_THROWS_AS(xi_percolation(1, 1, 0.5), InvalidParameter);
  REQUIRE_THROWS_AS(xi_percolation(2, 0, 0.5), InvalidParameter);
  REQUIRE_THROWS_AS(xi_percolation(2, 1, 0.0), InvalidParameter);
}

TEST_CASE("level-one recursive construction") {
  auto c = build_paper41({2, 3, 4}, 1);
  REQUIRE(c.xi == std::vector<int>{4});
  REQUIRE(c.n == std::vector<std::int64_t>{0, 4});
  REQUIRE(c.a[0] == 1.0);
  REQUIRE(c.a[1] == 0.125);  // 1/(2^1 * 4), recomputed independently
  for (int n = 0; n < 4; ++n) REQUIRE(c.f(n) == 2);
  REQUIRE(c.f(4) == 2);  // last block extends

  // G0 = 1/2 on [1/8, 1), 1 above; quantile(1/2) lands on a_1.
  REQUIRE(c.g0.quantile(0.5) == 0.125);
  REQUIRE(c.g0.cdf(0.5) == 0.5);
  REQUIRE(c.g0.cdf(1.0) == 1.0);

  // Block sum of the smallness terms is n_1 * a_1 = 2^{-1} exactly.
  auto rep = g_small_partial_sums(c.g0, c.f, 3);
  REQUIRE(rep.partial_sums.back() == Approx(0.5));
}

TEST_CASE("deeper levels of the recursive construction exceed the depth cap") {
  // eps_2 = 1/(2 F(n_1)) = 1/32 with m_required = 1/a_1 = 8 closed edges:
  // the DP stays near 1 for any reachable depth.
  REQUIRE_THROWS_AS(build_paper41({2, 3, 4}, 2, 30000), CapExceeded);
}

TEST_CASE("paper41 validates its inputs") {
  REQUIRE_THROWS_AS(build_paper41({2, 2}, 2, 100), InvalidParameter);
  REQUIRE_THROWS_AS(build_paper41({1, 3}, 1), InvalidParameter);
  REQUIRE_THROWS_AS(build_paper41({2, 3}, 3), InvalidParameter);
}

TEST_CASE("factorial-block construction with doubling B") {
  std::vector<std::int64_t> bs;
  for (int k = 1; k <= 10; ++k) bs.push_back(std::int64_t{1} << k);
  auto c = build_paper42(bs, 10);

  SECTION("branching blocks") {
    REQUIRE(c.f(0) == 2);
    REQUIRE(c.f(1) == 16);
    for (int n = 2; n <= 5; ++n) REQUIRE(c.f(n) == 32);
    for (int n = 6; n <= 23; ++n) REQUIRE(c.f(n) == 64);
    REQUIRE(c.f(24) == 128);
  }

  SECTION("inverse identity at every level") {
    for (int k = 1; k <= 8; ++k) {
      double y = 1.0 / static_cast<double>(bs[static_cast<std::size_t>(k - 1)]);
      REQUIRE(c.g0.quantile(y) == c.a[static_cast<std::size_t>(k - 1)]);
    }
  }

  SECTION("per-block smallness contributions are the exact block sums") {
    auto rep = g_small_partial_sums(c.g0, c.f, static_cast<int>(c.n[9]) - 1);
    for (int k = 4; k <= 9; ++k) {
      auto nk = static_cast<std::size_t>(c.n[static_cast<std::size_t>(k)]);
      auto nk1 = static_cast<std::size_t>(c.n[static_cast<std::size_t>(k - 1)]);
      double block = rep.partial_sums[nk - 1] - (nk1 > 0 ? rep.partial_sums[nk1 - 1] : 0.0);
      double expected = static_cast<double>(nk - nk1) * c.a[static_cast<std::size_t>(k - 1)];
      REQUIRE(block == Approx(expected).epsilon(1e-9));
    }
  }

  SECTION("band values decrease strictly and the CDF is monotone") {
    for (std::size_t i = 1; i < c.band_value.size(); ++i)
      REQUIRE(c.band_value[i] < c.band_value[i - 1]);
    double prev = -1.0;
    for (int i = 0; i <= 200; ++i) {
      double x = 1e-7 + (1.2 - 1e-7) * i / 200.0;
      double v = c.g0.cdf(x);
      REQUIRE(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("paper42 validates the doubling requirement") {
  REQUIRE_THROWS_AS(build_paper42({2, 3, 8, 16}, 4), InvalidParameter);
  REQUIRE_THROWS_AS(build_paper42({2, 4, 8, 16}, 3), InvalidParameter);
  REQUIRE_THROWS_AS(build_paper42({2, 4}, 4), InvalidParameter);
}
