#include "doctest.h"

#include "hardysob/continuation.hpp"
#include "hardysob/corpus.hpp"
#include "hardysob/experiments.hpp"

#include <cmath>

using namespace hs;

TEST_CASE("ladder trend") {
  CHECK(ladder_trend({0.0, 0.0}) == Trend::converging);
  CHECK(ladder_trend({1.0, 1.1}) == Trend::converging);
  CHECK(ladder_trend({1.0, 2.0}) == Trend::diverging);
  CHECK(ladder_trend({1.0, 1.3, 1.6}) == Trend::inconclusive);
  CHECK(ladder_trend({1.0, 1.1, 1.15, 1.175}) == Trend::converging);
  // small drift, but the increments double: a divergent tail under a large constant
  CHECK(ladder_trend({100.0, 100.1, 100.3, 100.7}) == Trend::diverging);
  CHECK(ladder_trend({1.0, HUGE_VAL}) == Trend::diverging);
  CHECK(ladder_trend({1.0, 1.0, 1.0}) == Trend::converging);
}

TEST_CASE("kendall tau") {
  CHECK(kendall_tau({1, 2, 3}, {10, 20, 30}) == doctest::Approx(1.0));
  CHECK(kendall_tau({1, 2, 3}, {30, 20, 10}) == doctest::Approx(-1.0));
  CHECK(kendall_tau({1, 1, 2}, {5, 3, 9}) == doctest::Approx(1.0));
  CHECK(kendall_tau({1, 2}, {4, 4}) == doctest::Approx(-1.0));
  CHECK(kendall_tau({2, 2}, {1, 3}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(kendall_tau({1}, {1, 2}), UsageError);
}

TEST_CASE("log slope") {
  CHECK(log_slope({1, 2, 4}, {3, 12, 48}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(log_slope({1}, {1}), UsageError);
}

TEST_CASE("two-term lacunary sums") {
  const auto P = lacunary_two_term(3, 1.5);
  REQUIRE(P.size() == 3);
  CVec z(2);
  z << 0.3, cd(0.0, 0.4);
  for (int k = 1; k <= 3; ++k) {
    cd want = 0.0;
    for (int i = 1; i <= k; ++i) want += std::exp2(-1.5 * i) * (std::pow(z(0), 1 << i) + std::pow(z(1), 1 << i));
    CHECK(std::abs(P[k - 1](z) - want) < 1e-14);
  }
  CHECK_THROWS_AS(lacunary_two_term(0, 1.0), UsageError);
  const auto Q = lacunary_two_term(3, 1.5, 2);
  CHECK(std::abs(Q[0](z)) == 0.0);
  CHECK(std::abs(Q[2](z) - P[2](z) + P[0](z)) < 1e-14);
}

TEST_CASE("interior points stay inside") {
  const DomainSpec b = make_ball();
  const auto pts = interior_points(b, 10, 0.6, 3);
  REQUIRE(pts.size() == 10);
  for (const CVec& z : pts) CHECK(z.norm() <= 0.6 + 1e-12);
  CHECK(pts.back().norm() == doctest::Approx(0.6));
  CHECK((interior_points(b, 10, 0.6, 3)[4] - pts[4]).norm() == 0.0);
}

TEST_CASE("Sobolev ladder on a low-degree polynomial is resolution-stable") {
  const DomainSpec b = make_ball();
  const SobolevLadder lad(b, 1.0, 0.1, {2, 3, 4});
  PolynomialCn f(2, 2);
  f.set({1, 1}, 1.0);
  const Continuation c = extend_by_symmetry(b, from_polynomial(f, "z1 z2"), 3, 0.1);
  const auto res = lad.evaluate(c, {0, 1}, 2.0);
  REQUIRE(res.size() == 2);
  for (const auto& r : res) {
    CHECK(r.verdict == Trend::converging);
    CHECK(r.values.size() == 3);
  }
  CHECK_THROWS_AS(SobolevLadder(b, 1.0, 0.1, {4}), UsageError);
}
