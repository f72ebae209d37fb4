#include "doctest.h"

#include "hardysob/homtype.hpp"

#include <cmath>

using namespace hs;

namespace {

CVec c2(cd a, cd b) {
  CVec z(2);
  z << a, b;
  return z;
}

// Exact sigma(B(e_1, delta)) on the unit sphere of C^2: |1 - w_1| < delta, and
// w_1 is uniformly distributed on the unit disc with total mass 2 pi^2.
double ball_measure(double r) {
  const double a1 = r * r * std::acos(r / 2.0);
  const double a2 = std::acos(1.0 - r * r / 2.0);
  const double a3 = 0.5 * r * std::sqrt(4.0 - r * r);
  return 2.0 * kPi * (a1 + a2 - a3);
}

GridSpec sphere_spec(int f) {
  GridSpec s;
  s.n_theta = 16 * f;
  s.n_a = 25 * f;
  s.n_b = 25 * f;
  s.leray = false;
  return s;
}

}  // namespace

TEST_CASE("quasidistance on the ball") {
  const DomainSpec b = make_ball();
  CHECK(qdist(b, c2(1, 0), c2(1, 0)) == 0.0);
  CHECK(qdist(b, c2(1, 0), c2(0, 1)) == doctest::Approx(1.0));
  CHECK(qdist(b, c2(1, 0), c2(-1, 0)) == doctest::Approx(2.0));
  const CVec w = c2(cd(0.6, 0.0), cd(0.0, 0.8)), z = c2(cd(0.0, 0.6), cd(0.8, 0.0));
  CHECK(qdist(b, w, z) == doctest::Approx(std::abs(1.0 - (z.array() * w.conjugate().array()).sum())));
}

TEST_CASE("quasiball measures") {
  const DomainSpec b = make_ball();
  const BoundaryGrid g = build_boundary_grid(b, 0.0, sphere_spec(3));
  const Quasiball all = quasiball(b, g, c2(1, 0), 10.0);
  CHECK(all.members.size() == g.size());
  CHECK(all.sigma == doctest::Approx(2 * kPi * kPi));
  CHECK(quasiball(b, g, g[17].xi, 1e-12).members.size() == 1);
  // measure / delta^2 stays in a band; compare with the exact lens area on a
  // grid graded toward the center
  GridSpec f;
  f.n_theta = 8;
  f.n_a = 8;
  f.n_b = 16;
  f.theta_levels = 6;
  f.a_levels = 10;
  f.leray = false;
  const BoundaryGrid fg = build_boundary_grid(b, 0.0, f);
  for (double delta : {0.05, 0.1, 0.2, 0.4}) {
    const double m = quasiball(b, fg, c2(1, 0), delta).sigma;
    CHECK(m / (delta * delta) > 5.0);
    CHECK(m / (delta * delta) < 15.0);
    CHECK(std::abs(m - ball_measure(delta)) / ball_measure(delta) < 0.1);
  }
}

TEST_CASE("homogeneous-type dimension on the catalog") {
  for (const DomainSpec& d : {make_ball(), make_ellipsoid({2.0, 1.0}), make_perturbed(0.5)}) {
    const HomogeneityReport r = check_homogeneous(d, build_boundary_grid(d, 0.0, sphere_spec(2)));
    CHECK(std::abs(r.fitted_dimension - 2.0) <= 0.15);
    CHECK(r.quasi_triangle_constant <= 10.0);
  }
  const DomainSpec b = make_ball();
  CHECK_THROWS_AS(check_homogeneous(b, build_boundary_grid(b, 0.0, sphere_spec(1)), {0.1, 0.2}), UsageError);
}

TEST_CASE("exterior quasidistance lemmas") {
  const DomainSpec b = make_ball();
  // on the normal ray the projection term vanishes
  const CVec w = c2(1.05, 0.0);
  CHECK(qdist(b, w, c2(1, 0)) / b.rho(w) == doctest::Approx(1.05 * 0.05 / 0.1025));
  for (const DomainSpec& d : {make_ball(), make_ellipsoid({2.0, 1.0})}) {
    const ExteriorReport a = qm_exterior_check(d, 4000, 1.0, 1);
    const ExteriorReport c = qm_exterior_check(d, 8000, 1.0, 2);
    for (const RatioEnvelope* e : {&a.exterior, &a.region, &c.exterior, &c.region}) {
      CHECK(e->min > 1.0 / 20.0);
      CHECK(e->max < 20.0);
    }
    CHECK(std::abs(a.exterior.lo / c.exterior.lo - 1.0) < 0.3);
    CHECK(std::abs(a.region.hi / c.region.hi - 1.0) < 0.3);
  }
}

TEST_CASE("maximal function") {
  const DomainSpec b = make_ball();
  GridSpec s;
  s.n_theta = 8;
  s.n_a = 12;
  s.n_b = 12;
  s.leray = false;
  const BoundaryGrid g = build_boundary_grid(b, 0.0, s);
  const std::vector<double> one(g.size(), 2.5);
  for (double v : maximal_function(b, g, one)) CHECK(v == doctest::Approx(2.5));

  // spike at node 0 with unit mass, against a brute-force sup over all radii
  std::vector<double> spike(g.size(), 0.0);
  spike[0] = 1.0 / g[0].w_sigma;
  const std::vector<double> M = maximal_function(b, g, spike);
  const std::vector<double> radii = maximal_radii(b, g);
  for (std::size_t i = 0; i < g.size(); i += 37) {
    // brute force: every radius
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t j = 0; j < g.size(); ++j) order.push_back({qdist(b, g[j].xi, g[i].xi), j});
    std::sort(order.begin(), order.end());
    double best = 0.0, mass = 0.0, sum = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      mass += g[order[k].second].w_sigma;
      sum += spike[order[k].second] * g[order[k].second].w_sigma;
      const bool last_of_tie = k + 1 == order.size() || order[k + 1].first > order[k].first;
      if (last_of_tie && order[k].first < radii[0]) best = std::max(best, sum / mass);
    }
    // the dyadic ladder sees a subset of the radii, so it cannot exceed the
    // full sup and is within the doubling constant of it
    CHECK(M[i] <= best * (1.0 + 1e-12));
    CHECK(M[i] >= best / 16.0);
  }
  // sublinearity and homogeneity
  std::vector<double> a(g.size()), c(g.size()), ac(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    a[i] = std::abs(g[i].xi(0).real());
    c[i] = std::abs(g[i].xi(1).imag());
    ac[i] = a[i] + c[i];
  }
  const auto Ma = maximal_function(b, g, a), Mc = maximal_function(b, g, c), Mac = maximal_function(b, g, ac);
  std::vector<double> a3(a);
  for (double& v : a3) v *= 3.0;
  const auto M3 = maximal_function(b, g, a3);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(Mac[i] <= Ma[i] + Mc[i] + 1e-12);
    CHECK(M3[i] == doctest::Approx(3.0 * Ma[i]));
  }
}
