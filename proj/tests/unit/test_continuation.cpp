#include "doctest.h"

#include "hardysob/continuation.hpp"

#include <cmath>

using namespace hs;

namespace {

CVec c2(cd a, cd b) {
  CVec z(2);
  z << a, b;
  return z;
}

PolynomialCn monomial(int a, int b, cd c = 1.0, int cap = 3) {
  PolynomialCn p(2, std::max(cap, a + b));
  p.set({a, b, 0}, c);
  return p;
}

// d/dzbar_j = (d_x + i d_y) / 2 by central differences
CVec fd_dbar(const Continuation& c, const CVec& z, double h = 1e-6) {
  CVec out(z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    CVec zx = z, zy = z, zx2 = z, zy2 = z;
    zx(j) += h;
    zx2(j) -= h;
    zy(j) += cd(0, h);
    zy2(j) -= cd(0, h);
    const cd dx = (c.value(zx) - c.value(zx2)) / (2 * h);
    const cd dy = (c.value(zy) - c.value(zy2)) / (2 * h);
    out(j) = 0.5 * (dx + cd(0, 1) * dy);
  }
  return out;
}

std::vector<CVec> shell_points(const DomainSpec& d, double lo, double hi, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> level(lo, hi);
  std::vector<CVec> out;
  for (int i = 0; i < count; ++i) out.push_back(random_level_point(d, level(rng), rng));
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ShellSpec shell_1e5() {
  ShellSpec s;
  s.angular.n_theta = 10;
  s.angular.n_a = 25;
  s.angular.n_b = 25;
  s.angular.leray = false;
  s.t_points = 4;
  s.t_panels = 4;
  return s;
}

}  // namespace

TEST_CASE("quintic cutoff") {
  const Cutoff chi{0.5, 1.0};
  CHECK(chi(0.2) == 1.0);
  CHECK(chi(0.5) == 1.0);
  CHECK(chi(1.0) == 0.0);
  CHECK(chi(3.0) == 0.0);
  CHECK(chi(0.75) == doctest::Approx(0.5));
  double prev = 1.0, sup = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = 0.5 + 0.5 * i / 1000.0;
    CHECK(chi(x) <= prev + 1e-15);
    CHECK(chi(x) >= 0.0);
    prev = chi(x);
    sup = std::max(sup, std::abs(chi.derivative(x)));
    if (i > 0 && i < 1000) CHECK(chi.derivative(x) == doctest::Approx((chi(x + 1e-7) - chi(x - 1e-7)) / 2e-7).epsilon(1e-5));
  }
  CHECK(sup == doctest::Approx(chi.lipschitz()));
  // C^2 at the ends: second differences vanish to O(h)
  const double h = 1e-4;
  CHECK(std::abs(chi(0.5 + h) - 2 * chi(0.5) + chi(0.5 - h)) / (h * h) < 1e-2);
  CHECK(std::abs(chi(1.0 + h) - 2 * chi(1.0) + chi(1.0 - h)) / (h * h) < 1e-2);
}

TEST_CASE("symmetry continuation dbar against finite differences") {
  const HoloFunction f = power_singularity(-0.3, c2(1, 0), "(1-z1)^-0.3");
  PolynomialCn p(2, 3);
  p.set({2, 1, 0}, 1.0);
  p.set({0, 2, 0}, cd(0, 0.5));
  const HoloFunction g = from_polynomial(p, "poly");
  for (const DomainSpec& d : {make_ball(), make_ellipsoid({2.0, 1.0}), make_perturbed(0.5)}) {
    for (int m : {1, 2, 3}) {
      for (const HoloFunction* h : {&f, &g}) {
        const Continuation c = extend_by_symmetry(d, *h, m, 0.1);
        for (const CVec& z : shell_points(d, 0.005, 0.095, 12, 7 + m)) {
          const CVec a = c.dbar(z), b = fd_dbar(c, z);
          INFO(d.name << " m=" << m << " " << h->label << " at " << format_point(z));
          CHECK((a - b).norm() <= 1e-4 * std::max(1.0, a.norm()));
        }
      }
    }
  }
  const DomainSpec b = make_ball();
  const Continuation c = extend_by_symmetry(b, g, 2, 0.1);
  CHECK(c.value(c2(1.2, 0)) == 0.0);
  CHECK(c.dbar(c2(1.2, 0)).norm() == 0.0);
  CHECK(c.value(c2(0.3, 0.2)) == g(c2(0.3, 0.2)));
  CHECK_THROWS_AS(extend_by_symmetry(b, g, 0, 0.1), UsageError);
  CHECK_THROWS_AS(extend_by_symmetry(b, g, 2, 0.5), UsageError);
  HoloFunction shallow = g;
  shallow.max_order = 1;
  CHECK_THROWS_AS(extend_by_symmetry(b, shallow, 2, 0.1), UsageError);
}

TEST_CASE("jet exactness") {
  const DomainSpec b = make_ball();
  // degree-1 f with m = 2: the jet is f itself and dbar lives in the cutoff band
  PolynomialCn p(2, 1);
  p.set({1, 0, 0}, 2.0);
  p.set({0, 1, 0}, cd(0, 1));
  p.set({0, 0, 0}, 0.5);
  const HoloFunction f = from_polynomial(p, "linear");
  const Continuation c = extend_by_symmetry(b, f, 2, 0.1);
  for (const CVec& z : shell_points(b, 1e-4, 0.0499, 40, 3)) {
    CHECK(c.dbar(z).norm() < 1e-12);
    CHECK(std::abs(c.value(z) - f(z)) < 1e-12);
  }
  bool band = false;
  for (const CVec& z : shell_points(b, 0.051, 0.099, 40, 4)) band = band || c.dbar(z).norm() > 1e-3;
  CHECK(band);
  // m = 1: fbar = f(z*) chi
  const Continuation c1 = extend_by_symmetry(b, f, 1, 0.1);
  for (const CVec& z : shell_points(b, 0.01, 0.09, 10, 5)) {
    const double chi = Cutoff{0.05, 0.1}(b.rho(z));
    CHECK(std::abs(c1.value(z) - chi * f(symmetric_point(b, z))) < 1e-12);
  }
}

TEST_CASE("symmetry continuation decay order") {
  const DomainSpec b = make_ball();
  const HoloFunction f = power_singularity(-0.3, c2(1, 0), "(1-z1)^-0.3");
  const int m = 3;
  const Continuation c = extend_by_symmetry(b, f, m, 0.1);
  // f does not depend on z2, so along the normal ray at e2 the jet is exact
  for (double r : {1e-4, 1e-3, 1e-2}) CHECK(c.dbar(std::sqrt(1 + r) * c2(0, 1)).norm() == 0.0);
  // away from the singularity the field decays like rho^{m-1}
  for (const CVec& xi : {c2(-1, 0), c2(cd(0, 0.6), 0.8), c2(cd(-0.6, 0.0), cd(0.0, 0.8))}) {
    std::vector<double> rho, mag, ratio;
    for (double r = 1e-4; r < 0.04; r *= 1.6) {
      const CVec z = radial_point(b, xi, r);
      rho.push_back(r);
      mag.push_back(c.dbar(z).cwiseAbs().sum());
      double top = 0.0;
      const CVec zs = symmetric_point(b, z);
      for (const MultiIndex& a : multi_indices(2, m)) top = std::max(top, std::abs(f.derivative(a, zs)));
      ratio.push_back(mag.back() / (top * std::pow(r, m - 1)));
    }
    INFO("xi = " << format_point(xi));
    CHECK(loglog_slope(rho, mag) >= m - 1 - 0.2);
    // |dbar fbar| <= C max |d^m f(z*)| rho^{m-1} with a constant that does not grow
    CHECK(*std::max_element(ratio.begin(), ratio.begin() + 4) <= 2.0 * *std::max_element(ratio.begin() + 4, ratio.end()));
  }
}

TEST_CASE("global continuation") {
  const DomainSpec b = make_ball();
  const double eps = 0.1;
  // constant sequence: no dbar below the outer cutoff
  const PolynomialCn f = monomial(1, 1, 2.0);
  const Continuation c = extend_by_global(b, {f, f, f, f}, eps);
  for (const CVec& z : shell_points(b, 1e-3, 0.087, 30, 8)) {
    CHECK(c.dbar(z).norm() == 0.0);
    CHECK(c.value(z) == f(z));
  }
  CHECK(c.value(c2(1.5, 0)) == 0.0);
  CHECK_THROWS_AS(extend_by_global(b, {f}, eps), UsageError);

  // two-term sequence P_2 = 0, P_4 = 1
  PolynomialCn zero(2, 0), one(2, 0);
  one.set({0, 0, 0}, 1.0);
  const std::vector<PolynomialCn> seq = {zero, one};
  const Continuation t = extend_by_global(b, seq, eps);
  double sup = 0.0;
  for (const CVec& z : shell_points(b, 1e-3, 0.0999, 400, 9)) {
    const double r = b.rho(z);
    const double lam = global_lambda(b, seq, eps, z);
    if (r > eps / 2 && r < eps) CHECK(lam == doctest::Approx(1.0 / r));
    const double a = t.dbar(z).cwiseAbs().sum();
    const bool blend = r > eps / 2 * 1.25 && r < eps / 2 * 1.75;
    if (!blend) CHECK(a == 0.0);
    if (blend) sup = std::max(sup, a * r / (b.grad(z).cwiseAbs().sum()));
  }
  CHECK(sup > 0.0);
  CHECK(sup <= 1.75 * Cutoff{1.25, 1.75}.lipschitz());

  // dbar against finite differences and continuity across shell interfaces
  const std::vector<PolynomialCn> mixed = {monomial(1, 0), monomial(1, 0) + monomial(0, 2, 0.1),
                                           monomial(1, 0) + monomial(0, 2, 0.1) + monomial(3, 0, 0.01)};
  const Continuation g = extend_by_global(b, mixed, eps);
  for (const CVec& z : shell_points(b, 0.001, 0.099, 30, 10)) {
    const CVec a = g.dbar(z), fd = fd_dbar(g, z);
    CHECK((a - fd).norm() <= 1e-4 * std::max(1.0, a.norm()));
    const double lam = global_lambda(b, mixed, eps, z);
    const double r = b.rho(z);
    // the blend dbar is controlled by lambda below the outer cutoff
    if (r < 7 * eps / 8) CHECK(a.cwiseAbs().sum() <= 2.0 * Cutoff{1.25, 1.75}.lipschitz() * lam * b.grad(z).cwiseAbs().sum() + 1e-15);
  }
  Rng rng(3);
  for (int k = 1; k <= 3; ++k) {
    const CVec u = random_direction(2, rng);
    const double r = eps * std::ldexp(1.0, -k);
    const CVec lo = radial_point(b, u, r * (1 - 1e-13)), hi = radial_point(b, u, r * (1 + 1e-13));
    CHECK(std::abs(g.value(lo) - g.value(hi)) < 1e-11);
  }
}

TEST_CASE("reproduction identity") {
  const DomainSpec b = make_ball();
  const ShellGrid shell = build_shell_grid(b, 0.1, shell_1e5());
  REQUIRE(shell.size() == 100000);
  // z1^2 with m = 3 at z = 0
  const HoloFunction f = from_polynomial(monomial(2, 0), "z1^2");
  const PacReport r = verify_pac(b, extend_by_symmetry(b, f, 3, 0.1), shell, {c2(0, 0), c2(0.3, -0.2)}, f.eval);
  CHECK(r.max_rel_error <= 1e-2);
  // orientation: the constant 1 comes back with the sign kStokesSign applied
  PolynomialCn one(2, 0);
  one.set({0, 0, 0}, 1.0);
  const HoloFunction g = from_polynomial(one, "1");
  const PacReport s = verify_pac(b, extend_by_symmetry(b, g, 1, 0.1), shell, {c2(0.1, 0.2)}, g.eval);
  CHECK(s.reconstructed[0].real() == doctest::Approx(1.0).epsilon(1e-4));
  // a continuation with no dbar reproduces zero
  Continuation flat;
  flat.at = [](const CVec& z) { return ContinuationValue{0.0, CVec::Zero(z.size())}; };
  const PacReport z = verify_pac(b, flat, shell, {c2(0.1, 0.2)}, [](const CVec&) { return cd(0.0); });
  CHECK(z.reconstructed[0] == cd(0.0));
}

TEST_CASE("Sobolev functional") {
  const DomainSpec b = make_ball();
  auto setup = [&](int L, std::vector<RegionSample>& regs) {
    GridSpec s;
    s.n_theta = 3;
    s.n_a = 3;
    s.n_b = 2;
    s.theta_levels = (L + 1) / 2 + 1;
    s.a_levels = L + 1;
    s.leray = false;
    BoundaryGrid grid = build_boundary_grid(b, 0.0, s);
    std::vector<CVec> cz;
    for (const BoundaryNode& nd : grid.nodes()) cz.push_back(nd.xi);
    RegionResolution res;
    res.levels = L + 4;
    res.h_points = 1;
    res.r_points = 2;
    res.angle_points = 4;
    res.v_points = 2;
    regs = region_bank(b, cz, RegionKind::external, 1.0, 0.1, res);
    return grid;
  };
  Continuation flat;
  flat.at = [](const CVec& z) { return ContinuationValue{1.0, CVec::Zero(z.size())}; };
  std::vector<RegionSample> regs;
  const BoundaryGrid g2 = setup(2, regs);
  CHECK(sobolev_functional(flat, 1, 2.0, g2, regs).value == 0.0);

  PolynomialCn p(2, 3);
  p.set({2, 1, 0}, 1.0);
  const Continuation cp = extend_by_symmetry(b, from_polynomial(p, "z1^2 z2"), 3, 0.1);
  const Continuation cs = extend_by_symmetry(b, power_singularity(-0.5, c2(1, 0), "(1-z1)^-0.5"), 3, 0.1);
  const double p2 = sobolev_functional(cp, 2, 2.0, g2, regs).value;
  std::vector<double> sing;
  double p_last = 0.0;
  for (int L : {4, 6, 8}) {
    const BoundaryGrid g = setup(L, regs);
    p_last = sobolev_functional(cp, 2, 2.0, g, regs).value;
    sing.push_back(sobolev_functional(cs, 2, 2.0, g, regs).value);
  }
  CHECK(std::isfinite(p2));
  CHECK(std::abs(p_last / p2 - 1.0) <= 0.1);
  CHECK(sing[1] >= 5.0 * sing[0]);
  CHECK(sing[2] >= 5.0 * sing[1]);
}
