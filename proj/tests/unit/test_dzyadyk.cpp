#include "doctest.h"

#include "hardysob/clf.hpp"
#include "hardysob/dzyadyk.hpp"

#include <cmath>

using namespace hs;

namespace {

CVec c2(cd a, cd b) {
  CVec z(2);
  z << a, b;
  return z;
}

}  // namespace

TEST_CASE("lune geometry") {
  const Lune L{1.1, 1.2};
  CHECK(L.contains(0.0));
  CHECK(L.contains(1.0));
  CHECK_FALSE(L.contains(1.3));
  const auto [ym, yp] = L.chord();
  CHECK(std::abs(1.0 - ym * std::polar(1.0, L.t)) == doctest::Approx(1.2));
  CHECK(std::abs(1.0 - yp * std::polar(1.0, L.t)) == doctest::Approx(1.2));
  for (cd l : lune_mesh(L, 8, 4)) {
    CHECK(L.contains(l, 1e-9));
    CHECK(std::abs(1.0 - l) >= 1.0 / 8 - 1e-12);
  }
}

TEST_CASE("lune of a boundary point") {
  const DomainSpec b = make_ball();
  const Lune L = lune_of(b, c2(1, 0), 1.1);
  CHECK(L.t == doctest::Approx(kPi / 2));
  CHECK(leray_pairing(b, c2(1, 0)) == cd(1.0));
  Rng rng(2);
  const CVec xi = random_level_point(b, 0.0, rng);
  CHECK(std::abs(normalized_pairing(b, xi, xi) - 1.0) < 1e-14);
  CHECK(normalized_pairing(b, c2(1, 0), c2(0.3, 0.4)) == cd(0.3));
}

TEST_CASE("membership sweep of the normalized pairing") {
  for (const DomainSpec& d : {make_ball(), make_ellipsoid({2.0, 1.0}), make_perturbed(0.5)}) {
    const double R = lune_radius(d);
    CHECK(R > 1.0);
    Rng rng(21);
    std::uniform_real_distribution<double> level(-d.eps_shell, d.eps_shell), unit(0.0, 1.0);
    for (int s = 0; s < 1000; ++s) {
      const CVec xi = random_level_point(d, level(rng), rng);
      const CVec z = random_level_point(d, 0.0, rng) * unit(rng);
      if (d.rho(xi) < 0.0 && d.rho(z) >= d.rho(xi)) continue;  // z must lie inside the level of xi
      const Lune L = lune_of(d, xi, R);
      REQUIRE(L.contains(normalized_pairing(d, xi, z), 1e-9));
    }
  }
}

TEST_CASE("Cauchy approximant certificates") {
  for (double t : {kPi / 2, 1.0, 2.2}) {
    const Lune L{t, 1.15};
    // degree one: the certificate covers lambda = 0 where the weight is 1
    const CauchyApproximant T1 = build_T(1, 2.0, L);
    CHECK(T1.coeffs.size() <= 2);
    CHECK(std::abs(1.0 - T1(0.0)) <= T1.cert.C1);
    for (int j : {4, 8, 16}) {
      const CauchyApproximant T = build_T(j, 2.0, L);
      CHECK(static_cast<int>(T.coeffs.size()) <= j + 1);
      CHECK(std::isfinite(T.cert.C1));
      CHECK(std::isfinite(T.cert.C2));
      CHECK(T.cert.C2 < 2.0);
      CHECK(T.cert.condition < 1e12);
    }
  }
  CHECK_THROWS_AS(build_T(0, 2.0, Lune{}), UsageError);
  CHECK_THROWS_AS(build_T(3, 0.0, Lune{}), UsageError);
}

TEST_CASE("half-disc error against the geometric series") {
  // q = 1 - (1 - lambda) T has degree j + 1 and q(1) = 1, so by Bernstein-Walsh
  // max_{|lambda| = 1/2} |q| >= 2^{-(j+1)} with equality only for the
  // truncated series, whose error is |lambda|^{j+1}/|1 - lambda|
  const Lune L{kPi / 2, 1.107};
  for (int j : {4, 8, 16}) {
    std::vector<cd> series(j + 1, 1.0);
    const CauchyApproximant T = build_T(j, 2.0, L);
    double q_T = 0.0, err_series = 0.0;
    for (int q = 0; q < 256; ++q) {
      const cd l = std::polar(0.5, 2 * kPi * q / 256.0);
      cd S = 0.0;
      for (auto it = series.rbegin(); it != series.rend(); ++it) S = S * l + *it;
      err_series = std::max(err_series, std::abs(1.0 / (1.0 - l) - S));
      q_T = std::max(q_T, std::abs(1.0 - (1.0 - l) * T(l)));
    }
    CHECK(err_series <= 2.0 * std::pow(0.5, j + 1) + 1e-15);
    CHECK(q_T >= std::pow(0.5, j + 1));
  }
}

TEST_CASE("certificate is continuous across the t grid") {
  const double R = 1.3;
  for (int q = 20; q < 44; q += 4) {
    const CauchyApproximant a = build_T(8, 2.0, Lune{q * KernelApproximant::kStep, R});
    const CauchyApproximant b = build_T(8, 2.0, Lune{(q + 1) * KernelApproximant::kStep, R});
    CHECK(std::abs(a.cert.C1 / b.cert.C1 - 1.0) <= 0.1);
    CHECK(std::abs(a.cert.C2 / b.cert.C2 - 1.0) <= 0.1);
  }
}

TEST_CASE("blend approximant") {
  const Lune L{1.3, 1.2};
  const double kappa = 1.0 / (2.0 * (L.R + 1.0));
  // phi maps the lune into the closed unit disc and fixes 1
  for (cd l : lune_mesh(L, 16, 4)) {
    const cd u = L.rot() * (1.0 - l);
    CHECK(std::abs(1.0 - kappa * u + kappa * kappa * u * u) <= 1.0 + 1e-12);
  }
  for (int j : {1, 2, 5, 8}) {
    const CauchyApproximant T = blend_T(j, 2.0, L);
    CHECK(static_cast<int>(T.coeffs.size()) - 1 <= j);
    CHECK(std::isfinite(T.cert.C1));
    CHECK(std::isfinite(T.cert.C2));
  }
  // the least-squares approximant is at least as good in certificate
  CHECK(build_T(8, 2.0, L).cert.C1 <= blend_T(8, 2.0, L).cert.C1);
}

TEST_CASE("global kernel approximant") {
  const DomainSpec b = make_ball();
  const KernelApproximant K(b, 16, 2.0);
  CHECK(K.j() == 8);
  CHECK(K.degree() == 16);
  // xi = e_1, z = 0: lambda = 0 and K = 1
  const CauchyApproximant& T = K.at_index(32);
  const double e = T.cert.C1 * std::pow(T.j, -T.r);
  CHECK(std::abs(K(c2(1, 0), c2(0, 0)) - 1.0) <= e * (2.0 + e));
  CHECK_THROWS_AS(KernelApproximant(b, 1, 2.0), UsageError);

  // degree: along a complex line z0 + zeta v the approximant is a polynomial
  // in zeta; its discrete Fourier coefficients above jn vanish
  Rng rng(4);
  const CVec xi = random_level_point(b, 0.0, rng);
  const CVec z0 = 0.3 * random_direction(2, rng), v = 0.4 * random_direction(2, rng);
  const int N = 64;
  std::vector<cd> vals(N);
  for (int q = 0; q < N; ++q) vals[q] = K(xi, z0 + std::polar(1.0, 2 * kPi * q / N) * v);
  double high = 0.0, low = 0.0;
  for (int m = 0; m < N; ++m) {
    cd c = 0.0;
    for (int q = 0; q < N; ++q) c += vals[q] * std::polar(1.0, -2 * kPi * m * q / N);
    c /= N;
    (m <= K.degree() ? low : high) = std::max(m <= K.degree() ? low : high, std::abs(c));
  }
  CHECK(high <= 1e-12 * low);

  // monomial expansion agrees with evaluation
  PolynomialCn P(2, K.degree());
  K.add_monomials(xi, 1.0, P);
  for (int s = 0; s < 10; ++s) {
    const CVec z = random_level_point(b, 0.0, rng) * 0.9;
    CHECK(std::abs(P(z) - K(xi, z)) <= 1e-8 * (1.0 + std::abs(K(xi, z))));
  }
  PolynomialCn small(2, 3);
  CHECK_THROWS_AS(K.add_monomials(xi, 1.0, small), UsageError);
}

TEST_CASE("kernel t interpolation on the perturbed domain") {
  const DomainSpec d = make_perturbed(0.5);
  const KernelApproximant K(d, 8, 2.0);
  Rng rng(6);
  const CVec xi = random_level_point(d, 0.0, rng);
  const double t = kPi / 2 - std::arg(leray_pairing(d, xi));
  const std::vector<cd> c = K.coefficients_at(t);
  CHECK(c.size() == 5);
  // evaluation is the interpolated polynomial to the power n over c^n
  const CVec z = 0.5 * random_level_point(d, 0.0, rng);
  cd T = 0.0;
  const cd lam = normalized_pairing(d, xi, z);
  for (auto it = c.rbegin(); it != c.rend(); ++it) T = T * lam + *it;
  CHECK(std::abs(K(xi, z) - std::pow(T / leray_pairing(d, xi), 2)) < 1e-12 * std::abs(K(xi, z)));
  CHECK(K.cached().size() == 2);
}

TEST_CASE("kernel validation report") {
  const DomainSpec b = make_ball();
  const std::vector<KernelPair> pairs = kernel_pairs(b, 600);
  for (const KernelPair& p : pairs) {
    CHECK(b.rho(p.z) <= 1e-12);
    CHECK(p.dist == doctest::Approx(std::abs(pair(b.grad(p.xi), p.xi - p.z))));
  }
  const KernelEvaluator exact = [&](const CVec& xi, const CVec& z) { return clf_kernel(b, xi, z); };
  const KernelValidation e = validate_Kglob(b, exact, 16, 2.0, pairs);
  CHECK(e.C_far == 0.0);
  CHECK(e.far > 0);
  CHECK(e.near > 0);

  // far regime at d = 0.5, k = 16
  const KernelApproximant K(b, 16, 2.0);
  std::vector<KernelPair> half;
  for (const KernelPair& p : pairs)
    if (p.dist > 0.45 && p.dist < 0.55) half.push_back(p);
  REQUIRE(half.size() > 5);
  const KernelEvaluator approx = [&](const CVec& xi, const CVec& z) { return K(xi, z); };
  const KernelValidation v = validate_Kglob(b, approx, 16, 2.0, pairs);
  for (const KernelPair& p : half)
    CHECK(std::abs(clf_kernel(b, p.xi, p.z) - K(p.xi, p.z)) <= v.C_far * std::pow(16.0, -2) * std::pow(p.dist, -4));

  // k = n: coarsest approximant, near bound finite
  const KernelApproximant K2(b, 2, 2.0);
  const KernelValidation v2 = validate_Kglob(b, [&](const CVec& xi, const CVec& z) { return K2(xi, z); }, 2, 2.0, pairs);
  CHECK(std::isfinite(v2.C_near));
  CHECK(v2.near > 0);
}

TEST_CASE("far-regime error improves with k") {
  const DomainSpec b = make_ball();
  std::vector<KernelPair> far;
  for (const KernelPair& p : kernel_pairs(b, 1500))
    if (p.dist >= 1.0 / 8) far.push_back(p);
  double prev = INFINITY;
  for (int k : {8, 16, 32, 64}) {
    const KernelApproximant K(b, k, 2.0);
    double worst = 0.0;
    for (const KernelPair& p : far) worst = std::max(worst, std::abs(clf_kernel(b, p.xi, p.z) - K(p.xi, p.z)));
    CHECK(worst <= 1.2 * prev);
    prev = worst;
  }
}
