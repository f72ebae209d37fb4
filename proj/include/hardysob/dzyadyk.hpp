#pragma once

#include "hardysob/core.hpp"
#include "hardysob/domain.hpp"
#include "hardysob/polynomial.hpp"

#include <map>
#include <memory>
#include <shared_mutex>
#include <utility>
#include <vector>

namespace hs {

/// L(t) = {|lambda| <= R} cut by the line through 1 of direction e^{it},
/// keeping the side that contains 0.
struct Lune {
  double t = kPi / 2;
  double R = 1.1;

  /// e^{i(pi/2 - t)}; Re(rot (1 - lambda)) >= 0 on L(t).
  cd rot() const { return std::polar(1.0, kPi / 2 - t); }
  bool contains(cd lambda, double tol = 1e-12) const;
  /// Chord parameters y_- < 0 < y_+ with 1 - y e^{it} on |lambda| = R.
  std::pair<double, double> chord() const;
};

/// <d rho(xi), xi>.
cd leray_pairing(const DomainSpec& d, const CVec& xi);
/// <d rho(xi), z> / <d rho(xi), xi>.
cd normalized_pairing(const DomainSpec& d, const CVec& xi, const CVec& z);

/// sup |lambda(xi, z)| over xi on levels in [-eps, eps] and z on the
/// boundary, by sampling, plus a 5% margin.
double lune_radius(const DomainSpec& d, int samples = 4000, std::uint64_t seed = 11);

Lune lune_of(const DomainSpec& d, const CVec& xi, double R);

struct ApproximantCert {
  double C1 = 0.0;  // sup |1/(1-l) - T| |1-l|^{1+r} j^r off the 1/j-disc
  double C2 = 0.0;  // sup |T| / j on the 1/j-disc
  double condition = 0.0;
  std::size_t mesh_size = 0;
  bool reduced = false;  // basis degree lowered for conditioning
};

struct CauchyApproximant {
  int j = 1;
  double t = kPi / 2;
  double r = 2.0;
  std::vector<cd> coeffs;  // monomial coefficients in lambda
  ApproximantCert cert;

  cd operator()(cd lambda) const;
};

/// Boundary mesh of L(t) minus the disc |1 - lambda| < 1/j: chord graded
/// toward the disc, big arc, and the small arc around 1.
std::vector<cd> lune_mesh(const Lune& L, int j, int density);

/// Weighted least-squares approximant of 1/(1 - lambda) of degree <= j,
/// weight |1 - lambda|^{1+r} j^r, in a QR-orthonormalized basis. With
/// exact >= 0 the Taylor coefficients 0..exact are pinned to 1.
CauchyApproximant build_T(int j, double r, const Lune& L, int exact = -1);

/// T = (1 - phi^M)/(1 - lambda) with a quadratic phi mapping L(t) into the
/// closed unit disc, phi(1) = 1, and 2M - 1 <= j.
CauchyApproximant blend_T(int j, double r, const Lune& L);

/// Measures the certificate of an approximant on a fine mesh.
ApproximantCert certify(const CauchyApproximant& T, const Lune& L);

/// K^glob_k(xi, z) = c^{-n} T_j(t, lambda)^n with j = ceil(k / n).
/// Pinned order used by the projection pipeline: j / 2, none for j = 1.
int reproducing_order(int j);

class KernelApproximant {
 public:
  /// exact >= 0 pins the low Taylor coefficients of every T_j, which makes
  /// the ball kernel reproduce polynomials of degree <= exact.
  KernelApproximant(const DomainSpec& d, int k, double r, double R = 0.0, int exact = -1);

  int k() const { return k_; }
  int j() const { return j_; }
  double r() const { return r_; }
  double R() const { return R_; }
  int degree() const { return j_ * n_; }
  int exact() const { return exact_; }

  cd operator()(const CVec& xi, const CVec& z) const;
  /// T_j for the exact lune parameter t, interpolated linearly between the
  /// two neighbouring cached approximants on the pi/64 grid.
  std::vector<cd> coefficients_at(double t) const;
  /// Adds weight * K^glob(xi, .) to out as a polynomial in z.
  void add_monomials(const CVec& xi, cd weight, PolynomialCn& out) const;
  /// Cached approximants built so far, keyed by grid index of t.
  std::vector<CauchyApproximant> cached() const;
  const CauchyApproximant& at_index(int q) const;

  static constexpr double kStep = kPi / 64;

 private:
  std::shared_ptr<const DomainSpec> domain_;
  int n_;
  int k_;
  int j_;
  double r_;
  double R_;
  int exact_;
  mutable std::shared_mutex mutex_;
  mutable std::map<int, std::shared_ptr<const CauchyApproximant>> cache_;
};

using KernelEvaluator = std::function<cd(const CVec& xi, const CVec& z)>;

struct KernelPair {
  CVec xi;
  CVec z;
  double dist = 0.0;  // d(xi, z)
};

/// Boundary xi with partners z in the closed domain, log-uniform in d(xi, z)
/// over [dmin, dmax].
std::vector<KernelPair> kernel_pairs(const DomainSpec& d, std::size_t count, double dmin = 1e-3,
                                     double dmax = 1.0, std::uint64_t seed = 3);

struct KernelValidation {
  double C_far = 0.0;
  double C_near = 0.0;
  std::size_t far = 0;
  std::size_t near = 0;
  double max_far_error = 0.0;
};

/// C_far = sup_{d >= 1/k} |K - K_k| k^r d^{n+r}, C_near = sup_{d < 1/k} |K_k| / k^n.
KernelValidation validate_Kglob(const DomainSpec& d, const KernelEvaluator& Kk, int k, double r,
                                const std::vector<KernelPair>& pairs);

}  // namespace hs
