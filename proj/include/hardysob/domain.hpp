#pragma once

#include "hardysob/core.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace hs {

/// A strongly convex domain {rho < 0} in C^n together with the analytic
/// derivative data of its defining function.
///
/// grad(z)_j = d rho / d z_j, hess_mixed(z)_{jk} = d^2 rho / dz_j d zbar_k,
/// hess_holo(z)_{jk} = d^2 rho / dz_j dz_k. All callbacks are pure.
struct DomainSpec {
  std::string name;
  std::vector<double> params;
  int n = 2;
  std::function<double(const CVec&)> rho;
  std::function<CVec(const CVec&)> grad;
  std::function<CMat(const CVec&)> hess_mixed;
  std::function<CMat(const CVec&)> hess_holo;
  double eps_shell = 0.1;
  bool contains_origin = true;
  /// rho(U z) = rho(z) for every unitary U (the ball); region and grid
  /// templates may then be rotated instead of rebuilt.
  bool unitary_invariant = false;
};

struct DomainEval {
  double rho;
  CVec grad;
  CMat A;
  CMat B;
};

/// Quadric rho(z) = sum A_jk z_j zbar_k + Re(z^T B z) - 1 with A Hermitian
/// and B complex symmetric.
DomainSpec make_quadric(std::string name, const CMat& A, const CMat& B, double eps = 0.1);

DomainSpec make_ball(int n = 2, double eps = 0.1);
/// rho = sum_j a_j |z_j|^2 - 1.
DomainSpec make_ellipsoid(const std::vector<double>& axes, double eps = 0.1);
/// rho = |z|^2 + c Re(z_1^2) - 1 in C^2; strongly convex iff |c| < 1.
DomainSpec make_perturbed(double c, double eps = 0.1);

/// Catalog lookup: "ball" [n], "ellipsoid" a_1 .. a_n, "perturbed" c.
/// Throws UsageError for unknown names or bad parameters.
DomainSpec make_domain(const std::string& name, const std::vector<double>& params,
                       double eps = 0.1);

/// Value and derivatives at z; throws NumericalError naming z on non-finite
/// output.
DomainEval eval(const DomainSpec& d, const CVec& z);

/// Real gradient of rho as a vector of C^n (equals 2 conj(grad)).
CVec real_gradient(const DomainSpec& d, const CVec& z);

/// Real 2n x 2n Hessian in coordinates (x1, y1, x2, y2, ...).
RMat real_hessian(const DomainSpec& d, const CVec& z);

/// Point r u on the level set {rho = t} along the ray through direction u
/// (|u| = 1). Requires 0 inside the level domain.
CVec radial_point(const DomainSpec& d, const CVec& u, double t);

struct BoundaryPointData {
  CVec xi;
  double level = 0.0;
  CVec normal;                      // unit complex normal conj(grad)/|grad|
  std::vector<CVec> tangent_frame;  // 2n-1 real-orthonormal vectors
  std::vector<CVec> ct_frame;       // n-1 complex-orthonormal vectors of T_xi
};

/// Frames at a point of a level set; (normal, tangent_frame) is positively
/// oriented so that the tangent frame carries the boundary orientation.
BoundaryPointData point_data(const DomainSpec& d, const CVec& xi);

struct Projection {
  CVec xi;          // nearest point on {rho = t}
  double s = 0.0;   // z - xi = s * real_gradient(xi)
  double distance = 0.0;
  int iterations = 0;
};

class ProjectionError : public NumericalError {
 public:
  ProjectionError(const std::string& what, CVec last, double residual)
      : NumericalError(what), last_iterate(std::move(last)), residual(residual) {}
  CVec last_iterate;
  double residual;
};

/// Nearest point of {rho = t} to z by damped Newton on the KKT system
/// (xi + s grad rho(xi) = z, rho(xi) = t), with a golden-section restart
/// along the gradient line.
Projection project_point(const DomainSpec& d, const CVec& z, double t = 0.0);

BoundaryPointData project_boundary(const DomainSpec& d, const CVec& z, double t = 0.0);

/// Real Jacobian d pr / dz (2n x 2n) of the projection onto {rho = t} at z,
/// by implicit differentiation of the KKT system.
RMat projection_jacobian(const DomainSpec& d, const CVec& z, const Projection& pr);

/// z* = 2 pr(z) - z.
CVec symmetric_point(const DomainSpec& d, const CVec& z);

/// z*, together with the matrix D_{jk} = d z*_k / d zbar_j.
struct SymmetricPoint {
  CVec zstar;
  CVec pr;
  CMat dbar;  // dbar(j, k) = d z*_k / d zbar_j
};
SymmetricPoint symmetric_point_with_derivative(const DomainSpec& d, const CVec& z);

/// Holomorphic normal-form change of coordinates at a boundary point:
/// phi(z) = Phi (z - xi) + ((z - xi)^T B (z - xi)) e_n takes rho to
/// 2 Re w_n + w^T A' conj(w) + O(|w|^3).
struct NormalForm {
  CVec xi;
  CMat Phi;
  CMat B;
  CMat A_prime;
  CMat Phi_inv;

  CVec forward(const CVec& z) const;
  /// Inverse map psi, by fixed-point iteration on the quadratic term.
  CVec inverse(const CVec& w) const;
};
NormalForm normalize_at(const DomainSpec& d, const CVec& xi);

struct DomainValidation {
  bool ok = true;
  std::vector<std::string> failures;
  std::optional<CVec> hessian_witness;  // point where d^2 rho is not positive
  double min_hessian_eigenvalue = 0.0;
  double max_derivative_error = 0.0;
  int samples = 0;
};

/// Samples random points with |rho| <= eps: origin inside, real Hessian
/// positive definite, analytic derivatives against central differences.
DomainValidation validate_domain(const DomainSpec& d, int samples = 1000,
                                 std::uint64_t seed = 1);

using Rng = std::mt19937_64;

/// Uniform direction on the unit sphere of C^n.
CVec random_direction(int n, Rng& rng);

/// Random point with rho = t along a uniformly distributed direction.
CVec random_level_point(const DomainSpec& d, double t, Rng& rng);

}  // namespace hs
