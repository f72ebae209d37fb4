#pragma once

#include "hardysob/core.hpp"
#include "hardysob/domain.hpp"
#include "hardysob/polynomial.hpp"

#include <functional>
#include <limits>
#include <string>

namespace hs {

/// Holomorphic function with closed-form derivatives.
struct HoloFunction {
  std::string label;
  int n = 2;
  std::function<cd(const CVec&)> eval;
  std::function<cd(const MultiIndex&, const CVec&)> deriv;
  int max_order = std::numeric_limits<int>::max();
  /// f is holomorphic on {rho < validity}; +inf for entire functions.
  double validity = std::numeric_limits<double>::infinity();

  cd operator()(const CVec& z) const { return eval(z); }
  /// Throws UsageError when |alpha| exceeds max_order.
  cd derivative(const MultiIndex& a, const CVec& z) const;
  /// Holomorphic gradient (d f / d z_j).
  CVec gradient(const CVec& z) const;
};

HoloFunction from_polynomial(PolynomialCn p, std::string label);

/// exp(sum_j b_j z_j).
HoloFunction exponential_linear(const CVec& b, std::string label);

/// (1 - <z, a>)^s with <z, a> = sum z_j conj(a_j), principal branch.
/// validity is filled by singular_validity when a domain is supplied.
HoloFunction power_singularity(double s, const CVec& a, std::string label);

/// log(1 - <z, a>), principal branch.
HoloFunction log_singularity(const CVec& a, std::string label);

/// z_j * f.
HoloFunction times_coordinate(HoloFunction f, int j, std::string label);

/// Smallest rho on the hyperplane {<z, a> = 1}: the largest t with the
/// singular set of the power and log families outside Omega_t.
double singular_validity(const DomainSpec& d, const CVec& a);

/// Largest relative deviation of the analytic derivatives from central
/// differences (orders 1..order) and of the dbar-components from zero, over
/// random points with rho <= t_max.
double holo_fd_error(const DomainSpec& d, const HoloFunction& f, int order, double t_max, int samples,
                     std::uint64_t seed = 1);

}  // namespace hs
