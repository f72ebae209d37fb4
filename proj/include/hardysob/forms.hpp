#pragma once

#include "hardysob/core.hpp"
#include "hardysob/domain.hpp"

#include <array>
#include <vector>

namespace hs {

/// Complex-valued differential form at a point of C^n = R^{2n}, stored as its
/// coefficients on the wedge basis of real covectors dx_1, dy_1, ..., dx_n,
/// dy_n. A subset of the basis is a bitmask; entries with popcount != degree
/// are zero.
class FormValue {
 public:
  static constexpr int kMaxReal = 2 * kMaxDim;

  FormValue(int n, int degree);

  static FormValue zero(int n, int degree) { return FormValue(n, degree); }
  /// dz_j or dzbar_j.
  static FormValue dz(int n, int j);
  static FormValue dzbar(int n, int j);
  /// sum_j c_j dz_j  (or dzbar_j when bar is set).
  static FormValue one_form(const CVec& c, bool bar);

  int n() const { return n_; }
  int degree() const { return degree_; }
  cd coeff(unsigned mask) const { return c_[mask]; }
  void set_coeff(unsigned mask, cd v) { c_[mask] = v; }

  FormValue& operator+=(const FormValue& o);
  FormValue operator*(cd s) const;
  friend FormValue operator+(FormValue a, const FormValue& b) { return a += b; }

  /// Evaluates the alternating form on `degree` real tangent vectors (given
  /// as vectors of C^n).
  cd evaluate(const std::vector<CVec>& vectors) const;

  /// Coefficient of dx_1 ^ dy_1 ^ ... ^ dx_n ^ dy_n of a top-degree form.
  cd top_coefficient() const;

 private:
  int n_;
  int degree_;
  std::array<cd, 1u << kMaxReal> c_{};
};

FormValue wedge(const FormValue& a, const FormValue& b);

/// omega = (2 pi i)^{-n} d rho ^ (dbar d rho)^{n-1} at xi.
FormValue leray_form(const DomainSpec& d, const CVec& xi);

/// Density dS/dsigma at a point of a level set: omega on the oriented unit
/// tangent frame. Throws NumericalError when the gradient vanishes.
double leray_density(const DomainSpec& d, const CVec& xi);

/// omega evaluated on an explicit frame (used for orientation checks).
cd leray_on_frame(const DomainSpec& d, const CVec& xi, const std::vector<CVec>& frame);

/// Density of the 2n-form (sum_j dbar_f_j dzbar_j) ^ omega with respect to
/// Lebesgue measure dx_1 dy_1 ... dx_n dy_n.
cd pair_dbar_with_leray(const DomainSpec& d, const CVec& dbar_f, const CVec& xi);

/// Same, with the Leray form already evaluated at xi.
cd pair_dbar_with_leray(const FormValue& omega, const CVec& dbar_f);

}  // namespace hs
