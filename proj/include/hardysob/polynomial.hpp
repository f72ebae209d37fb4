#pragma once

#include "hardysob/core.hpp"

#include <array>
#include <vector>

namespace hs {

/// Multi-index alpha; entries beyond the dimension are zero.
using MultiIndex = std::array<int, kMaxDim>;

inline int order(const MultiIndex& a) { return a[0] + a[1] + a[2]; }

/// alpha! = prod alpha_j!
double factorial(const MultiIndex& a);

/// All multi-indices of dimension n and total order exactly m, in lexicographic order.
std::vector<MultiIndex> multi_indices(int n, int m);

/// Dense polynomial in n complex variables of total degree <= degree.
/// Coefficients are stored in lexicographic order of (alpha_1, ..., alpha_n)
/// with alpha_n running fastest inside each block.
class PolynomialCn {
 public:
  PolynomialCn() = default;
  PolynomialCn(int n, int degree);

  int n() const { return n_; }
  /// Storage bound on the degree.
  int capacity() const { return degree_; }
  /// Largest |alpha| with a nonzero coefficient (-1 for the zero polynomial).
  int degree() const;
  std::size_t size() const { return c_.size(); }

  std::size_t index(const MultiIndex& a) const;
  cd coeff(const MultiIndex& a) const;
  void set(const MultiIndex& a, cd v);
  void add(const MultiIndex& a, cd v) { c_[index(a)] += v; }
  const std::vector<cd>& coefficients() const { return c_; }
  std::vector<cd>& coefficients() { return c_; }
  /// Multi-indices in storage order.
  const std::vector<MultiIndex>& monomials() const { return mono_; }

  /// Nested evaluation, variable by variable.
  cd operator()(const CVec& z) const;
  /// Monomial-by-monomial sum, for cross-checks.
  cd eval_naive(const CVec& z) const;

  PolynomialCn derivative(const MultiIndex& a) const;

  PolynomialCn& operator+=(const PolynomialCn& o);
  PolynomialCn& operator-=(const PolynomialCn& o);
  PolynomialCn operator*(cd s) const;

 private:
  cd horner(const CVec& z, int var, int budget, std::size_t& pos) const;

  int n_ = 0;
  int degree_ = -1;
  std::vector<cd> c_;
  std::vector<MultiIndex> mono_;
};

inline PolynomialCn operator+(PolynomialCn a, const PolynomialCn& b) { return a += b; }
inline PolynomialCn operator-(PolynomialCn a, const PolynomialCn& b) { return a -= b; }

}  // namespace hs
