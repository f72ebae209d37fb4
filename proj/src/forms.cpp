#include "hardysob/forms.hpp"

#include <bit>
#include <cmath>

namespace hs {

FormValue::FormValue(int n, int degree) : n_(n), degree_(degree) {
  if (n < 1 || n > kMaxDim) throw UsageError("FormValue: dimension must be in 1..3");
  if (degree < 0 || degree > 2 * n) throw UsageError("FormValue: degree out of range");
}

FormValue FormValue::dz(int n, int j) {
  FormValue f(n, 1);
  f.c_[1u << (2 * j)] = 1.0;
  f.c_[1u << (2 * j + 1)] = cd(0.0, 1.0);
  return f;
}

FormValue FormValue::dzbar(int n, int j) {
  FormValue f(n, 1);
  f.c_[1u << (2 * j)] = 1.0;
  f.c_[1u << (2 * j + 1)] = cd(0.0, -1.0);
  return f;
}

FormValue FormValue::one_form(const CVec& c, bool bar) {
  const int n = static_cast<int>(c.size());
  FormValue f(n, 1);
  for (int j = 0; j < n; ++j) f += (bar ? dzbar(n, j) : dz(n, j)) * c(j);
  return f;
}

FormValue& FormValue::operator+=(const FormValue& o) {
  if (o.n_ != n_ || o.degree_ != degree_) throw UsageError("FormValue: adding forms of different type");
  for (std::size_t m = 0; m < c_.size(); ++m) c_[m] += o.c_[m];
  return *this;
}

FormValue FormValue::operator*(cd s) const {
  FormValue r = *this;
  for (auto& v : r.c_) v *= s;
  return r;
}

namespace {

// Sign of e_I ^ e_J for disjoint index sets: (-1)^(# pairs i in I, j in J, i > j).
int merge_sign(unsigned I, unsigned J) {
  int inv = 0;
  for (unsigned rest = J; rest; rest &= rest - 1) {
    const unsigned j = std::countr_zero(rest);
    inv += std::popcount(I >> (j + 1));
  }
  return (inv % 2) ? -1 : 1;
}

cd determinant(std::vector<std::vector<cd>> m) {
  const std::size_t k = m.size();
  cd det = 1.0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < k; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (std::abs(m[piv][c]) == 0.0) return 0.0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < k; ++r) {
      const cd f = m[r][c] / m[c][c];
      for (std::size_t q = c; q < k; ++q) m[r][q] -= f * m[c][q];
    }
  }
  return det;
}

}  // namespace

FormValue wedge(const FormValue& a, const FormValue& b) {
  if (a.n() != b.n()) throw UsageError("wedge: dimension mismatch");
  const int deg = a.degree() + b.degree();
  FormValue r(a.n(), std::min(deg, 2 * a.n()));
  if (deg > 2 * a.n()) return r;
  const unsigned full = 1u << (2 * a.n());
  for (unsigned I = 0; I < full; ++I) {
    if (std::popcount(I) != a.degree() || a.coeff(I) == 0.0) continue;
    for (unsigned J = 0; J < full; ++J) {
      if ((I & J) || std::popcount(J) != b.degree() || b.coeff(J) == 0.0) continue;
      r.set_coeff(I | J, r.coeff(I | J) + static_cast<double>(merge_sign(I, J)) * a.coeff(I) * b.coeff(J));
    }
  }
  return r;
}

cd FormValue::evaluate(const std::vector<CVec>& vectors) const {
  if (static_cast<int>(vectors.size()) != degree_)
    throw UsageError("FormValue::evaluate: need as many vectors as the degree");
  if (degree_ == 0) return c_[0];
  std::vector<RVec> real;
  for (const CVec& v : vectors) real.push_back(to_real(v));
  const unsigned full = 1u << (2 * n_);
  cd total = 0.0;
  for (unsigned I = 0; I < full; ++I) {
    if (std::popcount(I) != degree_ || c_[I] == 0.0) continue;
    std::vector<std::vector<cd>> m(degree_, std::vector<cd>(degree_));
    int row = 0;
    for (unsigned rest = I; rest; rest &= rest - 1, ++row) {
      const int idx = std::countr_zero(rest);
      for (int col = 0; col < degree_; ++col) m[row][col] = real[col](idx);
    }
    total += c_[I] * determinant(std::move(m));
  }
  return total;
}

cd FormValue::top_coefficient() const {
  if (degree_ != 2 * n_) throw UsageError("top_coefficient: form is not of top degree");
  return c_[(1u << (2 * n_)) - 1];
}

FormValue leray_form(const DomainSpec& d, const CVec& xi) {
  const int n = d.n;
  const CVec g = d.grad(xi);
  const CMat A = d.hess_mixed(xi);
  FormValue levi(n, 2);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (A(j, k) != 0.0) levi += wedge(FormValue::dzbar(n, k), FormValue::dz(n, j)) * A(j, k);
  FormValue w = FormValue::one_form(g, false);
  for (int m = 1; m < n; ++m) w = wedge(w, levi);
  const cd norm = std::pow(cd(0.0, 2.0 * kPi), -n);
  return w * norm;
}

cd leray_on_frame(const DomainSpec& d, const CVec& xi, const std::vector<CVec>& frame) {
  return leray_form(d, xi).evaluate(frame);
}

double leray_density(const DomainSpec& d, const CVec& xi) {
  const BoundaryPointData bp = point_data(d, xi);
  const cd v = leray_on_frame(d, xi, bp.tangent_frame);
  if (std::abs(v.imag()) > 1e-10 * (1.0 + std::abs(v)))
    throw NumericalError("leray_density: complex density at " + format_point(xi));
  return v.real();
}

cd pair_dbar_with_leray(const FormValue& omega, const CVec& dbar_f) {
  return wedge(FormValue::one_form(dbar_f, true), omega).top_coefficient();
}

cd pair_dbar_with_leray(const DomainSpec& d, const CVec& dbar_f, const CVec& xi) {
  return pair_dbar_with_leray(leray_form(d, xi), dbar_f);
}

}  // namespace hs
