#include "hardysob/polynomial.hpp"

#include <cmath>

namespace hs {

double factorial(const MultiIndex& a) {
  double f = 1.0;
  for (int v : a)
    for (int k = 2; k <= v; ++k) f *= k;
  return f;
}

namespace {

void enumerate(int n, int var, int budget, bool exact, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (var == n) {
    if (!exact || budget == 0) out.push_back(cur);
    return;
  }
  for (int a = 0; a <= budget; ++a) {
    cur[var] = a;
    enumerate(n, var + 1, budget - a, exact, cur, out);
  }
  cur[var] = 0;
}

// Number of (alpha_var, ..., alpha_{n-1}) with sum <= budget.
std::size_t block_count(int n, int var, int budget) {
  const int k = n - var;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (budget + i) / i;
  return static_cast<std::size_t>(std::llround(c));
}

}  // namespace

std::vector<MultiIndex> multi_indices(int n, int m) {
  std::vector<MultiIndex> out;
  MultiIndex cur{};
  enumerate(n, 0, m, true, cur, out);
  return out;
}

PolynomialCn::PolynomialCn(int n, int degree) : n_(n), degree_(degree) {
  if (n < 1 || n > kMaxDim) throw UsageError("PolynomialCn: dimension must be in 1..3");
  if (degree < 0) throw UsageError("PolynomialCn: negative degree");
  MultiIndex cur{};
  enumerate(n, 0, degree, false, cur, mono_);
  c_.assign(mono_.size(), 0.0);
}

int PolynomialCn::degree() const {
  int d = -1;
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0.0) d = std::max(d, order(mono_[i]));
  return d;
}

std::size_t PolynomialCn::index(const MultiIndex& a) const {
  if (order(a) > degree_) throw UsageError("PolynomialCn: multi-index beyond degree");
  std::size_t pos = 0;
  int budget = degree_;
  for (int var = 0; var < n_; ++var) {
    for (int v = 0; v < a[var]; ++v) pos += block_count(n_, var + 1, budget - v);
    budget -= a[var];
  }
  return pos;
}

cd PolynomialCn::coeff(const MultiIndex& a) const {
  if (order(a) > degree_) return 0.0;
  return c_[index(a)];
}

void PolynomialCn::set(const MultiIndex& a, cd v) { c_[index(a)] = v; }

cd PolynomialCn::horner(const CVec& z, int var, int budget, std::size_t& pos) const {
  if (var == n_ - 1) {
    cd acc = 0.0;
    for (int a = budget; a >= 0; --a) acc = acc * z(var) + c_[pos + a];
    pos += budget + 1;
    return acc;
  }
  cd acc = 0.0, pw = 1.0;
  for (int a = 0; a <= budget; ++a) {
    acc += pw * horner(z, var + 1, budget - a, pos);
    pw *= z(var);
  }
  return acc;
}

cd PolynomialCn::operator()(const CVec& z) const {
  if (degree_ < 0) return 0.0;
  std::size_t pos = 0;
  return horner(z, 0, degree_, pos);
}

cd PolynomialCn::eval_naive(const CVec& z) const {
  cd s = 0.0;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0.0) continue;
    cd m = c_[i];
    for (int j = 0; j < n_; ++j) m *= std::pow(z(j), mono_[i][j]);
    s += m;
  }
  return s;
}

PolynomialCn PolynomialCn::derivative(const MultiIndex& a) const {
  const int da = order(a);
  PolynomialCn r(n_, std::max(0, degree_ - da));
  if (da > degree_) return r;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0.0) continue;
    const MultiIndex& b = mono_[i];
    MultiIndex out{};
    double f = 1.0;
    bool zero = false;
    for (int j = 0; j < n_; ++j) {
      if (b[j] < a[j]) {
        zero = true;
        break;
      }
      out[j] = b[j] - a[j];
      for (int k = out[j] + 1; k <= b[j]; ++k) f *= k;
    }
    if (!zero) r.add(out, c_[i] * f);
  }
  return r;
}

PolynomialCn& PolynomialCn::operator+=(const PolynomialCn& o) {
  if (o.n_ != n_) throw UsageError("PolynomialCn: dimension mismatch");
  if (o.degree_ > degree_) {
    PolynomialCn big(n_, o.degree_);
    for (std::size_t i = 0; i < c_.size(); ++i) big.add(mono_[i], c_[i]);
    *this = std::move(big);
  }
  for (std::size_t i = 0; i < o.c_.size(); ++i)
    if (o.c_[i] != 0.0) add(o.mono_[i], o.c_[i]);
  return *this;
}

PolynomialCn& PolynomialCn::operator-=(const PolynomialCn& o) { return *this += o * -1.0; }

PolynomialCn PolynomialCn::operator*(cd s) const {
  PolynomialCn r = *this;
  for (cd& v : r.c_) v *= s;
  return r;
}

}  // namespace hs
