#include "hardysob/holo.hpp"

#include <cmath>

namespace hs {

cd HoloFunction::derivative(const MultiIndex& a, const CVec& z) const {
  const int m = order(a);
  if (m == 0) return eval(z);
  if (m > max_order) throw UsageError(label + ": derivative of order " + std::to_string(m) + " unavailable");
  return deriv(a, z);
}

CVec HoloFunction::gradient(const CVec& z) const {
  CVec g(n);
  for (int j = 0; j < n; ++j) {
    MultiIndex a{};
    a[j] = 1;
    g(j) = derivative(a, z);
  }
  return g;
}

HoloFunction from_polynomial(PolynomialCn p, std::string label) {
  HoloFunction f;
  f.label = std::move(label);
  f.n = p.n();
  auto shared = std::make_shared<const PolynomialCn>(std::move(p));
  f.eval = [shared](const CVec& z) { return (*shared)(z); };
  f.deriv = [shared](const MultiIndex& a, const CVec& z) {
    // direct monomial differentiation; polynomials here are small
    cd s = 0.0;
    const auto& mono = shared->monomials();
    const auto& c = shared->coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] == 0.0) continue;
      cd term = c[i];
      for (int j = 0; j < shared->n() && term != 0.0; ++j) {
        if (mono[i][j] < a[j]) {
          term = 0.0;
          break;
        }
        for (int k = mono[i][j] - a[j] + 1; k <= mono[i][j]; ++k) term *= k;
        term *= std::pow(z(j), mono[i][j] - a[j]);
      }
      s += term;
    }
    return s;
  };
  return f;
}

HoloFunction exponential_linear(const CVec& b, std::string label) {
  HoloFunction f;
  f.label = std::move(label);
  f.n = static_cast<int>(b.size());
  f.eval = [b](const CVec& z) { return std::exp(pair(b, z)); };
  f.deriv = [b](const MultiIndex& a, const CVec& z) {
    cd c = std::exp(pair(b, z));
    for (int j = 0; j < b.size(); ++j) c *= std::pow(b(j), a[j]);
    return c;
  };
  return f;
}

HoloFunction power_singularity(double s, const CVec& a, std::string label) {
  HoloFunction f;
  f.label = std::move(label);
  f.n = static_cast<int>(a.size());
  const CVec ac = a.conjugate();
  f.eval = [s, ac](const CVec& z) { return std::pow(1.0 - pair(ac, z), s); };
  f.deriv = [s, ac](const MultiIndex& al, const CVec& z) {
    const int m = order(al);
    cd c = 1.0;
    for (int k = 0; k < m; ++k) c *= -(s - k);
    for (int j = 0; j < ac.size(); ++j) c *= std::pow(ac(j), al[j]);
    return c * std::pow(1.0 - pair(ac, z), s - m);
  };
  f.validity = 0.0;
  return f;
}

HoloFunction log_singularity(const CVec& a, std::string label) {
  HoloFunction f;
  f.label = std::move(label);
  f.n = static_cast<int>(a.size());
  const CVec ac = a.conjugate();
  f.eval = [ac](const CVec& z) { return std::log(1.0 - pair(ac, z)); };
  f.deriv = [ac](const MultiIndex& al, const CVec& z) {
    const int m = order(al);
    // d^m log(1 - u) / du^m = -(m-1)! (1 - u)^{-m}
    double fac = 1.0;
    for (int k = 2; k < m; ++k) fac *= k;
    cd c = -fac;
    for (int j = 0; j < ac.size(); ++j) c *= std::pow(ac(j), al[j]);
    return c * std::pow(1.0 - pair(ac, z), -m);
  };
  f.validity = 0.0;
  return f;
}

HoloFunction times_coordinate(HoloFunction g, int j, std::string label) {
  HoloFunction f;
  f.label = std::move(label);
  f.n = g.n;
  f.max_order = g.max_order;
  f.validity = g.validity;
  auto inner = std::make_shared<const HoloFunction>(std::move(g));
  f.eval = [inner, j](const CVec& z) { return z(j) * inner->eval(z); };
  f.deriv = [inner, j](const MultiIndex& a, const CVec& z) {
    cd v = z(j) * inner->derivative(a, z);
    if (a[j] > 0) {
      MultiIndex b = a;
      --b[j];
      v += static_cast<double>(a[j]) * inner->derivative(b, z);
    }
    return v;
  };
  return f;
}

double singular_validity(const DomainSpec& d, const CVec& a) {
  // Minimise rho over z = a / |a|^2 + w with w orthogonal to a, by Newton
  // steps in the real coordinates of w (one step is exact for quadrics).
  const int n = d.n;
  const CVec base = a / a.squaredNorm();
  const CMat U = [&] {
    CMat Q = CMat::Identity(n, n);
    Q.col(0) = a / a.norm();
    int col = 1;
    for (int j = 0; j < n && col < n; ++j) {
      CVec v = CVec::Zero(n);
      v(j) = 1.0;
      for (int c = 0; c < col; ++c) v -= Q.col(c).dot(v) * Q.col(c);
      if (v.norm() > 1e-8) Q.col(col++) = v / v.norm();
    }
    return Q;
  }();
  const int m = 2 * (n - 1);
  if (m == 0) return d.rho(base);
  std::vector<CVec> dirs;
  for (int c = 1; c < n; ++c) {
    dirs.push_back(U.col(c));
    dirs.push_back(cd(0.0, 1.0) * U.col(c));
  }
  CVec z = base;
  for (int it = 0; it < 20; ++it) {
    const CVec g = real_gradient(d, z);
    const RMat H = real_hessian(d, z);
    RVec gr(m);
    RMat Hr(m, m);
    for (int p = 0; p < m; ++p) {
      gr(p) = real_dot(g, dirs[p]);
      const RVec dp = to_real(dirs[p]);
      for (int q = 0; q < m; ++q) Hr(p, q) = dp.dot(H * to_real(dirs[q]));
    }
    const RVec step = Hr.ldlt().solve(-gr);
    for (int p = 0; p < m; ++p) z += step(p) * dirs[p];
    if (step.norm() < 1e-14) break;
  }
  return d.rho(z);
}

double holo_fd_error(const DomainSpec& d, const HoloFunction& f, int order_max, double t_max, int samples,
                     std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> U(0.2, 0.95);
  double worst = 0.0;
  const double h = 1e-5;
  for (int s = 0; s < samples; ++s) {
    const CVec z = random_level_point(d, t_max, rng) * U(rng);
    for (int m = 0; m < std::min(order_max, f.max_order); ++m) {
      for (const MultiIndex& a : multi_indices(f.n, m)) {
        for (int j = 0; j < f.n; ++j) {
          CVec ex = CVec::Zero(f.n), ey = CVec::Zero(f.n);
          ex(j) = h;
          ey(j) = cd(0.0, h);
          const cd dx = (f.derivative(a, z + ex) - f.derivative(a, z - ex)) / (2 * h);
          const cd dy = (f.derivative(a, z + ey) - f.derivative(a, z - ey)) / (2 * h);
          MultiIndex b = a;
          ++b[j];
          const cd exact = f.derivative(b, z);
          const double scale = 1.0 + std::abs(exact);
          worst = std::max(worst, std::abs(0.5 * (dx - cd(0, 1) * dy) - exact) / scale);
          worst = std::max(worst, std::abs(0.5 * (dx + cd(0, 1) * dy)) / scale);
        }
      }
    }
  }
  return worst;
}

}  // namespace hs
