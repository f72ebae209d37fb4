#include "hardysob/domain.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace hs {

DomainSpec make_quadric(std::string name, const CMat& A, const CMat& B, double eps) {
  const int n = static_cast<int>(A.rows());
  if (n < 1 || n > kMaxDim || A.cols() != n || B.rows() != n || B.cols() != n)
    throw UsageError("make_quadric: matrix shapes must be n x n with n <= 3");
  if (!(eps > 0.0)) throw UsageError("make_quadric: eps_shell must be positive");
  DomainSpec d;
  d.name = std::move(name);
  d.n = n;
  d.eps_shell = eps;
  d.rho = [A, B](const CVec& z) {
    const cd herm = (z.transpose() * A * z.conjugate())(0, 0);
    const cd holo = (z.transpose() * B * z)(0, 0);
    return herm.real() + holo.real() - 1.0;
  };
  d.grad = [A, B](const CVec& z) -> CVec { return A * z.conjugate() + B * z; };
  d.hess_mixed = [A](const CVec&) -> CMat { return A; };
  d.hess_holo = [B](const CVec&) -> CMat { return B; };
  d.contains_origin = true;
  return d;
}

DomainSpec make_ball(int n, double eps) {
  if (n < 1 || n > kMaxDim) throw UsageError("ball: dimension must be in 1..3");
  DomainSpec d = make_quadric("ball", CMat::Identity(n, n), CMat::Zero(n, n), eps);
  d.params = {static_cast<double>(n)};
  d.unitary_invariant = true;
  return d;
}

DomainSpec make_ellipsoid(const std::vector<double>& axes, double eps) {
  const int n = static_cast<int>(axes.size());
  if (n < 1 || n > kMaxDim) throw UsageError("ellipsoid: need 1..3 axis weights");
  CMat A = CMat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    if (!(axes[j] > 0.0)) throw UsageError("ellipsoid: axis weights must be positive");
    A(j, j) = axes[j];
  }
  DomainSpec d = make_quadric("ellipsoid", A, CMat::Zero(n, n), eps);
  d.params = axes;
  return d;
}

DomainSpec make_perturbed(double c, double eps) {
  CMat B = CMat::Zero(2, 2);
  B(0, 0) = c;
  DomainSpec d = make_quadric("perturbed", CMat::Identity(2, 2), B, eps);
  d.params = {c};
  return d;
}

DomainSpec make_domain(const std::string& name, const std::vector<double>& params,
                       double eps) {
  if (name == "ball") {
    const int n = params.empty() ? 2 : static_cast<int>(params[0]);
    return make_ball(n, eps);
  }
  if (name == "ellipsoid") {
    if (params.empty()) return make_ellipsoid({2.0, 1.0}, eps);
    return make_ellipsoid(params, eps);
  }
  if (name == "perturbed") return make_perturbed(params.empty() ? 0.1 : params[0], eps);
  throw UsageError("unknown domain '" + name + "' (catalog: ball, ellipsoid, perturbed)");
}

DomainEval eval(const DomainSpec& d, const CVec& z) {
  DomainEval e{d.rho(z), d.grad(z), d.hess_mixed(z), d.hess_holo(z)};
  bool finite = std::isfinite(e.rho) && all_finite(e.grad);
  for (Eigen::Index j = 0; finite && j < e.A.size(); ++j)
    finite = std::isfinite(std::abs(e.A(j))) && std::isfinite(std::abs(e.B(j)));
  if (!finite) throw NumericalError("domain '" + d.name + "': non-finite data at z = " + format_point(z));
  return e;
}

CVec real_gradient(const DomainSpec& d, const CVec& z) { return 2.0 * d.grad(z).conjugate(); }

namespace {

// Full second-order form v -> v^T H v of rho at a point, H the real Hessian.
double second_form(const CMat& A, const CMat& B, const CVec& v) {
  const cd herm = (v.transpose() * A * v.conjugate())(0, 0);
  const cd holo = (v.transpose() * B * v)(0, 0);
  return 2.0 * (herm.real() + holo.real());
}

CVec real_basis(int n, int a) {
  CVec e = CVec::Zero(n);
  e(a / 2) = (a % 2 == 0) ? cd(1.0, 0.0) : cd(0.0, 1.0);
  return e;
}

}  // namespace

RMat real_hessian(const DomainSpec& d, const CVec& z) {
  const int n = d.n;
  const CMat A = d.hess_mixed(z), B = d.hess_holo(z);
  RMat H(2 * n, 2 * n);
  for (int a = 0; a < 2 * n; ++a) {
    const CVec ea = real_basis(n, a);
    H(a, a) = second_form(A, B, ea);
    for (int b = 0; b < a; ++b) {
      const CVec eb = real_basis(n, b);
      H(a, b) = H(b, a) =
          0.5 * (second_form(A, B, ea + eb) - second_form(A, B, ea) - second_form(A, B, eb));
    }
  }
  return H;
}

CVec radial_point(const DomainSpec& d, const CVec& u, double t) {
  auto f = [&](double r) { return d.rho(r * u) - t; };
  if (!(f(0.0) < 0.0))
    throw NumericalError("radial_point: origin is not inside the level set rho < " + std::to_string(t));
  double lo = 0.0, hi = 1.0;
  for (int k = 0; f(hi) < 0.0; ++k) {
    lo = hi;
    hi *= 2.0;
    if (k > 60) throw NumericalError("radial_point: level set unbounded along " + format_point(u));
  }
  double r = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fr = f(r);
    if (fr < 0.0) lo = r; else hi = r;
    const double df = real_dot(real_gradient(d, r * u), u);
    double next = (df > 0.0) ? r - fr / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - r) <= 1e-15 * (1.0 + r)) {
      r = next;
      break;
    }
    r = next;
  }
  return r * u;
}

BoundaryPointData point_data(const DomainSpec& d, const CVec& xi) {
  const int n = d.n;
  BoundaryPointData bp;
  bp.xi = xi;
  bp.level = d.rho(xi);
  const CVec g = d.grad(xi);
  const double gn = g.norm();
  if (!(gn > 1e-12)) throw NumericalError("point_data: degenerate gradient at " + format_point(xi));
  bp.normal = g.conjugate() / gn;
  bp.tangent_frame.push_back(cd(0.0, 1.0) * bp.normal);
  std::vector<CVec> basis{bp.normal};
  for (int j = 0; j < n && static_cast<int>(bp.ct_frame.size()) < n - 1; ++j) {
    CVec v = CVec::Zero(n);
    v(j) = 1.0;
    for (const CVec& b : basis) v -= b.dot(v) * b;  // dot conjugates its left side
    for (const CVec& b : basis) v -= b.dot(v) * b;
    const double vn = v.norm();
    if (vn < 1e-8) continue;
    v /= vn;
    basis.push_back(v);
    bp.ct_frame.push_back(v);
    bp.tangent_frame.push_back(v);
    bp.tangent_frame.push_back(cd(0.0, 1.0) * v);
  }
  return bp;
}

namespace {

struct KktState {
  RVec x;
  double s;
};

double kkt_residual(const DomainSpec& d, const RVec& zr, const KktState& st, double t, RVec& out) {
  const int m = static_cast<int>(zr.size());
  const CVec xi = to_complex(st.x);
  const RVec g = to_real(real_gradient(d, xi));
  out.resize(m + 1);
  out.head(m) = st.x + st.s * g - zr;
  out(m) = d.rho(xi) - t;
  return out.norm();
}

RMat kkt_matrix(const DomainSpec& d, const CVec& xi, double s) {
  const int m = 2 * d.n;
  RMat M = RMat::Zero(m + 1, m + 1);
  const RVec g = to_real(real_gradient(d, xi));
  M.topLeftCorner(m, m) = RMat::Identity(m, m) + s * real_hessian(d, xi);
  M.block(0, m, m, 1) = g;
  M.block(m, 0, 1, m) = g.transpose();
  return M;
}

bool newton_kkt(const DomainSpec& d, const RVec& zr, double t, KktState& st, int& iters,
                double& res) {
  RVec r;
  res = kkt_residual(d, zr, st, t, r);
  const double tol = 1e-14 * (1.0 + zr.norm());
  for (; iters < 100; ++iters) {
    if (!(res > tol)) return std::isfinite(res);
    const RMat M = kkt_matrix(d, to_complex(st.x), st.s);
    const RVec step = M.partialPivLu().solve(r);
    if (!step.allFinite()) return false;
    double lambda = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls, lambda *= 0.5) {
      KktState trial{st.x - lambda * step.head(step.size() - 1), st.s - lambda * step(step.size() - 1)};
      RVec rt;
      const double rn = kkt_residual(d, zr, trial, t, rt);
      if (rn < (1.0 - 1e-4 * lambda) * res || rn <= tol) {
        st = trial;
        r = rt;
        res = rn;
        accepted = true;
        break;
      }
    }
    if (!accepted) return res <= 1e3 * tol;
  }
  return res <= 1e3 * tol;
}

}  // namespace

Projection project_point(const DomainSpec& d, const CVec& z, double t) {
  const RVec zr = to_real(z);
  const CVec g0 = real_gradient(d, z);
  const double g2 = g0.squaredNorm();
  if (!(g2 > 0.0) || !std::isfinite(g2))
    throw ProjectionError("project_point: degenerate gradient at " + format_point(z), z, INFINITY);
  const double s0 = (d.rho(z) - t) / g2;
  KktState st{to_real(z - s0 * g0), s0};
  int iters = 0;
  double res = 0.0;
  bool ok = newton_kkt(d, zr, t, st, iters, res);
  if (!ok) {
    // Restart from the best point of the gradient line through z.
    const CVec dir = g0 / std::sqrt(g2);
    auto miss = [&](double u) { return std::abs(d.rho(z - u * dir) - t); };
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = -1.0, b = 1.0;
    double c1 = b - phi * (b - a), c2 = a + phi * (b - a);
    for (int k = 0; k < 200; ++k) {
      if (miss(c1) < miss(c2)) b = c2; else a = c1;
      c1 = b - phi * (b - a);
      c2 = a + phi * (b - a);
    }
    const double u = 0.5 * (a + b);
    const CVec xi = z - u * dir;
    const CVec gx = real_gradient(d, xi);
    st = KktState{to_real(xi), real_dot(z - xi, gx) / gx.squaredNorm()};
    iters = 0;
    ok = newton_kkt(d, zr, t, st, iters, res);
  }
  if (!ok) {
    std::ostringstream os;
    os << "project_point: no convergence for z = " << format_point(z) << " (residual " << res << ")";
    throw ProjectionError(os.str(), to_complex(st.x), res);
  }
  Projection p;
  p.xi = to_complex(st.x);
  p.s = st.s;
  p.distance = (z - p.xi).norm();
  p.iterations = iters;
  return p;
}

BoundaryPointData project_boundary(const DomainSpec& d, const CVec& z, double t) {
  BoundaryPointData bp = point_data(d, project_point(d, z, t).xi);
  bp.level = t;
  return bp;
}

RMat projection_jacobian(const DomainSpec& d, const CVec& z, const Projection& pr) {
  (void)z;
  const int m = 2 * d.n;
  const auto lu = kkt_matrix(d, pr.xi, pr.s).partialPivLu();
  RMat J(m, m);
  for (int a = 0; a < m; ++a) {
    RVec rhs = RVec::Zero(m + 1);
    rhs(a) = 1.0;
    J.col(a) = lu.solve(rhs).head(m);
  }
  return J;
}

CVec symmetric_point(const DomainSpec& d, const CVec& z) {
  return 2.0 * project_point(d, z, 0.0).xi - z;
}

SymmetricPoint symmetric_point_with_derivative(const DomainSpec& d, const CVec& z) {
  const Projection pr = project_point(d, z, 0.0);
  const RMat J = projection_jacobian(d, z, pr);
  const int n = d.n;
  SymmetricPoint sp;
  sp.pr = pr.xi;
  sp.zstar = 2.0 * pr.xi - z;
  sp.dbar.resize(n, n);
  const cd I(0.0, 1.0);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const cd dx(J(2 * k, 2 * j), J(2 * k + 1, 2 * j));
      const cd dy(J(2 * k, 2 * j + 1), J(2 * k + 1, 2 * j + 1));
      // d z*_k / d zbar_j = 2 dbar_j pr_k = d_x pr_k + i d_y pr_k.
      sp.dbar(j, k) = dx + I * dy;
    }
  }
  return sp;
}

CVec NormalForm::forward(const CVec& z) const {
  const CVec v = z - xi;
  CVec w = Phi * v;
  w(w.size() - 1) += (v.transpose() * B * v)(0, 0);
  return w;
}

CVec NormalForm::inverse(const CVec& w) const {
  CVec wp = w;
  const Eigen::Index last = w.size() - 1;
  for (int it = 0; it < 100; ++it) {
    const CVec v = Phi_inv * wp;
    const cd next = w(last) - (v.transpose() * B * v)(0, 0);
    const bool done = std::abs(next - wp(last)) <= 1e-16 * (1.0 + std::abs(next));
    wp(last) = next;
    if (done) break;
  }
  return xi + Phi_inv * wp;
}

NormalForm normalize_at(const DomainSpec& d, const CVec& xi) {
  const int n = d.n;
  const BoundaryPointData bp = point_data(d, xi);
  const CVec g = d.grad(xi);
  NormalForm nf;
  nf.xi = xi;
  nf.Phi.resize(n, n);
  for (int j = 0; j < n - 1; ++j) nf.Phi.row(j) = bp.ct_frame[j].adjoint();
  nf.Phi.row(n - 1) = g.transpose();
  const auto lu = nf.Phi.fullPivLu();
  if (!lu.isInvertible()) throw NumericalError("normalize_at: singular linear part at " + format_point(xi));
  nf.Phi_inv = lu.inverse();
  nf.B = 0.5 * d.hess_holo(xi);
  nf.A_prime = nf.Phi_inv.transpose() * d.hess_mixed(xi) * nf.Phi_inv.conjugate();
  return nf;
}

CVec random_direction(int n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVec u(n);
  for (int j = 0; j < n; ++j) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    u(j) = cd(re, im);
  }
  return u / u.norm();
}

CVec random_level_point(const DomainSpec& d, double t, Rng& rng) {
  return radial_point(d, random_direction(d.n, rng), t);
}

DomainValidation validate_domain(const DomainSpec& d, int samples, std::uint64_t seed) {
  DomainValidation rep;
  rep.samples = samples;
  const int n = d.n;
  const CVec origin = CVec::Zero(n);
  if (!(d.rho(origin) < 0.0)) {
    rep.ok = false;
    rep.failures.push_back("origin is not inside the domain");
    return rep;
  }
  Rng rng(seed);
  std::uniform_real_distribution<double> level(-d.eps_shell, d.eps_shell);
  rep.min_hessian_eigenvalue = INFINITY;
  const double h = 1e-5;
  const cd I(0.0, 1.0);
  for (int i = 0; i < samples; ++i) {
    const double t = level(rng);
    CVec z;
    try {
      z = random_level_point(d, t, rng);
    } catch (const NumericalError& e) {
      rep.ok = false;
      rep.failures.push_back(e.what());
      break;
    }
    const Eigen::SelfAdjointEigenSolver<RMat> es(real_hessian(d, z), Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    if (lmin < rep.min_hessian_eigenvalue) {
      rep.min_hessian_eigenvalue = lmin;
      if (!(lmin > 0.0)) rep.hessian_witness = z;
    }
    // Central differences of rho and of the analytic gradient.
    const CVec g = d.grad(z);
    const CMat A = d.hess_mixed(z), B = d.hess_holo(z);
    for (int j = 0; j < n; ++j) {
      CVec ex = CVec::Zero(n), ey = CVec::Zero(n);
      ex(j) = h;
      ey(j) = I * h;
      const double rx = (d.rho(z + ex) - d.rho(z - ex)) / (2 * h);
      const double ry = (d.rho(z + ey) - d.rho(z - ey)) / (2 * h);
      const cd gfd = 0.5 * cd(rx, -ry);
      rep.max_derivative_error =
          std::max(rep.max_derivative_error, std::abs(gfd - g(j)) / (1.0 + std::abs(g(j))));
      const CVec gx = (d.grad(z + ex) - d.grad(z - ex)) / (2 * h);
      const CVec gy = (d.grad(z + ey) - d.grad(z - ey)) / (2 * h);
      for (int k = 0; k < n; ++k) {
        // A_kj = dbar_j grad_k, B_kj = d_j grad_k.
        const cd a_fd = 0.5 * (gx(k) + I * gy(k));
        const cd b_fd = 0.5 * (gx(k) - I * gy(k));
        rep.max_derivative_error = std::max(
            {rep.max_derivative_error, std::abs(a_fd - A(k, j)) / (1.0 + std::abs(A(k, j))),
             std::abs(b_fd - B(k, j)) / (1.0 + std::abs(B(k, j)))});
      }
    }
  }
  if (rep.hessian_witness) {
    rep.ok = false;
    rep.failures.push_back("real Hessian not positive definite at " + format_point(*rep.hessian_witness) +
                           " (min eigenvalue " + std::to_string(rep.min_hessian_eigenvalue) + ")");
  }
  if (rep.max_derivative_error > 1e-6) {
    rep.ok = false;
    rep.failures.push_back("analytic derivatives disagree with finite differences (rel err " +
                           std::to_string(rep.max_derivative_error) + ")");
  }
  return rep;
}

}  // namespace hs
