#include "hardysob/dzyadyk.hpp"

#include "hardysob/clf.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <mutex>

namespace hs {

bool Lune::contains(cd lambda, double tol) const {
  return std::abs(lambda) <= R * (1.0 + tol) && (rot() * (1.0 - lambda)).real() >= -tol;
}

std::pair<double, double> Lune::chord() const {
  const double c = std::cos(t);
  const double s = std::sqrt(c * c + R * R - 1.0);
  return {c - s, c + s};
}

cd leray_pairing(const DomainSpec& d, const CVec& xi) { return pair(d.grad(xi), xi); }

cd normalized_pairing(const DomainSpec& d, const CVec& xi, const CVec& z) {
  const CVec g = d.grad(xi);
  return pair(g, z) / pair(g, xi);
}

double lune_radius(const DomainSpec& d, int samples, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> level(-d.eps_shell, d.eps_shell), phase(0.0, 2 * kPi);
  std::vector<CVec> targets;
  for (int i = 0; i < 64; ++i) targets.push_back(random_level_point(d, 0.0, rng));
  double sup = 0.0;
  for (int s = 0; s < samples; ++s) {
    const CVec xi = random_level_point(d, level(rng), rng);
    const CVec g = d.grad(xi);
    const cd c = pair(g, xi);
    // the ray along conj(g) e^{i theta} carries the largest |<g, z>| on the ball
    for (int q = 0; q < 4; ++q) {
      CVec u = g.conjugate() * std::polar(1.0, phase(rng));
      u /= u.norm();
      sup = std::max(sup, std::abs(pair(g, radial_point(d, u, 0.0)) / c));
    }
    for (int q = 0; q < 4; ++q) sup = std::max(sup, std::abs(pair(g, targets[(s * 4 + q) % targets.size()]) / c));
  }
  return 1.05 * sup;
}

Lune lune_of(const DomainSpec& d, const CVec& xi, double R) {
  const cd c = leray_pairing(d, xi);
  if (!(c.real() > 0.0)) throw NumericalError("lune_of: Re<d rho(xi), xi> <= 0 at " + format_point(xi));
  return Lune{kPi / 2 - std::arg(c), R};
}

cd CauchyApproximant::operator()(cd lambda) const {
  cd acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * lambda + *it;
  return acc;
}

std::vector<cd> lune_mesh(const Lune& L, int j, int density) {
  std::vector<cd> mesh;
  const double h = 1.0 / j;
  const cd dir = std::polar(1.0, L.t);
  const auto [ym, yp] = L.chord();
  // chord, geometric in |y| from the 1/j-disc to the rim
  for (double yend : {ym, yp}) {
    const double span = std::abs(yend);
    if (span <= h) continue;
    const int N = density * (2 + static_cast<int>(std::ceil(std::log2(span / h))));
    for (int i = 0; i <= N; ++i) {
      const double y = std::copysign(h * std::pow(span / h, static_cast<double>(i) / N), yend);
      mesh.push_back(1.0 - y * dir);
    }
  }
  // big arc
  const int Na = std::max(64, 8 * (j + 1)) * density / 2;
  for (int i = 0; i < Na; ++i) {
    const cd l = std::polar(L.R, 2 * kPi * i / Na);
    if (L.contains(l, 0.0) && std::abs(1.0 - l) >= h) mesh.push_back(l);
  }
  // small arc
  const int Ns = 8 * density;
  for (int i = 0; i <= Ns; ++i) {
    const cd u = std::polar(h, -kPi / 2 + kPi * i / Ns);
    const cd l = 1.0 - std::conj(L.rot()) * u;
    if (std::abs(l) <= L.R) mesh.push_back(l);
  }
  return mesh;
}

namespace {

constexpr int kFitDensity = 4;
constexpr int kCertDensity = 12;
constexpr int kLawsonIterations = 40;

double weight(cd lambda, int j, double r) { return std::pow(std::abs(1.0 - lambda), 1.0 + r) * std::pow(j, r); }

}  // namespace

ApproximantCert certify(const CauchyApproximant& T, const Lune& L) {
  ApproximantCert c = T.cert;
  const double h = 1.0 / T.j;
  std::vector<cd> pts = lune_mesh(L, T.j, kCertDensity);
  // interior points off the 1/j-disc
  const int Nr = 24, Nphi = 48;
  for (int i = 1; i < Nr; ++i)
    for (int q = 0; q < Nphi; ++q) {
      const cd l = std::polar(L.R * i / Nr, 2 * kPi * q / Nphi);
      if (L.contains(l, 0.0) && std::abs(1.0 - l) >= h) pts.push_back(l);
    }
  c.mesh_size = pts.size();
  c.C1 = 0.0;
  for (cd l : pts) c.C1 = std::max(c.C1, std::abs(1.0 / (1.0 - l) - T(l)) * weight(l, T.j, T.r));
  double near = 0.0;
  for (int i = 0; i <= 16; ++i)
    for (int q = 0; q <= 32; ++q) {
      const cd l = 1.0 - std::conj(L.rot()) * std::polar(h * i / 16.0, -kPi / 2 + kPi * q / 32.0);
      if (std::abs(l) <= L.R) near = std::max(near, std::abs(T(l)));
    }
  c.C2 = near / T.j;
  return c;
}

CauchyApproximant build_T(int j, double r, const Lune& L, int exact) {
  if (j < 1 || !(r > 0.0)) throw UsageError("build_T: need j >= 1 and r > 0");
  if (exact >= j) throw UsageError("build_T: exact order must be below j");
  // T = 1 + ... + lambda^{e-1} + lambda^e Q, so Q fits lambda^e / (1 - lambda)
  const int e = std::max(exact, -1) + 1;
  const std::vector<cd> mesh = lune_mesh(L, j, kFitDensity);
  CauchyApproximant T;
  T.j = j;
  T.t = L.t;
  T.r = r;
  for (int deg = j - e; deg >= 0; --deg) {
    Eigen::MatrixXcd A(mesh.size(), deg + 1);
    Eigen::VectorXcd b(mesh.size());
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      const cd l = mesh[i];
      const cd w = weight(l, j, r) * std::pow(l, e);
      cd p = 1.0;
      for (int m = 0; m <= deg; ++m, p *= l / L.R) A(i, m) = w * p;
      b(i) = w / (1.0 - l);
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A);
    const Eigen::MatrixXcd Rf = qr.matrixQR().topRows(deg + 1).triangularView<Eigen::Upper>();
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(Rf).singularValues();
    const double cond = sv(0) / sv(deg);
    if (!(cond <= 1e12) && deg > 0) {
      T.cert.reduced = true;
      continue;
    }
    // Lawson reweighting moves the least-squares solution toward the
    // weighted minimax approximant
    Eigen::VectorXcd x = qr.solve(b);
    Eigen::VectorXd u = Eigen::VectorXd::Constant(A.rows(), 1.0 / A.rows());
    for (int it = 0; it < kLawsonIterations; ++it) {
      u = u.cwiseProduct((A * x - b).cwiseAbs());
      u /= u.sum();
      const Eigen::VectorXd s = u.cwiseSqrt();
      x = (s.asDiagonal() * A).householderQr().solve(s.asDiagonal() * b);
    }
    T.coeffs.assign(e + deg + 1, 1.0);
    double scale = 1.0;
    for (int m = 0; m <= deg; ++m, scale /= L.R) T.coeffs[e + m] = x(m) * scale;
    T.cert.condition = cond;
    break;
  }
  T.cert = certify(T, L);
  return T;
}

namespace {

std::vector<cd> poly_mul(const std::vector<cd>& a, const std::vector<cd>& b) {
  std::vector<cd> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) c[i + k] += a[i] * b[k];
  return c;
}

}  // namespace

CauchyApproximant blend_T(int j, double r, const Lune& L) {
  if (j < 1) throw UsageError("blend_T: need j >= 1");
  const cd w = L.rot();
  const double kappa = 1.0 / (2.0 * (L.R + 1.0));
  // u = w (1 - lambda); phi = 1 - kappa u + kappa^2 u^2; g = w kappa (1 - kappa u)
  const std::vector<cd> u = {w, -w};
  const std::vector<cd> u2 = poly_mul(u, u);
  const std::vector<cd> phi = {1.0 - kappa * u[0] + kappa * kappa * u2[0], -kappa * u[1] + kappa * kappa * u2[1],
                               kappa * kappa * u2[2]};
  const std::vector<cd> g = {w * kappa * (1.0 - kappa * u[0]), -w * kappa * kappa * u[1]};
  const int M = (j + 1) / 2;
  std::vector<cd> S = {1.0};
  for (int m = 1; m < M; ++m) {
    S = poly_mul(S, phi);
    S[0] += 1.0;
  }
  CauchyApproximant T;
  T.j = j;
  T.t = L.t;
  T.r = r;
  T.coeffs = poly_mul(g, S);
  T.cert = certify(T, L);
  return T;
}

KernelApproximant::KernelApproximant(const DomainSpec& d, int k, double r, double R, int exact)
    : domain_(std::make_shared<const DomainSpec>(d)), n_(d.n), k_(k), j_((k + d.n - 1) / d.n), r_(r),
      R_(R > 0.0 ? R : lune_radius(d)), exact_(exact) {
  if (k < d.n) throw UsageError("KernelApproximant: need k >= n");
  if (exact_ >= j_) throw UsageError("KernelApproximant: exact order must be below j");
}

int reproducing_order(int j) { return j < 2 ? -1 : j / 2; }

const CauchyApproximant& KernelApproximant::at_index(int q) const {
  {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(q);
    if (it != cache_.end()) return *it->second;
  }
  // duplicate builds are harmless: the result is deterministic
  auto built = std::make_shared<const CauchyApproximant>(build_T(j_, r_, Lune{q * kStep, R_}, exact_));
  std::unique_lock lock(mutex_);
  return *cache_.emplace(q, std::move(built)).first->second;
}

std::vector<cd> KernelApproximant::coefficients_at(double t) const {
  const double x = t / kStep;
  int q = static_cast<int>(std::floor(x));
  double s = x - q;
  if (s > 1.0 - 1e-9) {
    ++q;
    s = 0.0;
  }
  const CauchyApproximant& a = at_index(q);
  if (s < 1e-9) return a.coeffs;
  const CauchyApproximant& b = at_index(q + 1);
  std::vector<cd> c(std::max(a.coeffs.size(), b.coeffs.size()), 0.0);
  for (std::size_t m = 0; m < a.coeffs.size(); ++m) c[m] += (1.0 - s) * a.coeffs[m];
  for (std::size_t m = 0; m < b.coeffs.size(); ++m) c[m] += s * b.coeffs[m];
  return c;
}

cd KernelApproximant::operator()(const CVec& xi, const CVec& z) const {
  const CVec g = domain_->grad(xi);
  const cd c = pair(g, xi);
  const cd lambda = pair(g, z) / c;
  const std::vector<cd> a = coefficients_at(kPi / 2 - std::arg(c));
  cd T = 0.0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) T = T * lambda + *it;
  return std::pow(T / c, n_);
}

void KernelApproximant::add_monomials(const CVec& xi, cd weight, PolynomialCn& out) const {
  if (out.n() != n_ || out.capacity() < degree()) throw UsageError("add_monomials: target polynomial too small");
  const CVec g = domain_->grad(xi);
  const cd c = pair(g, xi);
  const std::vector<cd> a = coefficients_at(kPi / 2 - std::arg(c));
  std::vector<cd> S = a;
  for (int i = 1; i < n_; ++i) S = poly_mul(S, a);
  // s_m c^{-n-m} for every power of lambda
  std::vector<cd> sm(S.size());
  cd cp = std::pow(c, -n_) * weight;
  for (std::size_t m = 0; m < S.size(); ++m, cp /= c) sm[m] = S[m] * cp;
  const int D = static_cast<int>(S.size()) - 1;
  std::vector<std::vector<cd>> gp(n_, std::vector<cd>(D + 1));
  for (int i = 0; i < n_; ++i) {
    gp[i][0] = 1.0;
    for (int e = 1; e <= D; ++e) gp[i][e] = gp[i][e - 1] * g(i);
  }
  // multinomial coefficients and orders per storage slot, cached per layout
  thread_local std::pair<int, int> layout{-1, -1};
  thread_local std::vector<double> multinom;
  thread_local std::vector<int> orders;
  const auto& mono = out.monomials();
  if (layout != std::pair<int, int>{n_, out.capacity()}) {
    std::vector<double> fact(out.capacity() + 1, 1.0);
    for (int e = 1; e <= out.capacity(); ++e) fact[e] = fact[e - 1] * e;
    multinom.resize(mono.size());
    orders.resize(mono.size());
    for (std::size_t idx = 0; idx < mono.size(); ++idx) {
      orders[idx] = order(mono[idx]);
      multinom[idx] = fact[orders[idx]];
      for (int i = 0; i < n_; ++i) multinom[idx] /= fact[mono[idx][i]];
    }
    layout = {n_, out.capacity()};
  }
  std::vector<cd>& coef = out.coefficients();
  for (std::size_t idx = 0; idx < mono.size(); ++idx) {
    const int m = orders[idx];
    if (m > D) continue;
    const MultiIndex& al = mono[idx];
    cd gpow = sm[m] * multinom[idx];
    for (int i = 0; i < n_; ++i) gpow *= gp[i][al[i]];
    coef[idx] += gpow;
  }
}

std::vector<CauchyApproximant> KernelApproximant::cached() const {
  std::shared_lock lock(mutex_);
  std::vector<CauchyApproximant> out;
  for (const auto& [q, T] : cache_) out.push_back(*T);
  return out;
}

std::vector<KernelPair> kernel_pairs(const DomainSpec& d, std::size_t count, double dmin, double dmax,
                                     std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<KernelPair> out;
  std::size_t attempt = 0;
  while (out.size() < count) {
    const CVec xi = random_level_point(d, 0.0, rng);
    const double target = dmin * std::pow(dmax / dmin, unit(rng));
    const CVec g = d.grad(xi);
    const BoundaryPointData bp = point_data(d, xi);
    CVec z;
    switch (attempt++ % 3) {
      case 0:  // inward along the normal: d = |g| h
        z = xi - (target / g.norm()) * bp.normal;
        break;
      case 1: {  // complex-tangential on the boundary, d ~ |w|^2
        CVec u = xi + std::sqrt(target) * std::polar(1.0, 2 * kPi * unit(rng)) * bp.ct_frame[0];
        z = radial_point(d, u / u.norm(), 0.0);
        break;
      }
      default: {  // mixed: tangential offset then pushed inward
        CVec u = xi + std::sqrt(target) * std::polar(1.0, 2 * kPi * unit(rng)) * bp.ct_frame[0];
        z = radial_point(d, u / u.norm(), 0.0) * (1.0 - target * unit(rng));
      }
    }
    if (d.rho(z) > 1e-12) continue;
    const double dist = std::abs(pair(g, xi - z));
    if (!(dist > 0.0)) continue;
    out.push_back({xi, z, dist});
  }
  return out;
}

KernelValidation validate_Kglob(const DomainSpec& d, const KernelEvaluator& Kk, int k, double r,
                                const std::vector<KernelPair>& pairs) {
  std::vector<double> far(pairs.size(), -1.0), near(pairs.size(), -1.0), err(pairs.size(), 0.0);
  parallel_for(pairs.size(), [&](std::size_t i) {
    const KernelPair& p = pairs[i];
    const cd approx = Kk(p.xi, p.z);
    if (p.dist * k >= 1.0) {
      err[i] = std::abs(clf_kernel(d, p.xi, p.z) - approx);
      far[i] = err[i] * std::pow(k, r) * std::pow(p.dist, d.n + r);
    } else {
      near[i] = std::abs(approx) / std::pow(k, d.n);
    }
  });
  KernelValidation v;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (far[i] >= 0.0) {
      ++v.far;
      v.C_far = std::max(v.C_far, far[i]);
      v.max_far_error = std::max(v.max_far_error, err[i]);
    }
    if (near[i] >= 0.0) {
      ++v.near;
      v.C_near = std::max(v.C_near, near[i]);
    }
  }
  return v;
}

}  // namespace hs
