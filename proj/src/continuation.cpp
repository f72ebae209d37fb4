#include "hardysob/continuation.hpp"

#include "hardysob/clf.hpp"
#include "hardysob/forms.hpp"

#include <algorithm>
#include <cmath>

namespace hs {

double Cutoff::operator()(double x) const {
  if (x <= a) return 1.0;
  if (x >= b) return 0.0;
  const double s = (x - a) / (b - a);
  return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

double Cutoff::derivative(double x) const {
  if (x <= a || x >= b) return 0.0;
  const double s = (x - a) / (b - a);
  return -30.0 * s * s * (1.0 - s) * (1.0 - s) / (b - a);
}

namespace {

cd power(const CVec& w, const MultiIndex& a) {
  cd p = 1.0;
  for (Eigen::Index j = 0; j < w.size(); ++j)
    for (int e = 0; e < a[j]; ++e) p *= w(j);
  return p;
}

ContinuationValue zero_value(int n) { return {0.0, CVec::Zero(n)}; }

}  // namespace

ContinuationValue symmetry_jet(const DomainSpec& d, const HoloFunction& f, int m, const CVec& z) {
  const SymmetricPoint sp = symmetric_point_with_derivative(d, z);
  const CVec w = z - sp.zstar;
  const int n = d.n;
  ContinuationValue out{0.0, CVec::Zero(n)};
  for (int o = 0; o < m; ++o)
    for (const MultiIndex& a : multi_indices(n, o)) out.value += f.derivative(a, sp.zstar) * power(w, a) / factorial(a);
  // jet terms below order m - 1 cancel against the derivative of (z - z*)^alpha
  CVec top = CVec::Zero(n);
  for (const MultiIndex& a : multi_indices(n, m - 1)) {
    const cd c = power(w, a) / factorial(a);
    for (int k = 0; k < n; ++k) {
      MultiIndex b = a;
      ++b[k];
      top(k) += f.derivative(b, sp.zstar) * c;
    }
  }
  out.dbar = sp.dbar * top;
  return out;
}

Continuation extend_by_symmetry(const DomainSpec& d, const HoloFunction& f, int m, double eps) {
  if (m < 1) throw UsageError("extend_by_symmetry: jet order must be >= 1");
  if (f.max_order < m) throw UsageError("extend_by_symmetry: " + f.label + " lacks derivatives of order " + std::to_string(m));
  if (!(eps > 0.0) || eps > d.eps_shell * (1.0 + 1e-12)) throw UsageError("extend_by_symmetry: eps outside the shell");
  Continuation c;
  c.kind = Continuation::symmetry;
  c.m = m;
  c.n = d.n;
  c.support_height = eps;
  const Cutoff chi{eps / 2, eps};
  c.at = [d, f, m, eps, chi](const CVec& z) {
    const double r = d.rho(z);
    if (r <= 0.0) return ContinuationValue{f(z), CVec::Zero(d.n)};
    if (r >= eps) return zero_value(d.n);
    ContinuationValue j = symmetry_jet(d, f, m, z);
    const CVec dbar_rho = d.grad(z).conjugate();
    const double x = chi(r), dx = chi.derivative(r);
    return ContinuationValue{x * j.value, x * j.dbar + (j.value * dx) * dbar_rho};
  };
  return c;
}

namespace {

// Shell index k with eps 2^{-k} < r <= eps 2^{-k+1}.
int shell_index(double r, double eps) { return static_cast<int>(std::floor(std::log2(eps / r))) + 1; }

const Cutoff kBlend{1.25, 1.75};

}  // namespace

Continuation extend_by_global(const DomainSpec& d, std::vector<PolynomialCn> P_seq, double eps) {
  if (P_seq.size() < 2) throw UsageError("extend_by_global: need at least two polynomials");
  Continuation c;
  c.kind = Continuation::global;
  c.n = d.n;
  c.support_height = eps;
  const int K = static_cast<int>(P_seq.size());
  const Cutoff outer{7.0 * eps / 8.0, eps};
  c.at = [d, P = std::move(P_seq), K, eps, outer](const CVec& z) {
    const double r = d.rho(z);
    if (r >= eps) return zero_value(d.n);
    if (r <= 0.0) return ContinuationValue{P[K - 1](z), CVec::Zero(d.n)};
    const CVec dbar_rho = d.grad(z).conjugate();
    const int k = shell_index(r, eps);
    ContinuationValue f0{0.0, CVec::Zero(d.n)};
    if (k >= K) {
      f0.value = P[K - 1](z);
    } else {
      const cd a = P[k - 1](z), b = P[k](z);
      const double scale = std::ldexp(1.0, k) / eps;
      f0.value = a + kBlend(scale * r) * (b - a);
      f0.dbar = (kBlend.derivative(scale * r) * scale * (b - a)) * dbar_rho;
    }
    const double x = outer(r), dx = outer.derivative(r);
    return ContinuationValue{x * f0.value, x * f0.dbar + (f0.value * dx) * dbar_rho};
  };
  return c;
}

std::vector<double> global_shell_breaks(int K, int below) {
  std::vector<double> b;
  const double h = std::ldexp(1.0, -(K - 1));
  for (int m = below; m >= 1; --m) b.push_back(h * std::ldexp(1.0, -m));
  for (int k = K - 1; k >= 1; --k) {
    const double s = std::ldexp(1.0, -k);
    b.insert(b.end(), {s, s * kBlend.a, s * kBlend.b});
  }
  // 7/8 is also the outer cutoff start
  return b;
}

double global_lambda(const DomainSpec& d, const std::vector<PolynomialCn>& P_seq, double eps, const CVec& z) {
  const double r = d.rho(z);
  if (!(r > 0.0) || r >= eps) return 0.0;
  const int k = shell_index(r, eps);
  if (k >= static_cast<int>(P_seq.size())) return 0.0;
  return std::abs(P_seq[k](z) - P_seq[k - 1](z)) / r;
}

ShellField shell_field(const DomainSpec& d, const Continuation& c, const ShellGrid& shell) {
  ShellField out;
  out.density.resize(shell.size());
  std::vector<double> sup(shell.size(), 0.0);
  parallel_for(shell.size(), [&](std::size_t i) {
    const ShellNode& nd = shell.nodes()[i];
    const CVec db = c.dbar(nd.xi);
    sup[i] = db.cwiseAbs().sum();
    out.density[i] = sup[i] > 0.0 ? nd.w_mu * kStokesSign * pair_dbar_with_leray(d, db, nd.xi) : cd(0.0);
  });
  for (double s : sup) out.sup_dbar = std::max(out.sup_dbar, s);
  return out;
}

PacReport verify_pac(const DomainSpec& d, const Continuation& c, const ShellGrid& shell, const std::vector<CVec>& z_set,
                     const std::function<cd(const CVec&)>& truth) {
  const ShellField field = shell_field(d, c, shell);
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < shell.size(); ++i)
    if (field.density[i] != 0.0) active.push_back(i);
  std::vector<CVec> grads(active.size());
  parallel_for(active.size(), [&](std::size_t q) { grads[q] = d.grad(shell.nodes()[active[q]].xi); });
  PacReport rep;
  rep.points = z_set;
  rep.nodes = shell.size();
  for (const CVec& z : z_set) {
    const cd v = parallel_sum(
        active.size(),
        [&](std::size_t q) { return field.density[active[q]] * clf_kernel(grads[q], shell.nodes()[active[q]].xi, z); },
        cd(0.0));
    const cd f = truth(z);
    rep.reconstructed.push_back(v);
    rep.exact.push_back(f);
    rep.rel_errors.push_back(std::abs(v - f) / std::max(1.0, std::abs(f)));
    rep.max_rel_error = std::max(rep.max_rel_error, rep.rel_errors.back());
  }
  return rep;
}

SobolevFunctional sobolev_functional(const Continuation& c, int l, double p, const BoundaryGrid& centers,
                                     const std::vector<RegionSample>& regions) {
  if (regions.size() != centers.size()) throw UsageError("sobolev_functional: one region per center");
  SobolevFunctional out;
  out.per_center.resize(centers.size());
  parallel_for(centers.size(), [&](std::size_t i) {
    out.per_center[i] = region_integrate(
        regions[i],
        [&](const CVec& tau, double r) {
          const double a = c.dbar(tau).cwiseAbs().sum();
          return a * a * std::pow(r, -2.0 * l);
        },
        RegionWeight{RegionWeight::nu});
  });
  for (std::size_t i = 0; i < centers.size(); ++i) out.value += centers[i].w_sigma * std::pow(out.per_center[i], p / 2);
  return out;
}

Trend ladder_trend(const std::vector<double>& v) {
  if (v.size() < 2) return Trend::inconclusive;
  for (double x : v)
    if (!std::isfinite(x)) return Trend::diverging;
  const double last = v.back(), prev = v[v.size() - 2];
  if (last == 0.0 && prev == 0.0) return Trend::converging;
  bool growing = true;
  for (std::size_t i = 1; i < v.size(); ++i) growing = growing && v[i] >= 1.25 * v[i - 1];
  if (growing) return Trend::diverging;
  // A resolved smooth part can hide a divergent tail from the drift test, so
  // the increments decide once there are three or more depths.
  const Trend inc = v.size() >= 3 ? increment_trend(v) : Trend::converging;
  if (inc == Trend::diverging) return Trend::diverging;
  if (prev > 0.0 && std::abs(last / prev - 1.0) <= 0.25 && inc == Trend::converging) return Trend::converging;
  return Trend::inconclusive;
}

SobolevLadder::SobolevLadder(const DomainSpec& d, double eta, double eps, std::vector<int> depths,
                             std::optional<CVec> focus)
    : depths_(std::move(depths)) {
  if (depths_.size() < 2) throw UsageError("SobolevLadder: need at least two depths");
  for (int L : depths_) {
    if (L < 1) throw UsageError("SobolevLadder: depths must be positive");
    GridSpec s{3, 3, 2, (L + 1) / 2 + 1, L + 1, 0.25, focus, false};
    grids_.push_back(build_boundary_grid(d, 0.0, s));
    std::vector<CVec> cz;
    for (const BoundaryNode& nd : grids_.back().nodes()) cz.push_back(nd.xi);
    RegionResolution res;
    res.levels = L + 4;
    res.h_points = 1;
    res.r_points = 2;
    res.angle_points = 4;
    res.v_points = 2;
    regions_.push_back(region_bank(d, cz, RegionKind::external, eta, eps, res));
  }
}

std::vector<SobolevLadder::Result> SobolevLadder::evaluate(const Continuation& c, const std::vector<int>& ls,
                                                           double p) const {
  std::vector<Result> out(ls.size());
  for (std::size_t q = 0; q < ls.size(); ++q) out[q].l = ls[q];
  for (std::size_t lev = 0; lev < depths_.size(); ++lev) {
    const BoundaryGrid& g = grids_[lev];
    const auto& regs = regions_[lev];
    std::vector<std::vector<double>> inner(g.size(), std::vector<double>(ls.size(), 0.0));
    parallel_for(g.size(), [&](std::size_t i) {
      const RegionSample& R = regs[i];
      for (std::size_t j = 0; j < R.size(); ++j) {
        const double a = c.dbar(R.points[j]).cwiseAbs().sum();
        if (a == 0.0) continue;
        const double r = std::abs(R.rho[j]);
        const double w = a * a * R.w_mu[j] * RegionWeight{RegionWeight::nu}.factor(r, static_cast<int>(R.center.size()));
        for (std::size_t q = 0; q < ls.size(); ++q) inner[i][q] += w * std::pow(r, -2.0 * ls[q]);
      }
    });
    for (std::size_t q = 0; q < ls.size(); ++q) {
      double v = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) v += g[i].w_sigma * std::pow(inner[i][q], p / 2);
      out[q].values.push_back(v);
    }
  }
  for (Result& r : out) r.verdict = ladder_trend(r.values);
  return out;
}

}  // namespace hs

