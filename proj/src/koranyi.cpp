#include "hardysob/koranyi.hpp"

#include "hardysob/homtype.hpp"

#include <algorithm>
#include <cmath>

namespace hs {

namespace {

struct CenterFrame {
  CVec normal;
  CVec tangent;
  double grad_norm;
};

CenterFrame frame_at(const DomainSpec& d, const CVec& z) {
  if (d.n != 2) throw UsageError("Korányi regions: only n = 2 is supported");
  const BoundaryPointData bp = point_data(d, z);
  return {bp.normal, bp.ct_frame.front(), d.grad(z).norm()};
}

// Solves rho(base + u n) = target for u near u0 (Newton with bracketing).
double solve_normal(const DomainSpec& d, const CVec& base, const CVec& n, double target, double u0) {
  double u = u0;
  for (int it = 0; it < 60; ++it) {
    const CVec tau = base + u * n;
    const double f = d.rho(tau) - target;
    const double df = 2.0 * pair(d.grad(tau), n).real();
    if (!(df > 0.0)) throw NumericalError("Korányi slice: normal derivative vanished at " + format_point(tau));
    const double step = f / df;
    u -= step;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(u))) return u;
  }
  throw NumericalError("Korányi slice: Newton did not converge");
}

}  // namespace

double RegionWeight::factor(double rho_abs, int n) const {
  switch (kind) {
    case nu: return std::pow(rho_abs, -(n - 1));
    case nu_l: return std::pow(rho_abs, -(n - 2 * l + 1));
    default: return 1.0;
  }
}

bool in_external_region(const DomainSpec& d, const CVec& z, const CVec& tau, double eta, double eps) {
  const CVec n = point_data(d, z).normal;
  const double r = d.rho(tau);
  if (!(r > 0.0) || !(r < eps)) return false;
  const CVec dz = tau - z;
  const cd t = n.dot(dz);  // conjugate-linear in n
  const CVec w = dz - t * n;
  const double tol = 1e-9 * r;
  return w.squaredNorm() < eta * r + tol && std::abs(t.imag()) < eta * r + tol;
}

bool in_internal_region(const DomainSpec& d, const CVec& z, const CVec& tau, double eta, double eps) {
  const double r = d.rho(tau);
  if (!(r < 0.0) || !(r > -eps)) return false;
  const Projection pr = project_point(d, tau);
  return qdist(d, pr.xi, z) < -eta * r;
}

CVec region_point(const DomainSpec& d, const CVec& z, cd w, double v, double h) {
  const CenterFrame fr = frame_at(d, z);
  const CVec base = z + w * fr.tangent + cd(0.0, v) * fr.normal;
  const double u = solve_normal(d, base, fr.normal, h, (h - d.rho(base)) / (2.0 * fr.grad_norm));
  return base + u * fr.normal;
}

RegionSample sample_region(const DomainSpec& d, const CVec& z, RegionKind kind, double eta, double eps,
                           const RegionResolution& res) {
  if (!(eta > 0.0) || !(eps > 0.0)) throw UsageError("sample_region: eta and eps must be positive");
  const CenterFrame fr = frame_at(d, z);
  RegionSample s;
  s.kind = kind;
  s.center = z;
  s.eta = eta;
  s.eps = eps;
  const bool ext = kind == RegionKind::external;
  // bounding box of the internal region, refined by the exact predicate
  const double box_w = ext ? 1.0 : 4.0 / fr.grad_norm;
  const double box_v = ext ? 1.0 : 2.0 / fr.grad_norm;
  const Rule1D ang = periodic_uniform(res.angle_points);
  for (int k = 0; k < res.levels; ++k) {
    const Rule1D rh = gauss_legendre(res.h_points, eps * std::ldexp(1.0, -k - 1), eps * std::ldexp(1.0, -k));
    for (std::size_t ih = 0; ih < rh.size(); ++ih) {
      const double h = rh.x[ih];
      const double R = std::sqrt(box_w * eta * h), V = box_v * eta * h;
      const Rule1D rr = gauss_legendre(res.r_points, 0.0, R);
      const Rule1D rv = gauss_legendre(res.v_points, -V, V);
      for (std::size_t ir = 0; ir < rr.size(); ++ir)
        for (std::size_t ia = 0; ia < ang.size(); ++ia)
          for (std::size_t iv = 0; iv < rv.size(); ++iv) {
            const CVec base = z + std::polar(rr.x[ir], ang.x[ia]) * fr.tangent + cd(0.0, rv.x[iv]) * fr.normal;
            const double target = ext ? h : -h;
            const double r0 = d.rho(base);
            const double u = solve_normal(d, base, fr.normal, target, (target - r0) / (2.0 * fr.grad_norm));
            const CVec tau = base + u * fr.normal;
            if (!ext && !in_internal_region(d, z, tau, eta, eps)) continue;
            const double dn = 2.0 * pair(d.grad(tau), fr.normal).real();
            s.points.push_back(tau);
            s.rho.push_back(d.rho(tau));
            s.w_mu.push_back(rh.w[ih] * rr.w[ir] * rr.x[ir] * ang.w[ia] * rv.w[iv] / std::abs(dn));
            s.band.push_back(k);
          }
    }
  }
  if (s.points.empty()) throw NumericalError("sample_region: empty region at " + format_point(z));
  return s;
}

RegionSample rotate(const RegionSample& s, const CMat& U) {
  RegionSample r = s;
  r.center = U * s.center;
  for (CVec& p : r.points) p = U * p;
  return r;
}

double region_integrate(const RegionSample& s, const std::function<double(const CVec&, double)>& F, RegionWeight w) {
  const int n = static_cast<int>(s.center.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    acc += F(s.points[i], s.rho[i]) * s.w_mu[i] * w.factor(std::abs(s.rho[i]), n);
  return acc;
}

std::vector<RegionSample> region_bank(const DomainSpec& d, const std::vector<CVec>& centers, RegionKind kind,
                                      double eta, double eps, const RegionResolution& res) {
  std::vector<RegionSample> out(centers.size());
  if (d.unitary_invariant) {
    CVec e1 = CVec::Zero(d.n);
    e1(0) = 1.0;
    const RegionSample tmpl = sample_region(d, e1, kind, eta, eps, res);
    for (std::size_t c = 0; c < centers.size(); ++c)
      out[c] = rotate(tmpl, unitary_with_first_column(centers[c]));
    return out;
  }
  parallel_for(centers.size(), [&](std::size_t c) { out[c] = sample_region(d, centers[c], kind, eta, eps, res); });
  return out;
}

AreaResult area_internal(const DomainSpec& d, const HoloFunction& f, double p, const BoundaryGrid& centers,
                         const std::vector<RegionSample>& regions) {
  if (regions.size() != centers.size()) throw UsageError("area_internal: one region per center required");
  AreaResult r;
  const std::vector<double> inner = [&] {
    std::vector<double> v(centers.size());
    parallel_for(centers.size(), [&](std::size_t c) {
      v[c] = region_integrate(
          regions[c],
          [&](const CVec& tau, double) {
            const CVec g = f.gradient(tau);
            const double a = g.cwiseAbs().sum();
            return a * a;
          },
          RegionWeight{RegionWeight::nu});
    });
    return v;
  }();
  for (std::size_t c = 0; c < centers.size(); ++c) {
    r.lhs += std::pow(inner[c], 0.5 * p) * centers[c].w_sigma;
    r.rhs += std::pow(std::abs(f(centers[c].xi)), p) * centers[c].w_sigma;
  }
  (void)d;
  return r;
}

IlContext make_il_context(const DomainSpec& d, const BoundaryGrid& centers, int l, double eta, double eps,
                          const GridSpec& inner_spec, const RegionResolution& res) {
  IlContext ctx;
  ctx.l = l;
  for (const BoundaryNode& nd : centers.nodes()) {
    ctx.centers.push_back(nd.xi);
    ctx.center_weights.push_back(nd.w_sigma);
  }
  const int m = d.n + l;
  if (d.unitary_invariant) {
    ctx.rotated = true;
    CVec e1 = CVec::Zero(d.n);
    e1(0) = 1.0;
    ctx.region_template = sample_region(d, e1, RegionKind::external, eta, eps, res);
    GridSpec s = inner_spec;
    s.focus = e1;
    ctx.inner_template = build_boundary_grid(d, 0.0, s);
    const auto& R = ctx.region_template;
    const auto& W = ctx.inner_template.nodes();
    ctx.kernel.resize(R.size(), W.size());
    parallel_for(R.size(), [&](std::size_t i) {
      const CVec g = d.grad(R.points[i]);
      for (std::size_t j = 0; j < W.size(); ++j)
        ctx.kernel(i, j) = W[j].w_S * std::pow(pair(g, R.points[i] - W[j].xi), -m);
    });
    for (const CVec& c : ctx.centers) ctx.rotations.push_back(unitary_with_first_column(c));
    return ctx;
  }
  ctx.regions.resize(ctx.centers.size());
  ctx.inner.resize(ctx.centers.size());
  for (std::size_t c = 0; c < ctx.centers.size(); ++c) {
    ctx.regions[c] = sample_region(d, ctx.centers[c], RegionKind::external, eta, eps, res);
    GridSpec s = inner_spec;
    s.focus = ctx.centers[c] / ctx.centers[c].norm();
    ctx.inner[c] = build_boundary_grid(d, 0.0, s);
  }
  return ctx;
}

double area_Il(const DomainSpec& d, const BoundaryField& g, int l, const RegionSample& region,
               const BoundaryGrid& inner) {
  const int m = d.n + l;
  std::vector<double> gv(inner.size());
  for (std::size_t j = 0; j < inner.size(); ++j) gv[j] = g(inner[j].xi);
  double acc = 0.0;
  for (std::size_t i = 0; i < region.size(); ++i) {
    const CVec gr = d.grad(region.points[i]);
    cd s = 0.0;
    for (std::size_t j = 0; j < inner.size(); ++j)
      if (gv[j] != 0.0) s += gv[j] * inner[j].w_S * std::pow(pair(gr, region.points[i] - inner[j].xi), -m);
    acc += std::norm(s) * region.w_mu[i] * RegionWeight{RegionWeight::nu_l, l}.factor(region.rho[i], d.n);
  }
  return std::sqrt(acc);
}

std::vector<std::vector<double>> area_Il_family(const DomainSpec& d, const std::vector<BoundaryField>& family,
                                                const IlContext& ctx) {
  const std::size_t M = family.size(), C = ctx.size();
  std::vector<std::vector<double>> out(M, std::vector<double>(C, 0.0));
  if (!ctx.rotated) {
    parallel_for(C, [&](std::size_t c) {
      for (std::size_t m = 0; m < M; ++m) out[m][c] = area_Il(d, family[m], ctx.l, ctx.regions[c], ctx.inner[c]);
    });
    return out;
  }
  const auto& R = ctx.region_template;
  const auto& W = ctx.inner_template.nodes();
  std::vector<double> wt(R.size());
  for (std::size_t i = 0; i < R.size(); ++i)
    wt[i] = R.w_mu[i] * RegionWeight{RegionWeight::nu_l, ctx.l}.factor(R.rho[i], d.n);
  parallel_for(C, [&](std::size_t c) {
    Eigen::MatrixXcd G(W.size(), M);
    for (std::size_t j = 0; j < W.size(); ++j) {
      const CVec w = ctx.rotations[c] * W[j].xi;
      for (std::size_t m = 0; m < M; ++m) G(j, m) = family[m](w);
    }
    const Eigen::MatrixXcd S = ctx.kernel * G;
    for (std::size_t m = 0; m < M; ++m) {
      double acc = 0.0;
      for (std::size_t i = 0; i < R.size(); ++i) acc += std::norm(S(i, m)) * wt[i];
      out[m][c] = std::sqrt(acc);
    }
  });
  return out;
}

AreaInequalityReport check_area_inequality(const DomainSpec& d, const std::vector<BoundaryField>& family,
                                           const std::vector<std::string>& labels, double p,
                                           const IlContext& ctx, const BoundaryGrid& rhs_grid) {
  AreaInequalityReport rep;
  rep.labels = labels;
  const auto I = area_Il_family(d, family, ctx);
  for (std::size_t m = 0; m < family.size(); ++m) {
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t c = 0; c < ctx.size(); ++c) lhs += std::pow(I[m][c], p) * ctx.center_weights[c];
    for (const BoundaryNode& nd : rhs_grid.nodes()) rhs += std::pow(std::abs(family[m](nd.xi)), p) * nd.w_sigma;
    rep.lhs.push_back(lhs);
    rep.rhs.push_back(rhs);
    rep.ratios.push_back(lhs / rhs);
  }
  if (rep.ratios.empty()) return rep;
  const auto [mn, mx] = std::minmax_element(rep.ratios.begin(), rep.ratios.end());
  rep.max_over_min = *mx / *mn;
  bool increasing = rep.ratios.size() >= 2;
  for (std::size_t i = 1; i < rep.ratios.size(); ++i) increasing = increasing && rep.ratios[i] > rep.ratios[i - 1];
  rep.monotone_blowup = increasing && rep.ratios.back() > 3.0 * rep.ratios.front();
  rep.pass = rep.max_over_min <= 50.0 && !rep.monotone_blowup;
  return rep;
}

}  // namespace hs
