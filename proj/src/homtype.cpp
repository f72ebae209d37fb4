#include "hardysob/homtype.hpp"

#include "hardysob/koranyi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hs {

double qdist(const DomainSpec& d, const CVec& w, const CVec& z) { return qdist(d.grad(w), w, z); }

std::vector<CVec> node_gradients(const DomainSpec& d, const BoundaryGrid& grid) {
  std::vector<CVec> g(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) g[i] = d.grad(grid[i].xi);
  return g;
}

Quasiball quasiball(const DomainSpec& d, const BoundaryGrid& grid, const CVec& z, double delta) {
  if (!(delta > 0.0)) throw UsageError("quasiball: delta must be positive");
  Quasiball b;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (qdist(d, grid[i].xi, z) < delta) {
      b.members.push_back(i);
      b.sigma += grid[i].w_sigma;
    }
  return b;
}

namespace {

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

HomogeneityReport check_homogeneous(const DomainSpec& d, const BoundaryGrid& grid, const std::vector<double>& radii,
                                    int centers, int triples, std::uint64_t seed) {
  if (radii.size() < 3) throw UsageError("check_homogeneous: need >= 3 radii");
  if (grid.size() == 0) throw UsageError("check_homogeneous: empty grid");
  HomogeneityReport rep;
  rep.radii = radii;
  rep.centers = centers;
  rep.mean_measure.assign(radii.size(), 0.0);
  const std::vector<CVec> grads = node_gradients(d, grid);
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
  // centers off the grid, so no node sits exactly at a center
  std::vector<CVec> chosen(centers);
  for (auto& c : chosen) c = random_level_point(d, grid.level(), rng);
  std::vector<double> slopes(centers);
  std::vector<std::vector<double>> meas(centers, std::vector<double>(radii.size(), 0.0));
  parallel_for(chosen.size(), [&](std::size_t c) {
    const CVec& z = chosen[c];
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double q = qdist(grads[i], grid[i].xi, z);
      for (std::size_t r = 0; r < radii.size(); ++r)
        if (q < radii[r]) meas[c][r] += grid[i].w_sigma;
    }
    std::vector<double> lx, ly;
    for (std::size_t r = 0; r < radii.size(); ++r) {
      lx.push_back(std::log(radii[r]));
      ly.push_back(std::log(meas[c][r]));
    }
    slopes[c] = ls_slope(lx, ly);
  });
  double sum = 0.0, sq = 0.0;
  for (int c = 0; c < centers; ++c) {
    sum += slopes[c];
    sq += slopes[c] * slopes[c];
    for (std::size_t r = 0; r < radii.size(); ++r) rep.mean_measure[r] += meas[c][r] / centers;
  }
  rep.fitted_dimension = sum / centers;
  rep.dimension_spread = std::sqrt(std::max(0.0, sq / centers - rep.fitted_dimension * rep.fitted_dimension));
  double worst = 0.0;
  for (int t = 0; t < triples; ++t) {
    const std::size_t x = pick(rng), y = pick(rng), z = pick(rng);
    const double den = qdist(grads[x], grid[x].xi, grid[y].xi) + qdist(grads[y], grid[y].xi, grid[z].xi);
    if (den < 1e-12) continue;
    worst = std::max(worst, qdist(grads[x], grid[x].xi, grid[z].xi) / den);
  }
  rep.quasi_triangle_constant = worst;
  return rep;
}

RatioEnvelope envelope(std::vector<double> r) {
  RatioEnvelope e;
  e.samples = r.size();
  if (r.empty()) return e;
  std::sort(r.begin(), r.end());
  e.min = r.front();
  e.max = r.back();
  const auto at = [&](double q) {
    const std::size_t k = static_cast<std::size_t>(std::floor(q * static_cast<double>(r.size() - 1)));
    return r[k];
  };
  e.lo = at(0.005);
  e.hi = at(0.995);
  return e;
}

namespace {

// Boundary point in a random direction at angular distance ~ scale from z.
CVec nearby_boundary_point(const DomainSpec& d, const CVec& z, double scale, Rng& rng) {
  std::normal_distribution<double> N;
  CVec g(d.n);
  for (int j = 0; j < d.n; ++j) g(j) = cd(N(rng), N(rng));
  CVec u = z / z.norm() + scale * g / g.norm();
  return radial_point(d, u / u.norm(), 0.0);
}

}  // namespace

ExteriorReport qm_exterior_check(const DomainSpec& d, int samples, double eta, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double eps = d.eps_shell;
  std::vector<double> r1, r2;
  r1.reserve(samples);
  r2.reserve(samples);
  for (int s = 0; s < samples; ++s) {
    const CVec z = random_level_point(d, 0.0, rng);
    // exterior point on the normal line through a nearby boundary point
    {
      const CVec xi = nearby_boundary_point(d, z, std::pow(10.0, -2.5 + 2.8 * U(rng)), rng);
      const CVec nr = real_gradient(d, xi).normalized();
      double h = 0.5 * eps * std::pow(10.0, -3.0 * U(rng));
      CVec w = xi + h * nr;
      while (d.rho(w) >= eps) {
        h *= 0.5;
        w = xi + h * nr;
      }
      const double pr_d = qdist(d, xi, z);
      r1.push_back(qdist(d, w, z) / (d.rho(w) + pr_d));
    }
    // external region point at z against a nearby boundary point
    {
      const double h = 0.9 * eps * std::pow(10.0, -3.0 * U(rng));
      const double rad = std::sqrt(eta * h * U(rng));
      const cd wt = std::polar(rad, 2.0 * kPi * U(rng));
      const double v = eta * h * (2.0 * U(rng) - 1.0);
      const CVec tau = region_point(d, z, wt, v, h);
      const CVec w = nearby_boundary_point(d, z, std::pow(10.0, -2.5 + 2.8 * U(rng)), rng);
      r2.push_back(qdist(d, tau, w) / (d.rho(tau) + qdist(d, z, w)));
    }
  }
  return {envelope(std::move(r1)), envelope(std::move(r2))};
}

std::vector<double> maximal_radii(const DomainSpec& d, const BoundaryGrid& grid, int levels) {
  double gmax = 0.0, zmax = 0.0;
  for (const BoundaryNode& nd : grid.nodes()) {
    gmax = std::max(gmax, d.grad(nd.xi).norm());
    zmax = std::max(zmax, nd.xi.norm());
  }
  const double diam = 2.0 * gmax * zmax * (1.0 + 1e-12);
  std::vector<double> r(levels);
  for (int m = 0; m < levels; ++m) r[m] = std::ldexp(diam, -m);
  return r;
}

std::vector<double> maximal_function(const DomainSpec& d, const BoundaryGrid& grid, const std::vector<double>& a,
                                     int levels) {
  if (a.size() != grid.size()) throw UsageError("maximal_function: field size differs from grid");
  const std::vector<double> radii = maximal_radii(d, grid, levels);
  const std::vector<CVec> grads = node_gradients(d, grid);
  std::vector<double> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    std::vector<double> mass(levels, 0.0), sum(levels, 0.0);
    const CVec& z = grid[i].xi;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double q = qdist(grads[j], grid[j].xi, z);
      // deepest ladder level whose ball still contains node j
      int k = q > 0.0 ? std::min(levels - 1, static_cast<int>(std::floor(std::log2(radii[0] / q)))) : levels - 1;
      while (k >= 0 && !(q < radii[k])) --k;
      while (k + 1 < levels && q < radii[k + 1]) ++k;
      if (k < 0) continue;
      mass[k] += grid[j].w_sigma;
      sum[k] += std::abs(a[j]) * grid[j].w_sigma;
    }
    double best = 0.0, M = 0.0, S = 0.0;
    for (int k = levels - 1; k >= 0; --k) {
      M += mass[k];
      S += sum[k];
      if (M > 0.0) best = std::max(best, S / M);
    }
    out[i] = best;
  });
  return out;
}

}  // namespace hs
