#include "hardysob/quadrature.hpp"

#include "hardysob/core.hpp"

#include <cmath>
#include <numeric>

namespace hs {

double Rule1D::total() const { return std::accumulate(w.begin(), w.end(), 0.0); }

Rule1D gauss_legendre(int g, double a, double b) {
  if (g < 1) throw UsageError("gauss_legendre: need at least one point");
  Rule1D r;
  r.x.resize(g);
  r.w.resize(g);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int i = 0; i < (g + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (g + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= g; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (g == 1) p1 = x, p0 = 1.0;
      dp = g * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double wt = 2.0 / ((1.0 - x * x) * dp * dp);
    r.x[i] = mid - half * x;
    r.x[g - 1 - i] = mid + half * x;
    r.w[i] = r.w[g - 1 - i] = half * wt;
  }
  if (g == 1) {
    r.x[0] = mid;
    r.w[0] = b - a;
  }
  return r;
}

Rule1D composite_graded(double a, double b, int g, int levels, double max_width) {
  std::vector<double> breaks{a};
  const double len = b - a;
  for (int k = levels; k >= 1; --k) breaks.push_back(a + len * std::ldexp(1.0, -k));
  breaks.push_back(b);
  Rule1D out;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double lo = breaks[p], hi = breaks[p + 1];
    const int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_width - 1e-12)));
    for (int q = 0; q < pieces; ++q) {
      const Rule1D panel =
          gauss_legendre(g, lo + (hi - lo) * q / pieces, lo + (hi - lo) * (q + 1) / pieces);
      out.x.insert(out.x.end(), panel.x.begin(), panel.x.end());
      out.w.insert(out.w.end(), panel.w.begin(), panel.w.end());
    }
  }
  return out;
}

Rule1D periodic_uniform(int n) { return periodic_clustered(n, 0.0); }

Rule1D periodic_clustered(int n, double a) {
  if (n < 1) throw UsageError("periodic rule needs n >= 1");
  Rule1D r;
  r.x.resize(n);
  r.w.resize(n);
  const double h = 2.0 * kPi / n;
  for (int k = 0; k < n; ++k) {
    // Offset by half a step so that no node sits on the clustering point.
    const double u = -kPi + (k + 0.5) * h;
    r.x[k] = u - a * std::sin(u);
    r.w[k] = h * (1.0 - a * std::cos(u));
  }
  return r;
}

}  // namespace hs

namespace hs {

Rule1D symmetric_graded(int g, int levels, double max_width) {
  const Rule1D half = composite_graded(0.0, kPi, g, levels, max_width);
  Rule1D r;
  for (std::size_t i = half.size(); i-- > 0;) {
    r.x.push_back(-half.x[i]);
    r.w.push_back(half.w[i]);
  }
  for (std::size_t i = 0; i < half.size(); ++i) {
    r.x.push_back(half.x[i]);
    r.w.push_back(half.w[i]);
  }
  return r;
}

}  // namespace hs
