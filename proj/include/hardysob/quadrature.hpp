#pragma once

#include <vector>

namespace hs {

/// One-dimensional quadrature rule: nodes and positive weights.
struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;

  std::size_t size() const { return x.size(); }
  double total() const;
};

/// Gauss-Legendre rule with g points on [a, b].
Rule1D gauss_legendre(int g, double a = -1.0, double b = 1.0);

/// Composite Gauss-Legendre on [a, b]: `levels` geometric panels of ratio 1/2
/// accumulating at a (the innermost panel is [a, a + (b-a) 2^-levels]),
/// every panel wider than max_width split uniformly, g points per panel.
Rule1D composite_graded(double a, double b, int g, int levels, double max_width);

/// Composite Gauss-Legendre on [-pi, pi) graded geometrically toward 0 from
/// both sides.
Rule1D symmetric_graded(int g, int levels, double max_width);

/// Uniform trapezoid rule on a period [-pi, pi) with n nodes.
Rule1D periodic_uniform(int n);

/// Periodic rule on [-pi, pi) clustered at 0 through phi = u - a sin(u),
/// a in [0, 1]; a = 1 gives cubic clustering with node spacing ~ (2 pi / n)^3.
Rule1D periodic_clustered(int n, double a);

}  // namespace hs
