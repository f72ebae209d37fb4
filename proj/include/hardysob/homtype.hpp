#pragma once

#include "hardysob/core.hpp"
#include "hardysob/domain.hpp"
#include "hardysob/grid.hpp"

#include <cstdint>
#include <vector>

namespace hs {

/// d(w, z) = |<d rho(w), w - z>|. Not symmetric.
double qdist(const DomainSpec& d, const CVec& w, const CVec& z);
inline double qdist(const CVec& grad_w, const CVec& w, const CVec& z) { return std::abs(pair(grad_w, w - z)); }

/// Holomorphic gradients of the defining function at every grid node.
std::vector<CVec> node_gradients(const DomainSpec& d, const BoundaryGrid& grid);

struct Quasiball {
  std::vector<std::size_t> members;  // nodes w with d(w, z) < delta
  double sigma = 0.0;
};

Quasiball quasiball(const DomainSpec& d, const BoundaryGrid& grid, const CVec& z, double delta);

struct HomogeneityReport {
  double fitted_dimension = 0.0;
  double dimension_spread = 0.0;  // standard deviation of per-center slopes
  double quasi_triangle_constant = 0.0;
  std::vector<double> radii;
  std::vector<double> mean_measure;  // average sigma(B(z, delta)) over centers
  int centers = 0;
};

/// Least-squares slope of log sigma(B(z, delta)) against log delta averaged
/// over random boundary centers, plus the quasi-triangle constant sampled
/// over node triples.
/// Throws UsageError for fewer than 3 radii.
HomogeneityReport check_homogeneous(const DomainSpec& d, const BoundaryGrid& grid,
                                    const std::vector<double>& radii = {0.05, 0.0707, 0.1, 0.141, 0.2, 0.283, 0.4},
                                    int centers = 50, int triples = 10000, std::uint64_t seed = 1);

struct RatioEnvelope {
  double min = 0.0, max = 0.0;
  double lo = 0.0, hi = 0.0;  // 0.5% and 99.5% percentiles
  std::size_t samples = 0;
};

struct ExteriorReport {
  RatioEnvelope exterior;  // d(w, z) / (rho(w) + d(pr w, z))
  RatioEnvelope region;    // d(tau, w) / (rho(tau) + d(z, w)), tau in the external region at z
};

/// Sampled two-sided comparisons for exterior points, eta the region
/// aperture.
ExteriorReport qm_exterior_check(const DomainSpec& d, int samples, double eta = 1.0, std::uint64_t seed = 1);

RatioEnvelope envelope(std::vector<double> ratios);

/// Dyadic radius ladder r_m = 2^{-m} diam, m = 0..levels-1, where diam bounds
/// every quasidistance on the grid.
std::vector<double> maximal_radii(const DomainSpec& d, const BoundaryGrid& grid, int levels = 12);

/// Ma(z) = max over the ladder of sigma(B(z, r))^{-1} int_{B(z, r)} |a| dsigma.
std::vector<double> maximal_function(const DomainSpec& d, const BoundaryGrid& grid, const std::vector<double>& a,
                                     int levels = 12);

}  // namespace hs
