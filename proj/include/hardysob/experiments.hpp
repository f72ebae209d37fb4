#pragma once

#include "hardysob/domain.hpp"
#include "hardysob/koranyi.hpp"
#include "hardysob/polynomial.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hs {

/// Composite experiments shared by the command-line driver and the
/// acceptance suite.

/// Points z = s u with u uniform on the sphere and s a fraction of the
/// boundary radius along u, s = radius ((i + 1) / count)^{1/4}.
std::vector<CVec> interior_points(const DomainSpec& d, int count, double radius, std::uint64_t seed);

/// Least-squares slope of log y against log x.
double log_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Kendall tau over the pairs untied in `reference`: (concordant - discordant)
/// / untied pairs, where a tie in `score` counts as discordant. Returns 1 when
/// no pair is untied.
double kendall_tau(const std::vector<double>& reference, const std::vector<double>& score);

/// Partial sums P_k = sum_{i=first}^{k} 2^{-i s} (z1^{2^i} + z2^{2^i}), k = 1..K:
/// every increment carries exactly two monomials. first = 2 gives P_1 = 0, so
/// the outer handoff of the global continuation carries nothing.
std::vector<PolynomialCn> lacunary_two_term(int K, double s, int first = 1);

struct AreaSweepOptions {
  int l = 1;
  double p = 2.0;
  double eta = 1.0;
  double eps = 0.1;
  int region_levels = 8;
  std::uint64_t seed = 1;
};

struct AreaFamilyResult {
  std::string name;
  std::vector<double> scales;  // coarse to fine
  AreaInequalityReport report;
};

struct AreaSweep {
  std::size_t centers = 0;
  AreaInequalityReport constant;  // g = 1 and g = 2
  std::vector<AreaFamilyResult> families;
  double max_over_min = 0.0;  // over every member of every family
  std::vector<double> kl_s;
  std::vector<AreaResult> krantz_li;
  double kl_max_over_min = 0.0;
};

/// I_l area inequality over quasiball indicators, bandlimited fields and
/// quasiball bumps at the boundary point on the positive z1 axis, plus the
/// internal ratios for (1 - <z, a>)^{-s}, s = 0.1, 0.2, 0.3.
AreaSweep area_sweep(const DomainSpec& d, const AreaSweepOptions& opt = {});

}  // namespace hs
