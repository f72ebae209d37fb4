#pragma once

#include "hardysob/core.hpp"
#include "hardysob/domain.hpp"
#include "hardysob/grid.hpp"
#include "hardysob/holo.hpp"

#include <functional>
#include <string>
#include <vector>

namespace hs {

enum class RegionKind { internal, external };

/// Points of a Korányi region at a boundary point with volume weights.
struct RegionSample {
  RegionKind kind = RegionKind::external;
  CVec center;
  double eta = 1.0;
  double eps = 0.1;
  std::vector<CVec> points;
  std::vector<double> w_mu;
  std::vector<double> rho;  // rho(tau), cached
  std::vector<int> band;    // dyadic height band k: eps 2^{-k-1} <= |rho| < eps 2^{-k}

  std::size_t size() const { return points.size(); }
};

/// Heights are split into `levels` dyadic bands below eps, each with
/// h_points Gauss nodes; the complex-tangential disc uses r_points x
/// angle_points nodes and the normal-imaginary slab v_points.
struct RegionResolution {
  int levels = 12;
  int h_points = 2;
  int r_points = 3;
  int angle_points = 6;
  int v_points = 3;
};

/// External region D^e(z, eta, eps) = {tau = z + w + t n(z) : w in T_z,
/// |w|^2 < eta rho(tau), |Im t| < eta rho(tau), 0 < rho(tau) < eps}.
bool in_external_region(const DomainSpec& d, const CVec& z, const CVec& tau, double eta, double eps);

/// Internal region D^i(z, eta, eps) = {tau in Omega : rho(tau) > -eps,
/// d(pr tau, z) < -eta rho(tau)}.
bool in_internal_region(const DomainSpec& d, const CVec& z, const CVec& tau, double eta, double eps);

/// Point z + w e + (u + i v) n(z) with rho = h (h < 0 for interior slices),
/// where e spans T_z; u is found by Newton from the tangent-plane guess.
CVec region_point(const DomainSpec& d, const CVec& z, cd w, double v, double h);

/// Throws NumericalError when no point survives.
RegionSample sample_region(const DomainSpec& d, const CVec& z, RegionKind kind, double eta, double eps,
                           const RegionResolution& res = {});

/// tau -> U tau for a unitary U; valid as a region at U z when the domain is
/// unitary invariant.
RegionSample rotate(const RegionSample& s, const CMat& U);

/// Weight choices: mu (volume), nu = mu / |rho|^{n-1}, nu_l = mu / |rho|^{n-2l+1}.
struct RegionWeight {
  enum Kind { mu, nu, nu_l } kind = mu;
  int l = 0;
  double factor(double rho_abs, int n) const;
};

double region_integrate(const RegionSample& s, const std::function<double(const CVec&, double)>& F,
                        RegionWeight w = {});

/// Region samples at every center, rotated from one template when the domain
/// is unitary invariant.
std::vector<RegionSample> region_bank(const DomainSpec& d, const std::vector<CVec>& centers, RegionKind kind,
                                      double eta, double eps, const RegionResolution& res = {});

struct AreaResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio() const { return lhs / rhs; }
};

/// int (int_{D^i(z)} |d f|^2 dmu / (-rho)^{n-1})^{p/2} dsigma(z) against
/// int |f|^p dsigma, with |d f| = sum_j |d_j f|. `regions` are the internal
/// regions at the grid nodes.
AreaResult area_internal(const DomainSpec& d, const HoloFunction& f, double p, const BoundaryGrid& centers,
                         const std::vector<RegionSample>& regions);

/// Boundary field, evaluated at boundary points.
using BoundaryField = std::function<double(const CVec&)>;

/// Inner integrals of I_l need a boundary grid resolving the kernel scale at
/// the center. For unitary invariant domains one template pair (region and
/// focused grid at e_1) is rotated to every center and the kernel matrix is
/// shared; otherwise each center owns its region and focused grid.
struct IlContext {
  int l = 1;
  std::vector<CVec> centers;
  std::vector<double> center_weights;
  bool rotated = false;
  RegionSample region_template;
  BoundaryGrid inner_template;
  std::vector<CMat> rotations;
  Eigen::MatrixXcd kernel;  // [tau][w] = w_S(w) <d rho(tau), tau - w>^{-(n+l)}
  std::vector<RegionSample> regions;
  std::vector<BoundaryGrid> inner;

  std::size_t size() const { return centers.size(); }
};

IlContext make_il_context(const DomainSpec& d, const BoundaryGrid& centers, int l, double eta, double eps,
                          const GridSpec& inner_spec, const RegionResolution& res = {});

/// I_l(g, z)^2 = int_{D^e(z)} |int g dS / <d rho(tau), tau - w>^{n+l}|^2 dnu_l(tau).
double area_Il(const DomainSpec& d, const BoundaryField& g, int l, const RegionSample& region,
               const BoundaryGrid& inner);

/// Values I_l(g_m, z_c) for every family member m and center c, sharing the
/// kernel evaluations across the family.
std::vector<std::vector<double>> area_Il_family(const DomainSpec& d, const std::vector<BoundaryField>& family,
                                                const IlContext& ctx);

struct AreaInequalityReport {
  std::vector<std::string> labels;
  std::vector<double> lhs;  // int I_l^p dsigma
  std::vector<double> rhs;  // int |g|^p dsigma
  std::vector<double> ratios;
  double max_over_min = 0.0;
  bool monotone_blowup = false;
  bool pass = false;
};

/// Ratios int I_l^p dsigma / int |g|^p dsigma over a family ordered from
/// coarse to fine scale; blow-up means strictly increasing ratios with
/// last / first > 3. Passes when max/min <= 50 without blow-up.
AreaInequalityReport check_area_inequality(const DomainSpec& d, const std::vector<BoundaryField>& family,
                                           const std::vector<std::string>& labels, double p,
                                           const IlContext& ctx, const BoundaryGrid& rhs_grid);

}  // namespace hs
