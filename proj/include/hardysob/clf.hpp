#pragma once

#include "hardysob/core.hpp"
#include "hardysob/domain.hpp"
#include "hardysob/grid.hpp"
#include "hardysob/holo.hpp"

#include <string>
#include <vector>

namespace hs {

/// <d rho(xi), xi - z>^{-n}; throws NumericalError when the pairing is below 1e-14.
cd clf_kernel(const DomainSpec& d, const CVec& xi, const CVec& z);
/// Kernel with the boundary covector already evaluated.
cd clf_kernel(const CVec& grad_xi, const CVec& xi, const CVec& z);

struct Reproduction {
  cd value;
  bool near_boundary = false;  // z closer than 3 grid spacings to the boundary
};

/// Quadrature of f(xi) K(xi, z) dS(xi) over the grid.
Reproduction clf_reproduce(const DomainSpec& d, const BoundaryGrid& grid, const HoloFunction& f, const CVec& z);

enum class Trend { converging, diverging, inconclusive };
std::string to_string(Trend t);

/// Increment-ratio classification of a sequence of integrals over levels
/// approaching the boundary: consecutive increments shrinking by <= 0.85 mean
/// a finite limit, growing by >= 1.15 mean divergence.
Trend increment_trend(const std::vector<double>& values, double* ratio = nullptr);

/// Levels t_m = -eps 2^{-m}, m = m_first..m_last.
std::vector<double> dyadic_ladder(double eps, int m_first, int m_last);

/// Graded grids for a ladder of interior levels. Each level is graded toward
/// `focus` down to the scale |t|.
struct LevelGridPolicy {
  int points_per_panel = 5;
  int extra_levels = 3;
  int n_b = 12;
  CVec focus;  // empty: e_1
};

class LevelGrids {
 public:
  LevelGrids(const DomainSpec& d, std::vector<double> levels, LevelGridPolicy policy = {});
  const std::vector<double>& levels() const { return levels_; }
  const BoundaryGrid& at(std::size_t m) const { return grids_[m]; }
  std::size_t size() const { return grids_.size(); }

 private:
  std::vector<double> levels_;
  std::vector<BoundaryGrid> grids_;
};

/// Multi-indices of order 0..max_order, grouped by order.
std::vector<MultiIndex> alphas_up_to(int n, int max_order);

/// values[m][i][q] = int_{rho = t_m} |d^{alpha_i} f|^{p_q} dsigma with alpha_i
/// from alphas_up_to. Non-finite values are kept as +inf.
struct LevelTable {
  std::vector<double> levels;
  std::vector<MultiIndex> alphas;
  std::vector<double> ps;
  std::vector<std::vector<std::vector<double>>> values;
};
LevelTable level_integrals(const LevelGrids& grids, const HoloFunction& f, int max_order,
                           const std::vector<double>& ps);

struct NormReport {
  double value = 0.0;                 // sup over levels (+inf on non-finite data)
  std::vector<double> levels;
  std::vector<double> level_values;   // norm at each level
  std::vector<double> integrals;      // sum over alpha of int |d^alpha f|^p at each level
  Trend trend = Trend::inconclusive;
  double increment_ratio = 0.0;
};

/// sup_t (int |f|^p dsigma_t)^{1/p} over the ladder with its trend flag.
NormReport hardy_norm(const DomainSpec& d, const HoloFunction& f, double p, const LevelGrids& grids);

/// ||f||_{H^p} + sum_{|alpha| <= l} ||d^alpha f||_{H^p}; the alpha = 0 term
/// appears twice. Trend is that of int sum_{|alpha| <= l} |d^alpha f|^p.
NormReport sobolev_norm(const DomainSpec& d, const HoloFunction& f, double p, int l, const LevelGrids& grids);

/// Report from a precomputed level table, for p = table.ps[q].
NormReport sobolev_from_table(const LevelTable& table, int l, std::size_t q);

}  // namespace hs
