#pragma once

#include "hardysob/core.hpp"
#include "hardysob/domain.hpp"
#include "hardysob/quadrature.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hs {

/// Angular resolution of a boundary grid. Directions on S^3 are written in
/// Hopf coordinates u = (cos(th) e^{i a}, sin(th) e^{i b}), th in [0, pi/2];
/// the th = 0 circle passes through e_1, so grading in th and a clusters nodes
/// around e_1 (or around `focus` once the grid is rotated). Near e_1 the
/// quasidistance behaves like th^2 + |a|.
struct GridSpec {
  int n_theta = 16;  // Gauss points in th (per panel when graded)
  int n_a = 25;      // nodes in the first angle (per panel when graded)
  int n_b = 25;      // uniform nodes in the second angle
  int theta_levels = 0;  // > 0: geometric panels toward th = 0
  int a_levels = 0;  // > 0: geometric panels toward a = 0
  double max_panel = 0.25;
  std::optional<CVec> focus;  // unit vector that plays the role of e_1
  bool leray = true;          // false: skip the Leray-Levy weights

  std::size_t expected_size() const;
  std::string key() const;
  /// Doubles the node count (roughly) by refining each direction by 2^(1/3).
  GridSpec refined(double factor = 2.0) const;
};

struct BoundaryNode {
  CVec xi;
  double w_sigma = 0.0;  // surface measure
  double w_S = 0.0;      // Leray-Levy measure
};

class BoundaryGrid {
 public:
  BoundaryGrid() = default;
  BoundaryGrid(std::vector<BoundaryNode> nodes, double level, GridSpec spec);

  const std::vector<BoundaryNode>& nodes() const { return nodes_; }
  const BoundaryNode& operator[](std::size_t i) const { return nodes_[i]; }
  std::size_t size() const { return nodes_.size(); }
  double level() const { return level_; }
  const GridSpec& spec() const { return spec_; }

  double total_sigma() const;
  double total_S() const;
  /// Typical node spacing (|boundary| / N)^(1/(2n-1)).
  double spacing() const;

 private:
  std::vector<BoundaryNode> nodes_;
  double level_ = 0.0;
  GridSpec spec_;
};

/// Quadrature for the level set {rho = t} of a catalog domain (n = 2), built
/// as a radial graph over the unit sphere.
BoundaryGrid build_boundary_grid(const DomainSpec& d, double t, const GridSpec& spec);

/// Unitary map whose first column is the unit vector u.
CMat unitary_with_first_column(const CVec& u);

/// Volume quadrature for the collar {0 < rho < eps} built from radial grids on
/// Gauss levels t in (0, eps); the volume weight at a node is
/// w_sigma(t) w_t / |grad_R rho|.
struct ShellNode {
  CVec xi;
  double level = 0.0;
  double w_mu = 0.0;
};

struct ShellSpec {
  GridSpec angular;
  int t_points = 4;  // Gauss points per height panel
  int t_panels = 2;  // uniform panels of [0, eps]
  /// Interior panel edges as fractions of eps, increasing; replaces the
  /// uniform panels when nonempty.
  std::vector<double> t_breaks;
  std::string key() const;
};

class ShellGrid {
 public:
  ShellGrid() = default;
  ShellGrid(std::vector<ShellNode> nodes, std::vector<double> levels, double eps, ShellSpec spec);

  const std::vector<ShellNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& levels() const { return levels_; }
  double eps() const { return eps_; }
  double total_mu() const;
  const ShellSpec& spec() const { return spec_; }

 private:
  std::vector<ShellNode> nodes_;
  std::vector<double> levels_;
  double eps_ = 0.0;
  ShellSpec spec_;
};

ShellGrid build_shell_grid(const DomainSpec& d, double eps, const ShellSpec& spec);

/// Binary grid cache with a version header, keyed by domain, level and
/// resolution.
class GridCache {
 public:
  static constexpr std::uint32_t kVersion = 1;

  explicit GridCache(std::filesystem::path dir);

  BoundaryGrid boundary(const DomainSpec& d, double t, const GridSpec& spec) const;

  std::filesystem::path path_for(const DomainSpec& d, double t, const GridSpec& spec) const;

 private:
  std::filesystem::path dir_;
};

void save_grid(const BoundaryGrid& g, const std::filesystem::path& file);
/// Returns nullopt when the file is missing, truncated or of another version.
std::optional<BoundaryGrid> load_grid(const std::filesystem::path& file, int n);

}  // namespace hs
