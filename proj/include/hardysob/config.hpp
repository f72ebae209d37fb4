#pragma once

#include "hardysob/domain.hpp"
#include "hardysob/grid.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace hs {

/// Batch run configuration, read from an INI file:
///
///   [domain]     name, params (comma list), eps, eta
///   [resolution] boundary_nodes, measure_nodes, shell_nodes, shell_levels,
///                region_levels
///   [analysis]   function, p, l (comma list), k_min, k_max, r, seed, jet_order
///   [kernel]     degrees (comma list), pairs
///   [output]     dir, cache_dir
///
/// Every key is optional and falls back to the defaults below.
struct RunConfig {
  std::string domain = "ball";
  std::vector<double> params;
  double eps = 0.1;
  double eta = 1.0;

  int boundary_nodes = 10000;
  int measure_nodes = 80000;  // quasiball measure and maximal function grids
  int shell_nodes = 100000;
  int shell_levels = 8;
  int region_levels = 8;

  std::string function = "exp(z1+2*z2)";
  double p = 2.0;
  std::vector<int> l_probes{0, 1, 2, 3};
  int k_min = 1;
  int k_max = 6;
  double r = 2.0;
  std::uint64_t seed = 1;
  int jet_order = 5;  // symmetry continuation, exact for polynomials of lower degree

  std::vector<int> kernel_degrees{8, 16, 32, 64};
  int kernel_pairs = 2000;

  std::filesystem::path output_dir = "out";
  std::filesystem::path cache_dir;  // empty: no grid cache

  DomainSpec make_domain() const;
  /// Uniform boundary grid with about boundary_nodes nodes.
  GridSpec boundary_spec() const;
  GridSpec measure_spec() const;
  /// Shell with shell_levels Gauss heights over about shell_nodes nodes.
  ShellSpec shell_spec() const;
};

/// Throws UsageError naming the offending key.
void validate(const RunConfig& c);

/// Parses and validates; throws UsageError for unreadable files, unknown
/// keys or bad values.
RunConfig load_config(const std::filesystem::path& file);
RunConfig parse_config(const std::string& text);

/// Uniform grid spec with n_a = n_b = 2 n_theta nearest to `nodes`.
GridSpec uniform_spec(int nodes);

}  // namespace hs
