#pragma once

#include "hardysob/continuation.hpp"
#include "hardysob/core.hpp"
#include "hardysob/domain.hpp"
#include "hardysob/dzyadyk.hpp"
#include "hardysob/grid.hpp"
#include "hardysob/holo.hpp"
#include "hardysob/koranyi.hpp"
#include "hardysob/polynomial.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace hs {

struct ProjectionOptions {
  double r = 2.0;
  bool reproduce = true;  // pin the low Taylor coefficients of T_j
  int margin = 24;        // quadrature degree beyond deg K^glob
};

/// Tensor grid integrating trigonometric degree `degree + margin` in both
/// Hopf angles.
GridSpec projection_grid(int degree, int margin = 24);

/// Kernel used for P_{2^k}.
std::unique_ptr<KernelApproximant> projection_kernel(const DomainSpec& d, int k, const ProjectionOptions& opt = {});

/// min(eps 2^{-k}, validity - eps 2^{-k}): outward for entire f, inward once
/// the singular set meets the collar.
double default_offset(const DomainSpec& d, const HoloFunction& f, int k);

/// P(z) = sum_nodes f(xi) K^glob(xi, z) w_S over {rho = t_off}, assembled
/// monomial by monomial. Throws UsageError when f is not holomorphic on the
/// closed level domain.
PolynomialCn project_direct(const DomainSpec& d, const HoloFunction& f, int k, double t_off,
                            const ProjectionOptions& opt = {});
PolynomialCn project_direct(const DomainSpec& d, const HoloFunction& f, double t_off, const KernelApproximant& K,
                            const BoundaryGrid& level_grid);

/// P(z) = s sum_shell (dbar fbar ^ omega)(xi) K^glob(xi, z) w_mu.
PolynomialCn project_via_continuation(const DomainSpec& d, const Continuation& c, const ShellGrid& shell, int k,
                                      const ProjectionOptions& opt = {});
PolynomialCn project_via_continuation(const ShellField& field, const ShellGrid& shell, const KernelApproximant& K);

/// |f - P| at every node of `grid`.
std::vector<double> error_field(const HoloFunction& f, const PolynomialCn& P, const BoundaryGrid& grid);

struct LevelField {
  int k = 0;
  std::vector<double> values;
};

/// sum_nodes w_sigma (sum_k E_k^2 4^{lk})^{p/2}.
double smoothness_sum(const BoundaryGrid& grid, const std::vector<LevelField>& E, double l, double p);

enum class Verdict { converging, diverging, inconclusive };
std::string to_string(Verdict v);

/// Tail rule on the last three partial sums: both ratios <= 1.1 converging,
/// both >= 1.5 diverging.
Verdict tail_verdict(const std::vector<double>& partial);

struct LevelSummary {
  int k = 0;
  double sup = 0.0;
  double lp = 0.0;  // (sum w_sigma E^p)^{1/p}
  double t_off = 0.0;
  int degree = 0;
};

struct SumTrajectory {
  double l = 0.0;
  std::vector<double> partial;  // partial[i] uses levels 0..i
  Verdict verdict = Verdict::inconclusive;
};

struct SmoothnessReport {
  std::string function;
  std::string domain;
  double p = 2.0;
  std::vector<LevelSummary> levels;
  std::vector<LevelField> fields;
  double slope = 0.0;  // log2 sup E_k against k; -inf once the floor is hit
  bool floor_limited = false;
  double floor = 0.0;     // relative floor used for the slope
  double f_scale = 1.0;   // 1 + sup |f| on the evaluation grid
  std::vector<SumTrajectory> sums;

  /// First probed l whose sums stop converging (the flip point), or +inf.
  double threshold() const;
};

struct DiagnoseOptions {
  ProjectionOptions projection;
  GridSpec evaluation{6, 6, 16, 5, 8, 0.25, std::nullopt, false};
  /// Relative level below which E_k counts as quadrature floor.
  double floor = 1e-10;
};

/// Evaluation grid graded toward the singular point e_1 of the corpus.
BoundaryGrid evaluation_grid(const DomainSpec& d, const DiagnoseOptions& opt = {});

/// Kernels per k and level grids per (k, t_off), shared across functions.
class ProjectionCache {
 public:
  explicit ProjectionCache(const DomainSpec& d, ProjectionOptions opt = {});

  const KernelApproximant& kernel(int k);
  const BoundaryGrid& level_grid(int k, double t_off);
  const DomainSpec& domain() const { return domain_; }
  const ProjectionOptions& options() const { return opt_; }

 private:
  DomainSpec domain_;
  ProjectionOptions opt_;
  std::mutex mutex_;
  std::map<int, std::unique_ptr<KernelApproximant>> kernels_;
  std::map<std::pair<int, double>, std::unique_ptr<BoundaryGrid>> grids_;
};

SmoothnessReport diagnose(const DomainSpec& d, const HoloFunction& f, double p, const std::vector<int>& k_range,
                          const std::vector<double>& l_probe, const DiagnoseOptions& opt = {});
SmoothnessReport diagnose(const HoloFunction& f, double p, const std::vector<int>& k_range,
                          const std::vector<double>& l_probe, ProjectionCache& cache, const BoundaryGrid& eval,
                          const DiagnoseOptions& opt = {});
/// Partial sums, slope and verdicts recomputed for another p or probe set.
SmoothnessReport rescore(SmoothnessReport r, const BoundaryGrid& eval, double p, const std::vector<double>& l_probe);

/// a_k = |P_{2^{k+1}} - P_{2^k}| 2^{kl} at the grid nodes and
/// b_k = (int_{D_k(z)} |dbar fbar|^2 rho^{-2l} dnu)^{1/2} over the dyadic
/// slices D_k = D^e(z) cap {eps 2^{-k} < rho <= eps 2^{-k+1}}.
struct ABFields {
  std::vector<int> k;
  std::vector<std::vector<double>> a;
  std::vector<std::vector<double>> b;
};
ABFields ab_fields(const BoundaryGrid& grid, const std::vector<PolynomialCn>& P_seq, const Continuation& c, double l,
                   const std::vector<RegionSample>& regions);

struct BkLemmaReport {
  std::vector<int> k;
  std::vector<double> p99;  // 99th percentile of b_k / (M a_k + 1e-12)
  std::vector<double> max_ratio;
  double spread = 0.0;  // max p99 / min p99 over levels with a_k present
  bool bounded = false;
};

/// Discrete maximal function of each a_k over centred quasiballs on a dyadic
/// radius ladder, then ratio statistics per k.
BkLemmaReport check_bk_lemma(const DomainSpec& d, const BoundaryGrid& grid, const ABFields& fields, int levels = 12);

}  // namespace hs
