#pragma once

#include "hardysob/clf.hpp"
#include "hardysob/core.hpp"
#include "hardysob/domain.hpp"
#include "hardysob/grid.hpp"
#include "hardysob/holo.hpp"
#include "hardysob/koranyi.hpp"
#include "hardysob/polynomial.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace hs {

/// Quintic smoothstep: 1 below a, 0 above b, C^2 and monotone in between.
struct Cutoff {
  double a = 0.5;
  double b = 1.0;

  double operator()(double x) const;
  double derivative(double x) const;
  /// sup |chi'| = 15 / (8 (b - a)).
  double lipschitz() const { return 15.0 / (8.0 * (b - a)); }
};

/// Value and dbar-components of a continuation at one point.
struct ContinuationValue {
  cd value;
  CVec dbar;  // d fbar / d zbar_j
};

/// A C^1 extension fbar of a holomorphic function across the boundary,
/// vanishing for rho >= support_height. Inside the domain fbar = f with
/// dbar = 0 when the source function is known, and is left undefined
/// otherwise.
struct Continuation {
  enum Kind { symmetry, global } kind = symmetry;
  int m = 0;  // jet order of the symmetry construction
  int n = 2;
  double support_height = 0.1;
  std::function<ContinuationValue(const CVec&)> at;

  cd value(const CVec& z) const { return at(z).value; }
  CVec dbar(const CVec& z) const { return at(z).dbar; }
};

/// fbar(z) = chi(rho(z)) sum_{|alpha| < m} d^alpha f(z*) (z - z*)^alpha / alpha!
/// with chi = Cutoff(eps / 2, eps). Needs derivatives of f up to order m.
Continuation extend_by_symmetry(const DomainSpec& d, const HoloFunction& f, int m, double eps);

/// Jet part of the symmetry construction without the cutoff, and its dbar by
/// the closed-form cancellation (only order m - 1 jet terms survive).
ContinuationValue symmetry_jet(const DomainSpec& d, const HoloFunction& f, int m, const CVec& z);

/// Dyadic blend of P_seq[i] = P_{2^{i+1}}: on eps 2^{-k} < rho < eps 2^{-k+1}
/// (k = 1 .. K-1) fbar = P_{2^k} + chi(2^k rho / eps)(P_{2^{k+1}} - P_{2^k}) with
/// chi = Cutoff(5/4, 7/4); fbar = P_{2^K} below the last shell, and the top
/// shell hands P_2 to 0 through Cutoff(7 eps / 8, eps).
Continuation extend_by_global(const DomainSpec& d, std::vector<PolynomialCn> P_seq, double eps);

/// Height breakpoints (fractions of eps) at every kink of the K-term global
/// continuation, for ShellSpec::t_breaks; `below` dyadic panels are added
/// under the last shell.
std::vector<double> global_shell_breaks(int K, int below = 2);

/// lambda(z) = |P_{2^{k+1}}(z) - P_{2^k}(z)| / rho(z) for the shell containing z
/// (0 outside the blend shells).
double global_lambda(const DomainSpec& d, const std::vector<PolynomialCn>& P_seq, double eps, const CVec& z);

/// The orientation constant s in f(z) = s int (dbar fbar ^ omega)(xi) K(xi, z)
/// dV(xi) with the density of pair_dbar_with_leray. Stokes on the exterior
/// shell gives s = -1; see the calibration test.
inline constexpr double kStokesSign = -1.0;

struct PacReport {
  std::vector<CVec> points;
  std::vector<cd> reconstructed;
  std::vector<cd> exact;
  std::vector<double> rel_errors;  // |rec - f| / max(1, |f|)
  double max_rel_error = 0.0;
  std::size_t nodes = 0;
};

/// Shell quadrature of the reproduction integral at each z.
PacReport verify_pac(const DomainSpec& d, const Continuation& c, const ShellGrid& shell, const std::vector<CVec>& z_set,
                     const std::function<cd(const CVec&)>& truth);

/// dbar fbar and the Leray pairing at every shell node, reused across
/// reproduction points and polynomial assembly.
struct ShellField {
  std::vector<cd> density;  // w_mu * kStokesSign * (dbar fbar ^ omega) density
  double sup_dbar = 0.0;
};
ShellField shell_field(const DomainSpec& d, const Continuation& c, const ShellGrid& shell);

struct SobolevFunctional {
  double value = 0.0;
  std::vector<double> per_center;  // int_{D^e(z)} |dbar fbar|^2 rho^{-2l} dnu
};

/// int_{bdry} (int_{D^e(z)} |dbar fbar|^2 rho^{-2l} dnu)^{p/2} dsigma(z) with
/// |dbar fbar| = sum_j |dbar_j fbar|; `regions` are external regions at the nodes.
SobolevFunctional sobolev_functional(const Continuation& c, int l, double p, const BoundaryGrid& centers,
                                     const std::vector<RegionSample>& regions);

/// Ladder verdict. Diverging: growth >= 1.25 at every step, or increments
/// growing by >= 1.15. Converging: the values vanish, or the last step drifts
/// by <= 25% with increments shrinking by <= 0.85 (two depths: drift only).
Trend ladder_trend(const std::vector<double>& values);

/// Center grids graded toward `focus` and external regions on a ladder of
/// refinement depths L (grading levels ~ L, region levels L + 4), built once
/// and shared across continuations.
class SobolevLadder {
 public:
  SobolevLadder(const DomainSpec& d, double eta, double eps, std::vector<int> depths = {4, 6, 8},
                std::optional<CVec> focus = std::nullopt);

  struct Result {
    int l = 0;
    std::vector<double> values;  // functional per depth
    Trend verdict = Trend::inconclusive;
  };
  /// One result per l, sharing the dbar evaluations.
  std::vector<Result> evaluate(const Continuation& c, const std::vector<int>& ls, double p) const;
  const std::vector<int>& depths() const { return depths_; }

 private:
  std::vector<int> depths_;
  std::vector<BoundaryGrid> grids_;
  std::vector<std::vector<RegionSample>> regions_;
};

}  // namespace hs
