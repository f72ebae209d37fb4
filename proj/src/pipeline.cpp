#include "hardysob/pipeline.hpp"

#include "hardysob/homtype.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hs {

GridSpec projection_grid(int degree, int margin) {
  GridSpec g;
  g.n_theta = degree / 2 + margin / 2;
  g.n_a = degree + margin;
  g.n_b = degree + margin;
  return g;
}

std::unique_ptr<KernelApproximant> projection_kernel(const DomainSpec& d, int k, const ProjectionOptions& opt) {
  const int deg = 1 << k;
  const int j = (deg + d.n - 1) / d.n;
  return std::make_unique<KernelApproximant>(d, deg, opt.r, 0.0, opt.reproduce ? reproducing_order(j) : -1);
}

double default_offset(const DomainSpec& d, const HoloFunction& f, int k) {
  const double h = std::ldexp(d.eps_shell, -k);
  return std::min(h, f.validity - h);
}

namespace {

// Fixed chunking keeps the summation order independent of the thread count.
constexpr std::size_t kChunks = 64;

PolynomialCn assemble(std::size_t count, const KernelApproximant& K, int n,
                      const std::function<std::pair<CVec, cd>(std::size_t)>& node) {
  std::vector<PolynomialCn> part(kChunks, PolynomialCn(n, K.degree()));
  parallel_for(kChunks, [&](std::size_t c) {
    const std::size_t lo = count * c / kChunks, hi = count * (c + 1) / kChunks;
    for (std::size_t i = lo; i < hi; ++i) {
      const auto [xi, w] = node(i);
      if (w != 0.0) K.add_monomials(xi, w, part[c]);
    }
  });
  PolynomialCn out(n, K.degree());
  for (const PolynomialCn& p : part) out += p;
  return out;
}

}  // namespace

PolynomialCn project_direct(const DomainSpec& d, const HoloFunction& f, double t_off, const KernelApproximant& K,
                            const BoundaryGrid& level_grid) {
  if (!(t_off < f.validity)) throw UsageError("project_direct: " + f.label + " is singular on the level " + std::to_string(t_off) + "; lower t_off");
  if (std::abs(level_grid.level() - t_off) > 1e-14) throw UsageError("project_direct: grid level differs from t_off");
  const auto& nodes = level_grid.nodes();
  return assemble(nodes.size(), K, d.n, [&](std::size_t i) {
    return std::pair<CVec, cd>{nodes[i].xi, f(nodes[i].xi) * nodes[i].w_S};
  });
}

PolynomialCn project_direct(const DomainSpec& d, const HoloFunction& f, int k, double t_off,
                            const ProjectionOptions& opt) {
  if (!(t_off < f.validity)) throw UsageError("project_direct: " + f.label + " is singular on the level " + std::to_string(t_off) + "; lower t_off");
  if (std::abs(t_off) > d.eps_shell) throw UsageError("project_direct: t_off outside the collar");
  const auto K = projection_kernel(d, k, opt);
  const BoundaryGrid grid = build_boundary_grid(d, t_off, projection_grid(K->degree(), opt.margin));
  return project_direct(d, f, t_off, *K, grid);
}

PolynomialCn project_via_continuation(const ShellField& field, const ShellGrid& shell, const KernelApproximant& K) {
  const auto& nodes = shell.nodes();
  return assemble(nodes.size(), K, static_cast<int>(nodes.empty() ? 2 : nodes[0].xi.size()),
                  [&](std::size_t i) { return std::pair<CVec, cd>{nodes[i].xi, field.density[i]}; });
}

PolynomialCn project_via_continuation(const DomainSpec& d, const Continuation& c, const ShellGrid& shell, int k,
                                      const ProjectionOptions& opt) {
  return project_via_continuation(shell_field(d, c, shell), shell, *projection_kernel(d, k, opt));
}

std::vector<double> error_field(const HoloFunction& f, const PolynomialCn& P, const BoundaryGrid& grid) {
  std::vector<double> e(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { e[i] = std::abs(f(grid[i].xi) - P(grid[i].xi)); });
  return e;
}

double smoothness_sum(const BoundaryGrid& grid, const std::vector<LevelField>& E, double l, double p) {
  double total = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double s = 0.0;
    for (const LevelField& f : E) s += f.values[i] * f.values[i] * std::exp2(2.0 * l * f.k);
    total += grid[i].w_sigma * std::pow(s, p / 2);
  }
  return total;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::converging: return "converging";
    case Verdict::diverging: return "diverging";
    default: return "inconclusive";
  }
}

Verdict tail_verdict(const std::vector<double>& partial) {
  const std::size_t m = partial.size();
  if (m < 3) return Verdict::inconclusive;
  const double a = partial[m - 3], b = partial[m - 2], c = partial[m - 1];
  if (c == 0.0) return Verdict::converging;
  if (a == 0.0) return Verdict::inconclusive;
  const double r1 = b / a, r2 = c / b;
  if (std::max(r1, r2) <= 1.1) return Verdict::converging;
  if (std::min(r1, r2) >= 1.5) return Verdict::diverging;
  return Verdict::inconclusive;
}

double SmoothnessReport::threshold() const {
  for (const SumTrajectory& s : sums)
    if (s.verdict != Verdict::converging) return s.l;
  return std::numeric_limits<double>::infinity();
}

ProjectionCache::ProjectionCache(const DomainSpec& d, ProjectionOptions opt) : domain_(d), opt_(opt) {}

const KernelApproximant& ProjectionCache::kernel(int k) {
  std::lock_guard lock(mutex_);
  auto& slot = kernels_[k];
  if (!slot) slot = projection_kernel(domain_, k, opt_);
  return *slot;
}

const BoundaryGrid& ProjectionCache::level_grid(int k, double t_off) {
  const int degree = kernel(k).degree();
  std::lock_guard lock(mutex_);
  auto& slot = grids_[{k, t_off}];
  if (!slot) slot = std::make_unique<BoundaryGrid>(build_boundary_grid(domain_, t_off, projection_grid(degree, opt_.margin)));
  return *slot;
}

BoundaryGrid evaluation_grid(const DomainSpec& d, const DiagnoseOptions& opt) {
  return build_boundary_grid(d, 0.0, opt.evaluation);
}

namespace {

double fit_slope(const std::vector<LevelSummary>& lv) {
  double sk = 0, se = 0, skk = 0, ske = 0;
  for (const LevelSummary& s : lv) {
    const double e = std::log2(s.sup);
    sk += s.k;
    se += e;
    skk += double(s.k) * s.k;
    ske += s.k * e;
  }
  const double m = static_cast<double>(lv.size());
  return (m * ske - sk * se) / (m * skk - sk * sk);
}

}  // namespace

SmoothnessReport rescore(SmoothnessReport r, const BoundaryGrid& eval, double p, const std::vector<double>& l_probe) {
  r.p = p;
  for (LevelSummary& s : r.levels) {
    double acc = 0.0;
    for (std::size_t i = 0; i < eval.size(); ++i) acc += eval[i].w_sigma * std::pow(r.fields[&s - r.levels.data()].values[i], p);
    s.lp = std::pow(acc, 1.0 / p);
  }
  // slope over the levels above the floor; a floor hit at the end means
  // eventually exact approximation
  std::vector<LevelSummary> above;
  r.floor_limited = false;
  for (const LevelSummary& s : r.levels) {
    if (s.sup <= r.floor * r.f_scale) {
      r.floor_limited = true;
      break;
    }
    above.push_back(s);
  }
  if (r.floor_limited)
    r.slope = -std::numeric_limits<double>::infinity();
  else
    r.slope = above.size() >= 2 ? fit_slope(above) : 0.0;
  r.sums.clear();
  for (double l : l_probe) {
    SumTrajectory t;
    t.l = l;
    std::vector<LevelField> head;
    for (const LevelField& f : r.fields) {
      head.push_back(f);
      t.partial.push_back(smoothness_sum(eval, head, l, p));
    }
    t.verdict = tail_verdict(t.partial);
    r.sums.push_back(std::move(t));
  }
  return r;
}

SmoothnessReport diagnose(const HoloFunction& f, double p, const std::vector<int>& k_range,
                          const std::vector<double>& l_probe, ProjectionCache& cache, const BoundaryGrid& eval,
                          const DiagnoseOptions& opt) {
  if (k_range.empty()) throw UsageError("diagnose: empty k range");
  const DomainSpec& d = cache.domain();
  SmoothnessReport r;
  r.function = f.label;
  r.domain = d.name;
  r.floor = opt.floor;
  std::vector<double> absf(eval.size());
  parallel_for(eval.size(), [&](std::size_t i) { absf[i] = std::abs(f(eval[i].xi)); });
  r.f_scale = 1.0 + *std::max_element(absf.begin(), absf.end());
  for (int k : k_range) {
    const double t = default_offset(d, f, k);
    const PolynomialCn P = project_direct(d, f, t, cache.kernel(k), cache.level_grid(k, t));
    LevelField E{k, error_field(f, P, eval)};
    LevelSummary s;
    s.k = k;
    s.t_off = t;
    s.degree = P.degree();
    s.sup = *std::max_element(E.values.begin(), E.values.end());
    r.levels.push_back(s);
    r.fields.push_back(std::move(E));
  }
  return rescore(std::move(r), eval, p, l_probe);
}

SmoothnessReport diagnose(const DomainSpec& d, const HoloFunction& f, double p, const std::vector<int>& k_range,
                          const std::vector<double>& l_probe, const DiagnoseOptions& opt) {
  ProjectionCache cache(d, opt.projection);
  return diagnose(f, p, k_range, l_probe, cache, evaluation_grid(d, opt), opt);
}

ABFields ab_fields(const BoundaryGrid& grid, const std::vector<PolynomialCn>& P_seq, const Continuation& c, double l,
                   const std::vector<RegionSample>& regions) {
  if (regions.size() != grid.size()) throw UsageError("ab_fields: one region per node");
  if (P_seq.size() < 2) throw UsageError("ab_fields: need at least two polynomials");
  ABFields out;
  const double eps = c.support_height;
  for (int k = 1; k < static_cast<int>(P_seq.size()); ++k) {
    std::vector<double> a(grid.size()), b(grid.size());
    const double lo = std::ldexp(eps, -k), hi = 2.0 * lo;
    parallel_for(grid.size(), [&](std::size_t i) {
      const CVec& z = grid[i].xi;
      a[i] = std::abs(P_seq[k](z) - P_seq[k - 1](z)) * std::exp2(k * l);
      b[i] = std::sqrt(region_integrate(
          regions[i],
          [&](const CVec& tau, double r) {
            if (!(r > lo && r <= hi)) return 0.0;
            const double g = c.dbar(tau).cwiseAbs().sum();
            return g * g * std::pow(r, -2.0 * l);
          },
          RegionWeight{RegionWeight::nu}));
    });
    out.k.push_back(k);
    out.a.push_back(std::move(a));
    out.b.push_back(std::move(b));
  }
  return out;
}

BkLemmaReport check_bk_lemma(const DomainSpec& d, const BoundaryGrid& grid, const ABFields& fields, int levels) {
  BkLemmaReport rep;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t q = 0; q < fields.k.size(); ++q) {
    const std::vector<double> M = maximal_function(d, grid, fields.a[q], levels);
    std::vector<double> ratio(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) ratio[i] = fields.b[q][i] / (M[i] + 1e-12);
    const double mx = ratio.empty() ? 0.0 : *std::max_element(ratio.begin(), ratio.end());
    const std::size_t at = static_cast<std::size_t>(std::ceil(0.99 * ratio.size())) - (ratio.empty() ? 0 : 1);
    std::nth_element(ratio.begin(), ratio.begin() + at, ratio.end());
    const double p99 = ratio.empty() ? 0.0 : ratio[at];
    rep.k.push_back(fields.k[q]);
    rep.p99.push_back(p99);
    rep.max_ratio.push_back(mx);
    if (*std::max_element(fields.a[q].begin(), fields.a[q].end()) > 0.0) {
      lo = std::min(lo, p99);
      hi = std::max(hi, p99);
    }
  }
  rep.spread = hi > 0.0 ? hi / lo : (hi == 0.0 && std::isinf(lo) ? 1.0 : std::numeric_limits<double>::infinity());
  rep.bounded = rep.spread <= 3.0;
  return rep;
}

}  // namespace hs
