#include "hardysob/experiments.hpp"

#include "hardysob/corpus.hpp"
#include "hardysob/homtype.hpp"

#include <cmath>
#include <limits>

namespace hs {

std::vector<CVec> interior_points(const DomainSpec& d, int count, double radius, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CVec> out;
  for (int i = 0; i < count; ++i) {
    const CVec u = random_direction(d.n, rng);
    out.push_back(radial_point(d, u, 0.0) * (radius * std::pow((i + 1.0) / count, 0.25)));
  }
  return out;
}

double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw UsageError("log_slope: need two or more paired values");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double kendall_tau(const std::vector<double>& reference, const std::vector<double>& score) {
  if (reference.size() != score.size()) throw UsageError("kendall_tau: size mismatch");
  long concordant = 0, discordant = 0;
  for (std::size_t i = 0; i < reference.size(); ++i)
    for (std::size_t j = i + 1; j < reference.size(); ++j) {
      if (reference[i] == reference[j]) continue;
      const bool up = reference[i] < reference[j];
      if (score[i] != score[j] && (score[i] < score[j]) == up)
        ++concordant;
      else
        ++discordant;
    }
  const long pairs = concordant + discordant;
  return pairs == 0 ? 1.0 : double(concordant - discordant) / double(pairs);
}

std::vector<PolynomialCn> lacunary_two_term(int K, double s, int first) {
  if (K < 1) throw UsageError("lacunary_two_term: K must be positive");
  std::vector<PolynomialCn> out;
  for (int i = 1; i <= K; ++i) {
    PolynomialCn P(2, 1 << i);
    for (int j = first; j <= i; ++j) {
      P.set({1 << j, 0}, std::exp2(-j * s));
      P.set({0, 1 << j}, std::exp2(-j * s));
    }
    out.push_back(P);
  }
  return out;
}

namespace {

struct FieldFamily {
  std::string name;
  std::vector<std::string> labels;
  std::vector<double> scales;
  std::vector<BoundaryField> fields;
};

std::vector<FieldFamily> families(const DomainSpec& d, const CVec& p, std::uint64_t seed) {
  FieldFamily ind{"quasiball_indicator", {}, {}, {}}, bump{"quasiball_bump", {}, {}, {}}, smooth{"bandlimited", {}, {}, {}};
  for (double r : {0.8, 0.4, 0.2, 0.1, 0.05}) {
    ind.labels.push_back("delta=" + std::to_string(r));
    ind.scales.push_back(r);
    ind.fields.push_back([&d, p, r](const CVec& w) { return qdist(d, p, w) < r ? 1.0 : 0.0; });
    bump.labels.push_back("delta=" + std::to_string(r));
    bump.scales.push_back(r);
    bump.fields.push_back([&d, p, r](const CVec& w) { return std::exp(-qdist(d, p, w) / r); });
  }
  Rng rng(seed);
  std::normal_distribution<double> normal;
  struct Mode {
    int a, b;
    double c, s;
  };
  for (int band : {1, 2, 3, 4, 6}) {
    std::vector<Mode> modes;
    for (int a = 0; a <= band; ++a)
      for (int b = 0; a + b <= band; ++b) {
        const double c = normal(rng);
        modes.push_back({a, b, c, normal(rng)});
      }
    smooth.labels.push_back("band=" + std::to_string(band));
    smooth.scales.push_back(1.0 / band);
    smooth.fields.push_back([modes](const CVec& w) {
      const double t1 = std::arg(w(0)), t2 = std::arg(w(1)), r = std::abs(w(0));
      double v = 2.0;
      for (const Mode& m : modes) {
        const double ph = m.a * t1 + m.b * t2;
        v += 0.3 * (m.c * std::cos(ph) + m.s * std::sin(ph + 3.0 * r));
      }
      return v;
    });
  }
  return {ind, smooth, bump};
}

}  // namespace

AreaSweep area_sweep(const DomainSpec& d, const AreaSweepOptions& opt) {
  CVec e1 = CVec::Zero(d.n);
  e1(0) = 1.0;
  const CVec p = radial_point(d, e1, 0.0);
  const CVec focus = p.normalized();
  const BoundaryGrid centers = build_boundary_grid(d, 0.0, GridSpec{1, 1, 2, 4, 6, 0.25, focus, false});
  const GridSpec inner{4, 4, 8, 4, 7, 0.25, std::nullopt, true};
  RegionResolution res;
  res.levels = opt.region_levels;
  const IlContext ctx = make_il_context(d, centers, opt.l, opt.eta, opt.eps, inner, res);
  const BoundaryGrid rhs = build_boundary_grid(d, 0.0, GridSpec{8, 8, 16, 6, 8, 0.25, focus, true});

  AreaSweep out;
  out.centers = ctx.size();
  out.constant = check_area_inequality(d, {[](const CVec&) { return 1.0; }, [](const CVec&) { return 2.0; }},
                                       {"g=1", "g=2"}, opt.p, ctx, rhs);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const FieldFamily& f : families(d, p, opt.seed)) {
    AreaFamilyResult r{f.name, f.scales, check_area_inequality(d, f.fields, f.labels, opt.p, ctx, rhs)};
    for (double v : r.report.ratios) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    out.families.push_back(std::move(r));
  }
  out.max_over_min = hi / lo;

  std::vector<CVec> cz;
  for (const BoundaryNode& nd : centers.nodes()) cz.push_back(nd.xi);
  const auto regions = region_bank(d, cz, RegionKind::internal, opt.eta, opt.eps, res);
  const CVec a = singular_direction(d);
  double klo = std::numeric_limits<double>::infinity(), khi = 0.0;
  for (double s : {0.1, 0.2, 0.3}) {
    const AreaResult r = area_internal(d, power_singularity(-s, a, ""), opt.p, centers, regions);
    out.kl_s.push_back(s);
    out.krantz_li.push_back(r);
    klo = std::min(klo, r.ratio());
    khi = std::max(khi, r.ratio());
  }
  out.kl_max_over_min = khi / klo;
  return out;
}

}  // namespace hs
