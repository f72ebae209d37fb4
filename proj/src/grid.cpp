#include "hardysob/grid.hpp"

#include "hardysob/forms.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>

namespace hs {

std::size_t GridSpec::expected_size() const {
  const std::size_t s = theta_levels > 0 ? 0 : static_cast<std::size_t>(n_theta);
  const std::size_t a = a_levels > 0 ? 0 : static_cast<std::size_t>(n_a);
  return s * a * static_cast<std::size_t>(n_b);
}

std::string GridSpec::key() const {
  std::ostringstream os;
  os << "s" << n_theta << "." << theta_levels << "_a" << n_a << "." << a_levels << "_b" << n_b << "_m"
     << max_panel;
  if (focus) os << "_f" << format_point(*focus);
  if (!leray) os << "_noS";
  return os.str();
}

GridSpec GridSpec::refined(double factor) const {
  GridSpec g = *this;
  const double f = std::cbrt(factor);
  g.n_theta = static_cast<int>(std::ceil(n_theta * f));
  g.n_a = static_cast<int>(std::ceil(n_a * f));
  g.n_b = static_cast<int>(std::ceil(n_b * f));
  return g;
}

BoundaryGrid::BoundaryGrid(std::vector<BoundaryNode> nodes, double level, GridSpec spec)
    : nodes_(std::move(nodes)), level_(level), spec_(std::move(spec)) {}

double BoundaryGrid::total_sigma() const {
  return parallel_sum(nodes_.size(), [&](std::size_t i) { return nodes_[i].w_sigma; }, 0.0);
}

double BoundaryGrid::total_S() const {
  return parallel_sum(nodes_.size(), [&](std::size_t i) { return nodes_[i].w_S; }, 0.0);
}

double BoundaryGrid::spacing() const {
  if (nodes_.empty()) return 0.0;
  const int n = static_cast<int>(nodes_.front().xi.size());
  return std::pow(total_sigma() / static_cast<double>(nodes_.size()), 1.0 / (2 * n - 1));
}

CMat unitary_with_first_column(const CVec& u) {
  const int n = static_cast<int>(u.size());
  CMat M = CMat::Identity(n, n);
  M.col(0) = u / u.norm();
  // Gram-Schmidt against the remaining standard basis vectors, skipping the
  // one most parallel to u.
  int skip = 0;
  for (int j = 1; j < n; ++j)
    if (std::abs(u(j)) > std::abs(u(skip))) skip = j;
  int col = 1;
  for (int j = 0; j < n && col < n; ++j) {
    if (j == skip) continue;
    CVec v = CVec::Zero(n);
    v(j) = 1.0;
    for (int c = 0; c < col; ++c) v -= M.col(c).dot(v) * M.col(c);
    M.col(col++) = v / v.norm();
  }
  return M;
}

BoundaryGrid build_boundary_grid(const DomainSpec& d, double t, const GridSpec& spec) {
  if (d.n != 2) throw UsageError("build_boundary_grid: only n = 2 is supported");
  if (spec.n_theta < 1 || spec.n_a < 1 || spec.n_b < 1) throw UsageError("build_boundary_grid: empty resolution");
  const double half_pi = 0.5 * kPi;
  const Rule1D rs = spec.theta_levels > 0
                        ? composite_graded(0.0, half_pi, spec.n_theta, spec.theta_levels, spec.max_panel * half_pi)
                        : gauss_legendre(spec.n_theta, 0.0, half_pi);
  const Rule1D ra = spec.a_levels > 0 ? symmetric_graded(spec.n_a, spec.a_levels, spec.max_panel * kPi)
                                      : periodic_uniform(spec.n_a);
  const Rule1D rb = periodic_uniform(spec.n_b);
  const CMat U = spec.focus ? unitary_with_first_column(*spec.focus) : CMat::Identity(2, 2);

  const std::size_t ns = rs.size(), na = ra.size(), nb = rb.size();
  std::vector<BoundaryNode> nodes(ns * na * nb);
  parallel_for(ns * na, [&](std::size_t ij) {
    const std::size_t i = ij / na, j = ij % na;
    const double th = rs.x[i];
    const double jac = std::sin(th) * std::cos(th);
    const cd ea = std::polar(std::cos(th), ra.x[j]);
    for (std::size_t k = 0; k < nb; ++k) {
      CVec u(2);
      u << ea, std::polar(std::sin(th), rb.x[k]);
      u = U * u;
      const CVec xi = radial_point(d, u, t);
      const double r = xi.norm();
      const CVec g = real_gradient(d, xi);
      const double cosg = real_dot(g, u) / g.norm();
      if (!(cosg > 0.0)) throw NumericalError("build_boundary_grid: level set is not star-shaped at " + format_point(xi));
      BoundaryNode& nd = nodes[ij * nb + k];
      nd.xi = xi;
      nd.w_sigma = jac * rs.w[i] * ra.w[j] * rb.w[k] * r * r * r / cosg;
      nd.w_S = spec.leray ? nd.w_sigma * leray_density(d, xi) : 0.0;
    }
  });
  return BoundaryGrid(std::move(nodes), t, spec);
}

std::string ShellSpec::key() const {
  std::string k = angular.key() + "_t" + std::to_string(t_points) + "x" + std::to_string(t_panels);
  for (double b : t_breaks) k += "_" + std::to_string(b);
  return k;
}

ShellGrid::ShellGrid(std::vector<ShellNode> nodes, std::vector<double> levels, double eps, ShellSpec spec)
    : nodes_(std::move(nodes)), levels_(std::move(levels)), eps_(eps), spec_(std::move(spec)) {}

double ShellGrid::total_mu() const {
  return parallel_sum(nodes_.size(), [&](std::size_t i) { return nodes_[i].w_mu; }, 0.0);
}

ShellGrid build_shell_grid(const DomainSpec& d, double eps, const ShellSpec& spec) {
  if (!(eps > 0.0)) throw UsageError("build_shell_grid: eps must be positive");
  if (spec.t_points < 1 || spec.t_panels < 1) throw UsageError("build_shell_grid: empty height rule");
  std::vector<double> edges;
  if (spec.t_breaks.empty()) {
    for (int p = 0; p <= spec.t_panels; ++p) edges.push_back(eps * p / spec.t_panels);
  } else {
    edges.push_back(0.0);
    for (double b : spec.t_breaks) {
      if (!(b > edges.back() / eps && b < 1.0)) throw UsageError("build_shell_grid: breaks must increase inside (0, 1)");
      edges.push_back(b * eps);
    }
    edges.push_back(eps);
  }
  std::vector<ShellNode> nodes;
  std::vector<double> levels;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const Rule1D rt = gauss_legendre(spec.t_points, edges[p], edges[p + 1]);
    for (std::size_t m = 0; m < rt.size(); ++m) {
      levels.push_back(rt.x[m]);
      const BoundaryGrid g = build_boundary_grid(d, rt.x[m], spec.angular);
      for (const BoundaryNode& b : g.nodes()) {
        const double gn = real_gradient(d, b.xi).norm();
        nodes.push_back({b.xi, rt.x[m], b.w_sigma * rt.w[m] / gn});
      }
    }
  }
  return ShellGrid(std::move(nodes), std::move(levels), eps, spec);
}

namespace {

constexpr char kMagic[8] = {'H', 'S', 'G', 'R', 'I', 'D', '\0', '\0'};

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
bool get(std::istream& is, T& v) {
  return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof(T)));
}

}  // namespace

void save_grid(const BoundaryGrid& g, const std::filesystem::path& file) {
  std::ofstream os(file, std::ios::binary | std::ios::trunc);
  if (!os) throw UsageError("save_grid: cannot open " + file.string());
  os.write(kMagic, sizeof kMagic);
  put(os, GridCache::kVersion);
  put(os, g.level());
  put(os, static_cast<std::uint64_t>(g.size()));
  for (const BoundaryNode& nd : g.nodes()) {
    put(os, static_cast<std::uint32_t>(nd.xi.size()));
    for (Eigen::Index j = 0; j < nd.xi.size(); ++j) {
      put(os, nd.xi(j).real());
      put(os, nd.xi(j).imag());
    }
    put(os, nd.w_sigma);
    put(os, nd.w_S);
  }
}

std::optional<BoundaryGrid> load_grid(const std::filesystem::path& file, int n) {
  std::ifstream is(file, std::ios::binary);
  if (!is) return std::nullopt;
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || !std::equal(magic, magic + 8, kMagic)) return std::nullopt;
  std::uint32_t version = 0;
  double level = 0.0;
  std::uint64_t count = 0;
  if (!get(is, version) || version != GridCache::kVersion || !get(is, level) || !get(is, count))
    return std::nullopt;
  std::vector<BoundaryNode> nodes(count);
  for (BoundaryNode& nd : nodes) {
    std::uint32_t dim = 0;
    if (!get(is, dim) || static_cast<int>(dim) != n) return std::nullopt;
    nd.xi.resize(n);
    for (int j = 0; j < n; ++j) {
      double re = 0.0, im = 0.0;
      if (!get(is, re) || !get(is, im)) return std::nullopt;
      nd.xi(j) = cd(re, im);
    }
    if (!get(is, nd.w_sigma) || !get(is, nd.w_S)) return std::nullopt;
  }
  return BoundaryGrid(std::move(nodes), level, GridSpec{});
}

GridCache::GridCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path GridCache::path_for(const DomainSpec& d, double t, const GridSpec& spec) const {
  std::ostringstream key;
  key << d.name << "|" << d.n;
  for (double p : d.params) key << "|" << std::hexfloat << p;
  key << "|" << std::hexfloat << t << "|" << spec.key();
  std::ostringstream name;
  name << d.name << "-" << std::hex << std::hash<std::string>{}(key.str()) << ".grid";
  return dir_ / name.str();
}

BoundaryGrid GridCache::boundary(const DomainSpec& d, double t, const GridSpec& spec) const {
  const auto file = path_for(d, t, spec);
  if (auto g = load_grid(file, d.n)) return BoundaryGrid(g->nodes(), t, spec);
  BoundaryGrid g = build_boundary_grid(d, t, spec);
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (!ec) save_grid(g, file);
  return g;
}

}  // namespace hs
