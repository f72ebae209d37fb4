#include "hardysob/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace hs {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

template <class T>
T parse_scalar(const std::string& key, const std::string& raw) {
  std::istringstream is(trim(raw));
  T v{};
  is >> v;
  if (!is || !is.eof()) throw UsageError("config: bad value '" + raw + "' for " + key);
  return v;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& raw) {
  std::vector<T> out;
  std::istringstream is(raw);
  std::string item;
  while (std::getline(is, item, ','))
    if (!trim(item).empty()) out.push_back(parse_scalar<T>(key, item));
  return out;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> k{
      {"domain", {"name", "params", "eps", "eta"}},
      {"resolution", {"boundary_nodes", "measure_nodes", "shell_nodes", "shell_levels", "region_levels"}},
      {"analysis", {"function", "p", "l", "k_min", "k_max", "r", "seed", "jet_order"}},
      {"kernel", {"degrees", "pairs"}},
      {"output", {"dir", "cache_dir"}}};
  return k;
}

RunConfig from_tree(const pt::ptree& tree) {
  const auto& known = known_keys();
  for (const auto& [section, body] : tree) {
    const auto s = known.find(section);
    if (s == known.end()) throw UsageError("config: unknown section [" + section + "]");
    for (const auto& [key, value] : body)
      if (!s->second.count(key)) throw UsageError("config: unknown key " + section + "." + key);
  }
  RunConfig c;
  const auto get = [&](const std::string& path) { return tree.get_optional<std::string>(pt::path(path, '/')); };
  const auto scalar = [&](const std::string& path, auto& out) {
    if (auto v = get(path)) out = parse_scalar<std::decay_t<decltype(out)>>(path, *v);
  };
  const auto list = [&](const std::string& path, auto& out) {
    if (auto v = get(path)) out = parse_list<typename std::decay_t<decltype(out)>::value_type>(path, *v);
  };
  if (auto v = get("domain/name")) c.domain = trim(*v);
  list("domain/params", c.params);
  scalar("domain/eps", c.eps);
  scalar("domain/eta", c.eta);
  scalar("resolution/boundary_nodes", c.boundary_nodes);
  scalar("resolution/measure_nodes", c.measure_nodes);
  scalar("resolution/shell_nodes", c.shell_nodes);
  scalar("resolution/shell_levels", c.shell_levels);
  scalar("resolution/region_levels", c.region_levels);
  if (auto v = get("analysis/function")) c.function = trim(*v);
  scalar("analysis/p", c.p);
  list("analysis/l", c.l_probes);
  scalar("analysis/k_min", c.k_min);
  scalar("analysis/k_max", c.k_max);
  scalar("analysis/r", c.r);
  scalar("analysis/seed", c.seed);
  scalar("analysis/jet_order", c.jet_order);
  list("kernel/degrees", c.kernel_degrees);
  scalar("kernel/pairs", c.kernel_pairs);
  if (auto v = get("output/dir")) c.output_dir = trim(*v);
  if (auto v = get("output/cache_dir")) c.cache_dir = trim(*v);
  validate(c);
  return c;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError("config: " + what);
}

}  // namespace

void validate(const RunConfig& c) {
  require(c.eps > 0.0 && std::isfinite(c.eps), "domain.eps must be positive");
  require(c.eta > 0.0 && std::isfinite(c.eta), "domain.eta must be positive");
  require(c.boundary_nodes > 0, "resolution.boundary_nodes must be positive");
  require(c.measure_nodes > 0, "resolution.measure_nodes must be positive");
  require(c.shell_nodes > 0, "resolution.shell_nodes must be positive");
  require(c.shell_levels > 0, "resolution.shell_levels must be positive");
  require(c.shell_nodes >= c.shell_levels, "resolution.shell_nodes must be at least shell_levels");
  require(c.region_levels > 0, "resolution.region_levels must be positive");
  require(c.p > 0.0 && std::isfinite(c.p), "analysis.p must be positive");
  require(c.r > 0.0 && std::isfinite(c.r), "analysis.r must be positive");
  require(c.k_min > 0 && c.k_max >= c.k_min, "analysis.k_min..k_max must be a nonempty range of positive levels");
  require(c.seed > 0, "analysis.seed must be positive");
  require(c.jet_order > 0, "analysis.jet_order must be positive");
  require(!c.l_probes.empty(), "analysis.l must list at least one order");
  for (int l : c.l_probes) require(l >= 0, "analysis.l orders must be nonnegative");
  require(!c.kernel_degrees.empty(), "kernel.degrees must list at least one degree");
  for (int k : c.kernel_degrees) require(k > 0, "kernel.degrees must be positive");
  require(c.kernel_pairs > 0, "kernel.pairs must be positive");
  require(!c.output_dir.empty(), "output.dir must be set");
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  return from_tree(tree);
}

RunConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw UsageError("config: cannot read " + file.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

GridSpec uniform_spec(int nodes) {
  GridSpec s;
  s.n_theta = std::max(1, static_cast<int>(std::lround(std::cbrt(nodes / 4.0))));
  s.n_a = s.n_b = 2 * s.n_theta;
  return s;
}

DomainSpec RunConfig::make_domain() const { return hs::make_domain(domain, params, eps); }

GridSpec RunConfig::boundary_spec() const { return uniform_spec(boundary_nodes); }

GridSpec RunConfig::measure_spec() const {
  GridSpec s = uniform_spec(measure_nodes);
  s.leray = false;
  return s;
}

ShellSpec RunConfig::shell_spec() const {
  ShellSpec s;
  s.t_points = std::min(shell_levels, 4);
  s.t_panels = std::max(1, shell_levels / s.t_points);
  s.angular = uniform_spec(shell_nodes / (s.t_points * s.t_panels));
  s.angular.leray = false;
  return s;
}

}  // namespace hs
