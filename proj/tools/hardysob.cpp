#include "hardysob/clf.hpp"
#include "hardysob/config.hpp"
#include "hardysob/continuation.hpp"
#include "hardysob/corpus.hpp"
#include "hardysob/experiments.hpp"
#include "hardysob/report.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace hs;

constexpr int kOk = 0, kCheckFailed = 1, kUsage = 2, kNumerical = 3;

// One JSON object per line, flushed as it goes so a crashed run keeps its
// prefix.
class EventLog {
 public:
  explicit EventLog(const std::filesystem::path& file) {
    std::filesystem::create_directories(file.parent_path());
    out_.open(file, std::ios::binary | std::ios::trunc);
    if (!out_) throw NumericalError("cannot write " + file.string());
  }
  void emit(const std::string& event, json detail = json::object()) {
    detail["seq"] = seq_++;
    detail["event"] = event;
    out_ << detail.dump() << "\n";
    out_.flush();
  }

 private:
  std::ofstream out_;
  int seq_ = 0;
};

struct Run {
  RunConfig config;
  DomainSpec domain;
  std::filesystem::path out;
  EventLog& log;

  BoundaryGrid grid(double t, const GridSpec& spec) const {
    if (config.cache_dir.empty()) return build_boundary_grid(domain, t, spec);
    return GridCache(config.cache_dir).boundary(domain, t, spec);
  }
};

json config_json(const RunConfig& c) {
  return {{"domain", {{"name", c.domain}, {"params", c.params}, {"eps", c.eps}, {"eta", c.eta}}},
          {"resolution",
           {{"boundary_nodes", c.boundary_nodes},
            {"measure_nodes", c.measure_nodes},
            {"shell_nodes", c.shell_nodes},
            {"shell_levels", c.shell_levels},
            {"region_levels", c.region_levels}}},
          {"analysis",
           {{"function", c.function},
            {"p", c.p},
            {"l", c.l_probes},
            {"k_min", c.k_min},
            {"k_max", c.k_max},
            {"r", c.r},
            {"seed", c.seed},
            {"jet_order", c.jet_order}}},
          {"kernel", {{"degrees", c.kernel_degrees}, {"pairs", c.kernel_pairs}}}};
}

// Gated checks; the command exits 1 when any fails.
struct Gates {
  json list = json::array();
  bool ok = true;
  void add(const std::string& name, bool pass, json detail = json::object()) {
    list.push_back({{"name", name}, {"pass", pass}, {"detail", std::move(detail)}});
    ok = ok && pass;
  }
};

int finish(Run& run, const std::string& command, json report, const Gates& gates,
           const std::string& file_name = "") {
  report["command"] = command;
  report["config"] = config_json(run.config);
  report["gates"] = gates.list;
  report["pass"] = gates.ok;
  write_text(run.out / (file_name.empty() ? command + ".json" : file_name), report.dump(2) + "\n");
  run.log.emit("done", {{"pass", gates.ok}});
  std::cout << json{{"command", command}, {"pass", gates.ok}, {"output", run.out.string()}}.dump() << "\n";
  return gates.ok ? kOk : kCheckFailed;
}

double grid_change(const BoundaryGrid& a, const BoundaryGrid& b) {
  return std::abs(a.total_sigma() - b.total_sigma()) / b.total_sigma();
}

bool positive_weights(const BoundaryGrid& g) {
  for (const BoundaryNode& nd : g.nodes())
    if (!(nd.w_sigma > 0.0) || !std::isfinite(nd.w_sigma) || (g.spec().leray && !(nd.w_S > 0.0))) return false;
  return true;
}

int cmd_validate(Run& run) {
  const RunConfig& c = run.config;
  const DomainSpec& d = run.domain;
  Gates gates;
  json report;
  const DomainValidation v = validate_domain(d, 1000, c.seed);
  gates.add("domain", v.ok, to_json(v));
  run.log.emit("check", {{"name", "domain"}, {"pass", v.ok}});
  if (!v.ok) {
    // the grid and quasimetric checks assume a strongly convex domain
    report["skipped"] = {"boundary_grid", "shell_grid", "homogeneity", "quasimetric"};
    return finish(run, "validate", report, gates);
  }

  const BoundaryGrid g = run.grid(0.0, c.boundary_spec());
  const BoundaryGrid gf = run.grid(0.0, c.boundary_spec().refined(2.0));
  const double dg = grid_change(g, gf);
  const bool grid_ok = positive_weights(g) && dg <= 1e-3;
  gates.add("boundary_grid", grid_ok,
            {{"nodes", g.size()}, {"total_sigma", g.total_sigma()}, {"total_S", g.total_S()}, {"refinement_change", dg}});
  run.log.emit("check", {{"name", "boundary_grid"}, {"pass", grid_ok}});

  ShellSpec ss = c.shell_spec();
  const ShellGrid shell = build_shell_grid(d, c.eps, ss);
  ss.angular = ss.angular.refined(2.0);
  const ShellGrid shell_f = build_shell_grid(d, c.eps, ss);
  bool shell_pos = true;
  for (const ShellNode& nd : shell.nodes()) shell_pos = shell_pos && nd.w_mu > 0.0 && std::isfinite(nd.w_mu);
  const double ds = std::abs(shell.total_mu() - shell_f.total_mu()) / shell_f.total_mu();
  gates.add("shell_grid", shell_pos && ds <= 1e-3,
            {{"nodes", shell.size()}, {"total_mu", shell.total_mu()}, {"refinement_change", ds}});
  run.log.emit("check", {{"name", "shell_grid"}, {"pass", shell_pos && ds <= 1e-3}});

  const HomogeneityReport h = check_homogeneous(d, run.grid(0.0, c.measure_spec()), {0.05, 0.0707, 0.1, 0.141, 0.2, 0.283, 0.4},
                                                50, 10000, c.seed);
  const bool h_ok = std::abs(h.fitted_dimension - 2.0) <= 0.15 && h.quasi_triangle_constant <= 50.0;
  gates.add("homogeneity", h_ok, to_json(h));
  run.log.emit("check", {{"name", "homogeneity"}, {"pass", h_ok}});

  const ExteriorReport a = qm_exterior_check(d, 10000, c.eta, c.seed);
  const ExteriorReport b = qm_exterior_check(d, 20000, c.eta, c.seed + 1);
  bool qm_ok = true;
  for (const RatioEnvelope* e : {&a.exterior, &a.region, &b.exterior, &b.region})
    qm_ok = qm_ok && e->min >= 1.0 / 50.0 && e->max <= 50.0;
  const auto stable = [](const RatioEnvelope& x, const RatioEnvelope& y) {
    return std::abs(x.lo / y.lo - 1.0) <= 0.3 && std::abs(x.hi / y.hi - 1.0) <= 0.3;
  };
  qm_ok = qm_ok && stable(a.exterior, b.exterior) && stable(a.region, b.region);
  gates.add("quasimetric", qm_ok, {{"samples_10000", to_json(a)}, {"samples_20000", to_json(b)}});
  run.log.emit("check", {{"name", "quasimetric"}, {"pass", qm_ok}});
  return finish(run, "validate", report, gates);
}

int cmd_diagnose(Run& run) {
  const RunConfig& c = run.config;
  const DomainSpec& d = run.domain;
  std::vector<CorpusEntry> one{find_entry(corpus_functions(d), c.function)};
  CorpusOptions co;
  co.ls = c.l_probes;
  co.ps = {c.p};
  label_corpus(d, one, co);
  const CorpusEntry& e = one.front();
  run.log.emit("oracle", {{"function", e.name}});

  std::vector<int> ks;
  for (int k = c.k_min; k <= c.k_max; ++k) ks.push_back(k);
  std::vector<double> ls(c.l_probes.begin(), c.l_probes.end());
  DiagnoseOptions opt;
  opt.projection.r = c.r;
  const SmoothnessReport rep = diagnose(d, e.f, c.p, ks, ls, opt);
  for (const LevelSummary& s : rep.levels) run.log.emit("level", {{"k", s.k}, {"sup", number(s.sup)}});

  json oracle = json::array();
  for (const SumTrajectory& s : rep.sums) {
    const Label lab = e.label(static_cast<int>(s.l), c.p);
    json row{{"l", s.l}, {"label", to_string(lab)}, {"verdict", to_string(s.verdict)}};
    if (lab != Label::unknown) row["agree"] = (lab == Label::finite) == (s.verdict == Verdict::converging);
    oracle.push_back(row);
  }
  write_text(run.out / "ek_table.csv", ek_table_csv(rep));
  json report{{"function", e.name}, {"family", to_string(e.family)}, {"smoothness", to_json(rep)}, {"oracle", oracle}};
  return finish(run, "diagnose", report, Gates{}, "report.json");
}

int cmd_kernel(Run& run) {
  const RunConfig& c = run.config;
  const DomainSpec& d = run.domain;
  Gates gates;
  const std::vector<KernelPair> pairs = kernel_pairs(d, c.kernel_pairs, 1e-3, 1.0, c.seed);
  const KernelValidation oracle =
      validate_Kglob(d, [&](const CVec& xi, const CVec& z) { return clf_kernel(d, xi, z); }, c.kernel_degrees.front(), c.r, pairs);
  gates.add("exact_kernel_oracle", oracle.C_far == 0.0, to_json(oracle));

  CsvTable table({"k", "j", "C_far", "C_near", "far_pairs", "near_pairs", "max_far_error"});
  json rows = json::array();
  std::vector<double> ks, cfar;
  bool finite = true;
  for (int k : c.kernel_degrees) {
    const KernelApproximant K(d, k, c.r);
    const KernelValidation v = validate_Kglob(d, [&](const CVec& xi, const CVec& z) { return K(xi, z); }, k, c.r, pairs);
    json certs = json::array();
    for (const CauchyApproximant& T : K.cached()) certs.push_back(certificate_json(T));
    json row = to_json(v);
    row["k"] = k;
    row["j"] = K.j();
    row["lune_radius"] = K.R();
    row["certificates"] = certs;
    rows.push_back(row);
    table.add({double(k), double(K.j()), v.C_far, v.C_near, double(v.far), double(v.near), v.max_far_error});
    finite = finite && std::isfinite(v.C_far) && std::isfinite(v.C_near);
    ks.push_back(k);
    cfar.push_back(v.C_far);
    run.log.emit("kernel", {{"k", k}, {"C_far", number(v.C_far)}, {"C_near", number(v.C_near)}});
  }
  gates.add("constants_finite", finite);
  json report{{"table", rows}};
  if (ks.size() >= 2) {
    const double slope = log_slope(ks, cfar);
    report["C_far_log_slope"] = number(slope);
    gates.add("C_far_no_growth", slope <= 0.1, {{"log_slope", number(slope)}, {"limit", 0.1}});
  }
  write_text(run.out / "kernel.csv", table.str());
  return finish(run, "kernel", report, gates);
}

int cmd_continuation(Run& run) {
  const RunConfig& c = run.config;
  const DomainSpec& d = run.domain;
  Gates gates;
  const CorpusEntry e = find_entry(corpus_functions(d), c.function);
  const Continuation fbar = extend_by_symmetry(d, e.f, c.jet_order, c.eps);
  const std::vector<CVec> zs = interior_points(d, 5, 0.6, c.seed);
  ShellSpec ss = c.shell_spec();
  const PacReport coarse = verify_pac(d, fbar, build_shell_grid(d, c.eps, ss), zs, e.f.eval);
  run.log.emit("pac", {{"nodes", coarse.nodes}, {"max_rel_error", number(coarse.max_rel_error)}});
  ss.angular = ss.angular.refined(2.0);
  const PacReport fine = verify_pac(d, fbar, build_shell_grid(d, c.eps, ss), zs, e.f.eval);
  run.log.emit("pac", {{"nodes", fine.nodes}, {"max_rel_error", number(fine.max_rel_error)}});
  const double reduction = coarse.max_rel_error / fine.max_rel_error;
  gates.add("finite", std::isfinite(coarse.max_rel_error) && std::isfinite(fine.max_rel_error));
  if (e.family == Family::polynomial) {
    gates.add("rel_error", coarse.max_rel_error <= 1e-2, {{"max_rel_error", number(coarse.max_rel_error)}, {"limit", 1e-2}});
    gates.add("refinement", reduction >= 1.4, {{"reduction", number(reduction)}, {"limit", 1.4}});
  }
  CsvTable table({"nodes", "max_rel_error"});
  table.add({double(coarse.nodes), coarse.max_rel_error});
  table.add({double(fine.nodes), fine.max_rel_error});
  write_text(run.out / "continuation.csv", table.str());
  json report{{"function", e.name},   {"family", to_string(e.family)}, {"jet_order", c.jet_order},
              {"coarse", to_json(coarse)}, {"fine", to_json(fine)},         {"reduction", number(reduction)}};
  return finish(run, "continuation", report, gates);
}

int cmd_area(Run& run) {
  const RunConfig& c = run.config;
  Gates gates;
  AreaSweepOptions opt;
  opt.p = c.p;
  opt.eta = c.eta;
  opt.eps = c.eps;
  opt.region_levels = c.region_levels;
  opt.seed = c.seed;
  const AreaSweep sw = area_sweep(run.domain, opt);
  run.log.emit("sweep", {{"centers", sw.centers}, {"l", opt.l}});

  // homogeneity identity rows for constant g
  const AreaInequalityReport& cst = sw.constant;
  const bool identity = std::abs(cst.ratios[1] / cst.ratios[0] - 1.0) <= 1e-12 &&
                        std::abs(cst.lhs[1] / cst.lhs[0] / std::pow(2.0, c.p) - 1.0) <= 1e-12;
  gates.add("constant_homogeneity", identity, to_json(cst));

  json families = json::array();
  CsvTable table({"family", "member", "scale", "lhs", "rhs", "ratio"});
  for (std::size_t fi = 0; fi < sw.families.size(); ++fi) {
    const AreaFamilyResult& f = sw.families[fi];
    json row = to_json(f.report);
    row["family"] = f.name;
    row["scales"] = f.scales;
    families.push_back(row);
    for (std::size_t m = 0; m < f.report.ratios.size(); ++m)
      table.add({double(fi), double(m), f.scales[m], f.report.lhs[m], f.report.rhs[m], f.report.ratios[m]});
    gates.add("family_" + f.name, f.report.pass,
              {{"max_over_min", number(f.report.max_over_min)}, {"monotone_blowup", f.report.monotone_blowup}});
    run.log.emit("family", {{"name", f.name}, {"pass", f.report.pass}});
  }
  gates.add("sweep_max_over_min", sw.max_over_min <= 50.0, {{"max_over_min", number(sw.max_over_min)}, {"limit", 50.0}});

  json kl = json::array();
  for (std::size_t i = 0; i < sw.kl_s.size(); ++i) {
    const AreaResult& r = sw.krantz_li[i];
    kl.push_back({{"s", sw.kl_s[i]}, {"lhs", number(r.lhs)}, {"rhs", number(r.rhs)}, {"ratio", number(r.ratio())}});
  }
  gates.add("krantz_li_family", sw.kl_max_over_min <= 20.0, {{"max_over_min", number(sw.kl_max_over_min)}, {"limit", 20.0}});
  write_text(run.out / "area.csv", table.str());
  json report{{"l", opt.l}, {"centers", sw.centers}, {"families", families}, {"krantz_li", kl}};
  return finish(run, "area", report, gates);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hardy-Sobolev smoothness experiments on strongly convex domains"};
  app.require_subcommand(1);
  std::string config_file, output, function;
  const auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("-c,--config", config_file, "INI run configuration")->required();
    s->add_option("-o,--output", output, "output directory (overrides output.dir)");
    return s;
  };
  add("validate", "domain, grid and quasimetric invariant suite");
  add("diagnose", "smoothness diagnosis of a corpus function")
      ->add_option("-f,--function", function, "corpus function (overrides analysis.function)");
  add("kernel", "kernel approximation constants over the configured degrees");
  add("continuation", "reproduction of a corpus function from its symmetry continuation")
      ->add_option("-f,--function", function, "corpus function (overrides analysis.function)");
  add("area", "area-integral inequality sweeps");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    RunConfig cfg = load_config(config_file);
    if (!output.empty()) cfg.output_dir = output;
    if (!function.empty()) cfg.function = function;
    EventLog log(cfg.output_dir / (command + ".events.jsonl"));
    log.emit("start", {{"command", command}, {"config", config_json(cfg)}});
    Run run{cfg, cfg.make_domain(), cfg.output_dir, log};
    try {
      if (command == "validate") return cmd_validate(run);
      if (command == "diagnose") return cmd_diagnose(run);
      if (command == "kernel") return cmd_kernel(run);
      if (command == "continuation") return cmd_continuation(run);
      return cmd_area(run);
    } catch (const std::exception& e) {
      log.emit("error", {{"what", e.what()}});
      throw;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
}
