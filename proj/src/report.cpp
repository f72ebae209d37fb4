#include "hardysob/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hs {

json to_json(const CVec& z) {
  json out = json::array();
  for (Eigen::Index j = 0; j < z.size(); ++j) out.push_back({z(j).real(), z(j).imag()});
  return out;
}

json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

namespace {

json numbers(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

json to_json(const DomainValidation& v) {
  json j{{"ok", v.ok},
         {"failures", v.failures},
         {"min_hessian_eigenvalue", number(v.min_hessian_eigenvalue)},
         {"max_derivative_error", number(v.max_derivative_error)},
         {"samples", v.samples}};
  j["hessian_witness"] = v.hessian_witness ? to_json(*v.hessian_witness) : json(nullptr);
  return j;
}

json to_json(const HomogeneityReport& r) {
  return {{"fitted_dimension", number(r.fitted_dimension)},
          {"dimension_spread", number(r.dimension_spread)},
          {"quasi_triangle_constant", number(r.quasi_triangle_constant)},
          {"radii", numbers(r.radii)},
          {"mean_measure", numbers(r.mean_measure)},
          {"centers", r.centers}};
}

json to_json(const RatioEnvelope& e) {
  return {{"min", number(e.min)}, {"max", number(e.max)}, {"lo", number(e.lo)}, {"hi", number(e.hi)},
          {"samples", e.samples}};
}

json to_json(const ExteriorReport& r) { return {{"exterior", to_json(r.exterior)}, {"region", to_json(r.region)}}; }

json certificate_json(const CauchyApproximant& T) {
  return {{"j", T.j},
          {"t", number(T.t)},
          {"r", number(T.r)},
          {"C1", number(T.cert.C1)},
          {"C2", number(T.cert.C2)},
          {"mesh_size", T.cert.mesh_size},
          {"condition", number(T.cert.condition)},
          {"reduced", T.cert.reduced}};
}

json to_json(const KernelValidation& v) {
  return {{"C_far", number(v.C_far)},
          {"C_near", number(v.C_near)},
          {"far_pairs", v.far},
          {"near_pairs", v.near},
          {"max_far_error", number(v.max_far_error)}};
}

json to_json(const PacReport& r) {
  json pts = json::array();
  for (std::size_t i = 0; i < r.points.size(); ++i)
    pts.push_back({{"z", to_json(r.points[i])},
                   {"reconstructed", {r.reconstructed[i].real(), r.reconstructed[i].imag()}},
                   {"exact", {r.exact[i].real(), r.exact[i].imag()}},
                   {"rel_error", number(r.rel_errors[i])}});
  return {{"points", pts}, {"max_rel_error", number(r.max_rel_error)}, {"nodes", r.nodes}};
}

json to_json(const SmoothnessReport& r) {
  json levels = json::array();
  for (const LevelSummary& s : r.levels)
    levels.push_back({{"k", s.k}, {"degree", s.degree}, {"t_off", number(s.t_off)}, {"sup", number(s.sup)},
                      {"lp", number(s.lp)}});
  json sums = json::array();
  for (const SumTrajectory& s : r.sums)
    sums.push_back({{"l", number(s.l)}, {"partial", numbers(s.partial)}, {"verdict", to_string(s.verdict)}});
  return {{"function", r.function},
          {"domain", r.domain},
          {"p", number(r.p)},
          {"levels", levels},
          {"slope", number(r.slope)},
          {"floor_limited", r.floor_limited},
          {"floor", number(r.floor)},
          {"f_scale", number(r.f_scale)},
          {"sums", sums},
          {"threshold", number(r.threshold())}};
}

json to_json(const AreaInequalityReport& r) {
  return {{"labels", r.labels},
          {"lhs", numbers(r.lhs)},
          {"rhs", numbers(r.rhs)},
          {"ratios", numbers(r.ratios)},
          {"max_over_min", number(r.max_over_min)},
          {"monotone_blowup", r.monotone_blowup},
          {"pass", r.pass}};
}

json to_json(const BkLemmaReport& r) {
  return {{"k", r.k},
          {"p99", numbers(r.p99)},
          {"max_ratio", numbers(r.max_ratio)},
          {"spread", number(r.spread)},
          {"bounded", r.bounded}};
}

std::string ek_table_csv(const SmoothnessReport& r) {
  CsvTable t({"k", "degree", "t_off", "sup", "lp"});
  for (const LevelSummary& s : r.levels) t.add({double(s.k), double(s.degree), s.t_off, s.sup, s.lp});
  return t.str();
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add(const std::vector<double>& row) {
  if (row.size() != header_.size()) throw UsageError("CsvTable: row width does not match the header");
  rows_.push_back(row);
}

std::string CsvTable::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << header_[i];
  os << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << g17(row[i]);
    os << "\n";
  }
  return os.str();
}

void write_text(const std::filesystem::path& file, const std::string& text) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  out << text;
  if (!out) throw NumericalError("cannot write " + file.string());
}

}  // namespace hs
