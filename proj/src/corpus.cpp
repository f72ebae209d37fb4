#include "hardysob/corpus.hpp"

#include <cmath>
#include <sstream>

namespace hs {

std::string to_string(Family f) {
  switch (f) {
    case Family::polynomial: return "polynomial";
    case Family::entire: return "entire";
    case Family::power_singularity: return "power_singularity";
    case Family::log_singularity: return "log_singularity";
    default: return "product";
  }
}

std::string to_string(Label l) {
  switch (l) {
    case Label::finite: return "finite";
    case Label::infinite: return "infinite";
    default: return "unknown";
  }
}

Label CorpusEntry::label(int l, double p) const {
  const auto it = oracle.find({l, p});
  return it == oracle.end() ? Label::unknown : it->second;
}

CVec singular_direction(const DomainSpec& d) {
  CVec e1 = CVec::Zero(d.n);
  e1(0) = 1.0;
  const CVec p = radial_point(d, e1, 0.0);
  const CVec g = d.grad(p);
  // sum_j z_j g_j / c = 1 on the tangent hyperplane, and <z, a> = sum z_j conj(a_j)
  return (g / pair(g, p)).conjugate();
}

namespace {

PolynomialCn poly(int n, int degree, std::initializer_list<std::pair<MultiIndex, cd>> terms) {
  PolynomialCn p(n, degree);
  for (const auto& [a, c] : terms) p.set(a, c);
  return p;
}

std::string fmt(double s) {
  std::ostringstream os;
  os << s;
  return os.str();
}

}  // namespace

std::vector<CorpusEntry> corpus_functions(const DomainSpec& d) {
  if (d.n != 2) throw UsageError("corpus_functions: the corpus is defined for n = 2");
  const CVec a = singular_direction(d);
  const bool ball = d.unitary_invariant && std::abs(a(0) - 1.0) < 1e-12;
  const std::string w = ball ? "z1" : "<z,a>";
  const double validity = singular_validity(d, a);
  std::vector<CorpusEntry> out;
  const auto add = [&](std::string name, HoloFunction f, Family fam, double s = 0.0) {
    f.label = name;
    CorpusEntry e{std::move(name), std::move(f), fam, s, fam == Family::polynomial || fam == Family::entire ? CVec() : a, {}};
    if (e.singular()) e.f.validity = validity;
    out.push_back(std::move(e));
  };
  add("1", from_polynomial(poly(2, 0, {{{0, 0}, 1.0}}), ""), Family::polynomial);
  add("z1", from_polynomial(poly(2, 1, {{{1, 0}, 1.0}}), ""), Family::polynomial);
  add("z1^2*z2", from_polynomial(poly(2, 3, {{{2, 1}, 1.0}}), ""), Family::polynomial);
  add("z2^3-2*z1*z2", from_polynomial(poly(2, 3, {{{0, 3}, 1.0}, {{1, 1}, -2.0}}), ""), Family::polynomial);
  add("1+z1^4+i*z1*z2^3", from_polynomial(poly(2, 4, {{{0, 0}, 1.0}, {{4, 0}, 1.0}, {{1, 3}, cd(0, 1)}}), ""),
      Family::polynomial);
  CVec b(2);
  b << 1.0, 2.0;
  add("exp(z1+2*z2)", exponential_linear(b, ""), Family::entire);
  for (double s : {-0.3, 0.6, 1.5, 2.5})
    add("(1-" + w + ")^" + fmt(s), power_singularity(s, a, ""), Family::power_singularity, s);
  add("log(1-" + w + ")", log_singularity(a, ""), Family::log_singularity, 0.0);
  // |z2| grows like |1 - z1|^{1/2} toward the singular point
  add("(1-" + w + ")^1.5*z2", times_coordinate(power_singularity(1.5, a, ""), 1, ""), Family::product, 2.0);
  return out;
}

void label_corpus(const DomainSpec& d, std::vector<CorpusEntry>& corpus, const CorpusOptions& opt) {
  if (opt.m_last - opt.m_first < 3) throw UsageError("label_corpus: ladder too short");
  int max_l = 0;
  for (int l : opt.ls) max_l = std::max(max_l, l);
  LevelGridPolicy policy;
  policy.focus = radial_point(d, [&] {
                   CVec e1 = CVec::Zero(d.n);
                   e1(0) = 1.0;
                   return e1;
                 }(), 0.0).normalized();
  const LevelGrids grids(d, dyadic_ladder(d.eps_shell, opt.m_first, opt.m_last), policy);
  for (CorpusEntry& e : corpus) {
    e.oracle.clear();
    const LevelTable full = level_integrals(grids, e.f, max_l, opt.ps);
    LevelTable shallow = full;
    shallow.levels.pop_back();
    shallow.values.pop_back();
    for (std::size_t q = 0; q < opt.ps.size(); ++q)
      for (int l : opt.ls) {
        const Trend deep = sobolev_from_table(full, l, q).trend, near = sobolev_from_table(shallow, l, q).trend;
        Label lab = Label::unknown;
        if (deep == near && deep == Trend::converging) lab = Label::finite;
        if (deep == near && deep == Trend::diverging) lab = Label::infinite;
        e.oracle[{l, opt.ps[q]}] = lab;
      }
  }
}

std::vector<CorpusEntry> build_corpus(const DomainSpec& d, const CorpusOptions& opt) {
  std::vector<CorpusEntry> c = corpus_functions(d);
  if (opt.label) label_corpus(d, c, opt);
  return c;
}

const CorpusEntry& find_entry(const std::vector<CorpusEntry>& corpus, const std::string& name) {
  for (const CorpusEntry& e : corpus)
    if (e.name == name) return e;
  std::string all;
  for (const CorpusEntry& e : corpus) all += (all.empty() ? "" : ", ") + e.name;
  throw UsageError("unknown function '" + name + "'; corpus: " + all);
}

nlohmann::json corpus_manifest(const std::vector<CorpusEntry>& corpus) {
  nlohmann::json out = nlohmann::json::array();
  for (const CorpusEntry& e : corpus) {
    nlohmann::json j;
    j["name"] = e.name;
    j["family"] = to_string(e.family);
    if (e.singular()) {
      j["s"] = e.s;
      j["a"] = {{e.a(0).real(), e.a(0).imag()}, {e.a(1).real(), e.a(1).imag()}};
    }
    nlohmann::json labels = nlohmann::json::array();
    for (const auto& [key, lab] : e.oracle) labels.push_back({{"l", key.first}, {"p", key.second}, {"label", to_string(lab)}});
    j["oracle"] = labels;
    out.push_back(j);
  }
  return out;
}

}  // namespace hs
