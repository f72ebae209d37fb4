#pragma once

#include "hardysob/clf.hpp"
#include "hardysob/domain.hpp"
#include "hardysob/holo.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace hs {

enum class Family { polynomial, entire, power_singularity, log_singularity, product };
enum class Label { finite, infinite, unknown };

std::string to_string(Family f);
std::string to_string(Label l);

struct CorpusEntry {
  std::string name;
  HoloFunction f;
  Family family = Family::polynomial;
  double s = 0.0;  // singularity exponent (log: 0, product: s + 1/2 effective)
  CVec a;          // singular direction, empty for polynomial and entire
  std::map<std::pair<int, double>, Label> oracle;

  Label label(int l, double p) const;
  bool singular() const { return family != Family::polynomial && family != Family::entire; }
};

struct CorpusOptions {
  std::vector<int> ls{0, 1, 2, 3};
  std::vector<double> ps{2.0, 4.0};
  /// Oracle ladder t_m = -eps 2^{-m}; labels must agree on m <= m_last - 1
  /// and m <= m_last.
  int m_first = 2;
  int m_last = 10;
  bool label = true;
};

/// Point where the complex tangent hyperplane {<z, a> = 1} touches the
/// boundary on the positive z_1 axis; on the ball a = e_1.
CVec singular_direction(const DomainSpec& d);

/// The twelve corpus functions, unlabelled.
std::vector<CorpusEntry> corpus_functions(const DomainSpec& d);

/// Fills oracle labels from the Sobolev-norm trend at two ladder depths.
void label_corpus(const DomainSpec& d, std::vector<CorpusEntry>& corpus, const CorpusOptions& opt = {});

std::vector<CorpusEntry> build_corpus(const DomainSpec& d, const CorpusOptions& opt = {});

/// Throws UsageError listing the available names.
const CorpusEntry& find_entry(const std::vector<CorpusEntry>& corpus, const std::string& name);

nlohmann::json corpus_manifest(const std::vector<CorpusEntry>& corpus);

}  // namespace hs
