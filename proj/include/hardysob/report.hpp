#pragma once

#include "hardysob/continuation.hpp"
#include "hardysob/domain.hpp"
#include "hardysob/dzyadyk.hpp"
#include "hardysob/homtype.hpp"
#include "hardysob/koranyi.hpp"
#include "hardysob/pipeline.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace hs {

using json = nlohmann::json;

/// [[re, im], ...]
json to_json(const CVec& z);
/// Doubles pass through; non-finite values become the strings "inf", "-inf", "nan".
json number(double v);

json to_json(const DomainValidation& v);
json to_json(const HomogeneityReport& r);
json to_json(const RatioEnvelope& e);
json to_json(const ExteriorReport& r);
/// {j, t, r, C1, C2, mesh_size}, plus condition and reduced.
json certificate_json(const CauchyApproximant& T);
json to_json(const KernelValidation& v);
json to_json(const PacReport& r);
json to_json(const SmoothnessReport& r);
json to_json(const AreaInequalityReport& r);
json to_json(const BkLemmaReport& r);

/// Columns k, degree, t_off, sup, lp.
std::string ek_table_csv(const SmoothnessReport& r);

/// Rows joined by commas, values printed with %.17g.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add(const std::vector<double>& row);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

/// Writes text to file, creating parent directories; throws NumericalError on
/// I/O failure.
void write_text(const std::filesystem::path& file, const std::string& text);

}  // namespace hs
