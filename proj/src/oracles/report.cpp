#include <cmath>

#include "json.hpp"

#include "infoprice/oracles.hpp"

namespace infoprice {

OracleReport make_report(std::string name, double observed, double expected, double tolerance,
                         ToleranceKind kind, std::string detail) {
  OracleReport r;
  r.name = std::move(name);
  r.observed = observed;
  r.expected = expected;
  r.tolerance = tolerance;
  const double bound = kind == ToleranceKind::Relative ? tolerance * std::fabs(expected) : tolerance;
  r.passed = std::fabs(observed - expected) <= bound;
  const char* tag = kind == ToleranceKind::Relative ? "relative" : "absolute";
  r.detail = detail.empty() ? std::string(tag) : std::string(tag) + "; " + detail;
  return r;
}

std::string reports_to_json(std::span<const OracleReport> reports, int indent) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["observed"] = r.observed;
    j["expected"] = r.expected;
    j["tolerance"] = r.tolerance;
    j["passed"] = r.passed;
    j["detail"] = r.detail;
    arr.push_back(std::move(j));
  }
  return arr.dump(indent);
}

}  // namespace infoprice
