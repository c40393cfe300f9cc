#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "prodexp/testability.hpp"

namespace prodexp {

// A computed quantity. Exact values have lower == upper; sampled upper
// bounds leave `lower` empty.
struct TestReport {
  std::string quantity;  // rho, rho_r, rho_a, or a named constant
  std::optional<Fraction> lower;
  std::optional<Fraction> upper;
  std::string mode = "exact";  // exact | sampled | certificate
  std::string instance;
  std::string test;  // "T_m^k" where relevant
  std::optional<std::uint64_t> seed;
  std::uint64_t samples = 0;
  std::string detail;

  static TestReport exact(std::string quantity, const Fraction& value, std::string instance, std::string test = "");
};

using Record = std::variant<TestReport, CheckReport>;

enum class ReportFormat { JsonLines, Csv };

ReportFormat parse_report_format(const std::string& name);  // throws std::invalid_argument

// Fixed field order; fractions as "p/q"; csv always starts with the header.
void emit_report(std::ostream& out, const std::vector<Record>& records, ReportFormat format);

// True when some check record does not hold.
bool any_violation(const std::vector<Record>& records);

}  // namespace prodexp
