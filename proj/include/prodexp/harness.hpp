#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "prodexp/report.hpp"

namespace prodexp {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string command;
  std::string instance = "rs";  // rs | rep2
  int t = 1;                    // rs: GF(4^t), n = 4^t - 1
  int m = 3;
  int k = 1;
  Fraction rate = frac(1, 3);
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  ReportFormat format = ReportFormat::JsonLines;
  std::string out;          // empty: stdout
  std::string certificate;  // certificate path (written or read)
};

// The component code selected by instance, t and rate.
Code instance_code(const ExperimentConfig& config);

// Flag and config-file parsing; throws UsageError. Returns nullopt after
// printing help.
std::optional<ExperimentConfig> parse_args(const std::vector<std::string>& args, std::ostream& out);

// Checks option combinations per command; throws UsageError.
void validate(const ExperimentConfig& config);

struct Outcome {
  std::vector<Record> records;
  std::string certificate_text;  // certify-counterexample only
};

// Computes the records for a validated config; writes no files.
Outcome execute(const ExperimentConfig& config);

// Exit status: 0 ok, 1 a check failed, 2 usage or configuration error (no files written).
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace prodexp
