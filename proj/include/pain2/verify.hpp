// Verification orchestrator: every structural claim the library encodes, run
// as an exact residual check and collected into serializable reports.
#pragma once

#include <string>
#include <vector>

namespace pain2 {

struct CheckReport {
  std::string id;
  std::string anchor;         // the mathematical claim being checked
  std::string status;         // "pass", "fail", or "error"
  std::string residual;       // canonical text, empty exactly when passing,
                              // truncated at 4 KiB
  std::string residual_hash;  // fnv1a-64 of the untruncated residual text
  double ms = 0;
};

// suite names accepted by run_suite, besides "all"
std::vector<std::string> verify_suites();

// Run one suite (or "all") and return the reports in registration order.
// Throws std::invalid_argument for an unknown suite name.
std::vector<CheckReport> run_suite(const std::string& suite);

bool all_pass(const std::vector<CheckReport>& reports);

std::string fnv1a64(const std::string& text);

}  // namespace pain2
