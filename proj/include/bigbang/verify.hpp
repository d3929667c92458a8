#pragma once

#include <string>
#include <vector>

#include "bigbang/cosmo.hpp"

namespace bigbang {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  double seconds = 0.0;
  bool all_passed() const;
};

struct VerifyOptions {
  CosmologyParams base;
  std::vector<Rational> w_values = {Rational(1, 2), Rational(1), Rational(2), Rational(7, 3)};
};

/// Runs every internal consistency check. Checks that exercise sub-forces use
/// K = 1/2 when the base parameters have K = 0.
VerifyReport run_verification(const VerifyOptions& opts);

std::string to_json(const VerifyReport& report);
std::string to_table(const VerifyReport& report);

}  // namespace bigbang
