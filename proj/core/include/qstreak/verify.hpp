#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qstreak {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Mutation hooks for exercising the suites' sensitivity: the named defect is
// injected into the checked quantity and the corresponding suite must fail.
enum class Mutation { none, kernel_sign };

struct VerifyOptions {
  bool fast = false;  // only the lightmodel and oracle suites
  Mutation mutation = Mutation::none;
  std::uint64_t seed = 20260809;
};

std::vector<CheckResult> run_verification(const VerifyOptions& opts);

}  // namespace qstreak
