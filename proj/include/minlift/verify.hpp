#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace minlift {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::optional<std::string> suite;
  /// Test hook: replaces the quadratic prox with a perturbed one so the prox
  /// suites must fail.
  bool corrupt_prox = false;
  std::uint64_t seed = 7;
};

std::vector<std::string> suite_names();

/// Runs the invariant suites (or only `options.suite`). Throws UsageError
/// for an unknown suite name.
std::vector<SuiteResult> run_verification(const VerifyOptions& options);

}  // namespace minlift
