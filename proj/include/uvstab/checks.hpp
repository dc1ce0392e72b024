// The invariant suite behind `uvstab verify`: every conservation law,
// identity and numerical property the library promises, each reported as a
// measured value against its tolerance.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace uvstab {

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  /// "<=" when measured must stay below tolerance, ">=" when above.
  std::string relation = "<=";
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  /// Test fixture: flips the sign of omega_e in the expected linearization.
  bool inject_omega_sign_fault = false;
  /// Include the Poincare-map experiments (the slowest checks).
  bool include_poincare = true;
  std::uint64_t seed = 0x5eed'2024ULL;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  nlohmann::json to_json() const;
};

VerifyReport run_invariant_suite(const VerifyOptions& options = {});

}  // namespace uvstab
