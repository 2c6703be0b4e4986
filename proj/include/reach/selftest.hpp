#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace reach {

struct SuiteResult {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first_failure;
  bool ok() const { return failures == 0 && checks > 0; }
};

/// Random conforming discretizations (random subdivision sequences from the
/// single-interval start) with random splines: closed-form deltas against
/// recomputation at every index, and Delta E <= -E_k / 2.
SuiteResult selftest_deltas(std::uint64_t seed, std::size_t cases = 200);

/// Random boxes: dist_H(A, pi_rho(A)) <= rho/2 and pi_rho(A) nonempty.
SuiteResult selftest_projection(std::uint64_t seed, std::size_t cases = 100);

/// Adaptive traces on small exponential and Michaelis-Menten configurations:
/// conformance of every discretization run, strictly decreasing E and
/// termination.
SuiteResult selftest_structure();

std::vector<SuiteResult> run_selftests(std::uint64_t seed);

}  // namespace reach
