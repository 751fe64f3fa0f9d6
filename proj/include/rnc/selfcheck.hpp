#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace rnc {

/// Deliberate defects used to prove the battery can fail.
enum class InjectedFault {
  none,
  row_sum,  // perturbs sampled matrices by 1e-6 before validation
};

struct SelfcheckOptions {
  std::size_t n_max = 16;
  std::uint64_t trials = 100;
  std::uint64_t seed = 0;
  InjectedFault fault = InjectedFault::none;
};

struct PropertyResult {
  std::string name;
  std::uint64_t checks = 0;
  std::uint64_t failures = 0;
  std::string first_failure;  // description including n, trial and seed

  bool passed() const { return failures == 0; }
};

/// Runs every invariant battery. Throws PreconditionError when trials == 0
/// or n_max < 2.
std::vector<PropertyResult> run_selfcheck(const SelfcheckOptions& opts);

}  // namespace rnc
