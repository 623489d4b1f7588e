#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fkpp {

struct PropertyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<PropertyCheck> checks;

  bool passed() const;
};

/// Names accepted by run_suite.
const std::vector<std::string>& suite_names();

/// Runs one property suite: "asymptotics", "monotonicity", "jacobian" or
/// "dichotomy". Random sampling is driven by `seed`; `jobs` bounds the worker
/// threads of the dichotomy sweep (0 = OpenMP default). Throws
/// Error(ParseError) on an unknown name.
SuiteReport run_suite(const std::string& name, std::uint64_t seed = 1, int jobs = 0);

}  // namespace fkpp
