#pragma once

#include <string>
#include <vector>

namespace fracdiff::verify {

/// Outcome of one named invariant bundle.
struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string metric_name;
  double metric = 0.0;     ///< worst observed value
  double threshold = 0.0;  ///< pass iff metric <= threshold
  double seconds = 0.0;
  std::string detail;
};

/// Suites in the order `all` runs them.
const std::vector<std::string>& suite_names();

/// Runs a suite; full selects the complete parameter sweep instead of the
/// reduced one. The seed drives randomly sampled cases. Unknown names throw
/// DomainError.
SuiteResult run_suite(const std::string& name, bool full, unsigned seed = 2024);

}  // namespace fracdiff::verify
