#pragma once

#include <string>
#include <vector>

#include "pblab/oracle.hpp"

namespace pblab {

/// One numeric comparison. Boolean checks use expected = 1, tolerance = 0.
struct Check {
  int criterion = 0;
  std::string name;
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;
};

struct VerificationReport {
  std::vector<Check> checks;

  bool passed() const;
  /// True when every check tagged with `criterion` passed (and one exists).
  bool criterion_passed(int criterion) const;
  std::vector<int> criteria() const;
};

/// Title of a numbered acceptance criterion, for reporting.
std::string criterion_title(int criterion);

/// Runs the fixed, deterministic list of closed-form-vs-oracle checks
/// (criteria 1-10). Instance families are drawn from a Kronecker sequence,
/// so repeated runs are bit-identical.
VerificationReport run_verification(const OracleConfig& config = {});

}  // namespace pblab
