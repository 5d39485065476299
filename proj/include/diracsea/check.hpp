#pragma once

// Consolidated invariant suites behind `check`.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "diracsea/fock.hpp"

namespace diracsea {

struct SuiteResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct CheckOptions {
  /// `none` is the negative control: the CAR suite must then fail.
  SignConvention convention = SignConvention::jordan_wigner;
  std::uint64_t seed = 1;
};

/// CAR, spectrum, commutator identity, oracle consistency, and picture
/// equivalence, in that order.
std::vector<SuiteResult> run_check_suites(const CheckOptions& options = {});

void print_check_table(const std::vector<SuiteResult>& results, std::ostream& out);

}  // namespace diracsea
