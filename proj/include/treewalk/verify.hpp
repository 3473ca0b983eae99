#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace treewalk {

struct CheckResult {
  std::string name;
  double tolerance;
  double deviation;
  bool passed;
};

struct VerifyOptions {
  /// Test hook: adds a spurious edge to every graph used by the spectrum
  /// checks, which must then fail.
  bool corrupt_adjacency = false;
};

/// Fast oracle suite: closed-form SGT spectrum (d <= 6), clean scattering
/// amplitudes and flux, classical closed form against the linear solve,
/// and the short-time column-space decay.
std::vector<CheckResult> run_verify(const VerifyOptions& opt = {});

/// Prints one row per check; returns true when every check passed.
bool print_report(std::ostream& os, const std::vector<CheckResult>& results);

}  // namespace treewalk
