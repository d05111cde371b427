#pragma once

#include <string>

#include "asympair/errors.hpp"

namespace asympair {

enum class Outcome { in_space, not_in_space, inconclusive };

std::string to_string(Outcome outcome);
Outcome parse_outcome(const std::string& text);

/// Three-valued membership result of one test.
struct Verdict {
  Outcome outcome = Outcome::inconclusive;
  /// Estimated limit, fitted parameter or partial sum; +-inf allowed, never NaN.
  double statistic = 0.0;
  /// Signed distance of the statistic from the decision threshold.
  double margin = 0.0;
  std::string test;
  Index window_start = 0;
  Index window_end = 0;
  /// True when the verdict follows from a declared tail model or exact data
  /// rather than from finite-sample evidence.
  bool certified = false;
  /// Which decision rule fired ("limit", "boundary", "tail-model", ...).
  std::string rule;
  std::string note;

  bool decisive() const noexcept { return outcome != Outcome::inconclusive; }
};

}  // namespace asympair
