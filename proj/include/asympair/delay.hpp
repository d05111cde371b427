#pragma once

#include <string>
#include <vector>

#include "asympair/errors.hpp"

namespace asympair {

/// Delay/advance map sigma: N -> N with sigma(n) -> infinity.
///
/// Affine form sigma(n) = max(1, ceil(alpha*n + beta)) with alpha > 0,
/// optionally preceded by an explicit table for n = 1..size.
class DelaySpec {
 public:
  static DelaySpec affine(double alpha, double beta);
  /// sigma(n) = table[n-1] for n <= size, then the affine rule.
  static DelaySpec table(std::vector<Index> values, double alpha, double beta);

  Index operator()(Index n) const;

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  std::string to_string() const;

 private:
  DelaySpec(std::vector<Index> values, double alpha, double beta);

  std::vector<Index> table_;
  double alpha_;
  double beta_;
};

/// Parses an affine expression in n such as "n", "n-1" or "2*n+3".
DelaySpec parse_delay_spec(const std::string& text);

}  // namespace asympair
