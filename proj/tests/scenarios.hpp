#pragma once

#include "asympair/expression.hpp"
#include "asympair/solution.hpp"

namespace asympair::testing {

// Δx_n = 2^{-n} sin(x_n), y ≡ 2, M = 1, p = 1.
inline EquationSpec sine_equation() {
  return {1, parse_sequence_spec("geo(0.5)"), parse_sequence_spec("0"), parse_function_spec("sin(x)"),
          parse_delay_spec("n")};
}

// Δx_n = a_n |x_{n-1}| with a_n = 0 for n <= 2 and 2^{3-n} afterwards, so
// a_2 = 0 and a_3 = 1.
inline EquationSpec abs_delay_equation() {
  const Sequence a = parse_sequence_spec("geo(0.5)").with_overrides({{1, 0.0}, {2, 0.0}});
  const Sequence shifted = (8.0 * a).with_label("2^(3-n) for n >= 3");
  return {1, shifted, parse_sequence_spec("0"), parse_function_spec("abs(x)"), parse_delay_spec("n-1")};
}

// The same coefficient as DSL text, for the command-line front end.
inline constexpr const char* kAbsDelayCoefficient = "8*geo(0.5)-4*impulse(1)-2*impulse(2)";

// |u| <= 4 on [λ-2, λ+2] for λ in {-1, 0, 2}, and R_5 = 4 r^1_5|a| = 2.
constexpr double kAbsDelayM = 4.0;
constexpr Index kAbsDelayStart = 5;

}  // namespace asympair::testing
