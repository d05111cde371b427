#pragma once

#include <string>
#include <variant>

#include "asympair/errors.hpp"

namespace asympair {

/// |a_n| <= scale * ratio^n for n >= start.
struct GeometricTail {
  double scale = 1.0;
  double ratio = 0.5;
  Index start = 1;
};

/// |a_n| <= scale * n^exponent for n >= start.
struct PowerTail {
  double scale = 1.0;
  double exponent = 0.0;
  Index start = 1;
};

/// a_n = 0 for n >= support_end.
struct FiniteTail {
  Index support_end = 1;
};

struct UnknownTail {};

/// Declared decay class of a sequence tail. Every model is an upper bound on
/// |a_n|; none of them asserts a lower bound.
using TailModel = std::variant<GeometricTail, PowerTail, FiniteTail, UnknownTail>;

/// Throws RefusedError if the parameters are outside their admissible ranges.
void validate(const TailModel& model);

std::string to_string(const TailModel& model);

/// Parses "geometric:C,rho[,start]", "power:C,s[,start]", "finite:p" or
/// "unknown". Used for CSV ingestion.
TailModel parse_tail_model(const std::string& text);

bool is_unknown(const TailModel& model);
bool is_finite(const TailModel& model);

/// Upper bound implied by the model at index n, or +inf when the model says
/// nothing about that index.
double tail_envelope(const TailModel& model, Index n);

// Tail algebra. Each result bounds the combined sequence whenever the inputs
// bound theirs; anything that cannot be bounded becomes UnknownTail.
TailModel tail_sum(const TailModel& lhs, const TailModel& rhs);
TailModel tail_product(const TailModel& lhs, const TailModel& rhs);
TailModel tail_scale(const TailModel& model, double factor);
TailModel tail_power(const TailModel& model, double exponent);
TailModel tail_of_constant(double value);

/// Tail of the m-th forward difference, without using cancellation.
TailModel tail_of_difference(const TailModel& model, int order);
/// Tail of the order-m remainder sequence (requires a summable kernel).
TailModel tail_of_remainder(const TailModel& model, int order);
/// Tail of the zero-seeded cumulative sum y_n = a_1 + ... + a_{n-1}.
TailModel tail_of_cumulative_sum(const TailModel& model);

}  // namespace asympair
