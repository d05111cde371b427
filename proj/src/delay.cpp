#include "asympair/delay.hpp"

#include <algorithm>
#include <cmath>

#include "asympair/expression.hpp"
#include "asympair/format.hpp"

namespace asympair {

DelaySpec::DelaySpec(std::vector<Index> values, double alpha, double beta)
    : table_(std::move(values)), alpha_(alpha), beta_(beta) {
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_) || !std::isfinite(beta_)) {
    throw std::invalid_argument("delay needs alpha > 0 and finite beta");
  }
  for (Index v : table_) {
    if (v < 1) throw std::invalid_argument("delay table values must be >= 1");
  }
}

DelaySpec DelaySpec::affine(double alpha, double beta) { return DelaySpec({}, alpha, beta); }

DelaySpec DelaySpec::table(std::vector<Index> values, double alpha, double beta) {
  return DelaySpec(std::move(values), alpha, beta);
}

Index DelaySpec::operator()(Index n) const {
  if (n < 1) throw DomainError("delay index must be >= 1");
  if (n <= static_cast<Index>(table_.size())) return table_[static_cast<std::size_t>(n - 1)];
  // The small offset keeps exact integers such as 1.0000000000000002 from rounding up.
  const double raw = std::ceil(alpha_ * static_cast<double>(n) + beta_ - 1e-9);
  return std::max<Index>(1, static_cast<Index>(raw));
}

std::string DelaySpec::to_string() const {
  std::string text = "max(1, ceil(" + format_number(alpha_) + "*n + " + format_number(beta_) + "))";
  if (!table_.empty()) text = "table[" + std::to_string(table_.size()) + "] then " + text;
  return text;
}

DelaySpec parse_delay_spec(const std::string& text) {
  const Expression expression = Expression::parse(text, Expression::Variable::index);
  const auto affine = expression.affine_form();
  if (!affine) throw ParseError("delay must be affine in n", 1, 1);
  if (!(affine->first > 0.0)) throw ParseError("delay slope must be positive so that sigma(n) -> infinity", 1, 1);
  return DelaySpec::affine(affine->first, affine->second);
}

}  // namespace asympair
