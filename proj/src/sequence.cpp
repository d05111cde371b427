#include "asympair/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <utility>

#include "asympair/binomial.hpp"
#include "asympair/format.hpp"

namespace asympair {
namespace {

std::optional<Index> min_horizon(std::optional<Index> a, std::optional<Index> b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

Sequence combine(const Sequence& lhs, const Sequence& rhs, Sequence::Evaluator eval, TailModel tail,
                 std::string label) {
  return Sequence(std::move(eval), std::move(tail), std::move(label))
      .with_horizon(min_horizon(lhs.horizon(), rhs.horizon()));
}

}  // namespace

Sequence::Sequence() : Sequence([](Index) { return 0.0; }, FiniteTail{1}, "0") {}

Sequence::Sequence(Evaluator evaluator, TailModel tail, std::string label)
    : evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))),
      tail_(std::move(tail)),
      label_(std::move(label)) {
  validate(tail_);
}

double Sequence::operator()(Index n) const {
  if (n < 1) throw DomainError("sequence index must be >= 1, got " + std::to_string(n));
  if (horizon_ && n > *horizon_) {
    throw DomainError("sequence '" + label_ + "' is only defined up to index " + std::to_string(*horizon_), n);
  }
  const double value = (*evaluator_)(n);
  if (!std::isfinite(value)) throw DomainError("non-finite value in '" + label_ + "'", n);
  return value;
}

Sequence Sequence::with_tail(TailModel tail) const {
  validate(tail);
  Sequence out = *this;
  out.tail_ = std::move(tail);
  return out;
}

Sequence Sequence::with_label(std::string label) const {
  Sequence out = *this;
  out.label_ = std::move(label);
  return out;
}

Sequence Sequence::with_horizon(std::optional<Index> horizon) const {
  Sequence out = *this;
  out.horizon_ = horizon;
  return out;
}

Sequence Sequence::with_overrides(const std::map<Index, double>& values) const {
  if (values.empty()) return *this;
  const Index last = values.rbegin()->first;
  TailModel tail = tail_;
  std::visit([&](auto& model) {
    using T = std::decay_t<decltype(model)>;
    if constexpr (std::is_same_v<T, FiniteTail>) {
      model.support_end = std::max(model.support_end, last + 1);
    } else if constexpr (!std::is_same_v<T, UnknownTail>) {
      model.start = std::max(model.start, last + 1);
    }
  }, tail);
  auto base = evaluator_;
  auto edits = values;
  Sequence out([base, edits](Index n) {
    auto it = edits.find(n);
    return it != edits.end() ? it->second : (*base)(n);
  }, tail, label_ + "+fin");
  out.horizon_ = horizon_;
  return out;
}

Sequence Sequence::constant(double value) {
  return Sequence([value](Index) { return value; }, tail_of_constant(value), format_label(value));
}

std::string Sequence::format_label(double value) { return format_number(value); }

Sequence Sequence::table(std::vector<double> values, TailModel tail, std::string label) {
  const Index size = static_cast<Index>(values.size());
  const bool zero_beyond = is_finite(tail) && std::get<FiniteTail>(tail).support_end <= size + 1;
  auto data = std::make_shared<const std::vector<double>>(std::move(values));
  Sequence out([data, size](Index n) { return n <= size ? (*data)[static_cast<std::size_t>(n - 1)] : 0.0; },
               std::move(tail), std::move(label));
  if (!zero_beyond) out.horizon_ = size;
  return out;
}

Sequence operator+(const Sequence& lhs, const Sequence& rhs) {
  return combine(lhs, rhs, [lhs, rhs](Index n) { return lhs(n) + rhs(n); }, tail_sum(lhs.tail(), rhs.tail()),
                 "(" + lhs.label() + " + " + rhs.label() + ")");
}

Sequence operator-(const Sequence& lhs, const Sequence& rhs) {
  return combine(lhs, rhs, [lhs, rhs](Index n) { return lhs(n) - rhs(n); }, tail_sum(lhs.tail(), rhs.tail()),
                 "(" + lhs.label() + " - " + rhs.label() + ")");
}

Sequence operator*(const Sequence& lhs, const Sequence& rhs) {
  return combine(lhs, rhs, [lhs, rhs](Index n) { return lhs(n) * rhs(n); },
                 tail_product(lhs.tail(), rhs.tail()), lhs.label() + "*" + rhs.label());
}

Sequence operator*(double factor, const Sequence& x) {
  return Sequence([factor, x](Index n) { return factor * x(n); }, tail_scale(x.tail(), factor),
                  Sequence::format_label(factor) + "*" + x.label())
      .with_horizon(x.horizon());
}

Sequence operator-(const Sequence& x) {
  return Sequence([x](Index n) { return -x(n); }, x.tail(), "-" + x.label()).with_horizon(x.horizon());
}

Sequence abs(const Sequence& x) {
  return Sequence([x](Index n) { return std::abs(x(n)); }, x.tail(), "|" + x.label() + "|")
      .with_horizon(x.horizon());
}

std::vector<double> sample_prefix(const Sequence& x, Index count) {
  if (count < 1) throw std::invalid_argument("sample_prefix: count must be >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (Index n = 1; n <= count; ++n) out.push_back(x(n));
  return out;
}

Sequence delta(const Sequence& x, int order) {
  if (order < 1) throw std::invalid_argument("delta: order must be >= 1");
  std::vector<double> weights;
  for (int k = 0; k <= order; ++k) {
    const double c = binomial_real(static_cast<std::uint64_t>(order), static_cast<std::uint64_t>(k));
    weights.push_back((order - k) % 2 == 0 ? c : -c);
  }
  std::optional<Index> horizon;
  if (x.horizon()) horizon = *x.horizon() - order;
  return Sequence([x, weights](Index n) {
    double sum = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) sum += weights[k] * x(n + static_cast<Index>(k));
    return sum;
  }, tail_of_difference(x.tail(), order), "delta^" + std::to_string(order) + "(" + x.label() + ")")
      .with_horizon(horizon);
}

Sequence cumulative_sum(const Sequence& x) {
  struct State {
    std::mutex mutex;
    std::vector<double> values{0.0};
  };
  auto state = std::make_shared<State>();
  std::optional<Index> horizon;
  if (x.horizon()) horizon = *x.horizon() + 1;
  return Sequence([x, state](Index n) {
    std::lock_guard<std::mutex> lock(state->mutex);
    auto& values = state->values;
    while (static_cast<Index>(values.size()) < n) {
      values.push_back(values.back() + x(static_cast<Index>(values.size())));
    }
    return values[static_cast<std::size_t>(n - 1)];
  }, tail_of_cumulative_sum(x.tail()), "cumsum(" + x.label() + ")")
      .with_horizon(horizon);
}

std::optional<Index> find_tail_violation(const Sequence& x, Index count, double rel_slack) {
  if (is_unknown(x.tail())) return std::nullopt;
  std::vector<Index> indices;
  for (Index n = 1; n <= count; ++n) indices.push_back(n);
  for (Index n = count * 2; n <= count * 64; n *= 2) indices.push_back(n);
  for (Index n : indices) {
    if (x.horizon() && n > *x.horizon()) break;
    const double envelope = tail_envelope(x.tail(), n);
    if (std::isinf(envelope)) continue;
    if (std::abs(x(n)) > envelope * (1.0 + rel_slack) + 1e-300) return n;
  }
  return std::nullopt;
}

}  // namespace asympair
