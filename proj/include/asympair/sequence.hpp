#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "asympair/errors.hpp"
#include "asympair/tail_model.hpp"

namespace asympair {

/// A real sequence indexed from 1, represented by its evaluator.
///
/// Copies share the evaluator. Evaluators must be pure: the same index always
/// produces the same bits, and they may be called from several threads.
class Sequence {
 public:
  using Evaluator = std::function<double(Index)>;

  /// The zero sequence.
  Sequence();
  Sequence(Evaluator evaluator, TailModel tail, std::string label);

  /// Throws DomainError for n < 1, for n beyond the horizon, and for
  /// non-finite values.
  double operator()(Index n) const;
  double at(Index n) const { return (*this)(n); }

  const TailModel& tail() const noexcept { return tail_; }
  const std::string& label() const noexcept { return label_; }
  /// Largest index the sequence is defined at, if it is finite data.
  std::optional<Index> horizon() const noexcept { return horizon_; }

  Sequence with_tail(TailModel tail) const;
  Sequence with_label(std::string label) const;
  Sequence with_horizon(std::optional<Index> horizon) const;
  /// Replaces finitely many values. The tail start moves past the edits.
  Sequence with_overrides(const std::map<Index, double>& values) const;

  static Sequence constant(double value);
  /// x_n = values[n-1] for n <= size. Beyond the table the value is 0 when
  /// the tail is finite(p) with p <= size + 1, and undefined otherwise.
  static Sequence table(std::vector<double> values, TailModel tail, std::string label = "table");

  /// Short decimal text for labels ("0.5", "-3").
  static std::string format_label(double value);

 private:
  std::shared_ptr<const Evaluator> evaluator_;
  TailModel tail_;
  std::string label_;
  std::optional<Index> horizon_;
};

Sequence operator+(const Sequence& lhs, const Sequence& rhs);
Sequence operator-(const Sequence& lhs, const Sequence& rhs);
Sequence operator*(const Sequence& lhs, const Sequence& rhs);
Sequence operator*(double factor, const Sequence& x);
Sequence operator-(const Sequence& x);
/// n -> |x_n|.
Sequence abs(const Sequence& x);

/// [x_1, ..., x_N].
std::vector<double> sample_prefix(const Sequence& x, Index count);

/// (Δ^m x)_n = Σ_{k=0..m} (-1)^{m-k} C(m,k) x_{n+k}.
Sequence delta(const Sequence& x, int order);

/// Zero-seeded cumulative sum y_1 = 0, y_{n+1} = y_n + x_n, so Δy = x.
/// Values are cached; the cache grows on demand.
Sequence cumulative_sum(const Sequence& x);

/// Checks the declared tail envelope on n = 1..count (plus a few spread out
/// larger indices). Returns the first violating index, if any.
std::optional<Index> find_tail_violation(const Sequence& x, Index count, double rel_slack = 1e-12);

}  // namespace asympair
