#pragma once

#include <optional>
#include <string>
#include <vector>

#include "asympair/delay.hpp"
#include "asympair/expression.hpp"
#include "asympair/sequence.hpp"
#include "asympair/space_spec.hpp"
#include "asympair/space_tests.hpp"

namespace asympair {

/// Δ^m x_n = a_n f(x_{σ(n)}) + b_n.
struct EquationSpec {
  int m = 1;
  Sequence a;
  Sequence b;
  FunctionSpec f;
  DelaySpec sigma;
};

enum class SolutionKind { p_solution, candidate };
std::string to_string(SolutionKind kind);

/// Values x_p..x_N, with optional values for indices below p.
struct Trajectory {
  Index start = 1;
  std::vector<double> values;
  SolutionKind kind = SolutionKind::candidate;
  /// x_n for n < start; without it those values are undefined.
  std::optional<Sequence> history;

  Index end() const { return start + static_cast<Index>(values.size()) - 1; }
  /// Throws DomainError outside [1, end] or below start without history.
  double at(Index n) const;
};

/// Solves the recurrence for x_{n+m}, n = p..N-m. `init` holds x_p..x_{p+m-1}.
/// Throws RefusedError when σ(n) > n+m-1 somewhere in [p, N-m], DomainError
/// when σ(n) < p without history or f leaves its domain, and OverflowError
/// when a value is not finite.
Trajectory forward_solve(const EquationSpec& eq, Index p, const std::vector<double>& init, Index N,
                         std::optional<Sequence> history = std::nullopt);

/// max |Δ^m x_n - a_n f(x_{σ(n)}) - b_n| over n in [start, end-m] with σ(n)
/// inside the known values (history included). 0 when no n qualifies.
double residual(const EquationSpec& eq, const Trajectory& trajectory);

struct BallCheck {
  bool ok = true;
  /// min over the grid of M - |f(u)|.
  double margin = 0.0;
  std::optional<Index> witness_index;
  std::optional<double> witness_point;
  std::string note;
};

/// |f(u)| <= M on a 129-point grid over [c - R, c + R] for every center
/// c = y_{σ(n)}, n in `indices`. Domain errors make ok false with a witness.
BallCheck check_ball_condition(const FunctionSpec& f, const Sequence& y, const DelaySpec& sigma,
                               const std::vector<Index>& indices, double R, double M);

struct PreconditionReport {
  bool ok = false;
  /// M r^m_p|a| plus its certified truncation bound.
  double R_p = 0.0;
  double margin = 0.0;
  BallCheck ball;
  /// Sampled n: every index in [p, p+256], then a ×1.05 geometric grid to N.
  std::vector<Index> sampled;
};

/// Ball condition (y∘σ)(n) ∈ Int(|f <= M|, R_p), sampled.
/// Throws RefusedError when |a| has no certified order-m remainder.
PreconditionReport check_precondition(const EquationSpec& eq, const Sequence& y, Index p, double M, double tol,
                                      Index N = 2048);

struct ConstructOptions {
  double tol = 1e-10;
  int max_iter = 200;
};

enum class ConstructStatus { converged, max_iterations, diverged };
std::string to_string(ConstructStatus status);

struct ConstructReport {
  ConstructStatus status = ConstructStatus::max_iterations;
  Trajectory trajectory;
  /// x_n - y_n for n = p..N, kept apart from x for precision.
  std::vector<double> deviation;
  int iterations = 0;
  double final_sup_change = 0.0;
  std::vector<double> sup_changes;
  double residual_max = 0.0;
  /// |x_n - y_n| <= M r^m_n|a| + tol for n = p..N.
  bool bound_check = false;
  /// Every remainder came from a certified truncation.
  bool certified_tail = false;
  PreconditionReport precondition;
  std::string note;

  bool converged() const { return status == ConstructStatus::converged; }
};

/// Picard iteration x <- y + (-1)^m r^m(a·f(x∘σ)) on n >= p, x = y below p
/// and beyond N. Throws RefusedError when the precondition fails or
/// Δ^m y = b does not hold within tol on [p, N-m].
ConstructReport construct_solution(const EquationSpec& eq, const Sequence& y, Index p, double M, Index N,
                                   const ConstructOptions& options = {});

/// classify_space(x - y, Z) on [start, end]; the difference is taken as 0
/// below start, which no asymptotic space can notice.
Verdict verify_equivalence(const Trajectory& x, const Sequence& y, const SpaceSpec& Z, const TestOptions& options = {});
/// Same, using the stored deviation of a construction.
Verdict verify_equivalence(const ConstructReport& report, const SpaceSpec& Z, const TestOptions& options = {});

}  // namespace asympair
