#include "asympair/solution.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>

#include "asympair/binomial.hpp"
#include "asympair/format.hpp"
#include "asympair/remainder.hpp"

namespace asympair {
namespace {

constexpr int kBallGrid = 128;

std::vector<double> difference_weights(int m) {
  std::vector<double> w(static_cast<std::size_t>(m) + 1);
  for (int k = 0; k <= m; ++k) {
    w[static_cast<std::size_t>(k)] = ((m - k) % 2 == 0 ? 1.0 : -1.0) * binomial_real(m, k);
  }
  return w;
}

std::vector<Index> sample_indices(Index p, Index N) {
  std::set<Index> out;
  for (Index n = p; n <= std::min(N, p + 256); ++n) out.insert(n);
  for (double n = static_cast<double>(p + 256); n <= static_cast<double>(N); n *= 1.05) {
    out.insert(static_cast<Index>(n));
  }
  if (N >= p) out.insert(N);
  return {out.begin(), out.end()};
}

Sequence deviation_sequence(std::shared_ptr<const std::vector<double>> d, Index p, const std::string& label) {
  return Sequence(
      [d, p](Index n) {
        if (n < p || n - p >= static_cast<Index>(d->size())) return 0.0;
        return (*d)[static_cast<std::size_t>(n - p)];
      },
      UnknownTail{}, label);
}

}  // namespace

std::string to_string(SolutionKind kind) { return kind == SolutionKind::p_solution ? "p-solution" : "candidate"; }

std::string to_string(ConstructStatus status) {
  switch (status) {
    case ConstructStatus::converged:
      return "converged";
    case ConstructStatus::max_iterations:
      return "max-iterations";
    case ConstructStatus::diverged:
      return "diverged";
  }
  return "converged";
}

double Trajectory::at(Index n) const {
  if (n >= start && n <= end()) return values[static_cast<std::size_t>(n - start)];
  if (n >= 1 && n < start && history) return (*history)(n);
  throw DomainError("trajectory has no value", n);
}

Trajectory forward_solve(const EquationSpec& eq, Index p, const std::vector<double>& init, Index N,
                         std::optional<Sequence> history) {
  const int m = eq.m;
  if (m < 1) throw std::invalid_argument("order m must be >= 1");
  if (p < 1) throw std::invalid_argument("start index p must be >= 1");
  if (init.size() != static_cast<std::size_t>(m)) {
    throw std::invalid_argument("forward_solve needs exactly m = " + std::to_string(m) + " initial values");
  }
  if (N <= p + m) throw std::invalid_argument("N must exceed p + m");
  for (Index n = p; n <= N - m; ++n) {
    if (eq.sigma(n) > n + m - 1) {
      throw RefusedError("sigma(" + std::to_string(n) + ") = " + std::to_string(eq.sigma(n)) +
                         " is not known when x_{n+m} is computed (needs sigma(n) <= n+m-1)");
    }
  }
  Trajectory out;
  out.start = p;
  out.history = std::move(history);
  out.values.reserve(static_cast<std::size_t>(N - p + 1));
  for (double v : init) {
    if (!std::isfinite(v)) throw DomainError("initial value is not finite");
    out.values.push_back(v);
  }
  const std::vector<double> w = difference_weights(m);
  for (Index n = p; n <= N - m; ++n) {
    const Index s = eq.sigma(n);
    if (s < p && !out.history) {
      throw DomainError("x at sigma(n) = " + std::to_string(s) + " lies before the start index p = " +
                        std::to_string(p), n);
    }
    double u;
    try {
      u = eq.f(out.at(s));
    } catch (const DomainError& e) {
      throw DomainError(std::string("f: ") + e.what(), n);
    }
    double next = eq.a(n) * u + eq.b(n);
    for (int k = 0; k < m; ++k) next -= w[static_cast<std::size_t>(k)] * out.values[static_cast<std::size_t>(n - p + k)];
    if (!std::isfinite(next)) throw OverflowError("trajectory overflows at index " + std::to_string(n + m));
    out.values.push_back(next);
  }
  return out;
}

double residual(const EquationSpec& eq, const Trajectory& x) {
  const int m = eq.m;
  const std::vector<double> w = difference_weights(m);
  double worst = 0.0;
  for (Index n = x.start; n + m <= x.end(); ++n) {
    const Index s = eq.sigma(n);
    if (s > x.end() || (s < x.start && !x.history)) continue;
    double d = 0.0;
    for (int k = 0; k <= m; ++k) d += w[static_cast<std::size_t>(k)] * x.at(n + k);
    worst = std::max(worst, std::abs(d - eq.a(n) * eq.f(x.at(s)) - eq.b(n)));
  }
  return worst;
}

BallCheck check_ball_condition(const FunctionSpec& f, const Sequence& y, const DelaySpec& sigma,
                               const std::vector<Index>& indices, double R, double M) {
  if (!(R >= 0.0) || !(M > 0.0)) throw std::invalid_argument("ball check needs R >= 0 and M > 0");
  BallCheck out;
  out.margin = std::numeric_limits<double>::infinity();
  std::set<double> seen;
  for (Index n : indices) {
    const double center = y(sigma(n));
    if (!seen.insert(center).second) continue;
    for (int i = 0; i <= kBallGrid; ++i) {
      const double u = center - R + 2.0 * R * i / kBallGrid;
      double value;
      try {
        value = std::abs(f(u));
      } catch (const DomainError& e) {
        out.ok = false;
        out.margin = -std::numeric_limits<double>::infinity();
        out.witness_index = n;
        out.witness_point = u;
        out.note = "f undefined at u = " + format_number(u) + " in the ball around y(sigma(" + std::to_string(n) + "))";
        return out;
      }
      if (M - value < out.margin) out.margin = M - value;
      if (value > M && out.ok) {
        out.ok = false;
        out.witness_index = n;
        out.witness_point = u;
        out.note = "|f(" + format_number(u) + ")| = " + format_number(value) + " > M in the ball around y(sigma(" +
                   std::to_string(n) + "))";
      }
    }
  }
  if (out.ok) out.note = "sampled " + std::to_string(seen.size()) + " distinct centers";
  return out;
}

PreconditionReport check_precondition(const EquationSpec& eq, const Sequence& y, Index p, double M, double tol,
                                      Index N) {
  const Sequence size = abs(eq.a);
  if (!certifies_remainder(size.tail(), eq.m)) {
    throw RefusedError("a has tail " + to_string(eq.a.tail()) + ", which does not certify r^" + std::to_string(eq.m) +
                       "|a|");
  }
  const RemainderResult r = remainder(size, eq.m, p, tol);
  PreconditionReport out;
  out.R_p = M * (r.value + r.tail_bound);
  out.sampled = sample_indices(p, N);
  out.ball = check_ball_condition(eq.f, y, eq.sigma, out.sampled, out.R_p, M);
  out.ok = out.ball.ok;
  out.margin = out.ball.margin;
  return out;
}

ConstructReport construct_solution(const EquationSpec& eq, const Sequence& y, Index p, double M, Index N,
                                   const ConstructOptions& options) {
  const int m = eq.m;
  const double tol = options.tol;
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (N <= p + m) throw std::invalid_argument("N must exceed p + m");
  ConstructReport report;
  report.precondition = check_precondition(eq, y, p, M, tol / 4, N);
  if (!report.precondition.ok) throw RefusedError("ball condition fails: " + report.precondition.ball.note);

  const Sequence dy = delta(y, m);
  for (Index n = p; n <= N - m; ++n) {
    if (!(std::abs(dy(n) - eq.b(n)) <= tol)) {
      throw RefusedError("y does not satisfy delta^m y = b at index " + std::to_string(n) + " (defect " +
                         format_number(std::abs(dy(n) - eq.b(n))) + ")");
    }
  }

  const double sign = m % 2 == 0 ? 1.0 : -1.0;
  const TailModel forcing_tail = tail_scale(eq.a.tail(), M);
  const std::size_t count = static_cast<std::size_t>(N - p + 1);
  auto d = std::make_shared<const std::vector<double>>(count, 0.0);
  double previous_change = std::numeric_limits<double>::infinity();
  int growth = 0;
  report.status = ConstructStatus::max_iterations;
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    // x = y + d on [p, N] and x = y elsewhere.
    const Sequence x = y + deviation_sequence(d, p, "deviation");
    const Sequence forcing(
        [a = eq.a, f = eq.f, sigma = eq.sigma, x](Index j) { return a(j) * f(x(sigma(j))); }, forcing_tail,
        "a*f(x o sigma)");
    const Sequence r = remainder_sequence(forcing, m, {tol / 4});
    auto next = std::make_shared<std::vector<double>>(count);
    double change = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      (*next)[i] = sign * r(p + static_cast<Index>(i));
      change = std::max(change, std::abs((*next)[i] - (*d)[i]));
    }
    d = next;
    report.iterations = iter;
    report.sup_changes.push_back(change);
    report.final_sup_change = change;
    if (change < tol) {
      report.status = ConstructStatus::converged;
      break;
    }
    growth = change > previous_change ? growth + 1 : 0;
    previous_change = change;
    if (growth >= 3) {
      report.status = ConstructStatus::diverged;
      break;
    }
  }

  report.deviation = *d;
  report.trajectory.start = p;
  report.trajectory.history = y;
  report.trajectory.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) report.trajectory.values[i] = y(p + static_cast<Index>(i)) + (*d)[i];
  report.residual_max = residual(eq, report.trajectory);
  report.trajectory.kind =
      report.converged() && report.residual_max < 10.0 * tol ? SolutionKind::p_solution : SolutionKind::candidate;

  const Sequence R = remainder_sequence(abs(eq.a), m, {tol / 4});
  report.bound_check = true;
  for (std::size_t i = 0; i < count && report.bound_check; ++i) {
    report.bound_check = std::abs((*d)[i]) <= M * R(p + static_cast<Index>(i)) + tol;
  }
  report.certified_tail = certifies_remainder(forcing_tail, m);
  switch (report.status) {
    case ConstructStatus::converged:
      report.note = "converged after " + std::to_string(report.iterations) + (report.iterations == 1 ? " iteration" : " iterations");
      break;
    case ConstructStatus::max_iterations:
      report.note = "no convergence within " + std::to_string(options.max_iter) +
                    " iterations; existence not refuted";
      break;
    case ConstructStatus::diverged:
      report.note = "sup-change grew for 3 consecutive iterations; existence not refuted";
      break;
  }
  return report;
}

Verdict verify_equivalence(const Trajectory& x, const Sequence& y, const SpaceSpec& Z, const TestOptions& options) {
  if (x.values.size() < 100) throw std::invalid_argument("verify_equivalence needs at least 100 overlapping values");
  auto diff = std::make_shared<std::vector<double>>(x.values.size());
  for (std::size_t i = 0; i < diff->size(); ++i) (*diff)[i] = x.values[i] - y(x.start + static_cast<Index>(i));
  return classify_space(deviation_sequence(diff, x.start, "x - y").with_horizon(x.end()), Z, options).decision;
}

Verdict verify_equivalence(const ConstructReport& report, const SpaceSpec& Z, const TestOptions& options) {
  if (report.deviation.size() < 100) throw std::invalid_argument("verify_equivalence needs at least 100 values");
  auto diff = std::make_shared<const std::vector<double>>(report.deviation);
  return classify_space(deviation_sequence(diff, report.trajectory.start, "x - y").with_horizon(report.trajectory.end()),
                        Z, options)
      .decision;
}

}  // namespace asympair
