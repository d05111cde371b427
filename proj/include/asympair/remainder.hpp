#pragma once

#include "asympair/sequence.hpp"
#include "asympair/tail_model.hpp"
#include "asympair/verdict.hpp"

namespace asympair {

struct RemainderResult {
  double value = 0.0;
  /// First index left out of the sum.
  Index truncation_index = 0;
  /// Bound on the omitted part; +inf when uncertified.
  double tail_bound = 0.0;
  bool certified = false;
};

/// Upper bound on Σ_{j≥from} C(m-1+j-from, m-1) |a_j| under the model.
/// Throws RefusedError for unknown models and power tails with s >= -m.
double tail_bound(const TailModel& model, int order, Index from);

/// Upper bound on Σ_{j≥cut} C(m-1+j-n, m-1) |a_j| for cut >= n, or +inf
/// when the model gives no bound there.
double truncation_bound(const TailModel& model, int order, Index n, Index cut);

/// True when the model admits a certified order-m remainder.
bool certifies_remainder(const TailModel& model, int order);

/// r^m_n(a) = Σ_{j≥n} C(m-1+j-n, m-1) a_j.
///
/// With a certifying tail the sum is truncated at the first index whose tail
/// bound is <= tol. Otherwise RefusedError, unless allow_uncertified, in which
/// case summation stops when a block of 64 terms adds less than
/// tol * max(1, |partial|); ConvergenceError if the blocks do not shrink.
RemainderResult remainder(const Sequence& a, int order, Index n, double tol, bool allow_uncertified = false);

struct RemainderOptions {
  /// Certified absolute error of every value.
  double tol = 1e-12;
  bool allow_uncertified = false;
  /// Refuse when a certified truncation needs more terms than this.
  Index max_terms = 20'000'000;
};

/// The sequence n -> r^m_n(a), computed on demand in blocks and cached.
///
/// Indices that share a truncation index are produced by one descending pass,
/// so Δ^m of the result reproduces (-1)^m a to rounding inside a pass. Values
/// do not depend on the order in which indices are requested.
Sequence remainder_sequence(const Sequence& a, int order, RemainderOptions options = {});

/// Membership of a in 𝒜(m), the sequences for which |a| has an order-m remainder.
Verdict in_Am(const Sequence& a, int order);

}  // namespace asympair
