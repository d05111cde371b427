#pragma once

#include <optional>
#include <string>
#include <vector>

#include "asympair/remainder.hpp"
#include "asympair/sequence.hpp"
#include "asympair/space_spec.hpp"
#include "asympair/space_tests.hpp"

namespace asympair {

/// An m-pair (A, Z): Z asymptotic, A modular and A ⊂ Δ^m Z.
struct PairSpec {
  std::string name;
  int m = 1;
  SpaceSpec A;
  SpaceSpec Z;
  /// Z ⊆ o(1).
  bool evanescent = false;
};

/// Catalog parameters. Each pair reads the ones it needs.
struct PairParams {
  std::optional<double> s;
  std::optional<double> t;
  std::optional<double> lambda;
  /// Use the O(·) variant instead of o(·) where the catalog has both.
  bool big_o = false;
};

/// Names accepted by lookup_pair, in catalog order.
const std::vector<std::string>& pair_names();

/// Catalog entries (names are case-insensitive):
///   power-evanescent  (o(n^s), o(n^{s+m})), s < -m
///   power             (o(n^s), o(n^{s+m})), (s+1)...(s+m) != 0
///   geometric         (o(λ^n), o(λ^n)), λ > 0, λ != 1
///   A-to-pow          (𝒜(m-s), o(n^s)), s <= m-1
///   A-to-A            (𝒜(m+t), 𝒜(t)), t >= 1
///   fin               (Fin, Fin)
/// Throws std::invalid_argument for unknown names, missing parameters and
/// parameters outside the pair's hypothesis.
PairSpec lookup_pair(const std::string& name, int m, const PairParams& params = {});

std::string to_string(const PairSpec& pair);

/// n -> Σ c_k n^k.
struct PolynomialSeq {
  std::vector<double> coefficients;

  double operator()(Index n) const;
  Sequence sequence() const;
};

/// Throws std::invalid_argument when there are more than m coefficients.
PolynomialSeq poly_sequence(std::vector<double> coefficients, int m);

enum class InverseRoute {
  /// remainder when b's tail certifies r^m, cumulative otherwise.
  automatic,
  /// poly + (-1)^m r^m(b). Refused unless the tail certifies r^m.
  remainder,
  /// poly + m-fold zero-seeded cumulative sum of b.
  cumulative,
  /// One order at a time: -r^1 while the current tail certifies it within
  /// 2e6 terms, a cumulative sum otherwise.
  graded,
};

std::string to_string(InverseRoute route);
InverseRoute parse_inverse_route(const std::string& text);

/// A sequence y with Δ^m y = b. With the remainder route every value is
/// within tol / 2^{m+1} of the exact one, so |Δ^m y - b| < tol.
Sequence delta_inverse(const Sequence& b, int m, const PolynomialSeq& poly, double tol,
                       InverseRoute route = InverseRoute::automatic);

/// The route delta_inverse takes for `route` on this input.
InverseRoute resolve_route(const Sequence& b, int m, InverseRoute route);

struct PairInstanceReport {
  PairSpec pair;
  Verdict precondition;
  InverseRoute route = InverseRoute::automatic;
  /// max_{n <= N} |Δ^m z_n - a_n| / max(1, |a_n|, |z_n|, ..., |z_{n+m}|);
  /// absolute for bounded data.
  double max_residual = 0.0;
  bool identity_holds = false;
  /// classify_space(z, Z).
  Verdict membership;
  std::vector<std::string> warnings;
  /// z_1..z_N, for reporting.
  std::vector<double> z_prefix;

  bool passed() const { return identity_holds && membership.outcome == Outcome::in_space; }
};

/// Builds z with Δ^m z = a and checks Δ^m z = a on n <= N and z ∈ Z.
/// Throws RefusedError when a is classified outside A.
PairInstanceReport check_pair_instance(const PairSpec& pair, const Sequence& a, Index N, double tol,
                                       const TestOptions& options = {});

}  // namespace asympair
