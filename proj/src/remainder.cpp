#include "asympair/remainder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <vector>

#include "asympair/format.hpp"
#include "asympair/space_tests.hpp"
#include "asympair/summation.hpp"

namespace asympair {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr Index kBlock = 512;
constexpr Index kUncertifiedBlock = 64;
constexpr Index kUncertifiedMaxTerms = 10'000'000;

// Descending accumulation s_1 += a_j, s_k += s_{k-1}: after adding a_n, s_m
// equals Σ_{j=n}^{cut-1} C(m-1+j-n, m-1) a_j.
class DescendingPass {
 public:
  DescendingPass(int order, Index cut) : sums_(static_cast<std::size_t>(order)), next_(cut - 1) {}

  Index next() const { return next_; }

  double step(double a) {
    sums_[0].add(a);
    for (std::size_t k = 1; k < sums_.size(); ++k) sums_[k].add(sums_[k - 1].value());
    --next_;
    return sums_.back().value();
  }

 private:
  std::vector<CompensatedSum> sums_;
  Index next_;
};

Index model_start(const TailModel& model) {
  if (auto* g = std::get_if<GeometricTail>(&model)) return g->start;
  if (auto* p = std::get_if<PowerTail>(&model)) return p->start;
  if (auto* f = std::get_if<FiniteTail>(&model)) return f->support_end;
  return 1;
}

double log_binomial(double top, double k) {
  return std::lgamma(top + 1.0) - std::lgamma(k + 1.0) - std::lgamma(top - k + 1.0);
}

// Smallest cut >= n (up to bisection) with truncation_bound(n, cut) <= tol.
Index find_cut(const TailModel& model, int order, Index n, double tol, Index max_terms) {
  Index lo = std::max(n, model_start(model));
  if (truncation_bound(model, order, n, lo) <= tol) return lo;
  Index step = 1;
  Index hi = lo + step;
  while (!(truncation_bound(model, order, n, hi) <= tol)) {
    if (hi - n > max_terms) {
      throw RefusedError("certified truncation of the order-" + std::to_string(order) + " remainder at index " +
                         std::to_string(n) + " needs more than " + std::to_string(max_terms) + " terms for tol " +
                         format_number(tol) + " under " + to_string(model));
    }
    lo = hi;
    step *= 2;
    hi = lo + step;
  }
  while (hi - lo > 1) {
    const Index mid = lo + (hi - lo) / 2;
    if (truncation_bound(model, order, n, mid) <= tol) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

// Forward summation until a block of terms becomes negligible. Returns the
// partial sum and the first index not added.
std::pair<double, Index> uncertified_sum(const Sequence& a, int order, Index n, double tol) {
  CompensatedSum partial;
  double weight = 1.0;  // C(m-1+K, m-1) with K = j - n
  double previous_block = kInf;
  int growing = 0;
  Index j = n;
  for (;;) {
    CompensatedSum block;
    for (Index i = 0; i < kUncertifiedBlock; ++i, ++j) {
      if (a.horizon() && j > *a.horizon()) {
        throw ConvergenceError("data for '" + a.label() + "' ended before the remainder sum settled");
      }
      block.add(weight * a(j));
      const double k = static_cast<double>(j - n);
      weight = weight * (order + k) / (k + 1.0);
    }
    const double contribution = block.value();
    partial.add(contribution);
    if (std::abs(contribution) < tol * std::max(1.0, std::abs(partial.value()))) return {partial.value(), j};
    growing = std::abs(contribution) >= previous_block ? growing + 1 : 0;
    if (growing >= 16) {
      throw ConvergenceError("remainder of '" + a.label() + "' does not settle: block increments stopped shrinking");
    }
    if (j - n > kUncertifiedMaxTerms) {
      throw ConvergenceError("remainder of '" + a.label() + "' did not settle within " +
                             std::to_string(kUncertifiedMaxTerms) + " terms");
    }
    previous_block = std::abs(contribution);
  }
}

void check_horizon(const Sequence& a, Index cut) {
  if (a.horizon() && cut - 1 > *a.horizon()) {
    throw RefusedError("'" + a.label() + "' is defined only up to index " + std::to_string(*a.horizon()) +
                       " but the certified truncation needs index " + std::to_string(cut - 1));
  }
}

std::string refusal(const TailModel& model, int order) {
  return "tail model " + to_string(model) + " does not certify membership in A(" + std::to_string(order) +
         "); power tails need s < -" + std::to_string(order);
}

}  // namespace

bool certifies_remainder(const TailModel& model, int order) {
  if (std::holds_alternative<GeometricTail>(model) || is_finite(model)) return true;
  if (auto* p = std::get_if<PowerTail>(&model)) return p->exponent < -order;
  return false;
}

double truncation_bound(const TailModel& model, int order, Index n, Index cut) {
  if (cut < n) throw std::invalid_argument("truncation_bound: cut < n");
  if (auto* f = std::get_if<FiniteTail>(&model)) return cut >= f->support_end ? 0.0 : kInf;
  if (auto* g = std::get_if<GeometricTail>(&model)) {
    if (cut < g->start) return kInf;
    const double k = static_cast<double>(cut - n);
    const double m = order;
    // Terms t_j = C rho^j C(m-1+j-n, m-1) have ratios bounded by q beyond the cut.
    const double log_first = std::log(g->scale) + static_cast<double>(cut) * std::log(g->ratio) +
                             log_binomial(m - 1.0 + k, m - 1.0);
    const double q = g->ratio * (m + k) / (k + 1.0);
    double bound = q < 1.0 ? std::exp(log_first) / (1.0 - q) : kInf;
    if (n >= g->start) {
      bound = std::min(bound, g->scale * std::pow(g->ratio, static_cast<double>(n)) * std::pow(1.0 - g->ratio, -m));
    }
    return bound;
  }
  if (auto* p = std::get_if<PowerTail>(&model)) {
    const double e = order - 1 + p->exponent;
    if (cut < p->start || !(e < -1.0)) return kInf;
    // C(m-1+j-n, m-1) <= j^{m-1}, then Σ_{j>=J} j^e <= J^e + J^{e+1}/(-e-1).
    const double x = static_cast<double>(cut);
    return p->scale * (std::pow(x, e) + std::pow(x, e + 1.0) / (-e - 1.0));
  }
  return kInf;
}

double tail_bound(const TailModel& model, int order, Index from) {
  if (order < 1) throw std::invalid_argument("tail_bound: order must be >= 1");
  if (from < 1) throw std::invalid_argument("tail_bound: from must be >= 1");
  if (!certifies_remainder(model, order)) throw RefusedError(refusal(model, order));
  const double bound = truncation_bound(model, order, from, from);
  if (std::isinf(bound)) {
    throw RefusedError("tail model " + to_string(model) + " says nothing about indices from " + std::to_string(from));
  }
  return bound;
}

RemainderResult remainder(const Sequence& a, int order, Index n, double tol, bool allow_uncertified) {
  if (order < 1) throw std::invalid_argument("remainder: order must be >= 1");
  if (n < 1) throw std::invalid_argument("remainder: index must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("remainder: tol must be positive");

  RemainderResult result;
  if (certifies_remainder(a.tail(), order)) {
    const Index cut = find_cut(a.tail(), order, n, tol, RemainderOptions{}.max_terms);
    check_horizon(a, cut);
    DescendingPass pass(order, cut);
    double value = 0.0;
    while (pass.next() >= n) value = pass.step(a(pass.next()));
    result.value = value;
    result.truncation_index = cut;
    result.tail_bound = truncation_bound(a.tail(), order, n, cut);
    result.certified = true;
    return result;
  }
  if (!allow_uncertified) throw RefusedError(refusal(a.tail(), order));
  auto [value, cut] = uncertified_sum(a, order, n, tol);
  result.value = value;
  result.truncation_index = cut;
  result.tail_bound = kInf;
  result.certified = false;
  return result;
}

namespace {

class RemainderEngine {
 public:
  RemainderEngine(Sequence a, int order, RemainderOptions options)
      : a_(std::move(a)), order_(order), options_(options), certified_(certifies_remainder(a_.tail(), order)) {
    if (!certified_ && !options_.allow_uncertified) throw RefusedError(refusal(a_.tail(), order));
  }

  double value(Index n) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto idx = static_cast<std::size_t>(n);
    if (idx < known_.size() && known_[idx]) return values_[idx];
    compute_block((n - 1) / kBlock);
    return values_[idx];
  }

 private:
  Sequence a_;
  int order_;
  RemainderOptions options_;
  bool certified_;
  std::mutex mutex_;
  std::vector<double> values_;
  std::vector<char> known_;
  std::map<Index, Index> cuts_;          // block -> cut
  std::map<Index, DescendingPass> passes_;  // cut -> pass in progress

  Index cut_for_block(Index block) {
    if (auto it = cuts_.find(block); it != cuts_.end()) return it->second;
    const Index lo = block * kBlock + 1;
    const Index hi = lo + kBlock - 1;
    Index cut = hi + 1;
    if (certified_) {
      const TailModel& model = a_.tail();
      cut = std::max({cut, find_cut(model, order_, lo, options_.tol, options_.max_terms),
                      find_cut(model, order_, hi, options_.tol, options_.max_terms)});
      for (Index n = lo; n <= hi; ++n) {
        while (!(truncation_bound(model, order_, n, cut) <= options_.tol)) {
          cut = n + 2 * (cut - n);
          if (cut - n > options_.max_terms) throw RefusedError("certified truncation needs too many terms");
        }
      }
    } else {
      cut = std::max(cut, uncertified_sum(a_, order_, lo, options_.tol).second);
    }
    check_horizon(a_, cut);
    cuts_.emplace(block, cut);
    return cut;
  }

  void store(Index n, double value) {
    const auto idx = static_cast<std::size_t>(n);
    if (idx >= values_.size()) {
      values_.resize(idx + 1, 0.0);
      known_.resize(idx + 1, 0);
    }
    values_[idx] = value;
    known_[idx] = 1;
  }

  void compute_block(Index block) {
    const Index lo = block * kBlock + 1;
    const Index hi = lo + kBlock - 1;
    const Index cut = cut_for_block(block);
    auto it = passes_.find(cut);
    if (it == passes_.end() || it->second.next() < hi) {
      // A pass that already went below this block reproduces the same values
      // when restarted, so restarting is safe.
      passes_.erase(cut);
      it = passes_.emplace(cut, DescendingPass(order_, cut)).first;
    }
    DescendingPass& pass = it->second;
    // Record other blocks sharing the cut on the way down, within reason.
    const Index record_limit = std::max<Index>(hi, 4 * hi + 4 * kBlock);
    while (pass.next() >= lo) {
      const Index n = pass.next();
      const double value = pass.step(a_(n));
      if (n <= hi || (n <= record_limit && cut_for_block((n - 1) / kBlock) == cut)) store(n, value);
    }
  }
};

}  // namespace

Sequence remainder_sequence(const Sequence& a, int order, RemainderOptions options) {
  if (order < 1) throw std::invalid_argument("remainder_sequence: order must be >= 1");
  if (!(options.tol > 0.0)) throw std::invalid_argument("remainder_sequence: tol must be positive");
  auto engine = std::make_shared<RemainderEngine>(a, order, options);
  TailModel tail = certifies_remainder(a.tail(), order) ? tail_of_remainder(a.tail(), order) : UnknownTail{};
  return Sequence([engine](Index n) { return engine->value(n); }, tail,
                  "r^" + std::to_string(order) + "(" + a.label() + ")");
}

Verdict in_Am(const Sequence& a, int order) {
  Verdict v;
  v.test = "tail-model";
  v.rule = "tail-model";
  const TailModel& model = a.tail();
  if (certifies_remainder(model, order)) {
    v.outcome = Outcome::in_space;
    v.certified = true;
    if (auto* p = std::get_if<PowerTail>(&model)) {
      v.statistic = -p->exponent;
      v.margin = -p->exponent - order;
    } else {
      v.statistic = kInf;
      v.margin = kInf;
    }
    v.note = "declared tail " + to_string(model);
    return v;
  }
  // A power tail with s >= -m is only an upper bound, so it cannot refute
  // membership; the partial-sum oracle decides.
  Verdict oracle = direct_sum_oracle(a, static_cast<double>(order), TestOptions{}.oracle_max_terms);
  if (!is_unknown(model)) oracle.note += (oracle.note.empty() ? "" : "; ") + ("declared tail " + to_string(model));
  return oracle;
}

}  // namespace asympair
