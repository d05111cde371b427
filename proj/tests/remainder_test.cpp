#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "asympair/binomial.hpp"
#include "asympair/expression.hpp"
#include "asympair/remainder.hpp"

using namespace asympair;

namespace {

// Brute force Σ_{j=n}^{n+terms-1} C(m-1+j-n, m-1) a_j in long double with the
// weight updated incrementally.
long double brute_remainder(const std::function<long double(Index)>& a, int m, Index n, Index terms) {
  long double sum = 0.0L;
  long double weight = 1.0L;  // C(m-1, m-1)
  for (Index i = 0; i < terms; ++i) {
    sum += weight * a(n + i);
    weight *= static_cast<long double>(m + i) / static_cast<long double>(i + 1);
  }
  return sum;
}

Sequence seq(const std::string& text) { return parse_sequence_spec(text); }

double sign(int m) { return m % 2 == 0 ? 1.0 : -1.0; }

}  // namespace

TEST(Remainder, ClosedFormGeometric) {
  auto half = [](Index j) { return std::pow(0.5L, static_cast<long double>(j)); };
  // Oracle check of the closed forms 2^{1-n} and 2^{2-n} first.
  for (Index n = 1; n <= 40; ++n) {
    EXPECT_NEAR(static_cast<double>(brute_remainder(half, 1, n, 200) / std::pow(2.0L, 1 - n)), 1.0, 1e-14);
    EXPECT_NEAR(static_cast<double>(brute_remainder(half, 2, n, 200) / std::pow(2.0L, 2 - n)), 1.0, 1e-14);
  }
  const Sequence a = seq("geo(0.5)");
  for (Index n = 1; n <= 40; ++n) {
    const double r1 = std::ldexp(1.0, static_cast<int>(1 - n));
    const double r2 = std::ldexp(1.0, static_cast<int>(2 - n));
    const RemainderResult one = remainder(a, 1, n, 1e-14 * r1);
    const RemainderResult two = remainder(a, 2, n, 1e-14 * r2);
    EXPECT_TRUE(one.certified);
    EXPECT_LE(std::abs(one.value - r1), 1e-12 * r1) << n;
    EXPECT_LE(std::abs(two.value - r2), 1e-12 * r2) << n;
    EXPECT_LE(one.tail_bound, 1e-14 * r1);
  }
}

TEST(Remainder, Examples) {
  const RemainderResult r = remainder(seq("geo(0.5)"), 1, 3, 1e-12);
  EXPECT_NEAR(r.value, 0.25, 1e-12);
  EXPECT_TRUE(r.certified);
  EXPECT_LE(r.tail_bound, 1e-12);

  const RemainderResult i1 = remainder(seq("impulse(1)"), 2, 1, 1e-12);
  const RemainderResult i2 = remainder(seq("impulse(1)"), 2, 2, 1e-12);
  EXPECT_EQ(i1.value, 1.0);
  EXPECT_EQ(i2.value, 0.0);
  EXPECT_EQ(i1.tail_bound, 0.0);
  EXPECT_TRUE(i1.certified);

  // Frozen from brute_remainder(0.5^j, 2, 4, 200).
  EXPECT_NEAR(static_cast<double>(brute_remainder([](Index j) { return std::pow(0.5L, j); }, 2, 4, 200)), 0.25, 1e-14);
  EXPECT_NEAR(remainder(seq("geo(0.5)"), 2, 4, 1e-14).value, 0.25, 1e-14);
}

TEST(Remainder, Refusals) {
  EXPECT_THROW(remainder(seq("pow(n,-2)"), 2, 1, 1e-10), RefusedError);
  EXPECT_THROW(remainder(seq("pow(n,-2)").with_tail(UnknownTail{}), 1, 1, 1e-10), RefusedError);
  EXPECT_THROW(tail_bound(UnknownTail{}, 1, 1), RefusedError);
  EXPECT_THROW(tail_bound(PowerTail{1.0, -3.0, 1}, 3, 1), RefusedError);
  // Harmonic terms never shrink fast enough in uncertified mode.
  EXPECT_THROW(remainder(seq("pow(n,-1)").with_tail(UnknownTail{}), 1, 1, 1e-12, true), ConvergenceError);
}

TEST(Remainder, UncertifiedMode) {
  const RemainderResult r = remainder(seq("geo(0.5)").with_tail(UnknownTail{}), 1, 3, 1e-13, true);
  EXPECT_FALSE(r.certified);
  EXPECT_TRUE(std::isinf(r.tail_bound));
  EXPECT_NEAR(r.value, 0.25, 1e-12);
}

TEST(TailBound, Examples) {
  EXPECT_EQ(tail_bound(FiniteTail{5}, 1, 5), 0.0);
  EXPECT_EQ(tail_bound(FiniteTail{5}, 3, 9), 0.0);
  EXPECT_LE(tail_bound(GeometricTail{1.0, 0.5, 1}, 1, 10), std::ldexp(1.0, -9) * (1 + 1e-15));

  // Brute force Σ_{j≥20} (j-19) j^{-4} over 10^7 terms; the remainder past
  // that is below 1e-14, far smaller than the sum.
  long double brute = 0.0L;
  for (Index j = 20; j < 20 + 10'000'000; ++j) {
    const long double jj = static_cast<long double>(j);
    brute += (jj - 19.0L) / (jj * jj * jj * jj);
  }
  const double bound = tail_bound(PowerTail{1.0, -4.0, 1}, 2, 20);
  EXPECT_GE(bound, static_cast<double>(brute));
  EXPECT_LE(bound, 10.0 * static_cast<double>(brute));
}

TEST(InAm, Examples) {
  EXPECT_EQ(in_Am(seq("geo(0.5)"), 3).outcome, Outcome::in_space);
  EXPECT_EQ(in_Am(seq("pow(n,-2)"), 2).outcome, Outcome::not_in_space);
  for (int m = 1; m <= 4; ++m) {
    const Verdict v = in_Am(seq("impulse(7)"), m);
    EXPECT_EQ(v.outcome, Outcome::in_space);
    EXPECT_TRUE(v.certified);
  }
  EXPECT_EQ(in_Am(seq("pow(n,-4)"), 2).outcome, Outcome::in_space);
}

TEST(RemainderProperty, Inversion) {
  const auto start = std::chrono::steady_clock::now();
  for (int m = 1; m <= 3; ++m) {
    // Certified truncation of a power tail with exponent e = m-1+s needs
    // about tol^{1/(e+1)} terms, so the tolerance follows the exponent. The
    // identity itself holds to rounding for any tolerance: n <= 50 + m share
    // one truncation index.
    std::vector<std::pair<std::string, double>> family = {
        {"geo(0.3)", 1e-12}, {"geo(0.5)", 1e-12}, {"geo(0.9)", 1e-12}};
    family.emplace_back("pow(n," + Sequence::format_label(-m - 1.0) + ")", 1e-6);
    family.emplace_back("pow(n," + Sequence::format_label(-m - 1.5) + ")", 1e-10);
    family.emplace_back("pow(n," + Sequence::format_label(-m - 2.0) + ")", 1e-12);
    for (int p = 1; p <= 5; ++p) family.emplace_back("impulse(" + std::to_string(p) + ")", 1e-12);
    for (const auto& [text, tol] : family) {
      const Sequence a = seq(text);
      const Sequence d = delta(remainder_sequence(a, m, {tol}), m);
      for (Index n = 1; n <= 50; ++n) {
        EXPECT_NEAR(d(n), sign(m) * a(n), 1e-8) << text << " m=" << m << " n=" << n;
      }
    }
  }
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 10.0);
}

TEST(RemainderProperty, CoInversion) {
  for (int m = 1; m <= 3; ++m) {
    // |Δ^m n^s| <= |s|(|s|+1)...(|s|+m-1) n^{s-m} by the mean value theorem.
    auto power_delta = [m](double s) {
      double c = 1.0;
      for (int k = 0; k < m; ++k) c *= -s + k;
      return delta(seq("pow(n," + Sequence::format_label(s) + ")"), m).with_tail(PowerTail{c, s - m, 1});
    };
    const std::vector<std::pair<Sequence, Sequence>> cases = {
        {seq("geo(0.4)"), delta(seq("geo(0.4)"), m)},
        {seq("geo(0.8)"), delta(seq("geo(0.8)"), m)},
        {seq("pow(n,-2)"), power_delta(-2.0)},
        {seq("pow(n,-3.5)"), power_delta(-3.5)},
    };
    for (const auto& [x, dx] : cases) {
      const std::string text = x.label();
      const Sequence back = remainder_sequence(dx, m, {1e-10});
      for (Index n = 1; n <= 50; ++n) {
        EXPECT_NEAR(back(n), sign(m) * x(n), 1e-8) << text << " m=" << m << " n=" << n;
      }
    }
  }
}

TEST(RemainderProperty, MonotoneKernel) {
  std::mt19937_64 rng(0x5EED01);
  std::uniform_real_distribution<double> rho(0.1, 0.95);
  std::uniform_real_distribution<double> expo(0.0, 2.0);
  for (int trial = 0; trial < 12; ++trial) {
    const int m = 1 + trial % 3;
    const Sequence geo = seq("geo(" + Sequence::format_label(rho(rng)) + ")");
    const Sequence pw = seq("pow(n," + Sequence::format_label(-m - 1.5 - expo(rng)) + ")");
    const Sequence spiky = seq("pow(n,-" + std::to_string(m + 2) + ")*(1+sin(n))");
    for (const Sequence& a : {geo, pw, spiky}) {
      const Sequence r = remainder_sequence(a, m, {1e-9});
      double previous = r(1);
      for (Index n = 1; n <= 200; ++n) {
        const double v = r(n);
        EXPECT_GE(v, 0.0) << a.label();
        EXPECT_LE(v, previous * (1 + 1e-12)) << a.label() << " n=" << n;
        previous = v;
      }
    }
  }
}

TEST(RemainderProperty, ModularBound) {
  const Sequence x = seq("geo(0.5)");
  const Sequence u = seq("sin(n)");
  for (int m = 1; m <= 3; ++m) {
    const Sequence ux = remainder_sequence((u * x).with_tail(x.tail()), m);
    const Sequence ax = remainder_sequence(x, m);
    for (Index n = 1; n <= 60; ++n) {
      // sup over the tail of |u| is at most 1.
      EXPECT_LE(std::abs(ux(n)), ax(n) * (1 + 1e-12) + 1e-15) << "m=" << m << " n=" << n;
    }
  }
}

TEST(RemainderProperty, OrderBound) {
  for (int m = 1; m <= 3; ++m) {
    for (const std::string text : {"geo(0.7)", "pow(n,-5)", "pow(n,-4.5)*(1+sin(n))"}) {
      const Sequence x = seq(text);
      const Sequence r = remainder_sequence(abs(x), m, {1e-8});
      for (Index p = 1; p <= 40; p += 3) {
        long double brute = 0.0L;
        for (Index n = p; n < p + 200'000; ++n) {
          brute += std::pow(static_cast<long double>(n), m - 1) * std::abs(static_cast<long double>(x(n)));
        }
        // The weighted sum only grows past the cut, so its partial value is
        // a lower bound up to the truncation tolerance of r.
        EXPECT_LE(r(p), static_cast<double>(brute) + 1e-6) << text << " m=" << m << " p=" << p;
      }
    }
  }
}

TEST(RemainderProperty, Linearity) {
  std::mt19937_64 rng(0x11AEA5);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  const Sequence a = seq("geo(0.6)");
  const Sequence b = seq("pow(n,-5)");
  for (int trial = 0; trial < 6; ++trial) {
    const int m = 1 + trial % 3;
    const double alpha = coef(rng), beta = coef(rng);
    const Sequence combo = remainder_sequence(alpha * a + beta * b, m);
    const Sequence ra = remainder_sequence(a, m), rb = remainder_sequence(b, m);
    for (Index n = 1; n <= 60; ++n) {
      EXPECT_NEAR(combo(n), alpha * ra(n) + beta * rb(n), 1e-10) << "m=" << m << " n=" << n;
    }
  }
}

TEST(RemainderProperty, OrderIndependentCache) {
  const Sequence a = seq("pow(n,-4)");
  const Sequence forward = remainder_sequence(a, 2);
  const Sequence shuffled = remainder_sequence(a, 2);
  std::vector<Index> order(3000);
  std::iota(order.begin(), order.end(), Index{1});
  std::shuffle(order.begin(), order.end(), std::mt19937_64(0xC0FFEE));
  std::vector<double> values(order.size() + 1);
  for (Index n : order) values[static_cast<std::size_t>(n)] = shuffled(n);
  for (Index n = 1; n <= 3000; ++n) EXPECT_EQ(forward(n), values[static_cast<std::size_t>(n)]) << n;
}
