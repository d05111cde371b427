#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <map>
#include <random>

#include "asympair/expression.hpp"
#include "asympair/space_spec.hpp"
#include "asympair/space_tests.hpp"

using namespace asympair;

namespace {

Sequence seq(const std::string& text) { return parse_sequence_spec(text); }

// Same values with the declared tail dropped, so that only sampled evidence
// is available.
Sequence bare(const std::string& text) { return seq(text).with_tail(UnknownTail{}); }

// n^{-t} (ln n)^{-c}, set to 0 at n = 1 where ln n vanishes.
Sequence log_power(double t, double c) {
  return seq("pow(n," + Sequence::format_label(-t) + ")*pow(ln(n)," + Sequence::format_label(-c) + ")")
      .with_overrides({{1, 0.0}});
}

using TestFn = Verdict (*)(const Sequence&, double, const TestOptions&);

struct NamedTest {
  const char* name;
  TestFn run;
};

const std::vector<NamedTest>& ratio_tests() {
  static const std::vector<NamedTest> tests = {{"raabe", raabe_test},
                                               {"schlomilch", schlomilch_test},
                                               {"gauss", gauss_test},
                                               {"bertrand", bertrand_test},
                                               {"log", log_test}};
  return tests;
}

std::vector<Verdict> all_verdicts(const Sequence& a, double t, const TestOptions& options) {
  std::vector<Verdict> out;
  for (const auto& test : ratio_tests()) out.push_back(test.run(a, t, options));
  out.push_back(direct_sum_oracle(a, t, options.oracle_max_terms, options.band));
  return out;
}

// Random sequences with known membership in 𝒜(t): n^{-s} (ln n)^{-c} times a
// bounded positive factor lies in 𝒜(t) iff s > t, or s = t and c > 1;
// products with λ^n, λ < 1, always do. Parameters stay clear of the
// boundary by at least 0.5 to remain decidable.
struct Sample {
  Sequence a;
  bool member;
  std::string text;
};

Sample random_sample(std::mt19937_64& rng, double t) {
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_real_distribution<double> gap(0.5, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double side = unit(rng) < 0.5 ? -1.0 : 1.0;
  switch (kind(rng)) {
    case 0: {
      const double s = std::max(0.1, t + side * gap(rng));
      const std::string text = Sequence::format_label(1 + 9 * unit(rng)) + "*pow(n," + Sequence::format_label(-s) + ")";
      return {bare(text), s > t, text};
    }
    case 1: {
      const double c = side > 0 ? 1.0 + gap(rng) : std::max(0.0, 1.0 - gap(rng));
      const double s = t;
      return {log_power(s, c).with_tail(UnknownTail{}), c > 1.0, "log-power c=" + Sequence::format_label(c)};
    }
    case 2: {
      const double rho = 0.2 + 0.7 * unit(rng);
      const int k = static_cast<int>(4 * unit(rng));
      const std::string text = "geo(" + Sequence::format_label(rho) + ")*n^" + std::to_string(k);
      return {bare(text), true, text};
    }
    default: {
      const double s = std::max(0.1, t + side * gap(rng));
      const std::string text = "pow(n," + Sequence::format_label(-s) + ")*(2+sin(n))";
      return {bare(text), s > t, text};
    }
  }
}

Outcome truth(bool member) { return member ? Outcome::in_space : Outcome::not_in_space; }

}  // namespace

TEST(Estimates, Examples) {
  std::vector<double> u(1000), alternating(1000), noisy(10000);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    u[i] = 3.0 + 1.0 / n;
    alternating[i] = (i + 1) % 2 == 0 ? 1.0 : -1.0;
  }
  // Direct evaluation of the trailing-quarter minimum: 3.9926... well within
  // 0.1 of 4.
  double direct = 1e300;
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    noisy[i] = 4.0 + std::sin(n) / std::sqrt(n);
    if (i >= noisy.size() - noisy.size() / 4) direct = std::min(direct, noisy[i]);
  }
  const Estimate e1 = liminf_estimate(u, 0.05);
  EXPECT_NEAR(e1.value, 3.0, 2e-3);
  EXPECT_TRUE(e1.stable);
  const Estimate e2 = liminf_estimate(alternating, 0.05);
  EXPECT_EQ(e2.value, -1.0);
  EXPECT_TRUE(e2.stable);
  const Estimate e3 = liminf_estimate(noisy, 0.05);
  EXPECT_EQ(e3.value, direct);
  EXPECT_NEAR(e3.value, 4.0, 0.1);
  EXPECT_EQ(limsup_estimate(alternating, 0.05).value, 1.0);

  std::vector<double> bad(32, 1.0);
  bad[20] = std::nan("");
  try {
    liminf_estimate(bad, 0.05);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_EQ(e.index(), 21);
  }
  EXPECT_THROW(liminf_estimate(std::vector<double>(8, 1.0), 0.05), std::invalid_argument);
}

TEST(LogTest, Examples) {
  EXPECT_EQ(log_test(seq("pow(n,-3)"), 2).outcome, Outcome::in_space);
  EXPECT_EQ(log_test(seq("pow(n,-2)"), 2).outcome, Outcome::not_in_space);
  const Verdict v = log_test(seq("exp(-n)"), 5);
  EXPECT_EQ(v.outcome, Outcome::in_space);
  EXPECT_TRUE(std::isinf(v.statistic));
  // Zeros in the window and exactly vanishing tails.
  EXPECT_EQ(log_test(bare("pow(n,-3)*(1+cos(3.14159265358979323846*n))"), 2).outcome, Outcome::inconclusive);
  const Verdict fin = log_test(seq("impulse(5)"), 3);
  EXPECT_EQ(fin.outcome, Outcome::in_space);
  EXPECT_TRUE(fin.certified);
  EXPECT_THROW(log_test(seq("pow(n,-3)"), 0.5), std::invalid_argument);
}

TEST(RaabeTest, Examples) {
  EXPECT_EQ(raabe_test(seq("pow(n,-4)"), 2).outcome, Outcome::in_space);
  const Verdict boundary = raabe_test(seq("pow(n,-2)"), 2);
  EXPECT_EQ(boundary.outcome, Outcome::not_in_space);
  EXPECT_EQ(boundary.rule, "oracle-fallback");
  const Verdict geo = raabe_test(seq("geo(0.5)"), 3);
  EXPECT_EQ(geo.outcome, Outcome::in_space);
  EXPECT_TRUE(std::isinf(geo.statistic));
  TestOptions no_fallback;
  no_fallback.oracle_fallback = false;
  EXPECT_EQ(raabe_test(seq("pow(n,-2)"), 2, no_fallback).outcome, Outcome::inconclusive);
}

TEST(SchlomilchTest, Examples) {
  const Verdict geo = schlomilch_test(seq("geo(0.5)"), 1);
  EXPECT_EQ(geo.outcome, Outcome::in_space);
  EXPECT_TRUE(std::isinf(geo.statistic));
  const Verdict p3 = schlomilch_test(seq("pow(n,-3)"), 2);
  EXPECT_EQ(p3.outcome, Outcome::in_space);
  EXPECT_NEAR(p3.statistic, 3.0, 0.05);
  EXPECT_EQ(schlomilch_test(seq("pow(n,-2)"), 2).outcome, Outcome::not_in_space);
}

TEST(GaussTest, Examples) {
  const Verdict in = gauss_test(seq("pow(n,-3)"), 2);
  EXPECT_EQ(in.outcome, Outcome::in_space);
  EXPECT_NEAR(in.statistic, 3.0, 1e-2);
  EXPECT_EQ(in.rule, "model-checked");
  EXPECT_FALSE(in.certified);
  EXPECT_EQ(gauss_test(seq("pow(n,-3)"), 3).outcome, Outcome::not_in_space);
  EXPECT_EQ(gauss_test(seq("geo(0.9)"), 1).outcome, Outcome::inconclusive);
}

TEST(KummerTest, Examples) {
  const Verdict a = kummer_test(seq("pow(n,-3)"), seq("n"), 1);
  EXPECT_EQ(a.outcome, Outcome::in_space);
  EXPECT_NEAR(a.statistic, 2.0, 0.05);
  EXPECT_EQ(kummer_test(seq("pow(n,-1)"), seq("n"), 1).outcome, Outcome::not_in_space);
  const Verdict g = kummer_test(seq("geo(0.5)"), seq("1"), 1);
  EXPECT_EQ(g.outcome, Outcome::in_space);
  EXPECT_NEAR(g.statistic, 1.0, 1e-12);
  EXPECT_THROW(kummer_test(seq("sin(n)"), seq("n"), 1), DomainError);
  EXPECT_THROW(kummer_test(seq("geo(0.5)"), seq("-n"), 1), DomainError);
}

TEST(BertrandTest, Examples) {
  EXPECT_EQ(bertrand_test(log_power(1, 2), 1).outcome, Outcome::in_space);
  EXPECT_EQ(bertrand_test(log_power(1, 0.5), 1).outcome, Outcome::not_in_space);
  EXPECT_EQ(bertrand_test(seq("pow(n,-1)"), 1).outcome, Outcome::not_in_space);
}

TEST(BertrandTest, BoundaryGridAgreesWithOracle) {
  const auto start = std::chrono::steady_clock::now();
  for (double t : {1.0, 2.0}) {
    for (double c : {0.5, 2.0}) {
      const Sequence a = log_power(t, c);
      const Outcome expected = truth(c > 1.0);
      const Verdict b = bertrand_test(a, t);
      const Verdict o = direct_sum_oracle(a, t, 1'000'000);
      EXPECT_EQ(b.outcome, expected) << "t=" << t << " c=" << c;
      EXPECT_EQ(o.outcome, expected) << "t=" << t << " c=" << c << " " << o.note;
    }
  }
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 30.0);
}

TEST(Oracle, Examples) {
  EXPECT_EQ(direct_sum_oracle(seq("pow(n,-2)"), 1, 1'000'000).outcome, Outcome::in_space);
  EXPECT_EQ(direct_sum_oracle(bare("pow(n,-2)"), 1, 1'000'000).outcome, Outcome::in_space);
  EXPECT_EQ(direct_sum_oracle(seq("pow(n,-2)"), 2, 1'000'000).outcome, Outcome::not_in_space);
  const Verdict imp = direct_sum_oracle(seq("impulse(3)"), 4, 1'000'000);
  EXPECT_EQ(imp.outcome, Outcome::in_space);
  EXPECT_TRUE(imp.certified);
  EXPECT_EQ(imp.statistic, 27.0);
  const Verdict heuristic = direct_sum_oracle(bare("pow(n,-1.5)"), 1, 1'000'000);
  EXPECT_EQ(heuristic.outcome, Outcome::in_space);
  EXPECT_FALSE(heuristic.certified);
  EXPECT_NE(heuristic.note.find("partial sums"), std::string::npos);
  EXPECT_THROW(direct_sum_oracle(seq("geo(0.5)"), 1, 10), std::invalid_argument);
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify_space(seq("pow(n,-2)"), SpaceSpec::o_pow(-1)).decision.outcome, Outcome::in_space);
  EXPECT_EQ(classify_space(bare("pow(n,-2)"), SpaceSpec::o_pow(-1)).decision.outcome, Outcome::in_space);
  EXPECT_EQ(classify_space(seq("pow(n,-1)"), SpaceSpec::o_pow(-1)).decision.outcome, Outcome::not_in_space);
  const Sequence x = seq("geo(0.5)*n^3").with_tail(UnknownTail{}).with_horizon(500);
  // Direct evaluation: n^3 (5/6)^n at n = 500 is about 5e-32.
  EXPECT_LT(std::pow(500.0, 3) * std::pow(5.0 / 6.0, 500), 1e-30);
  EXPECT_EQ(classify_space(x, SpaceSpec::o_geo(0.6)).decision.outcome, Outcome::in_space);
  EXPECT_EQ(classify_space(x, SpaceSpec::o_geo(0.4)).decision.outcome, Outcome::not_in_space);

  EXPECT_EQ(classify_space(bare("sin(n)"), SpaceSpec::O_one()).decision.outcome, Outcome::in_space);
  EXPECT_EQ(classify_space(bare("sin(n)"), SpaceSpec::o_one()).decision.outcome, Outcome::not_in_space);
  EXPECT_EQ(classify_space(bare("n*sin(n)"), SpaceSpec::O_one()).decision.outcome, Outcome::not_in_space);
  EXPECT_EQ(classify_space(bare("1/n"), SpaceSpec::o_one()).decision.outcome, Outcome::in_space);
  // Log-log slope -1/ln n stays below -0.1 at N = 10^4.
  EXPECT_EQ(classify_space(bare("1/ln(n+1)"), SpaceSpec::o_one()).decision.outcome, Outcome::in_space);
  EXPECT_EQ(classify_space(bare("ln(n)"), SpaceSpec::O_one()).decision.outcome, Outcome::not_in_space);

  EXPECT_EQ(classify_space(seq("impulse(4)"), SpaceSpec::fin(5)).decision.outcome, Outcome::in_space);
  const Verdict witness = classify_space(seq("impulse(4)"), SpaceSpec::fin(4)).decision;
  EXPECT_EQ(witness.outcome, Outcome::not_in_space);
  EXPECT_TRUE(witness.certified);
  EXPECT_EQ(classify_space(bare("geo(0.999)"), SpaceSpec::fin()).decision.outcome, Outcome::not_in_space);
  // 0.5^n is exactly zero in double precision long before n = 10^4.
  EXPECT_EQ(classify_space(bare("geo(0.5)"), SpaceSpec::fin()).decision.outcome, Outcome::inconclusive);

  const Classification cascade = classify_space(bare("pow(n,-3)"), SpaceSpec::A(2));
  EXPECT_EQ(cascade.decision.outcome, Outcome::in_space);
  EXPECT_EQ(cascade.decision.test, "raabe");
  EXPECT_EQ(cascade.trace.size(), 7u);
  TestOptions first_only;
  first_only.record_all = false;
  EXPECT_EQ(classify_space(bare("pow(n,-3)"), SpaceSpec::A(2), first_only).trace.size(), 2u);
}

TEST(SpaceProperty, GroundTruthGrid) {
  int decisive = 0, total = 0;
  for (double s : {0.5, 1.5, 2.5, 3.5}) {
    for (double t : {1.0, 2.0, 3.0}) {
      if (std::abs(s - t) < 0.5) continue;
      const Sequence a = bare("pow(n," + Sequence::format_label(-s) + ")");
      for (const auto& test : ratio_tests()) {
        const Verdict v = test.run(a, t, {});
        if (!v.decisive()) continue;
        EXPECT_EQ(v.outcome, truth(s > t)) << test.name << " s=" << s << " t=" << t;
      }
      for (TestFn run : {raabe_test, schlomilch_test, log_test}) {
        const Verdict v = run(a, t, {});
        ++total;
        decisive += v.decisive() ? 1 : 0;
      }
    }
  }
  EXPECT_GE(decisive, 0.8 * total);
}

TEST(SpaceProperty, RandomMembershipAndAgreement) {
  std::mt19937_64 rng(0xA11CE);
  TestOptions options;
  options.oracle_fallback = false;
  for (int trial = 0; trial < 60; ++trial) {
    const double t = 1.0 + trial % 3;
    const Sample sample = random_sample(rng, t);
    const std::vector<Verdict> verdicts = all_verdicts(sample.a, t, options);
    for (const Verdict& v : verdicts) {
      if (!v.decisive()) continue;
      EXPECT_EQ(v.outcome, truth(sample.member)) << v.test << " on " << sample.text << " t=" << t << ": " << v.note;
      EXPECT_FALSE(std::isnan(v.statistic));
    }
  }
}

TEST(SpaceProperty, ComparisonNeverCertifiesDivergence) {
  std::mt19937_64 rng(0xC0A1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double t = 1.0 + trial % 3;
    const Sequence b = seq("pow(n," + Sequence::format_label(-t - 0.5 - unit(rng)) + ")");
    const Verdict vb = direct_sum_oracle(b, t, 1'000'000);
    ASSERT_EQ(vb.outcome, Outcome::in_space);
    ASSERT_TRUE(vb.certified);
    const double phase = unit(rng) * 6.0;
    const Sequence u = seq("(1+sin(n+" + Sequence::format_label(phase) + "))/2");
    const Sequence a = u * b;
    for (Index n = 1; n <= 4096; ++n) ASSERT_LE(std::abs(a(n)), std::abs(b(n)));
    const Classification c = classify_space(a, SpaceSpec::A(t));
    EXPECT_FALSE(c.decision.outcome == Outcome::not_in_space && c.decision.certified);
    for (const Verdict& v : c.trace) EXPECT_NE(v.outcome, Outcome::not_in_space) << v.test;
  }
}

TEST(SpaceProperty, ScalingInvariance) {
  std::mt19937_64 rng(0x5CA1E);
  for (int trial = 0; trial < 24; ++trial) {
    const double t = 1.0 + trial % 3;
    const Sample sample = random_sample(rng, t);
    const std::vector<Verdict> base = all_verdicts(sample.a, t, {});
    for (double kappa : {1e-6, 1e6}) {
      const std::vector<Verdict> scaled = all_verdicts(kappa * sample.a, t, {});
      for (std::size_t i = 0; i < base.size(); ++i) {
        EXPECT_EQ(base[i].outcome, scaled[i].outcome) << base[i].test << " on " << sample.text << " kappa=" << kappa;
      }
    }
  }
}

TEST(SpaceProperty, FinAbsorption) {
  std::mt19937_64 rng(0xF1A);
  std::uniform_real_distribution<double> junk(-50.0, 50.0);
  std::uniform_int_distribution<Index> where(1, 40);
  for (int trial = 0; trial < 24; ++trial) {
    const double t = 1.0 + trial % 3;
    const Sample sample = random_sample(rng, t);
    std::map<Index, double> edits;
    for (int k = 0; k < 6; ++k) edits[where(rng)] = junk(rng);
    const Sequence edited = sample.a.with_overrides(edits);
    const std::vector<Verdict> base = all_verdicts(sample.a, t, {});
    const std::vector<Verdict> after = all_verdicts(edited, t, {});
    for (std::size_t i = 0; i < base.size(); ++i) {
      if (base[i].decisive()) EXPECT_EQ(base[i].outcome, after[i].outcome) << base[i].test << " on " << sample.text;
    }
    for (const SpaceSpec& z : {SpaceSpec::o_one(), SpaceSpec::O_pow(-t)}) {
      const Verdict v0 = classify_space(sample.a, z).decision;
      if (v0.decisive()) EXPECT_EQ(v0.outcome, classify_space(edited, z).decision.outcome) << sample.text;
    }
  }
}

TEST(SpaceProperty, DecisiveMarginsAndWindows) {
  std::mt19937_64 rng(0xBA4D);
  for (int trial = 0; trial < 30; ++trial) {
    const double t = 1.0 + trial % 3;
    const Sample sample = random_sample(rng, t);
    for (const Verdict& v : all_verdicts(sample.a, t, {})) {
      EXPECT_FALSE(std::isnan(v.statistic));
      EXPECT_FALSE(std::isnan(v.margin));
      if (v.decisive() && v.rule != "boundary" && v.rule != "model-checked" && v.rule != "finite-support" &&
          v.rule != "zero-tail") {
        EXPECT_GE(std::abs(v.margin), 0.05) << v.test << " " << v.rule << " on " << sample.text;
      }
      if (v.rule != "finite-support") {
        EXPECT_LE(v.window_start, v.window_end);
      }
    }
  }
}
