#include "loewner/harness.h"

#include <gtest/gtest.h>

#include "loewner/effects.h"

namespace loewner {
namespace {

TEST(GeneratorsTest, JordanSpecMatchesBlockSizes) {
  Rng rng(1);
  const Algebra src({2, 1, 2, 3});
  const JordanSpec spec = GenJordanSpec(src, rng);
  for (int b = 0; b < src.num_blocks(); ++b) {
    EXPECT_EQ(spec.target().block_dim(spec.permutation()[b]), src.block_dim(b));
  }
  EXPECT_THROW(GenJordanSpec(Algebra({2}), Algebra({1, 1}), rng), DomainError);
}

TEST(GeneratorsTest, ComparablePairsAreOrdered) {
  Rng rng(2);
  const Algebra alg({2, 2});
  for (auto kind : {IntervalKind::kEffect, IntervalKind::kCone,
                    IntervalKind::kConeStrict, IntervalKind::kSa}) {
    for (int k = 0; k < 10; ++k) {
      const auto [a, b] = GenComparablePair(alg, kind, rng);
      EXPECT_TRUE(Leq(a, b));
      EXPECT_TRUE(InInterval(a, kind));
      EXPECT_TRUE(InInterval(b, kind));
    }
  }
}

TEST(OrderIsoCheckTest, CanonicalMapsPass) {
  Rng rng(3);
  const Algebra alg({1, 2});
  for (auto kind : {IntervalKind::kEffect, IntervalKind::kCone,
                    IntervalKind::kSa}) {
    const BlackBoxMap phi =
        BlackBoxFromExpr(GenOrderIsoExpr(alg, kind, rng), alg);
    const OrderIsoReport r = CheckOrderIso(phi, 30, rng);
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.comparable_pairs + r.incomparable_pairs, 60);
  }
}

TEST(OrderIsoCheckTest, SquaringIsNotMonotone) {
  const auto witness = FindSquareCounterexample();
  ASSERT_TRUE(witness.has_value());
  const auto& [a, b] = *witness;
  EXPECT_TRUE(InEffect(a));
  EXPECT_TRUE(InEffect(b));
  EXPECT_TRUE(Leq(a, b));
  EXPECT_LT(MinEigenvalue((b * b - a * a).AsHermitian()), -1e-6);

  Rng rng(4);
  const Algebra alg({2});
  const BlackBoxMap square{alg, alg, IntervalKind::kEffect,
                           IntervalKind::kEffect,
                           [](const Element& x) { return (x * x).AsHermitian(); },
                           {}};
  const OrderIsoReport r = CheckOrderIso(square, 200, rng);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.witnesses.empty());
  EXPECT_LE(r.witnesses.size(), 3u);
}

TEST(ProductMapTest, PiecewiseLinearIsIncreasingBijection) {
  Rng rng(5);
  for (auto kind : {IntervalKind::kEffect, IntervalKind::kCone,
                    IntervalKind::kSa}) {
    const ProductMap m = GenProductMap(4, kind, CommOptions{}, rng);
    ASSERT_EQ(m.f.size(), 4u);
    for (const auto& f : m.f) {
      for (size_t k = 1; k < f.knots.size(); ++k) {
        EXPECT_LT(f.knots[k - 1], f.knots[k]);
        EXPECT_LT(f.values[k - 1], f.values[k]);
      }
      if (kind == IntervalKind::kEffect) {
        EXPECT_NEAR(f(0.0), 0.0, 1e-15);
        EXPECT_NEAR(f(1.0), 1.0, 1e-15);
      }
      if (kind == IntervalKind::kCone) EXPECT_NEAR(f(0.0), 0.0, 1e-15);
    }
  }
  PiecewiseLinear f{{0.0, 1.0}, {0.0, 2.0}};
  EXPECT_DOUBLE_EQ(f(0.25), 0.5);
  EXPECT_DOUBLE_EQ(f(2.0), 4.0);  // linear extension past the last knot
}

TEST(SuiteTest, NamesAndUnknownSuite) {
  const auto& names = SuiteNames();
  EXPECT_EQ(names.size(), 11u);
  EXPECT_THROW(RunSuite("no_such_suite", TrialConfig{}), DomainError);
  TrialConfig negative;
  negative.trials = -1;
  EXPECT_THROW(RunSuite("orth", negative), DomainError);
}

TEST(SuiteTest, ReportsAreDeterministic) {
  TrialConfig config;
  config.seed = 11;
  config.trials = 5;
  for (const auto& name : SuiteNames()) {
    const std::string first = DumpJson(RunSuite(name, config).ToJson());
    const std::string second = DumpJson(RunSuite(name, config).ToJson());
    EXPECT_EQ(first, second) << name;
  }
  config.seed = 12;
  EXPECT_NE(DumpJson(RunSuite("orth", config).ToJson()),
            DumpJson(RunSuite("orth", TrialConfig{11, 5, {}, {}}).ToJson()));
}

TEST(SuiteTest, ReportShape) {
  TrialConfig config;
  config.seed = 3;
  config.trials = 4;
  const SuiteReport r = RunSuite("staircase", config);
  EXPECT_TRUE(r.passed());
  const Json j = r.ToJson();
  EXPECT_EQ(j["suite"], "staircase");
  EXPECT_EQ(j["trials"], 4);
  EXPECT_TRUE(j["passed"].get<bool>());
  const Json& m = j["metrics"]["residual_excess"];
  for (const char* key : {"count", "min", "q50", "q90", "q99", "max"}) {
    EXPECT_TRUE(m.contains(key)) << key;
  }
  EXPECT_TRUE(j["failed_trials"].empty());
}

TEST(SuiteTest, HomoAddsGridTrials) {
  TrialConfig config;
  config.trials = 3;
  EXPECT_EQ(RunSuite("homo", config).results.size(), 104u);
}

TEST(SuiteTest, FailingTrialsAreRecorded) {
  TrialConfig config;
  config.trials = 3;
  // A block beyond the dimension cap makes every trial raise.
  config.algebra_pool = {{17}};
  const SuiteReport r = RunSuite("general_formula", config);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.failures(), 3);
  EXPECT_FALSE(r.results[0].error.empty());
}

TEST(SuiteTest, RunSuitesAll) {
  TrialConfig config;
  config.seed = 1;
  config.trials = 2;
  const Json j = RunSuites("all", config);
  EXPECT_EQ(j["suites"].size(), SuiteNames().size());
  EXPECT_TRUE(j["passed"].get<bool>());
}

}  // namespace
}  // namespace loewner
