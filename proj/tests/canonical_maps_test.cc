#include "loewner/canonical_maps.h"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "loewner/harness.h"
#include "loewner/random.h"
#include "test_util.h"

namespace loewner {
namespace {

using E = OrderIsoExpr;
using testing::Diag;
using testing::Value;

Element S(double v) { return Element::Scalar(Algebra({1}), v); }

TEST(IntervalTest, NamesRoundTrip) {
  for (auto k : {IntervalKind::kEffect, IntervalKind::kCone,
                 IntervalKind::kConeStrict, IntervalKind::kSa}) {
    EXPECT_EQ(ParseIntervalKind(IntervalKindName(k)), k);
  }
  EXPECT_THROW(ParseIntervalKind("box"), DomainError);
}

TEST(IntervalTest, Membership) {
  const Element x = Diag({0.0, 0.5});
  EXPECT_TRUE(InInterval(x, IntervalKind::kEffect));
  EXPECT_TRUE(InInterval(x, IntervalKind::kCone));
  EXPECT_FALSE(InInterval(x, IntervalKind::kConeStrict));
  EXPECT_TRUE(InInterval(Diag({-3.0, 2.0}), IntervalKind::kSa));
  EXPECT_FALSE(InInterval(Diag({0.5, 2.0}), IntervalKind::kEffect));
}

TEST(PhiTTest, ScalarClosedForms) {
  // Phi_T(s) = (1 + T^2) s / (1 + T^2 s) and its inverse s / ((1 - s) T^2 + 1)
  // worked out by hand for the scalar case.
  for (double tau : {0.3, 1.0, 2.5}) {
    const double t2 = tau * tau;
    for (int k = 0; k <= 10; ++k) {
      const double s = k / 10.0;
      EXPECT_NEAR(Value(PhiTApply(S(tau), S(s))), (1 + t2) * s / (1 + t2 * s),
                  1e-14);
      EXPECT_NEAR(Value(PhiTInvApply(S(tau), S(s))), s / ((1 - s) * t2 + 1),
                  1e-14);
    }
    EXPECT_NEAR(Value(PhiTApply(S(tau), S(0.5))), (1 + t2) / (2 + t2), 1e-12);
  }
  for (int n = 3; n <= 10; ++n) {
    EXPECT_NEAR(Value(PhiTInvApply(S(std::sqrt(n - 2.0)), S(0.5))), 1.0 / n,
                1e-12);
  }
}

TEST(PhiTTest, FixesEndpoints) {
  Rng rng(1);
  const Algebra alg({2, 3});
  const Element T = GenPosInvertible(alg, 20.0, rng, 3.0);
  EXPECT_LT(OpNorm(PhiTApply(T, Element::Zero(alg))), 1e-12);
  EXPECT_LT(Distance(PhiTApply(T, Unit(alg)), Unit(alg)), 1e-12);
}

TEST(PhiTTest, MatrixRoundTripAndMonotone) {
  Rng rng(2);
  const Algebra alg({3, 1});
  for (int trial = 0; trial < 20; ++trial) {
    const Element T = GenPosInvertible(alg, 20.0, rng, 3.0);
    const auto [a, b] = GenComparablePair(alg, IntervalKind::kEffect, rng);
    EXPECT_LT(Distance(PhiTInvApply(T, PhiTApply(T, a)), a), 1e-10);
    EXPECT_LT(Distance(PhiTApply(T, PhiTInvApply(T, a)), a), 1e-10);
    EXPECT_TRUE(Leq(PhiTApply(T, a), PhiTApply(T, b)));
    EXPECT_TRUE(InEffect(PhiTApply(T, a)));
  }
}

TEST(PhiTTest, RejectsSingularT) {
  EXPECT_THROW(PhiTApply(Diag({0.0, 1.0}), Diag({0.5, 0.5})), DomainError);
  EXPECT_THROW(PhiTApply(Diag({1.0, 1.0}), Diag({1.5, 0.5})), DomainError);
}

TEST(PhiAlphaTest, KnownValues) {
  EXPECT_NEAR(Value(PhiAlphaApply(1.0, S(0.5))), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(Value(PhiAlphaInvApply(1.0, S(2.0 / 3.0))), 0.5, 1e-15);
  // Phi_{alpha 1} = Phi_alpha.
  Rng rng(3);
  const Algebra alg({2, 2});
  const Element a = GenEffect(alg, rng);
  EXPECT_LT(Distance(PhiTApply(Element::Scalar(alg, 1.7), a),
                     PhiAlphaApply(1.7, a)),
            1e-12);
  EXPECT_THROW(PhiAlphaApply(0.0, a), DomainError);
}

TEST(PhiAlphaTest, CompositeAtHalf) {
  // Phi_alpha^-1(Phi_T(1/2)) = 1 - (1 + (1 + alpha^2)^-1 (T^2 + 1))^-1.
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (double tau : {0.4, 1.3}) {
      const double got =
          Value(PhiAlphaInvApply(alpha, PhiTApply(S(tau), S(0.5))));
      const double want =
          1.0 - 1.0 / (1.0 + (tau * tau + 1.0) / (1.0 + alpha * alpha));
      EXPECT_NEAR(got, want, 1e-12);
    }
  }
}

TEST(FAlphaTest, ValuesAndInverse) {
  EXPECT_NEAR(FAlphaScalar(-1.0, 0.5), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(FAlphaScalar(0.5, 0.5), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(FAlphaScalar(0.3, 0.0), 0.0);
  EXPECT_EQ(FAlphaScalar(0.3, 1.0), 1.0);
  for (double alpha : {-2.0, -0.5, 0.3, 0.9}) {
    const double inv = FAlphaInverseParameter(alpha);
    for (double t : {0.1, 0.5, 0.8}) {
      EXPECT_NEAR(FAlphaScalar(inv, FAlphaScalar(alpha, t)), t, 1e-14);
    }
  }
  EXPECT_THROW(FAlphaScalar(1.0, 0.5), DomainError);
  const Element m = FAlphaCalc(-1.0, Diag({0.5, 1.0}));
  EXPECT_NEAR(m.block(0)(0, 0).real(), 1.0 / 3.0, 1e-15);
}

TEST(DirectFormulaTest, ScalarValue) {
  EXPECT_NEAR(Value(DirectFormulaApply(S(std::sqrt(3.0)), S(0.5))), 0.75,
              1e-12);
  // For scalar T the formula is Phi_alpha with 1 + alpha^2 = T^2.
  Rng rng(4);
  const Algebra alg({3});
  const Element a = GenEffect(alg, rng);
  const double alpha = 1.4;
  EXPECT_LT(Distance(DirectFormulaApply(
                         Element::Scalar(alg, std::sqrt(1 + alpha * alpha)), a),
                     PhiAlphaApply(alpha, a)),
            1e-12);
}

TEST(JordanTest, IdentityTransposeAndPermutation) {
  Rng rng(5);
  const Algebra src({2, 3});
  const Algebra dst({3, 2});
  const JordanSpec spec(src, dst, {1, 0},
                        {RandomUnitary(2, rng), RandomUnitary(3, rng)},
                        {true, false});
  const Element x = GenHermitian(src, 1.0, rng);
  const Element y = GenHermitian(src, 1.0, rng);
  const Element jx = spec.Apply(x);
  EXPECT_EQ(jx.algebra(), dst);
  // Unitary conjugation by hand on each block.
  const Matrix b0 = spec.unitaries()[0] * x.block(0).transpose() *
                    spec.unitaries()[0].adjoint();
  EXPECT_LT((jx.block(1) - b0).norm(), 1e-12);
  EXPECT_LT(Distance(spec.Apply(JordanProduct(x, y)),
                     JordanProduct(jx, spec.Apply(y))),
            1e-12);
  EXPECT_LT(Distance(spec.Inverse().Apply(jx), x), 1e-12);
  EXPECT_LT(Distance(JordanSpec::Identity(src).Apply(x), x), 0.0 + 1e-15);
}

TEST(JordanTest, RejectsInvalidSpecs) {
  const Algebra alg({2});
  Matrix notu = Matrix::Identity(2, 2);
  notu(0, 0) = 2.0;
  EXPECT_THROW(JordanSpec(alg, alg, {0}, {notu}, {false}), DomainError);
  EXPECT_THROW(JordanSpec(Algebra({2, 1}), Algebra({2, 1}), {0, 0},
                          {Matrix::Identity(2, 2), Matrix::Identity(1, 1)},
                          {false, false}),
               DomainError);
  EXPECT_THROW(JordanSpec(Algebra({2}), Algebra({3}), {0},
                          {Matrix::Identity(2, 2)}, {false}),
               DomainError);
}

TEST(ConeMapsTest, CongruenceShiftExp) {
  const Element c = CongruenceApply(Diag({2.0, 1.0}), Diag({1.0, 1.0}));
  EXPECT_NEAR(c.block(0)(0, 0).real(), 4.0, 1e-15);
  EXPECT_NEAR(c.block(0)(1, 1).real(), 1.0, 1e-15);
  const Element sh = ShiftApply(Diag({1.0, -1.0}), Diag({0.5, 0.5}));
  EXPECT_NEAR(sh.block(0)(1, 1).real(), -0.5, 1e-15);

  const Algebra comm({1, 1});
  const Element e = ExpIsoApply(
      JordanSpec::Identity(comm),
      Element::Diagonal(comm, {std::numbers::ln2, 0.0}));
  EXPECT_NEAR(e.block(0)(0, 0).real(), 2.0, 1e-14);
  EXPECT_NEAR(e.block(1)(0, 0).real(), 1.0, 1e-14);
  EXPECT_THROW(ExpIsoApply(JordanSpec::Identity(Algebra({2})), Diag({0.0, 0.0})),
               DomainError);
}

TEST(ExprTest, ComposeAppliesLastMapFirst) {
  const Algebra alg({2});
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const JordanSpec spec(alg, alg, {0}, {swap}, {false});
  const OrderIsoExpr expr = Compose(
      {E(E::PhiT{Element::Diagonal(alg, {2.0, 1.0})}), E(E::Jordan{spec})});
  // Swap first gives diag(0, 1/2), then Phi_T gives diag(0, Phi_1(1/2)) =
  // diag(0, 2/3). The other order would give diag(0, 5/6).
  const Element y = Evaluate(expr, Element::Diagonal(alg, {0.5, 0.0}));
  EXPECT_NEAR(y.block(0)(0, 0).real(), 0.0, 1e-14);
  EXPECT_NEAR(y.block(0)(1, 1).real(), 2.0 / 3.0, 1e-14);
}

TEST(ExprTest, IntervalChaining) {
  const Algebra comm({1, 1});
  const OrderIsoExpr exp_map(E::ExpIso{JordanSpec::Identity(comm)},
                             IntervalKind::kSa);
  EXPECT_EQ(exp_map.TargetInterval(), IntervalKind::kConeStrict);
  const OrderIsoExpr chain =
      Compose({E(E::Congruence{Element::Scalar(comm, 2.0)}), exp_map},
              IntervalKind::kSa);
  EXPECT_EQ(chain.TargetInterval(), IntervalKind::kConeStrict);
  EXPECT_EQ(chain.SourceAlgebra(), comm);
  const OrderIsoExpr bad = Compose({E(E::Shift{Element::Zero(comm)}),
                                    E(E::PhiAlpha{1.0})});
  EXPECT_THROW(bad.TargetInterval(), DomainError);
  EXPECT_FALSE(E(E::PhiAlpha{1.0}).SourceAlgebra().has_value());
}

TEST(ExprTest, EvaluateChecksDomain) {
  const OrderIsoExpr expr(E::PhiAlpha{1.0});
  EXPECT_THROW(Evaluate(expr, S(1.5)), DomainError);
  EXPECT_THROW(Evaluate(expr, S(-0.5)), DomainError);
}

TEST(ExprTest, InverseMapsRoundTrip) {
  Rng rng(6);
  const Algebra alg({2, 1});
  for (auto kind : {IntervalKind::kEffect, IntervalKind::kCone,
                    IntervalKind::kConeStrict, IntervalKind::kSa}) {
    const OrderIsoExpr expr = GenOrderIsoExpr(alg, kind, rng);
    const ElementMap inv = InverseMap(expr);
    for (int k = 0; k < 5; ++k) {
      Element a = kind == IntervalKind::kEffect ? GenEffect(alg, rng)
                  : kind == IntervalKind::kSa   ? GenHermitian(alg, 2.0, rng)
                                                : GenPosInvertible(alg, 10.0, rng);
      EXPECT_LT(Distance(inv(Evaluate(expr, a)), a), 1e-8);
    }
  }
}

TEST(ExprTest, PerpConjugatesByComplement) {
  const OrderIsoExpr expr(E::PhiAlpha{1.0});
  const ElementMap perp = Perp(expr);
  // 1 - Phi_1(1 - 1/2) = 1/3.
  EXPECT_NEAR(Value(perp(S(0.5))), 1.0 / 3.0, 1e-15);
  const OrderIsoExpr cone(E::Congruence{S(2.0)}, IntervalKind::kCone);
  EXPECT_THROW(Perp(cone), DomainError);
}

}  // namespace
}  // namespace loewner
