#include "loewner/algebra.h"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "loewner/random.h"
#include "test_util.h"

namespace loewner {
namespace {

using testing::Diag;
using testing::PowerNorm;
using testing::Sym2;

TEST(AlgebraTest, Dimensions) {
  const Algebra a({2, 3, 1});
  EXPECT_EQ(a.dimension(), 14);
  EXPECT_EQ(a.matrix_size(), 6);
  EXPECT_FALSE(a.IsCommutative());
  EXPECT_TRUE(Algebra({1, 1}).IsCommutative());
}

TEST(AlgebraTest, RejectsBadBlockLists) {
  EXPECT_THROW(Algebra({}), DomainError);
  EXPECT_THROW(Algebra({2, 0}), DomainError);
  EXPECT_THROW(Algebra({17}), DomainError);  // 289 > 256
  EXPECT_NO_THROW(Algebra({16}));
}

TEST(ElementTest, RejectsShapeMismatch) {
  EXPECT_THROW(Element(Algebra({2}), {Matrix::Zero(3, 3)}, false),
               AlgebraMismatchError);
  EXPECT_THROW(Element(Algebra({2, 1}), {Matrix::Zero(2, 2)}, false),
               AlgebraMismatchError);
}

TEST(ElementTest, RejectsNonHermitianWhenFlagged) {
  Matrix m(2, 2);
  m << 1, 1, 0, 1;
  EXPECT_THROW(Element(Algebra({2}), {m}, true), DomainError);
  EXPECT_NO_THROW(Element(Algebra({2}), {m}, false));
}

TEST(ElementTest, MixedAlgebrasThrow) {
  EXPECT_THROW(Unit(Algebra({2})) + Unit(Algebra({1, 1})), AlgebraMismatchError);
  EXPECT_THROW(Leq(Unit(Algebra({2})), Unit(Algebra({3}))), AlgebraMismatchError);
}

TEST(ElementTest, ProductIsBlockwise) {
  Rng rng(1);
  const Algebra alg({2, 3});
  const Element x = GenHermitian(alg, 1.0, rng);
  const Element y = GenHermitian(alg, 1.0, rng);
  const Matrix dense = x.ToDense() * y.ToDense();
  EXPECT_LT((dense - (x * y).ToDense()).norm(), 1e-12);
  EXPECT_FALSE((x * y).hermitian());
}

TEST(ElementTest, JordanProduct) {
  Rng rng(2);
  const Algebra alg({3});
  const Element x = GenHermitian(alg, 1.0, rng);
  const Element y = GenHermitian(alg, 1.0, rng);
  const Matrix expected = 0.5 * (x.ToDense() * y.ToDense() + y.ToDense() * x.ToDense());
  EXPECT_LT((JordanProduct(x, y).ToDense() - expected).norm(), 1e-12);
}

TEST(NormTest, OpNormMatchesPowerIteration) {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Algebra alg({3, 2});
    const Element x = GenHermitian(alg, 2.0, rng);
    EXPECT_NEAR(OpNorm(x), PowerNorm(x.ToDense()), 1e-9);
  }
  EXPECT_DOUBLE_EQ(Scale(Element::Scalar(Algebra({2}), 0.25)), 1.0);
  EXPECT_DOUBLE_EQ(Scale(Element::Scalar(Algebra({2}), -3.0)), 3.0);
}

TEST(SpectrumTest, TwoByTwoClosedForm) {
  const Element x = Sym2(2.0, 1.0, -1.0);
  // (a+d)/2 +- sqrt(((a-d)/2)^2 + b^2)
  const double r = std::sqrt(2.25 + 1.0);
  const auto ev = Eigenvalues(x);
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_NEAR(ev[0], 0.5 - r, 1e-12);
  EXPECT_NEAR(ev[1], 0.5 + r, 1e-12);
  EXPECT_NEAR(MinEigenvalue(x), 0.5 - r, 1e-12);
  EXPECT_NEAR(MaxEigenvalue(x), 0.5 + r, 1e-12);
}

TEST(OrderTest, LoewnerBasics) {
  EXPECT_TRUE(Leq(Diag({0.0, 1.0}), Diag({0.5, 1.0})));
  EXPECT_FALSE(Leq(Diag({0.0, 1.0}), Diag({1.0, 0.0})));
  EXPECT_FALSE(Leq(Diag({1.0, 0.0}), Diag({0.0, 1.0})));
  // Entrywise larger but not Loewner larger.
  EXPECT_FALSE(Leq(Sym2(1.0, 0.0, 1.0), Sym2(2.0, 2.0, 2.0)));
  EXPECT_TRUE(LtStrict(Diag({0.0, 0.0}), Diag({1e-3, 1.0})));
  EXPECT_FALSE(LtStrict(Diag({0.0, 0.0}), Diag({0.0, 1.0})));
  EXPECT_TRUE(IsPositiveInvertible(Diag({1e-3, 2.0})));
  EXPECT_FALSE(IsPositiveInvertible(Diag({0.0, 2.0})));
}

TEST(OrderTest, ToleranceIsRelative) {
  EXPECT_TRUE(IsPositive(Diag({-5e-10, 1.0})));
  EXPECT_FALSE(IsPositive(Diag({-5e-9, 1.0})));
  EXPECT_TRUE(IsPositive(Diag({-5e-8, 100.0})));
}

TEST(FunCalcTest, SqrtInverseExpLog) {
  Rng rng(4);
  const Algebra alg({3, 1});
  const Element a = GenPosInvertible(alg, 10.0, rng, 2.0);
  const Element r = SqrtPos(a);
  EXPECT_LT(Distance(r * r, a), 1e-12);
  EXPECT_LT(Distance(a * Inverse(a), Unit(alg)), 1e-12);
  EXPECT_LT(Distance(Exp(Log(a)), a), 1e-12);
  EXPECT_LT(Distance(Power(a, 0.5), r), 1e-12);
  EXPECT_LT(Distance(Power(a, -1.0), Inverse(a)), 1e-12);
  EXPECT_THROW(Inverse(Diag({0.0, 1.0})), DomainError);
  EXPECT_THROW(SqrtPos(Diag({-1.0, 1.0})), DomainError);
  EXPECT_THROW(Log(Diag({0.0, 1.0})), DomainError);
}

TEST(FunCalcTest, ExpOfDiagonal) {
  const Element e = Exp(Diag({std::numbers::ln2, 0.0}));
  EXPECT_NEAR(e.block(0)(0, 0).real(), 2.0, 1e-14);
  EXPECT_NEAR(e.block(0)(1, 1).real(), 1.0, 1e-14);
}

TEST(FunCalcTest, NonFiniteValueThrows) {
  EXPECT_THROW(FunCalc(Diag({0.0, 1.0}), [](double x) { return 1.0 / x; }),
               DomainError);
}

TEST(RangeProjectionTest, DropsSmallEigenvalues) {
  const Element p = RangeProjection(Diag({2.0, 1e-12, 0.0, -1.0}));
  EXPECT_NEAR(p.block(0)(0, 0).real(), 1.0, 1e-12);
  EXPECT_NEAR(p.block(0)(1, 1).real(), 0.0, 1e-12);
  EXPECT_NEAR(p.block(0)(3, 3).real(), 1.0, 1e-12);
  // Noise-level elements have no range.
  EXPECT_LT(OpNorm(RangeProjection(Diag({1e-14, -1e-15}))), 1e-12);
}

TEST(HermitianBasisTest, OrthonormalAndSpanning) {
  const Algebra alg({2, 1, 3});
  const auto basis = HermitianBasis(alg);
  ASSERT_EQ(static_cast<int>(basis.size()), alg.dimension());
  for (size_t i = 0; i < basis.size(); ++i) {
    EXPECT_TRUE(basis[i].hermitian());
    for (size_t j = 0; j < basis.size(); ++j) {
      const Matrix prod = basis[i].ToDense().adjoint() * basis[j].ToDense();
      EXPECT_NEAR(prod.trace().real(), i == j ? 1.0 : 0.0, 1e-12);
    }
  }
  Rng rng(5);
  const Element x = GenHermitian(alg, 1.0, rng);
  const Eigen::VectorXd c = HermitianCoordinates(x);
  EXPECT_LT(Distance(FromHermitianCoordinates(alg, c), x), 1e-12);
  for (size_t i = 0; i < basis.size(); ++i) {
    const double inner =
        (basis[i].ToDense().adjoint() * x.ToDense()).trace().real();
    EXPECT_NEAR(c(static_cast<int>(i)), inner, 1e-12);
  }
}

TEST(UnitsTest, MatrixAndBlockUnits) {
  const Algebra alg({2, 1});
  const Element e01 = MatrixUnit(alg, 0, 0, 1);
  const Element e10 = MatrixUnit(alg, 0, 1, 0);
  EXPECT_LT(Distance(e01 * e10, MatrixUnit(alg, 0, 0, 0)), 1e-15);
  EXPECT_LT(Distance(BlockUnit(alg, 0) + BlockUnit(alg, 1), Unit(alg)), 1e-15);
  EXPECT_THROW(MatrixUnit(alg, 1, 0, 1), DomainError);
}

TEST(TolerancesTest, Validate) {
  Tolerances tol;
  EXPECT_NO_THROW(tol.Validate());
  tol.eq = 0.0;
  EXPECT_THROW(tol.Validate(), DomainError);
}

}  // namespace
}  // namespace loewner
