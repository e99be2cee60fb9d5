#include "loewner/effects.h"

#include <gtest/gtest.h>

#include "loewner/projections.h"
#include "test_util.h"

namespace loewner {
namespace {

using testing::Sym2;

// Largest c with c p <= x for p = diag(1, 0), by bisection on eigenvalues.
double MaxCoefficient(const Element& x) {
  const Element p = Sym2(1.0, 0.0, 0.0);
  double lo = 0.0, hi = 2.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (MinEigenvalue((x - mid * p).AsHermitian()) >= 0.0 ? lo : hi) = mid;
  }
  return lo;
}

TEST(EffectsTest, InEffect) {
  EXPECT_TRUE(InEffect(testing::Diag({0.0, 1.0})));
  EXPECT_FALSE(InEffect(testing::Diag({-0.1, 0.5})));
  EXPECT_FALSE(InEffect(testing::Diag({0.5, 1.1})));
}

TEST(EffectsTest, SupWithHalfOfProjection) {
  Rng rng(1);
  const Algebra alg({3, 2});
  const Element q = GenProjection(alg, rng);
  const Element sup = SupWithHalf(q);
  EXPECT_LT(Distance(sup, 0.5 * (Unit(alg) + q)), 1e-12);
  EXPECT_TRUE(Leq(q, sup));
  EXPECT_TRUE(Leq(Element::Scalar(alg, 0.5), sup));
  EXPECT_THROW(SupWithHalf(Element::Scalar(alg, 0.5)), DomainError);
}

TEST(EffectsTest, InfimumCoefficientMatchesBisection) {
  for (int k = 0; k <= 20; ++k) {
    const double t = k / 20.0;
    const double s = std::sqrt(t * (1 - t));
    const Element p = Sym2(1.0, 0.0, 0.0);
    const Element q = Sym2(t, s, 1 - t);
    const Element inf = InfPWithHalfSup(p, q);
    EXPECT_LT(Distance(inf, (1.0 / (2.0 - t)) * p), 1e-10) << "t=" << t;
    EXPECT_NEAR(MaxCoefficient(SupWithHalf(q)), 1.0 / (2.0 - t), 1e-9);
  }
}

TEST(EffectsTest, HomoCertificateAtHalf) {
  Rng rng(2);
  const HomoCertificate cert = MakeHomoCertificate(0.5, Algebra({1}), rng);
  EXPECT_NEAR(cert.coefficient, 2.0 / 3.0, 1e-15);
  EXPECT_TRUE(cert.Passed());
  EXPECT_GT(cert.samples, 0);
}

TEST(EffectsTest, HomoCertificateEndpointsAndLargerBase) {
  Rng rng(3);
  for (double t : {0.0, 1.0, 0.123}) {
    const HomoCertificate cert = MakeHomoCertificate(t, Algebra({2, 1}), rng);
    EXPECT_TRUE(cert.Passed()) << "t=" << t;
  }
  EXPECT_THROW(MakeHomoCertificate(1.5, Algebra({1}), rng), DomainError);
  EXPECT_THROW(MakeHomoCertificate(-0.1, Algebra({1}), rng), DomainError);
}

TEST(EffectsTest, OrthByOrderAgreesWithProduct) {
  Rng rng(4);
  const Algebra alg({3, 2, 1});
  int orthogonal = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Element p = GenProjection(alg, rng);
    Element q = GenProjection(alg, rng);
    if (trial % 2 == 0) q = ProjInf(q, Complement(p));
    const bool direct = OrthogonalDirect(p, q);
    orthogonal += direct;
    EXPECT_EQ(OrthByOrder(p, q), direct) << "trial " << trial;
  }
  EXPECT_GT(orthogonal, 10);
}

TEST(StaircaseTest, ResidualBoundsAndSpectralTerms) {
  Rng rng(5);
  const Algebra alg({4, 1});
  for (int n : {1, 2, 4, 16}) {
    const Element a = GenEffect(alg, rng);
    const Staircase s = SpectralStaircase(a, n);
    EXPECT_EQ(s.n, n);
    EXPECT_GE(MinEigenvalue(s.residual), -1e-12);
    EXPECT_LE(MaxEigenvalue(s.residual), 1.0 / n + 1e-12);
    EXPECT_LT(Distance(s.Sum() + s.residual, a), 1e-12);
    for (size_t i = 0; i < s.terms.size(); ++i) {
      EXPECT_TRUE(IsProjection(s.terms[i].p));
      EXPECT_GT(s.terms[i].t, 0.0);
      EXPECT_LE(s.terms[i].t, 1.0);
      // Spectral projections of a commute with a.
      EXPECT_LT(OpNorm(s.terms[i].p * a - a * s.terms[i].p), 1e-10);
      for (size_t j = i + 1; j < s.terms.size(); ++j) {
        EXPECT_LT(OpNorm(s.terms[i].p * s.terms[j].p), 1e-10);
      }
    }
  }
}

TEST(StaircaseTest, GridValuesAreExact) {
  const Element a = testing::Diag({0.0, 0.25, 0.5, 1.0});
  const Staircase s = SpectralStaircase(a, 4);
  EXPECT_LT(OpNorm(s.residual), 1e-15);
  EXPECT_THROW(SpectralStaircase(a, 0), DomainError);
  EXPECT_THROW(SpectralStaircase(testing::Diag({2.0}), 4), DomainError);
}

}  // namespace
}  // namespace loewner
