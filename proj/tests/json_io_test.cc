#include "loewner/json_io.h"

#include <gtest/gtest.h>

#include "loewner/harness.h"
#include "loewner/random.h"

namespace loewner {
namespace {

using E = OrderIsoExpr;

TEST(JsonDumpTest, FullPrecisionAndCompactRows) {
  const Json j = Json{{"x", 0.1}, {"v", Json::array({1, 2.5})}};
  const std::string text = DumpJson(j);
  EXPECT_NE(text.find("0.10000000000000001"), std::string::npos);
  EXPECT_NE(text.find("[1, 2.5]"), std::string::npos);
  EXPECT_EQ(ParseJson(text)["x"].get<double>(), 0.1);
  EXPECT_EQ(DumpJson(Json{{"a", 1}}, -1), "{\"a\":1}");
}

TEST(JsonDumpTest, ParseErrors) {
  EXPECT_THROW(ParseJson("{"), ParseError);
  EXPECT_THROW(ReadJsonFile("/nonexistent/file.json"), ParseError);
}

TEST(JsonAlgebraTest, RoundTripAndValidation) {
  const Algebra alg({2, 1});
  EXPECT_EQ(AlgebraFromJson(ToJson(alg)), alg);
  EXPECT_THROW(AlgebraFromJson(ParseJson(R"({"blocks":[0]})")), Error);
  EXPECT_THROW(AlgebraFromJson(ParseJson(R"({"sizes":[2]})")), ParseError);
}

TEST(JsonElementTest, RoundTripIsExact) {
  Rng rng(1);
  const Element x = GenHermitian(Algebra({3, 2}), 1.0, rng);
  const Element y = ElementFromJson(ParseJson(DumpJson(ToJson(x))));
  EXPECT_EQ(y.algebra(), x.algebra());
  EXPECT_TRUE(y.hermitian());
  for (int b = 0; b < 2; ++b) EXPECT_TRUE(y.block(b) == x.block(b));
}

TEST(JsonElementTest, BareNumbersAndErrors) {
  const Element x = ElementFromJson(ParseJson(
      R"({"blocks":[[[0.5,[0,1]],[[0,-1],0.25]]],"hermitian":true})"));
  EXPECT_EQ(x.block(0)(0, 1), Complex(0, 1));
  EXPECT_EQ(x.block(0)(1, 1), Complex(0.25, 0));
  // Not hermitian but flagged so.
  EXPECT_THROW(ElementFromJson(ParseJson(
                   R"({"blocks":[[[0,1],[0,0]]],"hermitian":true})")),
               ParseError);
  // Ragged rows.
  EXPECT_THROW(ElementFromJson(ParseJson(R"({"blocks":[[[0,1],[0]]]})")),
               ParseError);
  EXPECT_THROW(ElementFromJson(ParseJson(R"({"blocks":"x"})")), ParseError);
}

TEST(JsonJordanTest, RoundTrip) {
  Rng rng(2);
  const JordanSpec spec = GenJordanSpec(Algebra({2, 1, 2}), rng);
  const JordanSpec back = JordanSpecFromJson(ParseJson(DumpJson(ToJson(spec))));
  EXPECT_EQ(back.permutation(), spec.permutation());
  EXPECT_EQ(back.transpose(), spec.transpose());
  const Element x = GenHermitian(spec.source(), 1.0, rng);
  EXPECT_LT(Distance(back.Apply(x), spec.Apply(x)), 1e-15);
}

TEST(JsonJordanTest, DefaultsToIdentity) {
  const JordanSpec spec =
      JordanSpecFromJson(ParseJson(R"({"source":{"blocks":[2,1]}})"));
  EXPECT_EQ(spec.permutation(), (std::vector<int>{0, 1}));
  EXPECT_EQ(spec.target(), Algebra({2, 1}));
}

TEST(JsonExprTest, RoundTripEveryInterval) {
  Rng rng(3);
  const Algebra alg({2, 1});
  for (auto kind : {IntervalKind::kEffect, IntervalKind::kCone,
                    IntervalKind::kConeStrict, IntervalKind::kSa}) {
    const OrderIsoExpr expr = GenOrderIsoExpr(alg, kind, rng);
    const OrderIsoExpr back = ExprFromJson(ParseJson(DumpJson(ToJson(expr))));
    EXPECT_EQ(back.interval(), kind);
    EXPECT_EQ(DumpJson(ToJson(back)), DumpJson(ToJson(expr)));
    const Element a = SampleInterval(alg, kind, rng);
    EXPECT_LT(Distance(Evaluate(back, a), Evaluate(expr, a)), 1e-15);
  }
}

TEST(JsonExprTest, IntervalDefaultsAndErrors) {
  const OrderIsoExpr cong = ExprFromJson(ParseJson(
      R"({"kind":"congruence","b":{"blocks":[[[2]]],"hermitian":true}})"));
  EXPECT_EQ(cong.interval(), IntervalKind::kCone);
  const OrderIsoExpr shift = ExprFromJson(ParseJson(
      R"({"kind":"shift","c":{"blocks":[[[2]]],"hermitian":true}})"));
  EXPECT_EQ(shift.interval(), IntervalKind::kSa);
  EXPECT_EQ(ExprFromJson(ParseJson(R"({"kind":"phi_alpha","alpha":1})"))
                .interval(),
            IntervalKind::kEffect);
  EXPECT_THROW(ExprFromJson(ParseJson(R"({"kind":"rotate"})")), ParseError);
  EXPECT_THROW(ExprFromJson(ParseJson(R"({"kind":"phi_alpha"})")), ParseError);
}

TEST(JsonCertificateTest, HomoCertificateFields) {
  Rng rng(4);
  const Json j = ToJson(MakeHomoCertificate(0.5, Algebra({1}), rng));
  EXPECT_NEAR(j["coefficient"].get<double>(), 2.0 / 3.0, 1e-15);
  EXPECT_TRUE(j["passed"].get<bool>());
}

}  // namespace
}  // namespace loewner
