// Canonical order isomorphisms between operator intervals and a composable
// expression tree over them.
//
// Interval kinds:
//   kEffect     [0, 1]
//   kCone       positive elements
//   kConeStrict positive invertible elements
//   kSa         all self-adjoint elements

#ifndef LOEWNER_CANONICAL_MAPS_H_
#define LOEWNER_CANONICAL_MAPS_H_

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "loewner/algebra.h"

namespace loewner {

enum class IntervalKind { kEffect, kCone, kConeStrict, kSa };

std::string_view IntervalKindName(IntervalKind kind);
// Accepts "effect", "cone", "cone_strict", "sa"; DomainError otherwise.
IntervalKind ParseIntervalKind(std::string_view name);

bool InInterval(const Element& a, IntervalKind kind,
                const Tolerances& tol = {});

using ElementMap = std::function<Element(const Element&)>;

// Jordan *-isomorphism between finite direct sums of matrix blocks:
//   J(a)_{perm[i]} = u_i tau_i(a_i) u_i^H,  tau_i in {identity, transpose}.
class JordanSpec {
 public:
  // Throws DomainError unless perm is a bijection with matching block
  // dimensions and every u_i is unitary within tol.eq.
  JordanSpec(Algebra source, Algebra target, std::vector<int> permutation,
             std::vector<Matrix> unitaries, std::vector<bool> transpose,
             const Tolerances& tol = {});

  static JordanSpec Identity(const Algebra& algebra);

  const Algebra& source() const { return source_; }
  const Algebra& target() const { return target_; }
  const std::vector<int>& permutation() const { return permutation_; }
  const std::vector<Matrix>& unitaries() const { return unitaries_; }
  const std::vector<bool>& transpose() const { return transpose_; }

  Element Apply(const Element& a) const;
  JordanSpec Inverse() const;

 private:
  Algebra source_;
  Algebra target_;
  std::vector<int> permutation_;
  std::vector<Matrix> unitaries_;
  std::vector<bool> transpose_;
};

// (1 + T^-2)^{1/2} (1 - (1 + T a T)^{-1}) (1 + T^-2)^{1/2}.
Element PhiTApply(const Element& T, const Element& a,
                  const Tolerances& tol = {});
// T^-1 ((1 - K a K)^{-1} - 1) T^-1 with K = (1 + T^-2)^{-1/2}.
Element PhiTInvApply(const Element& T, const Element& a,
                     const Tolerances& tol = {});
// (1 + alpha^2) a (1 + alpha^2 a)^{-1}.
Element PhiAlphaApply(double alpha, const Element& a,
                      const Tolerances& tol = {});
// a (1 + alpha^2 (1 - a))^{-1}.
Element PhiAlphaInvApply(double alpha, const Element& a,
                         const Tolerances& tol = {});
// t / (t alpha + 1 - alpha), alpha < 1.
double FAlphaScalar(double alpha, double t);
Element FAlphaCalc(double alpha, const Element& a, const Tolerances& tol = {});
// Parameter of the inverse map: f_alpha^{-1} = f_{-alpha / (1 - alpha)}.
double FAlphaInverseParameter(double alpha);
Element JordanApply(const JordanSpec& spec, const Element& a);
// b a b for positive invertible b.
Element CongruenceApply(const Element& b, const Element& a,
                        const Tolerances& tol = {});
Element ShiftApply(const Element& c, const Element& a);
// J(exp(a)); the source algebra must be commutative.
Element ExpIsoApply(const JordanSpec& spec, const Element& a);
// T (a (T^2 - 1) + 1)^{-1} a T.
Element DirectFormulaApply(const Element& T, const Element& a,
                           const Tolerances& tol = {});

class OrderIsoExpr {
 public:
  struct PhiT { Element T; };
  struct PhiTInv { Element T; };
  struct PhiAlpha { double alpha; };
  struct PhiAlphaInv { double alpha; };
  struct Jordan { JordanSpec spec; };
  struct Congruence { Element b; };
  struct Shift { Element c; };
  struct FAlpha { double alpha; };
  struct ExpIso { JordanSpec spec; };
  struct DirectT { Element T; };
  // Mathematical composition order: maps[0] o maps[1] o ... ; the last map
  // is applied first.
  struct Compose { std::vector<OrderIsoExpr> maps; };

  using Node = std::variant<PhiT, PhiTInv, PhiAlpha, PhiAlphaInv, Jordan,
                            Congruence, Shift, FAlpha, ExpIso, DirectT,
                            Compose>;

  // `interval` is the declared source interval kind.
  explicit OrderIsoExpr(Node node,
                        IntervalKind interval = IntervalKind::kEffect);

  const Node& node() const { return node_; }
  IntervalKind interval() const { return interval_; }
  OrderIsoExpr WithInterval(IntervalKind kind) const;

  // Target interval kind; DomainError when kinds do not chain.
  IntervalKind TargetInterval() const;
  // Algebras inferred from the parameters of the innermost / outermost
  // nodes that carry one. Empty for parameter-free chains (PhiAlpha only).
  std::optional<Algebra> SourceAlgebra() const;
  std::optional<Algebra> TargetAlgebra() const;

 private:
  Node node_;
  IntervalKind interval_;
};

OrderIsoExpr Compose(std::vector<OrderIsoExpr> maps,
                     IntervalKind interval = IntervalKind::kEffect);

// Checks source membership, applies, checks target membership
// (CertificateError when the result leaves the target interval).
Element Evaluate(const OrderIsoExpr& expr, const Element& a,
                 const Tolerances& tol = {});
// Inverse map of an expression, target interval back to source interval.
ElementMap InverseMap(const OrderIsoExpr& expr, const Tolerances& tol = {});
// a -> 1 - Phi(1 - a) for an effect-kind expression.
ElementMap Perp(const OrderIsoExpr& expr, const Tolerances& tol = {});

// Kind transition of a single constructor or a composition.
IntervalKind NodeTargetKind(const OrderIsoExpr::Node& node,
                            IntervalKind source);

}  // namespace loewner

#endif  // LOEWNER_CANONICAL_MAPS_H_
