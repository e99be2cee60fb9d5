#include "loewner/canonical_maps.h"

#include <algorithm>
#include <cmath>

#include "loewner/effects.h"

namespace loewner {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void RequirePositiveInvertible(const Element& x, const char* what,
                               const Tolerances& tol) {
  RequireHermitian(x, what);
  if (!IsPositiveInvertible(x, tol)) {
    throw DomainError(std::string(what) +
                      ": parameter must be positive invertible");
  }
}

void RequireEffect(const Element& a, const char* what, const Tolerances& tol) {
  RequireHermitian(a, what);
  if (!InEffect(a, tol)) {
    throw DomainError(std::string(what) + ": input outside the effect algebra");
  }
}

void RequireAlpha(double alpha, const char* what) {
  if (!std::isfinite(alpha) || alpha == 0.0) {
    throw DomainError(std::string(what) + ": alpha must be a non-zero real");
  }
}

Matrix SolveGeneral(const Matrix& m, const Matrix& rhs, const char* what,
                    const Tolerances& tol) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() > 0 &&
      !(sv(sv.size() - 1) > tol.psd * std::max(1.0, sv(0)))) {
    throw DomainError(std::string(what) + ": singular intermediate");
  }
  return m.fullPivLu().solve(rhs);
}

Element ApplyNode(const OrderIsoExpr::Node& node, IntervalKind kind,
                  const Element& a, const Tolerances& tol);
Element InvertNode(const OrderIsoExpr::Node& node, IntervalKind kind,
                   const Element& y, const Tolerances& tol);

Element DirectFormulaInverse(const Element& T, const Element& y,
                             const Tolerances& tol) {
  RequirePositiveInvertible(T, "DirectT inverse", tol);
  RequireEffect(y, "DirectT inverse", tol);
  RequireSameAlgebra(T, y);
  const Element t_inv = Inverse(T, tol);
  const Element z = (t_inv * y * t_inv).AsHermitian(tol);
  std::vector<Matrix> blocks;
  for (int b = 0; b < T.algebra().num_blocks(); ++b) {
    const Matrix& tb = T.block(b);
    const int n = static_cast<int>(tb.rows());
    const Matrix tsq = tb * tb;
    const Matrix id = Matrix::Identity(n, n);
    const Matrix denom = id - (tsq - id) * z.block(b);
    // a = z denom^{-1}  <=>  denom^H a^H = z^H.
    const Matrix at = SolveGeneral(denom.adjoint(), z.block(b).adjoint(),
                                   "DirectT inverse", tol);
    blocks.push_back(at.adjoint());
  }
  return Element(T.algebra(), std::move(blocks), false).AsHermitian(tol);
}

Element ApplyNode(const OrderIsoExpr::Node& node, IntervalKind kind,
                  const Element& a, const Tolerances& tol) {
  return std::visit(
      Overloaded{
          [&](const OrderIsoExpr::PhiT& n) { return PhiTApply(n.T, a, tol); },
          [&](const OrderIsoExpr::PhiTInv& n) {
            return PhiTInvApply(n.T, a, tol);
          },
          [&](const OrderIsoExpr::PhiAlpha& n) {
            return PhiAlphaApply(n.alpha, a, tol);
          },
          [&](const OrderIsoExpr::PhiAlphaInv& n) {
            return PhiAlphaInvApply(n.alpha, a, tol);
          },
          [&](const OrderIsoExpr::Jordan& n) {
            return JordanApply(n.spec, a);
          },
          [&](const OrderIsoExpr::Congruence& n) {
            return CongruenceApply(n.b, a, tol);
          },
          [&](const OrderIsoExpr::Shift& n) { return ShiftApply(n.c, a); },
          [&](const OrderIsoExpr::FAlpha& n) {
            return FAlphaCalc(n.alpha, a, tol);
          },
          [&](const OrderIsoExpr::ExpIso& n) {
            return ExpIsoApply(n.spec, a);
          },
          [&](const OrderIsoExpr::DirectT& n) {
            return DirectFormulaApply(n.T, a, tol);
          },
          [&](const OrderIsoExpr::Compose& n) {
            Element x = a;
            IntervalKind k = kind;
            for (auto it = n.maps.rbegin(); it != n.maps.rend(); ++it) {
              x = ApplyNode(it->node(), k, x, tol);
              k = NodeTargetKind(it->node(), k);
            }
            return x;
          },
      },
      node);
}

Element InvertNode(const OrderIsoExpr::Node& node, IntervalKind kind,
                   const Element& y, const Tolerances& tol) {
  return std::visit(
      Overloaded{
          [&](const OrderIsoExpr::PhiT& n) {
            return PhiTInvApply(n.T, y, tol);
          },
          [&](const OrderIsoExpr::PhiTInv& n) {
            return PhiTApply(n.T, y, tol);
          },
          [&](const OrderIsoExpr::PhiAlpha& n) {
            return PhiAlphaInvApply(n.alpha, y, tol);
          },
          [&](const OrderIsoExpr::PhiAlphaInv& n) {
            return PhiAlphaApply(n.alpha, y, tol);
          },
          [&](const OrderIsoExpr::Jordan& n) {
            return n.spec.Inverse().Apply(y);
          },
          [&](const OrderIsoExpr::Congruence& n) {
            return CongruenceApply(Inverse(n.b, tol), y, tol);
          },
          [&](const OrderIsoExpr::Shift& n) { return ShiftApply(-n.c, y); },
          [&](const OrderIsoExpr::FAlpha& n) {
            return FAlphaCalc(FAlphaInverseParameter(n.alpha), y, tol);
          },
          [&](const OrderIsoExpr::ExpIso& n) {
            return Log(n.spec.Inverse().Apply(y), tol);
          },
          [&](const OrderIsoExpr::DirectT& n) {
            return DirectFormulaInverse(n.T, y, tol);
          },
          [&](const OrderIsoExpr::Compose& n) {
            // Source kinds of the factors, innermost last.
            std::vector<IntervalKind> kinds(n.maps.size());
            IntervalKind k = kind;
            for (size_t i = n.maps.size(); i-- > 0;) {
              kinds[i] = k;
              k = NodeTargetKind(n.maps[i].node(), k);
            }
            Element x = y;
            for (size_t i = 0; i < n.maps.size(); ++i) {
              x = InvertNode(n.maps[i].node(), kinds[i], x, tol);
            }
            return x;
          },
      },
      node);
}

std::optional<Algebra> NodeSourceAlgebra(const OrderIsoExpr::Node& node);
std::optional<Algebra> NodeTargetAlgebra(const OrderIsoExpr::Node& node);

std::optional<Algebra> NodeSourceAlgebra(const OrderIsoExpr::Node& node) {
  return std::visit(
      Overloaded{
          [](const OrderIsoExpr::PhiT& n) -> std::optional<Algebra> {
            return n.T.algebra();
          },
          [](const OrderIsoExpr::PhiTInv& n) -> std::optional<Algebra> {
            return n.T.algebra();
          },
          [](const OrderIsoExpr::PhiAlpha&) -> std::optional<Algebra> {
            return std::nullopt;
          },
          [](const OrderIsoExpr::PhiAlphaInv&) -> std::optional<Algebra> {
            return std::nullopt;
          },
          [](const OrderIsoExpr::Jordan& n) -> std::optional<Algebra> {
            return n.spec.source();
          },
          [](const OrderIsoExpr::Congruence& n) -> std::optional<Algebra> {
            return n.b.algebra();
          },
          [](const OrderIsoExpr::Shift& n) -> std::optional<Algebra> {
            return n.c.algebra();
          },
          [](const OrderIsoExpr::FAlpha&) -> std::optional<Algebra> {
            return std::nullopt;
          },
          [](const OrderIsoExpr::ExpIso& n) -> std::optional<Algebra> {
            return n.spec.source();
          },
          [](const OrderIsoExpr::DirectT& n) -> std::optional<Algebra> {
            return n.T.algebra();
          },
          [](const OrderIsoExpr::Compose& n) -> std::optional<Algebra> {
            for (auto it = n.maps.rbegin(); it != n.maps.rend(); ++it) {
              if (auto a = NodeSourceAlgebra(it->node())) return a;
            }
            return std::nullopt;
          },
      },
      node);
}

std::optional<Algebra> NodeTargetAlgebra(const OrderIsoExpr::Node& node) {
  if (const auto* j = std::get_if<OrderIsoExpr::Jordan>(&node)) {
    return j->spec.target();
  }
  if (const auto* e = std::get_if<OrderIsoExpr::ExpIso>(&node)) {
    return e->spec.target();
  }
  if (const auto* c = std::get_if<OrderIsoExpr::Compose>(&node)) {
    for (const auto& m : c->maps) {
      if (auto a = NodeTargetAlgebra(m.node())) return a;
    }
    return std::nullopt;
  }
  return NodeSourceAlgebra(node);
}

}  // namespace

std::string_view IntervalKindName(IntervalKind kind) {
  switch (kind) {
    case IntervalKind::kEffect:
      return "effect";
    case IntervalKind::kCone:
      return "cone";
    case IntervalKind::kConeStrict:
      return "cone_strict";
    case IntervalKind::kSa:
      return "sa";
  }
  return "unknown";
}

IntervalKind ParseIntervalKind(std::string_view name) {
  if (name == "effect") return IntervalKind::kEffect;
  if (name == "cone") return IntervalKind::kCone;
  if (name == "cone_strict") return IntervalKind::kConeStrict;
  if (name == "sa") return IntervalKind::kSa;
  throw DomainError("unknown interval kind '" + std::string(name) + "'");
}

bool InInterval(const Element& a, IntervalKind kind, const Tolerances& tol) {
  if (!a.hermitian()) return false;
  switch (kind) {
    case IntervalKind::kEffect:
      return InEffect(a, tol);
    case IntervalKind::kCone:
      return IsPositive(a, tol);
    case IntervalKind::kConeStrict:
      return IsPositiveInvertible(a, tol);
    case IntervalKind::kSa:
      return true;
  }
  return false;
}

JordanSpec::JordanSpec(Algebra source, Algebra target,
                       std::vector<int> permutation,
                       std::vector<Matrix> unitaries,
                       std::vector<bool> transpose, const Tolerances& tol)
    : source_(std::move(source)),
      target_(std::move(target)),
      permutation_(std::move(permutation)),
      unitaries_(std::move(unitaries)),
      transpose_(std::move(transpose)) {
  const int k = source_.num_blocks();
  if (target_.num_blocks() != k || static_cast<int>(permutation_.size()) != k ||
      static_cast<int>(unitaries_.size()) != k ||
      static_cast<int>(transpose_.size()) != k) {
    throw DomainError("Jordan spec: block counts do not match");
  }
  std::vector<bool> hit(k, false);
  for (int i = 0; i < k; ++i) {
    const int j = permutation_[i];
    if (j < 0 || j >= k || hit[j]) {
      throw DomainError("Jordan spec: block map is not a bijection");
    }
    hit[j] = true;
    const int n = source_.block_dim(i);
    if (target_.block_dim(j) != n) {
      throw DomainError(
          "Jordan spec: no Jordan isomorphism between blocks of different "
          "dimension");
    }
    const Matrix& u = unitaries_[i];
    if (u.rows() != n || u.cols() != n) {
      throw DomainError("Jordan spec: unitary has wrong shape");
    }
    if ((u.adjoint() * u - Matrix::Identity(n, n)).norm() > tol.eq) {
      throw DomainError("Jordan spec: u is not unitary");
    }
  }
}

JordanSpec JordanSpec::Identity(const Algebra& algebra) {
  std::vector<int> perm;
  std::vector<Matrix> us;
  for (int i = 0; i < algebra.num_blocks(); ++i) {
    perm.push_back(i);
    us.push_back(Matrix::Identity(algebra.block_dim(i), algebra.block_dim(i)));
  }
  return JordanSpec(algebra, algebra, perm, us,
                    std::vector<bool>(algebra.num_blocks(), false));
}

Element JordanSpec::Apply(const Element& a) const {
  if (!(a.algebra() == source_)) {
    throw AlgebraMismatchError("Jordan map: input not in source algebra " +
                               source_.ToString());
  }
  std::vector<Matrix> out(target_.num_blocks());
  for (int i = 0; i < source_.num_blocks(); ++i) {
    const Matrix& u = unitaries_[i];
    const Matrix x =
        transpose_[i] ? Matrix(a.block(i).transpose()) : a.block(i);
    out[permutation_[i]] = u * x * u.adjoint();
  }
  if (a.hermitian()) {
    for (auto& m : out) m = 0.5 * (m + m.adjoint());
  }
  return Element(target_, std::move(out), a.hermitian());
}

JordanSpec JordanSpec::Inverse() const {
  const int k = source_.num_blocks();
  std::vector<int> perm(k);
  std::vector<Matrix> us(k);
  std::vector<bool> tr(k);
  for (int i = 0; i < k; ++i) {
    const int j = permutation_[i];
    perm[j] = i;
    tr[j] = transpose_[i];
    us[j] = transpose_[i] ? Matrix(unitaries_[i].transpose())
                          : Matrix(unitaries_[i].adjoint());
  }
  return JordanSpec(target_, source_, perm, us, tr);
}

Element PhiTApply(const Element& T, const Element& a, const Tolerances& tol) {
  RequirePositiveInvertible(T, "PhiT", tol);
  RequireEffect(a, "PhiT", tol);
  RequireSameAlgebra(T, a);
  const Algebra& algebra = T.algebra();
  const Element k =
      FunCalc(T, [](double t) { return std::sqrt(1.0 + 1.0 / (t * t)); });
  const Element x = (Unit(algebra) + T * a * T).AsHermitian(tol);
  const Element inner = (Unit(algebra) - Inverse(x, tol)).AsHermitian(tol);
  return (k * inner * k).AsHermitian(tol);
}

Element PhiTInvApply(const Element& T, const Element& a,
                     const Tolerances& tol) {
  RequirePositiveInvertible(T, "PhiT inverse", tol);
  RequireEffect(a, "PhiT inverse", tol);
  RequireSameAlgebra(T, a);
  const Algebra& algebra = T.algebra();
  const Element k_inv =
      FunCalc(T, [](double t) { return 1.0 / std::sqrt(1.0 + 1.0 / (t * t)); });
  const Element t_inv = FunCalc(T, [](double t) { return 1.0 / t; });
  const Element y = (Unit(algebra) - k_inv * a * k_inv).AsHermitian(tol);
  const Element inner = (Inverse(y, tol) - Unit(algebra)).AsHermitian(tol);
  return (t_inv * inner * t_inv).AsHermitian(tol);
}

Element PhiAlphaApply(double alpha, const Element& a, const Tolerances& tol) {
  RequireAlpha(alpha, "PhiAlpha");
  RequireEffect(a, "PhiAlpha", tol);
  const double s = alpha * alpha;
  return FunCalc(a, [s](double t) { return (1.0 + s) * t / (1.0 + s * t); });
}

Element PhiAlphaInvApply(double alpha, const Element& a,
                         const Tolerances& tol) {
  RequireAlpha(alpha, "PhiAlpha inverse");
  RequireEffect(a, "PhiAlpha inverse", tol);
  const double s = alpha * alpha;
  return FunCalc(a, [s](double t) { return t / (1.0 + s * (1.0 - t)); });
}

double FAlphaScalar(double alpha, double t) {
  if (!(alpha < 1.0)) throw DomainError("f_alpha: alpha must be below 1");
  return t / (t * alpha + 1.0 - alpha);
}

Element FAlphaCalc(double alpha, const Element& a, const Tolerances& tol) {
  if (!(alpha < 1.0)) throw DomainError("f_alpha: alpha must be below 1");
  RequireEffect(a, "f_alpha", tol);
  return FunCalc(a, [alpha](double t) { return t / (t * alpha + 1.0 - alpha); });
}

double FAlphaInverseParameter(double alpha) {
  if (!(alpha < 1.0)) throw DomainError("f_alpha: alpha must be below 1");
  return -alpha / (1.0 - alpha);
}

Element JordanApply(const JordanSpec& spec, const Element& a) {
  return spec.Apply(a);
}

Element CongruenceApply(const Element& b, const Element& a,
                        const Tolerances& tol) {
  RequirePositiveInvertible(b, "congruence", tol);
  RequireHermitian(a, "congruence");
  RequireSameAlgebra(b, a);
  return (b * a * b).AsHermitian(tol);
}

Element ShiftApply(const Element& c, const Element& a) {
  RequireHermitian(c, "shift");
  RequireHermitian(a, "shift");
  return c + a;
}

Element ExpIsoApply(const JordanSpec& spec, const Element& a) {
  if (!spec.source().IsCommutative()) {
    throw DomainError("exp isomorphism needs a commutative source algebra");
  }
  RequireHermitian(a, "exp isomorphism");
  return spec.Apply(Exp(a));
}

Element DirectFormulaApply(const Element& T, const Element& a,
                           const Tolerances& tol) {
  RequirePositiveInvertible(T, "DirectT", tol);
  RequireEffect(a, "DirectT", tol);
  RequireSameAlgebra(T, a);
  std::vector<Matrix> blocks;
  for (int b = 0; b < T.algebra().num_blocks(); ++b) {
    const Matrix& tb = T.block(b);
    const Matrix& ab = a.block(b);
    const int n = static_cast<int>(tb.rows());
    const Matrix id = Matrix::Identity(n, n);
    const Matrix m = ab * (tb * tb - id) + id;
    blocks.push_back(tb * SolveGeneral(m, ab * tb, "DirectT", tol));
  }
  return Element(T.algebra(), std::move(blocks), false).AsHermitian(tol);
}

OrderIsoExpr::OrderIsoExpr(Node node, IntervalKind interval)
    : node_(std::move(node)), interval_(interval) {}

OrderIsoExpr OrderIsoExpr::WithInterval(IntervalKind kind) const {
  return OrderIsoExpr(node_, kind);
}

IntervalKind OrderIsoExpr::TargetInterval() const {
  return NodeTargetKind(node_, interval_);
}

std::optional<Algebra> OrderIsoExpr::SourceAlgebra() const {
  return NodeSourceAlgebra(node_);
}

std::optional<Algebra> OrderIsoExpr::TargetAlgebra() const {
  return NodeTargetAlgebra(node_);
}

IntervalKind NodeTargetKind(const OrderIsoExpr::Node& node,
                            IntervalKind source) {
  auto require = [&](bool ok, const char* what) {
    if (!ok) {
      throw DomainError(std::string(what) + " does not act on interval '" +
                        std::string(IntervalKindName(source)) + "'");
    }
  };
  return std::visit(
      Overloaded{
          [&](const OrderIsoExpr::Jordan&) { return source; },
          [&](const OrderIsoExpr::Congruence&) {
            require(source != IntervalKind::kEffect, "congruence");
            return source;
          },
          [&](const OrderIsoExpr::Shift&) {
            require(source == IntervalKind::kSa, "shift");
            return source;
          },
          [&](const OrderIsoExpr::ExpIso&) {
            require(source == IntervalKind::kSa, "exp isomorphism");
            return IntervalKind::kConeStrict;
          },
          [&](const OrderIsoExpr::Compose& n) {
            IntervalKind k = source;
            for (auto it = n.maps.rbegin(); it != n.maps.rend(); ++it) {
              k = NodeTargetKind(it->node(), k);
            }
            return k;
          },
          [&](const auto&) {
            require(source == IntervalKind::kEffect, "effect-algebra map");
            return source;
          },
      },
      node);
}

OrderIsoExpr Compose(std::vector<OrderIsoExpr> maps, IntervalKind interval) {
  return OrderIsoExpr(OrderIsoExpr::Compose{std::move(maps)}, interval);
}

Element Evaluate(const OrderIsoExpr& expr, const Element& a,
                 const Tolerances& tol) {
  const IntervalKind target = expr.TargetInterval();
  if (!InInterval(a, expr.interval(), tol)) {
    throw DomainError("evaluate: input outside the '" +
                      std::string(IntervalKindName(expr.interval())) +
                      "' interval");
  }
  Element out = ApplyNode(expr.node(), expr.interval(), a, tol);
  if (!InInterval(out, target, tol)) {
    throw CertificateError("evaluate: result outside the '" +
                           std::string(IntervalKindName(target)) +
                           "' interval");
  }
  return out;
}

ElementMap InverseMap(const OrderIsoExpr& expr, const Tolerances& tol) {
  const IntervalKind target = expr.TargetInterval();
  return [expr, target, tol](const Element& y) {
    if (!InInterval(y, target, tol)) {
      throw DomainError("inverse: input outside the target interval");
    }
    return InvertNode(expr.node(), expr.interval(), y, tol);
  };
}

ElementMap Perp(const OrderIsoExpr& expr, const Tolerances& tol) {
  if (expr.interval() != IntervalKind::kEffect ||
      expr.TargetInterval() != IntervalKind::kEffect) {
    throw DomainError("perp is defined for effect-algebra maps only");
  }
  return [expr, tol](const Element& a) {
    const Element one = Unit(a.algebra());
    const Element image = Evaluate(expr, (one - a).AsHermitian(tol), tol);
    return (Unit(image.algebra()) - image).AsHermitian(tol);
  };
}

}  // namespace loewner
