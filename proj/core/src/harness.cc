#include "loewner/harness.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

#include "loewner/effects.h"
#include "loewner/projections.h"

namespace loewner {
namespace {

using E = OrderIsoExpr;

const std::vector<std::vector<int>> kNonCommutativePool = {
    {2}, {3}, {2, 2}, {1, 2}, {2, 3}};

Algebra PickAlgebra(const TrialConfig& config,
                    const std::vector<std::vector<int>>& fallback, int index) {
  const auto& pool = config.algebra_pool.empty() ? fallback : config.algebra_pool;
  return Algebra(pool[static_cast<size_t>(index) % pool.size()]);
}

// Projection pair; with probability 1/2 the pair is built orthogonal from a
// common frame.
std::pair<Element, Element> GenProjectionPair(const Algebra& algebra,
                                              Rng& rng) {
  if (rng.Uniform() < 0.5) {
    return {GenProjection(algebra, rng), GenProjection(algebra, rng)};
  }
  std::vector<Matrix> p, q;
  for (int n : algebra.blocks()) {
    const Matrix u = RandomUnitary(n, rng);
    const int r1 = rng.UniformInt(n + 1);
    const int r2 = rng.UniformInt(n - r1 + 1);
    p.push_back(u.leftCols(r1) * u.leftCols(r1).adjoint());
    q.push_back(u.middleCols(r1, r2) * u.middleCols(r1, r2).adjoint());
  }
  return {Element(algebra, std::move(p), true),
          Element(algebra, std::move(q), true)};
}

double BitsDiffer(const Element& a, const Element& b) {
  if (!(a.algebra() == b.algebra())) return 1.0;
  for (int k = 0; k < a.algebra().num_blocks(); ++k) {
    if (a.block(k) != b.block(k)) return 1.0;
  }
  return 0.0;
}

double MaxRelative(const Element& a, const Element& b) {
  return Distance(a, b) / std::max(1.0, OpNorm(b));
}

// Grid bounds used by the commutative decomposition for an interval kind.
std::pair<double, double> GridRange(IntervalKind kind, const CommOptions& o) {
  switch (kind) {
    case IntervalKind::kEffect:
      return {0.0, 1.0};
    case IntervalKind::kCone:
      return {0.0, o.range};
    default:
      return {-o.range, o.range};
  }
}

IntervalKind CycleKind(int index) {
  static const IntervalKind kinds[] = {IntervalKind::kEffect,
                                       IntervalKind::kCone, IntervalKind::kSa};
  return kinds[index % 3];
}

struct SuiteDef {
  std::string name;
  std::string statement;
  std::map<std::string, double> thresholds;
};

// --- suites -----------------------------------------------------------------

void HomoTrial(const TrialConfig& config, int index, Rng& rng,
               TrialResult& out) {
  const double t = index <= 100 ? index / 100.0 : rng.Uniform();
  const Algebra base = PickAlgebra(config, {{1}, {2}, {1, 1}}, index);
  const HomoCertificate cert = MakeHomoCertificate(t, base, rng, 16, config.tol);
  out.metrics["t"] = t;
  out.metrics["residual_lower"] = cert.residual_lower;
  out.metrics["residual_factor"] = cert.residual_factor;
  out.metrics["maximality_residual"] = cert.maximality_residual;

  // Largest c with c p <= q + q'/2, by bisection on the 2x2 model.
  const double s = std::sqrt(t * (1.0 - t));
  Eigen::Matrix2d sup;
  sup << 0.5 + 0.5 * t, 0.5 * s, 0.5 * s, 1.0 - 0.5 * t;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    Eigen::Matrix2d gap = sup;
    gap(0, 0) -= mid;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(gap);
    (es.eigenvalues()(0) >= 0.0 ? lo : hi) = mid;
  }
  out.metrics["oracle_error"] = std::abs(lo - 1.0 / (2.0 - t));
}

void OrthTrial(const TrialConfig& config, int index, Rng& rng,
               TrialResult& out) {
  const Algebra algebra = PickAlgebra(config, {{4, 2, 1}, {2, 2}}, index);
  const auto [p, q] = GenProjectionPair(algebra, rng);
  const bool by_order = OrthByOrder(p, q, config.tol);
  const bool direct = OrthogonalDirect(p, q, config.tol);
  out.metrics["orthogonal"] = direct ? 1.0 : 0.0;
  out.metrics["disagreement"] = by_order == direct ? 0.0 : 1.0;
}

void OrthoIsoTrial(const TrialConfig& config, int index, Rng& rng,
                   TrialResult& out) {
  const Algebra algebra = PickAlgebra(config, kNonCommutativePool, index);
  const JordanSpec spec = GenJordanSpec(algebra, rng);
  const double alpha = rng.Uniform(0.3, 3.0);
  const OrderIsoExpr expr = Compose(
      {E(E::PhiAlphaInv{alpha}),
       E(E::PhiT{Element::Scalar(spec.target(), alpha)}), E(E::Jordan{spec})});
  const Tolerances& tol = config.tol;
  out.metrics["half_residual"] =
      Distance(Evaluate(expr, Element::Scalar(algebra, 0.5), tol),
               Element::Scalar(spec.target(), 0.5));
  double proj = 0.0;
  double violations = 0.0;
  for (int k = 0; k < 300; ++k) {
    const auto [p, q] = GenProjectionPair(algebra, rng);
    const Element fp = Evaluate(expr, p, tol);
    const Element fq = Evaluate(expr, q, tol);
    proj = std::max({proj, OpNorm(fp * fp - fp), OpNorm(fq * fq - fq)});
    if (OrthogonalDirect(p, q, tol) != OrthogonalDirect(fp, fq, tol)) {
      violations += 1.0;
    }
  }
  out.metrics["projection_residual"] = proj;
  out.metrics["violations"] = violations;
}

void StaircaseTrial(const TrialConfig& config, int index, Rng& rng,
                    TrialResult& out) {
  const Algebra algebra =
      PickAlgebra(config, {{2}, {3}, {1, 2}, {2, 3}, {4}}, index);
  const Element a = GenEffect(algebra, rng);
  double excess = 0.0;
  double monotone = 0.0;
  std::optional<Element> previous;
  for (int n : {2, 4, 16}) {
    const Staircase s = SpectralStaircase(a, n, config.tol);
    excess = std::max({excess, -MinEigenvalue(s.residual),
                       MaxEigenvalue(s.residual) - 1.0 / n});
    const Element sum = s.Sum().AsHermitian();
    if (previous) {
      monotone = std::max(monotone, -MinEigenvalue((sum - *previous).AsHermitian()));
    }
    previous = sum;
  }
  out.metrics["residual_excess"] = std::max(0.0, excess);
  out.metrics["refinement_violation"] = std::max(0.0, monotone);
}

void PhiFamilyTrial(const TrialConfig& config, int index, Rng& rng,
                    TrialResult& out) {
  const Tolerances& tol = config.tol;
  const Algebra algebra =
      PickAlgebra(config, {{1}, {2}, {3}, {1, 2}, {2, 2}}, index);
  const Element T = GenPosInvertible(algebra, 20.0, rng, 3.0);
  const double alpha = rng.Uniform(0.2, 3.0);
  const Element a = GenEffect(algebra, rng);
  out.metrics["phi_T_roundtrip"] =
      std::max(Distance(PhiTApply(T, PhiTInvApply(T, a, tol), tol), a),
               Distance(PhiTInvApply(T, PhiTApply(T, a, tol), tol), a));
  out.metrics["phi_alpha_roundtrip"] = std::max(
      Distance(PhiAlphaApply(alpha, PhiAlphaInvApply(alpha, a, tol), tol), a),
      Distance(PhiAlphaInvApply(alpha, PhiAlphaApply(alpha, a, tol), tol), a));

  const Algebra scalar({1});
  auto value = [](const Element& x) { return x.block(0)(0, 0).real(); };
  const Element half = Element::Scalar(scalar, 0.5);
  const double tau = rng.Uniform(0.1, 3.0);
  const Element ts = Element::Scalar(scalar, tau);
  const double t2 = tau * tau;
  double closed = std::abs(value(PhiTApply(ts, half, tol)) -
                           (1.0 + t2) / (2.0 + t2));
  const int n = 3 + index % 8;
  closed = std::max(closed,
                    std::abs(value(PhiTInvApply(
                                 Element::Scalar(scalar, std::sqrt(n - 2.0)),
                                 half, tol)) -
                             1.0 / n));
  const double composite = value(
      PhiAlphaInvApply(alpha, PhiTApply(ts, half, tol), tol));
  closed = std::max(closed,
                    std::abs(composite -
                             (1.0 - 1.0 / (1.0 + (t2 + 1.0) / (1.0 + alpha * alpha)))));
  for (int k = 0; k <= 10; ++k) {
    const double s = k / 10.0;
    const Element x = Element::Scalar(scalar, s);
    closed = std::max(closed, std::abs(value(PhiTApply(ts, x, tol)) -
                                       s * (1.0 + t2) / (1.0 + s * t2)));
    closed = std::max(closed, std::abs(value(PhiTInvApply(ts, x, tol)) -
                                       s / ((1.0 - s) * t2 + 1.0)));
  }
  out.metrics["scalar_closed_form"] = closed;
  out.metrics["phi_T_scalar_vs_alpha"] =
      Distance(PhiTApply(Element::Scalar(algebra, alpha), a, tol),
               PhiAlphaApply(alpha, a, tol));
  const double direct = value(DirectFormulaApply(
      Element::Scalar(scalar, std::sqrt(3.0)), half, tol));
  out.metrics["direct_formula_scalar"] = std::abs(direct - 0.75);
}

OrderIsoReport CanonicalOrderCheck(const OrderIsoExpr& expr,
                                   const Algebra& algebra, Rng& rng,
                                   const Tolerances& tol) {
  return CheckOrderIso(BlackBoxFromExpr(expr, algebra, tol), 10, rng, tol);
}

void GeneralFormulaTrial(const TrialConfig& config, int index, Rng& rng,
                         TrialResult& out) {
  const Algebra algebra = PickAlgebra(config, kNonCommutativePool, index);
  const OrderIsoExpr expr = GenOrderIsoExpr(algebra, IntervalKind::kEffect, rng);
  const BlackBoxMap phi = BlackBoxFromExpr(expr, algebra, config.tol);
  DecomposeOptions options;
  options.validation_samples = 100;
  options.seed = rng.NextU64();
  options.tol = config.tol;
  const EffectDecomposition d = DecomposeEffectIso(phi, options);
  out.metrics["residual"] = d.residual;
  out.metrics["linearity_residual"] = d.J.linearity_residual;
  out.metrics["jordan_residual"] = d.J.jordan_residual;
  double fresh = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Element a = GenEffect(algebra, rng);
    fresh = std::max(fresh, Distance(d.Reconstruct(a, config.tol), phi(a)));
  }
  out.metrics["fresh_residual"] = fresh;
  out.metrics["order_violations"] =
      CanonicalOrderCheck(expr, algebra, rng, config.tol).violations;
}

void ConeTrial(const TrialConfig& config, int index, Rng& rng,
               TrialResult& out) {
  const Algebra algebra = PickAlgebra(config, kNonCommutativePool, index);
  const IntervalKind kind =
      index % 2 == 0 ? IntervalKind::kCone : IntervalKind::kConeStrict;
  const OrderIsoExpr expr = GenOrderIsoExpr(algebra, kind, rng);
  DecomposeOptions options;
  options.seed = rng.NextU64();
  options.tol = config.tol;
  const ConeDecomposition d =
      DecomposeConeIso(BlackBoxFromExpr(expr, algebra, config.tol), options);
  out.metrics["b_square_residual"] = d.b_square_residual;
  out.metrics["residual"] = d.residual;
  out.metrics["linearity_residual"] = d.J.linearity_residual;
  out.metrics["jordan_residual"] = d.J.jordan_residual;
  out.metrics["order_violations"] =
      CanonicalOrderCheck(expr, algebra, rng, config.tol).violations;
}

void SaTrial(const TrialConfig& config, int index, Rng& rng, TrialResult& out) {
  const Algebra algebra = PickAlgebra(config, kNonCommutativePool, index);
  const OrderIsoExpr expr = GenOrderIsoExpr(algebra, IntervalKind::kSa, rng);
  const BlackBoxMap phi = BlackBoxFromExpr(expr, algebra, config.tol);
  DecomposeOptions options;
  options.seed = rng.NextU64();
  options.tol = config.tol;
  const SaDecomposition d = DecomposeSaIso(phi, options);
  out.metrics["c_bits_differ"] = BitsDiffer(d.c, phi(Element::Zero(algebra)));
  out.metrics["b_square_residual"] = d.b_square_residual;
  out.metrics["residual"] = d.residual;
  out.metrics["linearity_residual"] = d.J.linearity_residual;
  out.metrics["jordan_residual"] = d.J.jordan_residual;
  out.metrics["order_violations"] =
      CanonicalOrderCheck(expr, algebra, rng, config.tol).violations;
}

void CommutativeTrial(const TrialConfig& config, int index, Rng& rng,
                      TrialResult& out) {
  const int n = 2 + rng.UniformInt(9);
  const IntervalKind kind = CycleKind(index);
  CommOptions options;
  options.seed = rng.NextU64();
  options.tol = config.tol;
  const ProductMap gen = GenProductMap(n, kind, options, rng);
  const Algebra algebra(std::vector<int>(n, 1));
  const BlackBoxMap phi{algebra, algebra, kind, kind, gen, {}};
  const CommDecomposition d = DecomposeCommutative(phi, options);
  out.metrics["points"] = n;
  out.metrics["mu_mismatch"] = d.mu == gen.mu ? 0.0 : 1.0;
  double knots = 0.0;
  for (int y = 0; y < n; ++y) {
    for (size_t k = 0; k < d.grid.size(); ++k) {
      knots = std::max(knots, std::abs(d.tables[y][k] - gen.f[y](d.grid[k])));
    }
  }
  out.metrics["knot_error"] = knots;
  out.metrics["residual"] = d.residual;
}

void CentralSplitTrial(const TrialConfig& config, int index, Rng& rng,
                       TrialResult& out) {
  const Algebra algebra = PickAlgebra(config, {{1, 2}, {1, 1, 3}}, index);
  const IntervalKind kind = CycleKind(index);
  std::vector<int> ab, other;
  for (int b = 0; b < algebra.num_blocks(); ++b) {
    (algebra.block_dim(b) == 1 ? ab : other).push_back(b);
  }
  const ProductMap scramble =
      GenProductMap(static_cast<int>(ab.size()), kind, CommOptions{}, rng);
  const Algebra rest = SubAlgebra(algebra, other);
  // Same-size blocks only, so the target keeps the source layout.
  const OrderIsoExpr expr = GenOrderIsoExpr(rest, kind, rng);
  const Tolerances tol = config.tol;
  ElementMap forward = [=](const Element& a) {
    const Element x = scramble(RestrictBlocks(a, ab));
    const Element y = Evaluate(expr, RestrictBlocks(a, other), tol);
    std::vector<Matrix> blocks(algebra.num_blocks());
    for (size_t k = 0; k < ab.size(); ++k) blocks[ab[k]] = x.block(k);
    for (size_t k = 0; k < other.size(); ++k) {
      blocks[other[k]] = y.block(static_cast<int>(k));
    }
    return Element(algebra, std::move(blocks), true, tol);
  };
  const BlackBoxMap phi{algebra, algebra, kind, kind, forward, {}};
  SplitOptions options;
  options.seed = rng.NextU64();
  options.tol = tol;
  const CentralSplit split = SplitCentral(phi, options);
  out.metrics["well_definedness_residual"] = split.well_definedness_residual;
  double fa = 0.0, fn = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Element x = SampleInterval(split.abelian->source, kind, rng);
    fa = std::max(fa, MaxRelative((*split.abelian)(x), scramble(x)));
    const Element y = SampleInterval(rest, kind, rng);
    fn = std::max(fn, MaxRelative((*split.nonabelian)(y), Evaluate(expr, y, tol)));
  }
  out.metrics["abelian_factor_residual"] = fa;
  out.metrics["nonabelian_factor_residual"] = fn;
}

void ExpIsoTrial(const TrialConfig& config, int index, Rng& rng,
                 TrialResult& out) {
  (void)index;
  const int n = 2 + rng.UniformInt(5);
  const Algebra algebra(std::vector<int>(n, 1));
  const JordanSpec spec = GenJordanSpec(algebra, rng);
  const OrderIsoExpr expr(E::ExpIso{spec}, IntervalKind::kSa);
  const BlackBoxMap phi = BlackBoxFromExpr(expr, algebra, config.tol);
  CommOptions options;
  options.seed = rng.NextU64();
  options.tol = config.tol;
  const CommDecomposition d = DecomposeCommutative(phi, options);
  std::vector<int> mu(n);
  for (int i = 0; i < n; ++i) mu[spec.permutation()[i]] = i;
  out.metrics["mu_mismatch"] = d.mu == mu ? 0.0 : 1.0;
  double knots = 0.0;
  for (int y = 0; y < n; ++y) {
    for (size_t k = 0; k < d.grid.size(); ++k) {
      const double e = std::exp(d.grid[k]);
      knots = std::max(knots, std::abs(d.tables[y][k] - e) / e);
    }
  }
  out.metrics["knot_error"] = knots;
  out.metrics["order_violations"] =
      CheckOrderIso(phi, 10, rng, config.tol).violations;
}

struct Suite {
  SuiteDef def;
  std::function<void(const TrialConfig&, int, Rng&, TrialResult&)> trial;
  int extra_trials = 0;
};

const std::vector<Suite>& Suites() {
  static const std::vector<Suite> suites = {
      {{"homo",
        "for projections p, q with q = [[t, s], [s, 1-t]] relative to p, the "
        "infimum of p and q + q'/2 in the effect algebra is p/(2-t)",
        {{"residual_lower", 1e-9},
         {"residual_factor", 1e-9},
         {"maximality_residual", 1e-9},
         {"oracle_error", 1e-8}}},
       HomoTrial,
       101},
      {{"orth",
        "projections p, q satisfy pq = 0 iff the effect infimum of p and "
        "q + q'/2 equals p/2",
        {{"disagreement", 0.0}}},
       OrthTrial},
      {{"orthoiso",
        "an effect order isomorphism fixing 1/2 maps projections to "
        "projections and preserves orthogonality in both directions",
        {{"half_residual", 1e-8},
         {"projection_residual", 1e-8},
         {"violations", 0.0}}},
       OrthoIsoTrial},
      {{"staircase",
        "every effect a admits sum t_i p_i with 0 <= a - sum <= 1/n, "
        "increasing under dyadic refinement",
        {{"residual_excess", 1e-9}, {"refinement_violation", 1e-9}}},
       StaircaseTrial},
      {{"phi_family",
        "Phi_T and Phi_alpha are order automorphisms of the effect algebra "
        "with the stated inverses and scalar values",
        {{"phi_T_roundtrip", 1e-8},
         {"phi_alpha_roundtrip", 1e-8},
         {"scalar_closed_form", 1e-12},
         {"phi_T_scalar_vs_alpha", 1e-10},
         {"direct_formula_scalar", 1e-12}}},
       PhiFamilyTrial},
      {{"general_formula",
        "every effect order isomorphism factors as Phi_alpha^-1 o Phi_T o J "
        "with J a Jordan *-isomorphism",
        {{"residual", 1e-6},
         {"fresh_residual", 1e-6},
         {"linearity_residual", 1e-7},
         {"jordan_residual", 1e-7},
         {"order_violations", 0.0}}},
       GeneralFormulaTrial},
      {{"cone",
        "every order isomorphism between positive (invertible) cones is "
        "a -> b J(a) b with b^2 = Phi(1)",
        {{"b_square_residual", 1e-8},
         {"residual", 1e-6},
         {"linearity_residual", 1e-7},
         {"jordan_residual", 1e-7},
         {"order_violations", 0.0}}},
       ConeTrial},
      {{"sa",
        "every order isomorphism between self-adjoint parts is "
        "a -> b J(a) b + c with c = Phi(0)",
        {{"c_bits_differ", 0.0},
         {"b_square_residual", 1e-8},
         {"residual", 1e-6},
         {"linearity_residual", 1e-7},
         {"jordan_residual", 1e-7},
         {"order_violations", 0.0}}},
       SaTrial},
      {{"commutative",
        "order isomorphisms between intervals of C(X) for finite X are "
        "a -> (f_y(a(mu(y))))_y with increasing bijections f_y",
        {{"mu_mismatch", 0.0}, {"knot_error", 1e-9}, {"residual", 1e-6}}},
       CommutativeTrial},
      {{"central_split",
        "an order isomorphism splits as Phi_1 + Phi_-1 along the abelian "
        "central projections of source and target",
        {{"well_definedness_residual", 1e-8},
         {"abelian_factor_residual", 1e-6},
         {"nonabelian_factor_residual", 1e-6}}},
       CentralSplitTrial},
      {{"exp_iso",
        "a -> J(exp a) is an order isomorphism from the self-adjoint part of "
        "a commutative algebra onto its strictly positive elements",
        {{"mu_mismatch", 0.0}, {"knot_error", 1e-9}, {"order_violations", 0.0}}},
       ExpIsoTrial},
  };
  return suites;
}

double Quantile(const std::vector<double>& sorted, double p) {
  const size_t n = sorted.size();
  size_t rank = static_cast<size_t>(std::ceil(p * static_cast<double>(n)));
  rank = std::clamp<size_t>(rank, 1, n);
  return sorted[rank - 1];
}

}  // namespace

JordanSpec GenJordanSpec(const Algebra& source, const Algebra& target,
                         Rng& rng) {
  if (source.num_blocks() != target.num_blocks()) {
    throw DomainError("jordan spec: block counts differ");
  }
  std::vector<int> perm(source.num_blocks(), -1);
  std::vector<bool> used(target.num_blocks(), false);
  for (int i = 0; i < source.num_blocks(); ++i) {
    std::vector<int> candidates;
    for (int j = 0; j < target.num_blocks(); ++j) {
      if (!used[j] && target.block_dim(j) == source.block_dim(i)) {
        candidates.push_back(j);
      }
    }
    if (candidates.empty()) {
      throw DomainError("jordan spec: block sizes of " + source.ToString() +
                        " and " + target.ToString() + " differ");
    }
    const int j = candidates[rng.UniformInt(static_cast<int>(candidates.size()))];
    used[j] = true;
    perm[i] = j;
  }
  std::vector<Matrix> us;
  std::vector<bool> tr;
  for (int n : source.blocks()) {
    us.push_back(RandomUnitary(n, rng));
    tr.push_back(n >= 2 && rng.Uniform() < 0.5);
  }
  return JordanSpec(source, target, perm, us, tr);
}

JordanSpec GenJordanSpec(const Algebra& source, Rng& rng) {
  const std::vector<int> order = rng.Permutation(source.num_blocks());
  std::vector<int> dims(source.num_blocks());
  for (int i = 0; i < source.num_blocks(); ++i) {
    dims[order[i]] = source.block_dim(i);
  }
  return GenJordanSpec(source, Algebra(dims), rng);
}

OrderIsoExpr GenOrderIsoExpr(const Algebra& algebra, IntervalKind kind,
                             Rng& rng) {
  const JordanSpec spec = GenJordanSpec(algebra, rng);
  const Algebra& target = spec.target();
  switch (kind) {
    case IntervalKind::kEffect: {
      const double alpha = rng.Uniform(0.3, 3.0);
      const Element T = GenPosInvertible(target, 20.0, rng, 3.0);
      return Compose({E(E::PhiAlphaInv{alpha}), E(E::PhiT{T}),
                      E(E::Jordan{spec})},
                     kind);
    }
    case IntervalKind::kCone:
    case IntervalKind::kConeStrict: {
      const Element b = GenPosInvertible(target, 10.0, rng, 2.0);
      return Compose({E(E::Congruence{b}, kind), E(E::Jordan{spec}, kind)},
                     kind);
    }
    case IntervalKind::kSa: {
      const Element b = GenPosInvertible(target, 10.0, rng, 2.0);
      const Element c = GenHermitian(target, 1.0, rng);
      return Compose({E(E::Shift{c}, kind), E(E::Congruence{b}, kind),
                      E(E::Jordan{spec}, kind)},
                     kind);
    }
  }
  throw DomainError("unknown interval kind");
}

std::pair<Element, Element> GenComparablePair(const Algebra& algebra,
                                              IntervalKind kind, Rng& rng) {
  const Element a = SampleInterval(algebra, kind, rng);
  if (kind == IntervalKind::kEffect) {
    const Element r = SqrtPos((Unit(algebra) - a).AsHermitian());
    const Element w = GenEffect(algebra, rng);
    return {a, (a + r * w * r).AsHermitian()};
  }
  return {a, (a + GenPositive(algebra, 1.0, rng)).AsHermitian()};
}

OrderIsoReport CheckOrderIso(const BlackBoxMap& phi, int n, Rng& rng,
                             const Tolerances& tol) {
  OrderIsoReport report;
  auto record = [&](const Element& a, const Element& b) {
    ++report.violations;
    if (report.witnesses.size() < 3) report.witnesses.emplace_back(a, b);
  };
  for (int k = 0; k < n; ++k) {
    const auto [a, b] = GenComparablePair(phi.source, phi.source_kind, rng);
    ++report.comparable_pairs;
    if (!Leq(phi(a).HermitianPart(), phi(b).HermitianPart(), tol)) record(a, b);
  }
  for (int k = 0; k < n; ++k) {
    const Element a = SampleInterval(phi.source, phi.source_kind, rng);
    const Element b = SampleInterval(phi.source, phi.source_kind, rng);
    const Element fa = phi(a).HermitianPart();
    const Element fb = phi(b).HermitianPart();
    ++report.incomparable_pairs;
    if (Leq(a, b, tol) != Leq(fa, fb, tol) ||
        Leq(b, a, tol) != Leq(fb, fa, tol)) {
      record(a, b);
    }
  }
  return report;
}

std::optional<std::pair<Element, Element>> FindSquareCounterexample(
    const Tolerances& tol) {
  const Algebra m2({2});
  for (int si = 1; si <= 5; ++si) {
    for (int ri = 1; ri <= 5; ++ri) {
      for (int ti = 1; ti < 16; ++ti) {
        const double s = 0.1 * si;
        const double r = 0.1 * ri;
        const double theta = std::numbers::pi * ti / 16.0;
        Matrix a = Matrix::Zero(2, 2);
        a(0, 0) = s;
        Vector v(2);
        v << std::cos(theta), std::sin(theta);
        const Matrix b = a + r * v * v.adjoint();
        const Element ea(m2, {a}, true);
        const Element eb(m2, {b}, true);
        if (Leq(ea, eb, tol) &&
            !Leq((ea * ea).AsHermitian(), (eb * eb).AsHermitian(), tol)) {
          return std::make_pair(ea, eb);
        }
      }
    }
  }
  return std::nullopt;
}

double PiecewiseLinear::operator()(double t) const {
  const int m = static_cast<int>(knots.size()) - 1;
  const auto it = std::upper_bound(knots.begin(), knots.end(), t);
  int k = static_cast<int>(it - knots.begin()) - 1;
  k = std::clamp(k, 0, m - 1);
  const double w = (t - knots[k]) / (knots[k + 1] - knots[k]);
  return (1.0 - w) * values[k] + w * values[k + 1];
}

Element ProductMap::operator()(const Element& a) const {
  const std::vector<double> x = ToPointValues(a);
  if (x.size() != mu.size()) {
    throw AlgebraMismatchError("product map: wrong number of points");
  }
  std::vector<double> out(mu.size());
  for (size_t y = 0; y < mu.size(); ++y) out[y] = f[y](x[mu[y]]);
  return FromPointValues(out);
}

ProductMap GenProductMap(int points, IntervalKind kind, const CommOptions& grid,
                         Rng& rng) {
  const auto [lo, hi] = GridRange(kind, grid);
  const int m = grid.grid;
  ProductMap out;
  out.mu = rng.Permutation(points);
  for (int y = 0; y < points; ++y) {
    PiecewiseLinear f;
    for (int k = 0; k <= m; ++k) {
      if (k == 0 || k == m || rng.Uniform() < 0.25) {
        f.knots.push_back(lo + (hi - lo) * k / m);
      }
    }
    f.values.push_back(kind == IntervalKind::kSa ? rng.Uniform(-2.0, 2.0) : 0.0);
    for (size_t k = 1; k < f.knots.size(); ++k) {
      const double slope = rng.Uniform(0.2, 3.0);
      f.values.push_back(f.values.back() +
                         slope * (f.knots[k] - f.knots[k - 1]));
    }
    if (kind == IntervalKind::kEffect) {
      const double top = f.values.back();
      for (auto& v : f.values) v /= top;
      f.values.back() = 1.0;
    }
    out.f.push_back(std::move(f));
  }
  return out;
}

bool SuiteReport::passed() const { return failures() == 0; }

int SuiteReport::failures() const {
  return static_cast<int>(std::count_if(results.begin(), results.end(),
                                        [](const TrialResult& r) {
                                          return !r.passed;
                                        }));
}

Json SuiteReport::ToJson() const {
  std::map<std::string, std::vector<double>> values;
  for (const auto& r : results) {
    for (const auto& [k, v] : r.metrics) values[k].push_back(v);
  }
  Json metrics = Json::object();
  for (auto& [k, v] : values) {
    std::sort(v.begin(), v.end());
    metrics[k] = Json{{"count", v.size()},
                      {"min", v.front()},
                      {"q50", Quantile(v, 0.5)},
                      {"q90", Quantile(v, 0.9)},
                      {"q99", Quantile(v, 0.99)},
                      {"max", v.back()}};
  }
  Json failed = Json::array();
  for (const auto& r : results) {
    if (r.passed) continue;
    Json m = Json::object();
    for (const auto& [k, v] : r.metrics) m[k] = v;
    failed.push_back(Json{{"index", r.index}, {"error", r.error}, {"metrics", m}});
  }
  Json th = Json::object();
  for (const auto& [k, v] : thresholds) th[k] = v;
  return Json{{"suite", suite},
              {"statement", statement},
              {"seed", seed},
              {"trials", trials},
              {"passed", passed()},
              {"failures", failures()},
              {"thresholds", th},
              {"metrics", metrics},
              {"failed_trials", failed}};
}

const std::vector<std::string>& SuiteNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : Suites()) out.push_back(s.def.name);
    return out;
  }();
  return names;
}

SuiteReport RunSuite(const std::string& name, const TrialConfig& config) {
  const auto& suites = Suites();
  const auto it = std::find_if(suites.begin(), suites.end(),
                               [&](const Suite& s) { return s.def.name == name; });
  if (it == suites.end()) throw DomainError("unknown suite '" + name + "'");
  if (config.trials < 0) throw DomainError("trial count must be non-negative");
  config.tol.Validate();

  SuiteReport report;
  report.suite = name;
  report.statement = it->def.statement;
  report.seed = config.seed;
  report.thresholds = it->def.thresholds;
  report.trials = config.trials + it->extra_trials;
  const std::uint64_t stream =
      SplitMix64(config.seed ^ (0x9e37ULL * static_cast<std::uint64_t>(
                                               it - suites.begin() + 1)));
  for (int i = 0; i < report.trials; ++i) {
    TrialResult r;
    r.index = i;
    Rng rng = Rng::ForTrial(stream, static_cast<std::uint64_t>(i));
    try {
      it->trial(config, i, rng, r);
      for (const auto& [k, limit] : it->def.thresholds) {
        const auto m = r.metrics.find(k);
        if (m != r.metrics.end() && !(m->second <= limit)) r.passed = false;
      }
    } catch (const Error& e) {
      r.passed = false;
      r.error = e.what();
    }
    report.results.push_back(std::move(r));
  }
  return report;
}

Json RunSuites(const std::string& name, const TrialConfig& config) {
  const std::vector<std::string> names =
      name == "all" ? SuiteNames() : std::vector<std::string>{name};
  Json suites = Json::array();
  bool passed = true;
  for (const auto& n : names) {
    const SuiteReport r = RunSuite(n, config);
    passed = passed && r.passed();
    suites.push_back(r.ToJson());
  }
  return Json{{"seed", config.seed},
              {"trials", config.trials},
              {"passed", passed},
              {"suites", suites}};
}

}  // namespace loewner
