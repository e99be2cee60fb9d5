#include "loewner/decompose.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "loewner/effects.h"

namespace loewner {
namespace {

Element HalfUnit(const Algebra& algebra) {
  return Element::Scalar(algebra, 0.5);
}

// Probes a chart-linearised map on the hermitian basis of the source.
LinearMapRecord AssembleMatrix(const Algebra& source, const Algebra& target,
                               const ElementMap& chart) {
  const auto basis = HermitianBasis(source);
  Eigen::MatrixXd m(target.dimension(), source.dimension());
  for (size_t k = 0; k < basis.size(); ++k) {
    const Element image = chart(basis[k]);
    if (!(image.algebra() == target)) {
      throw CertificateError("linear extension: image in the wrong algebra");
    }
    m.col(static_cast<int>(k)) = HermitianCoordinates(image.HermitianPart());
  }
  return LinearMapRecord{source, target, std::move(m)};
}

// Superposition residual of the chart against itself and against the
// assembled matrix.
double LinearityResidual(const LinearMapRecord& map, const ElementMap& chart,
                         Rng& rng, int pairs) {
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const Element a = GenHermitian(map.source, 1.0, rng);
    const Element b = GenHermitian(map.source, 1.0, rng);
    const double s = rng.Uniform(-1.0, 1.0);
    const Element ja = chart(a);
    const Element jb = chart(b);
    const Element jab = chart((a + s * b).AsHermitian());
    worst = std::max(worst, Distance(ja, map.Apply(a)));
    worst = std::max(worst, Distance(jab, ja + s * jb));
  }
  return worst;
}

LinearExtension FinishExtension(LinearMapRecord map, const ElementMap& chart,
                                const DecomposeOptions& options, Rng& rng) {
  const double linearity =
      LinearityResidual(map, chart, rng, options.linearity_pairs);
  if (linearity > options.residual_budget) {
    throw CertificateError("linear extension: superposition residual " +
                           std::to_string(linearity) + " exceeds budget");
  }
  const double jordan = JordanResidual(map, rng, options.jordan_samples);
  const double unital =
      Distance(map.Apply(Unit(map.source)), Unit(map.target));
  return LinearExtension{std::move(map), linearity, jordan, unital};
}

std::optional<JordanSpec> TryFit(const LinearMapRecord& map,
                                 const DecomposeOptions& options) {
  if (!options.fit_spec) return std::nullopt;
  try {
    return FitJordanSpec(map, options.residual_budget);
  } catch (const Error&) {
    return std::nullopt;
  }
}

double Relative(const Element& a, const Element& b) {
  return Distance(a, b) / std::max(1.0, OpNorm(b));
}

}  // namespace

BlackBoxMap MakeBlackBox(Algebra source, Algebra target,
                         IntervalKind source_kind, IntervalKind target_kind,
                         ElementMap forward, ElementMap inverse, Rng& rng,
                         int probes, const Tolerances& tol) {
  if (!forward) throw DomainError("black box needs a forward map");
  BlackBoxMap map{std::move(source), std::move(target), source_kind,
                  target_kind, std::move(forward), std::move(inverse)};
  for (int k = 0; k < probes; ++k) {
    const Element a = SampleInterval(map.source, source_kind, rng);
    const Element y = map.forward(a);
    if (!(y.algebra() == map.target)) {
      throw CertificateError("black box: output in algebra " +
                             y.algebra().ToString() + ", expected " +
                             map.target.ToString());
    }
    if (!y.hermitian() && !InInterval(y.HermitianPart(), target_kind, tol)) {
      throw CertificateError("black box: output outside the target interval");
    }
    if (y.hermitian() && !InInterval(y, target_kind, tol)) {
      throw CertificateError("black box: output outside the target interval");
    }
  }
  return map;
}

BlackBoxMap BlackBoxFromExpr(const OrderIsoExpr& expr, const Algebra& source,
                             const Tolerances& tol) {
  if (auto declared = expr.SourceAlgebra(); declared && !(*declared == source)) {
    throw AlgebraMismatchError("expression acts on " + declared->ToString() +
                               ", not " + source.ToString());
  }
  const Algebra target = expr.TargetAlgebra().value_or(source);
  return BlackBoxMap{
      source,
      target,
      expr.interval(),
      expr.TargetInterval(),
      [expr, tol](const Element& a) { return Evaluate(expr, a, tol); },
      InverseMap(expr, tol)};
}

Element SampleInterval(const Algebra& algebra, IntervalKind kind, Rng& rng,
                       double scale) {
  switch (kind) {
    case IntervalKind::kEffect:
      return GenEffect(algebra, rng);
    case IntervalKind::kCone:
      return GenPositive(algebra, scale, rng);
    case IntervalKind::kConeStrict:
      return GenPosInvertible(algebra, 10.0, rng, scale);
    case IntervalKind::kSa:
      return GenHermitian(algebra, scale, rng);
  }
  throw DomainError("unknown interval kind");
}

Element LinearMapRecord::Apply(const Element& a) const {
  RequireHermitian(a, "linear map");
  if (!(a.algebra() == source)) {
    throw AlgebraMismatchError("linear map: input algebra " +
                               a.algebra().ToString() + ", expected " +
                               source.ToString());
  }
  return FromHermitianCoordinates(target, matrix * HermitianCoordinates(a));
}

Element LinearMapRecord::ApplyComplex(const Element& x) const {
  const Complex i(0.0, 1.0);
  std::vector<Matrix> re, im;
  for (const auto& b : x.blocks()) {
    re.push_back(0.5 * (b + b.adjoint()));
    im.push_back((b - b.adjoint()) / (2.0 * i));
  }
  const Element lre = Apply(Element(x.algebra(), std::move(re), true));
  const Element lim = Apply(Element(x.algebra(), std::move(im), true));
  std::vector<Matrix> out;
  for (int b = 0; b < target.num_blocks(); ++b) {
    out.push_back(lre.block(b) + i * lim.block(b));
  }
  return Element(target, std::move(out), false);
}

double JordanResidual(const LinearMapRecord& map, Rng& rng, int samples) {
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Element a = GenHermitian(map.source, 1.0, rng);
    const Element ja = map.Apply(a);
    worst = std::max(worst,
                     Distance(map.Apply((a * a).AsHermitian()), ja * ja));
  }
  return worst;
}

LinearExtension ExtendEffectToLinear(const BlackBoxMap& j_eff,
                                     const DecomposeOptions& options) {
  const Element half = j_eff(HalfUnit(j_eff.source));
  const double fix = Distance(half, HalfUnit(j_eff.target));
  if (fix > options.residual_budget) {
    throw CertificateError("linear extension: map does not fix 1/2 (residual " +
                           std::to_string(fix) + ")");
  }
  const Tolerances tol = options.tol;
  const ElementMap chart = [&j_eff, tol](const Element& h) {
    const double n = OpNorm(h);
    const Element one = Unit(h.algebra());
    const Element x = ((h + n * one) * (1.0 / (2.0 * n + 1.0))).AsHermitian(tol);
    const Element y = j_eff(x);
    return ((2.0 * n + 1.0) * y - n * Unit(y.algebra())).AsHermitian(tol);
  };
  Rng rng(options.seed);
  LinearMapRecord map = AssembleMatrix(j_eff.source, j_eff.target, chart);
  return FinishExtension(std::move(map), chart, options, rng);
}

JordanSpec FitJordanSpec(const LinearMapRecord& map, double fit_tol) {
  const Algebra& a = map.source;
  const Algebra& b = map.target;
  if (a.dimension() != b.dimension() || a.num_blocks() != b.num_blocks()) {
    throw CertificateError("jordan fit: algebras are not isomorphic");
  }
  std::vector<int> perm(a.num_blocks(), -1);
  std::vector<bool> used(b.num_blocks(), false);
  std::vector<Matrix> unitaries;
  std::vector<bool> transpose;
  for (int i = 0; i < a.num_blocks(); ++i) {
    const Element img = map.Apply(BlockUnit(a, i));
    int j = 0;
    double best = -1.0;
    for (int k = 0; k < b.num_blocks(); ++k) {
      const double tr = img.block(k).trace().real();
      if (tr > best) {
        best = tr;
        j = k;
      }
    }
    if (used[j] || b.block_dim(j) != a.block_dim(i) ||
        Distance(img, BlockUnit(b, j)) > fit_tol) {
      throw CertificateError("jordan fit: block units do not map to block units");
    }
    used[j] = true;
    perm[i] = j;

    const int n = a.block_dim(i);
    if (n == 1) {
      unitaries.push_back(Matrix::Identity(1, 1));
      transpose.push_back(false);
      continue;
    }
    auto unit = [&](int r, int c) {
      return map.ApplyComplex(MatrixUnit(a, i, r, c)).block(j);
    };
    const Matrix prod = unit(0, 1) * unit(1, 0);
    const double mult_res = (prod - unit(0, 0)).norm();
    const double anti_res = (prod - unit(1, 1)).norm();
    if (std::min(mult_res, anti_res) > fit_tol) {
      throw CertificateError(
          "jordan fit: neither multiplicative nor antimultiplicative");
    }
    const bool tr = anti_res < mult_res;

    const Matrix p0 = unit(0, 0);
    int col = 0;
    p0.colwise().norm().maxCoeff(&col);
    Vector u0 = p0.col(col);
    u0 /= u0.norm();
    for (int k = 0; k < n; ++k) {
      if (std::abs(u0(k)) > 1e-6) {
        u0 *= std::conj(u0(k)) / std::abs(u0(k));
        break;
      }
    }
    Matrix u(n, n);
    u.col(0) = u0;
    for (int k = 1; k < n; ++k) {
      u.col(k) = (tr ? unit(0, k) : unit(k, 0)) * u0;
    }
    // Nearest unitary, removing probe noise.
    Eigen::JacobiSVD<Matrix> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
    unitaries.push_back(svd.matrixU() * svd.matrixV().adjoint());
    transpose.push_back(tr);
  }
  JordanSpec spec(a, b, perm, unitaries, transpose);
  for (const auto& e : HermitianBasis(a)) {
    if (Distance(spec.Apply(e), map.Apply(e)) > fit_tol) {
      throw CertificateError("jordan fit: fitted map disagrees with the probe");
    }
  }
  return spec;
}

Element EffectDecomposition::Reconstruct(const Element& a,
                                         const Tolerances& tol) const {
  return PhiAlphaInvApply(alpha, PhiTApply(T, J.map.Apply(a), tol), tol);
}

EffectDecomposition DecomposeEffectIso(const BlackBoxMap& phi,
                                       const DecomposeOptions& options) {
  const Tolerances& tol = options.tol;
  if (phi.source_kind != IntervalKind::kEffect ||
      phi.target_kind != IntervalKind::kEffect) {
    throw DomainError("effect decomposition needs an effect-to-effect map");
  }
  const Algebra& target = phi.target;
  const Element half = phi(HalfUnit(phi.source)).AsHermitian(tol);
  const double gap = std::min(MinEigenvalue(half),
                              MinEigenvalue((Unit(target) - half).AsHermitian()));
  if (!(gap > tol.psd)) {
    throw DomainError(
        "effect decomposition: image of 1/2 is not strictly inside (0, 1)");
  }

  const double epsilon = 0.5 * gap;
  const double alpha = std::sqrt((1.0 - 2.0 * epsilon) / epsilon);
  const Element c = PhiAlphaApply(alpha, half, tol);
  const Element T = FunCalc(c, [](double s) {
    return std::sqrt((2.0 * s - 1.0) / (1.0 - s));
  });

  BlackBoxMap j_eff{phi.source, target, IntervalKind::kEffect,
                    IntervalKind::kEffect,
                    [&phi, alpha, T, tol](const Element& a) {
                      return PhiTInvApply(
                          T, PhiAlphaApply(alpha, phi(a).AsHermitian(tol), tol),
                          tol);
                    },
                    {}};
  LinearExtension J = ExtendEffectToLinear(j_eff, options);
  auto spec = TryFit(J.map, options);
  EffectDecomposition out{epsilon, alpha, T, std::move(J), std::move(spec),
                          0.0};

  Rng rng(SplitMix64(options.seed));
  for (int k = 0; k < options.validation_samples; ++k) {
    const Element a = GenEffect(phi.source, rng);
    out.residual =
        std::max(out.residual, Distance(out.Reconstruct(a, tol), phi(a)));
  }
  if (out.residual > options.residual_budget) {
    throw CertificateError("effect decomposition: reconstruction residual " +
                           std::to_string(out.residual) + " exceeds budget");
  }
  return out;
}

Element ConeDecomposition::Reconstruct(const Element& a) const {
  return (b * J.map.Apply(a) * b).AsHermitian();
}

ConeDecomposition DecomposeConeIso(const BlackBoxMap& phi,
                                   const DecomposeOptions& options) {
  const Tolerances& tol = options.tol;
  const bool strict = phi.source_kind == IntervalKind::kConeStrict;
  if (!(phi.source_kind == IntervalKind::kCone || strict) ||
      phi.target_kind != phi.source_kind) {
    throw DomainError("cone decomposition needs a cone-to-cone map");
  }
  const double scale = phi.has_inverse()
                  ? OpNorm(phi.inverse(Unit(phi.target))) + 1.0
                  : 1.0;
  const Element image = phi(Element::Scalar(phi.source, scale));
  const Element bsq = ((1.0 / scale) * image).AsHermitian(tol);
  if (!IsPositiveInvertible(bsq, tol)) {
    throw CertificateError("cone decomposition: image of a multiple of 1 is "
                           "not invertible");
  }
  const Element b = SqrtPos(bsq, tol);
  const Element b_inv = Inverse(b, tol);

  const ElementMap jcone = [&phi, b_inv, tol](const Element& x) {
    return (b_inv * phi(x) * b_inv).AsHermitian(tol);
  };
  // Positive offset keeps the probe in the strict cone as well.
  const ElementMap chart = [jcone, tol](const Element& h) {
    const double m = OpNorm(h) + 1.0;
    const Element y = jcone((h + Element::Scalar(h.algebra(), m)).AsHermitian(tol));
    return (y - Element::Scalar(y.algebra(), m)).AsHermitian(tol);
  };
  Rng rng(options.seed);
  LinearExtension J = FinishExtension(
      AssembleMatrix(phi.source, phi.target, chart), chart, options, rng);
  J.unital_residual = Distance(jcone(Unit(phi.source)), Unit(phi.target));
  auto spec = TryFit(J.map, options);
  const double b_square =
      Distance((b * b).AsHermitian(), phi(Unit(phi.source)));
  ConeDecomposition out{b, std::move(J), std::move(spec), scale, b_square,
                        0.0};

  Rng vrng(SplitMix64(options.seed));
  for (int k = 0; k < options.validation_samples; ++k) {
    const Element a = SampleInterval(phi.source, phi.source_kind, vrng);
    out.residual = std::max(out.residual, Relative(out.Reconstruct(a), phi(a)));
  }
  if (out.residual > options.residual_budget) {
    throw CertificateError("cone decomposition: reconstruction residual " +
                           std::to_string(out.residual) + " exceeds budget");
  }
  return out;
}

Element SaDecomposition::Reconstruct(const Element& a) const {
  return (c + b * J.map.Apply(a) * b).AsHermitian();
}

SaDecomposition DecomposeSaIso(const BlackBoxMap& phi,
                               const DecomposeOptions& options) {
  const Tolerances& tol = options.tol;
  if (phi.source_kind != IntervalKind::kSa ||
      phi.target_kind != IntervalKind::kSa) {
    throw DomainError("sa decomposition needs an sa-to-sa map");
  }
  const Element c = phi(Element::Zero(phi.source));
  BlackBoxMap plus{phi.source, phi.target, IntervalKind::kCone,
                   IntervalKind::kCone,
                   [&phi, c, tol](const Element& a) {
                     return (c - phi((-a).AsHermitian(tol))).AsHermitian(tol);
                   },
                   {}};
  if (phi.has_inverse()) {
    plus.inverse = [&phi, c, tol](const Element& y) {
      return (-phi.inverse((c - y).AsHermitian(tol))).AsHermitian(tol);
    };
  }
  DecomposeOptions cone_options = options;
  cone_options.validation_samples = 0;
  ConeDecomposition cone = DecomposeConeIso(plus, cone_options);
  const double b_square =
      Distance((cone.b * cone.b).AsHermitian(), phi(Unit(phi.source)) - c);
  SaDecomposition out{cone.b, c, std::move(cone.J), std::move(cone.spec),
                      b_square, 0.0};

  Rng rng(SplitMix64(options.seed));
  for (int k = 0; k < options.validation_samples; ++k) {
    const Element a = GenHermitian(phi.source, 2.0, rng);
    out.residual = std::max(out.residual, Relative(out.Reconstruct(a), phi(a)));
  }
  if (out.residual > options.residual_budget) {
    throw CertificateError("sa decomposition: reconstruction residual " +
                           std::to_string(out.residual) + " exceeds budget");
  }
  return out;
}

std::vector<double> ToPointValues(const Element& a) {
  if (!a.algebra().IsCommutative()) {
    throw DomainError("point values need a commutative algebra");
  }
  std::vector<double> out;
  for (const auto& b : a.blocks()) out.push_back(b(0, 0).real());
  return out;
}

Element FromPointValues(const std::vector<double>& values) {
  return Element::Diagonal(Algebra(std::vector<int>(values.size(), 1)), values);
}

double CommDecomposition::Interpolate(int y, double v) const {
  const auto& f = tables.at(y);
  const int m = static_cast<int>(grid.size()) - 1;
  const auto it = std::upper_bound(grid.begin(), grid.end(), v);
  int k = static_cast<int>(it - grid.begin()) - 1;
  k = std::clamp(k, 0, m - 1);
  const double w = (v - grid[k]) / (grid[k + 1] - grid[k]);
  return (1.0 - w) * f[k] + w * f[k + 1];
}

CommDecomposition DecomposeCommutative(const BlackBoxMap& phi,
                                       const CommOptions& options) {
  const Tolerances& tol = options.tol;
  if (!phi.source.IsCommutative() || !phi.target.IsCommutative() ||
      phi.source.num_blocks() != phi.target.num_blocks()) {
    throw DomainError(
        "commutative decomposition needs commutative algebras of equal size");
  }
  if (options.grid < 2) throw DomainError("commutative grid too small");
  CommDecomposition out;
  out.kind = phi.source_kind;
  double lo = 0.0, hi = 1.0;
  switch (phi.source_kind) {
    case IntervalKind::kEffect:
      break;
    case IntervalKind::kCone:
      hi = options.range;
      break;
    case IntervalKind::kSa:
      lo = -options.range;
      hi = options.range;
      break;
    case IntervalKind::kConeStrict:
      throw DomainError("commutative decomposition: unsupported source kind");
  }
  const int n = phi.source.num_blocks();
  const int m = options.grid;
  for (int k = 0; k <= m; ++k) out.grid.push_back(lo + (hi - lo) * k / m);
  out.tables.assign(n, std::vector<double>(m + 1));
  for (int k = 0; k <= m; ++k) {
    const auto v =
        ToPointValues(phi(Element::Scalar(phi.source, out.grid[k])));
    for (int y = 0; y < n; ++y) out.tables[y][k] = v[y];
  }
  for (int y = 0; y < n; ++y) {
    for (int k = 0; k < m; ++k) {
      if (!(out.tables[y][k + 1] > out.tables[y][k])) {
        throw CertificateError(
            "commutative decomposition: coordinate function not increasing");
      }
    }
  }

  // Indicator probes: raising x from 0 to 1 moves exactly the coordinates
  // y with mu(y) = x.
  const auto base = ToPointValues(phi(Element::Scalar(phi.source, 0.0)));
  const auto top = ToPointValues(phi(Element::Scalar(phi.source, 1.0)));
  out.mu.assign(n, -1);
  for (int x = 0; x < n; ++x) {
    std::vector<double> probe(n, 0.0);
    probe[x] = 1.0;
    const auto v = ToPointValues(phi(FromPointValues(probe)));
    for (int y = 0; y < n; ++y) {
      const double thr =
          tol.eq * std::max({1.0, std::abs(base[y]), std::abs(top[y])});
      if (std::abs(v[y] - top[y]) <= thr) {
        if (out.mu[y] != -1) {
          throw CertificateError(
              "commutative decomposition: coordinate moved by two probes");
        }
        out.mu[y] = x;
      } else if (std::abs(v[y] - base[y]) > thr) {
        throw CertificateError(
            "commutative decomposition: map is not of product form");
      }
    }
  }
  for (int y = 0; y < n; ++y) {
    if (out.mu[y] == -1) {
      throw CertificateError(
          "commutative decomposition: coordinate moved by no probe");
    }
  }

  Rng rng(options.seed);
  double excess = 0.0;
  for (int s = 0; s < options.validation_samples; ++s) {
    std::vector<double> f(n);
    for (auto& v : f) v = rng.Uniform(lo, hi);
    const auto actual = ToPointValues(phi(FromPointValues(f)));
    for (int y = 0; y < n; ++y) {
      const double v = f[out.mu[y]];
      const double err = std::abs(out.Interpolate(y, v) - actual[y]);
      // Curvature of the table at the nodes adjacent to v.
      int k = static_cast<int>(
          std::upper_bound(out.grid.begin(), out.grid.end(), v) -
          out.grid.begin()) - 1;
      k = std::clamp(k, 0, m - 1);
      double curvature = 0.0;
      for (int j : {k, k + 1}) {
        if (j >= 1 && j <= m - 1) {
          const auto& t = out.tables[y];
          curvature = std::max(curvature, std::abs(t[j + 1] - 2 * t[j] + t[j - 1]));
        }
      }
      const double budget = options.residual_budget *
                                std::max(1.0, std::abs(actual[y])) +
                            0.5 * curvature;
      out.residual = std::max(out.residual, err);
      excess = std::max(excess, err - budget);
    }
  }
  if (excess > 0.0) {
    throw CertificateError(
        "commutative decomposition: interpolated reconstruction off by more "
        "than the budget");
  }
  return out;
}

Algebra SubAlgebra(const Algebra& algebra, const std::vector<int>& blocks) {
  std::vector<int> dims;
  for (int b : blocks) dims.push_back(algebra.block_dim(b));
  return Algebra(dims);
}

Element RestrictBlocks(const Element& a, const std::vector<int>& blocks) {
  std::vector<Matrix> out;
  for (int b : blocks) out.push_back(a.block(b));
  return Element(SubAlgebra(a.algebra(), blocks), std::move(out),
                 a.hermitian());
}

Element EmbedBlocks(const Element& part, const std::vector<int>& blocks,
                    const Element& filler) {
  std::vector<Matrix> out = filler.blocks();
  for (size_t k = 0; k < blocks.size(); ++k) {
    out[blocks[k]] = part.block(static_cast<int>(k));
  }
  return Element(filler.algebra(), std::move(out),
                 part.hermitian() && filler.hermitian());
}

Element IntervalFiller(const Algebra& algebra, IntervalKind kind) {
  switch (kind) {
    case IntervalKind::kEffect:
      return Element::Scalar(algebra, 0.5);
    case IntervalKind::kCone:
    case IntervalKind::kConeStrict:
      return Unit(algebra);
    case IntervalKind::kSa:
      return Element::Zero(algebra);
  }
  throw DomainError("unknown interval kind");
}

CentralSplit SplitCentral(const BlackBoxMap& phi, const SplitOptions& options) {
  CentralSplit out;
  for (int b = 0; b < phi.source.num_blocks(); ++b) {
    (phi.source.block_dim(b) == 1 ? out.source_abelian_blocks
                                  : out.source_other_blocks)
        .push_back(b);
  }
  for (int b = 0; b < phi.target.num_blocks(); ++b) {
    (phi.target.block_dim(b) == 1 ? out.target_abelian_blocks
                                  : out.target_other_blocks)
        .push_back(b);
  }
  if (out.source_abelian_blocks.size() != out.target_abelian_blocks.size() ||
      out.source_other_blocks.empty() != out.target_other_blocks.empty()) {
    throw CertificateError(
        "central split: abelian summands of source and target differ");
  }

  const Element src_fill = IntervalFiller(phi.source, phi.source_kind);
  const Element tgt_fill = IntervalFiller(phi.target, phi.target_kind);
  auto factor = [&](const std::vector<int>& src,
                    const std::vector<int>& tgt) -> std::optional<BlackBoxMap> {
    if (src.empty()) return std::nullopt;
    BlackBoxMap part{SubAlgebra(phi.source, src), SubAlgebra(phi.target, tgt),
                     phi.source_kind, phi.target_kind,
                     [phi, src, tgt, src_fill](const Element& x) {
                       return RestrictBlocks(phi(EmbedBlocks(x, src, src_fill)),
                                             tgt);
                     },
                     {}};
    if (phi.has_inverse()) {
      part.inverse = [phi, src, tgt, tgt_fill](const Element& y) {
        return RestrictBlocks(phi.inverse(EmbedBlocks(y, tgt, tgt_fill)), src);
      };
    }
    return part;
  };
  out.abelian = factor(out.source_abelian_blocks, out.target_abelian_blocks);
  out.nonabelian = factor(out.source_other_blocks, out.target_other_blocks);

  // Changing one summand of the input must leave the other summand of the
  // output untouched.
  Rng rng(options.seed);
  const std::pair<const std::vector<int>*, const std::vector<int>*> parts[] = {
      {&out.source_abelian_blocks, &out.target_abelian_blocks},
      {&out.source_other_blocks, &out.target_other_blocks}};
  for (int k = 0; k < options.pairs; ++k) {
    const Element a = SampleInterval(phi.source, phi.source_kind, rng);
    const Element other = SampleInterval(phi.source, phi.source_kind, rng);
    const Element image = phi(a);
    for (const auto& [src, tgt] : parts) {
      if (src->empty()) continue;
      const Element mixed = EmbedBlocks(RestrictBlocks(a, *src), *src, other);
      const Element kept = RestrictBlocks(image, *tgt);
      out.well_definedness_residual =
          std::max(out.well_definedness_residual,
                   Relative(RestrictBlocks(phi(mixed), *tgt), kept));
    }
  }
  out.pairs = options.pairs;
  if (out.well_definedness_residual > options.tol.eq) {
    throw CertificateError("central split: summands interact (residual " +
                           std::to_string(out.well_definedness_residual) + ")");
  }
  return out;
}

}  // namespace loewner
