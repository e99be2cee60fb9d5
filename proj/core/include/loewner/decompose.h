// Recovery of canonical parameters from black-box order isomorphisms.
//
// Each routine follows a constructive argument: it probes the map on a
// finite set of inputs, assembles the canonical parameters, and validates
// the reconstruction on fresh random samples. Inputs that are not order
// isomorphisms of the assumed form are detected only through these sampled
// certificates.

#ifndef LOEWNER_DECOMPOSE_H_
#define LOEWNER_DECOMPOSE_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "loewner/algebra.h"
#include "loewner/canonical_maps.h"
#include "loewner/random.h"

namespace loewner {

struct BlackBoxMap {
  Algebra source;
  Algebra target;
  IntervalKind source_kind = IntervalKind::kEffect;
  IntervalKind target_kind = IntervalKind::kEffect;
  ElementMap forward;
  ElementMap inverse;  // optional

  Element operator()(const Element& a) const { return forward(a); }
  bool has_inverse() const { return static_cast<bool>(inverse); }
};

// Wraps callbacks and spot-checks `probes` random in-interval inputs;
// CertificateError when an output leaves the target interval or algebra.
BlackBoxMap MakeBlackBox(Algebra source, Algebra target,
                         IntervalKind source_kind, IntervalKind target_kind,
                         ElementMap forward, ElementMap inverse, Rng& rng,
                         int probes = 10, const Tolerances& tol = {});

// Black box backed by an expression (and its inverse).
BlackBoxMap BlackBoxFromExpr(const OrderIsoExpr& expr, const Algebra& source,
                             const Tolerances& tol = {});

// Random element of an interval: effects with clipped spectra, positive
// elements with spectrum in [0, scale], positive invertible with spectrum in
// [scale/10, scale], hermitian with spectrum in [-scale, scale].
Element SampleInterval(const Algebra& algebra, IntervalKind kind, Rng& rng,
                       double scale = 2.0);

// Real-linear map on self-adjoint parts, as a matrix in the orthonormal
// hermitian bases of source and target.
struct LinearMapRecord {
  Algebra source;
  Algebra target;
  Eigen::MatrixXd matrix;

  Element Apply(const Element& a) const;
  // Complex-linear extension x -> L(Re x) + i L(Im x).
  Element ApplyComplex(const Element& x) const;
};

struct DecomposeOptions {
  int validation_samples = 50;
  int linearity_pairs = 30;
  int jordan_samples = 20;
  double residual_budget = 1e-6;
  bool fit_spec = true;
  std::uint64_t seed = 0x10e3a5eedULL;
  Tolerances tol;
};

struct LinearExtension {
  LinearMapRecord map;
  double linearity_residual = 0.0;
  double jordan_residual = 0.0;
  double unital_residual = 0.0;
};

// Linear extension of an effect automorphism-like map fixing 1/2, probed on
// the hermitian basis through the chart h -> (h + |h|)/(2|h| + 1).
// CertificateError when J_eff(1/2) != 1/2 or superposition fails.
LinearExtension ExtendEffectToLinear(const BlackBoxMap& j_eff,
                                     const DecomposeOptions& options = {});

// Per-block structure of a Jordan map: block permutation from images of the
// central block units, multiplicative vs antimultiplicative from matrix-unit
// products, unitaries from images of matrix units. The first column of each
// unitary has its first non-negligible entry real positive.
JordanSpec FitJordanSpec(const LinearMapRecord& map, double fit_tol = 1e-6);

// Sampled sup-norm of J(a^2) - J(a)^2 over random hermitian a with |a| <= 1.
double JordanResidual(const LinearMapRecord& map, Rng& rng, int samples);

struct EffectDecomposition {
  double epsilon = 0.0;
  double alpha = 0.0;
  Element T;
  LinearExtension J;
  std::optional<JordanSpec> spec;
  double residual = 0.0;

  // Phi_alpha^{-1} o Phi_T o J applied to an effect.
  Element Reconstruct(const Element& a, const Tolerances& tol = {}) const;
};

EffectDecomposition DecomposeEffectIso(const BlackBoxMap& phi,
                                       const DecomposeOptions& options = {});

struct ConeDecomposition {
  Element b;
  LinearExtension J;
  std::optional<JordanSpec> spec;
  double scale = 0.0;             // |Phi^{-1}(1)| + 1
  double b_square_residual = 0.0;  // |b^2 - Phi(1)|
  double residual = 0.0;

  Element Reconstruct(const Element& a) const;
};

ConeDecomposition DecomposeConeIso(const BlackBoxMap& phi,
                                   const DecomposeOptions& options = {});

struct SaDecomposition {
  Element b;
  Element c;  // Phi(0)
  LinearExtension J;
  std::optional<JordanSpec> spec;
  double b_square_residual = 0.0;  // |b^2 - (Phi(1) - Phi(0))|
  double residual = 0.0;

  Element Reconstruct(const Element& a) const;
};

SaDecomposition DecomposeSaIso(const BlackBoxMap& phi,
                               const DecomposeOptions& options = {});

struct CommOptions {
  int grid = 64;
  double range = 4.0;  // grid half-width for cone ([0, range]) and sa
  int validation_samples = 50;
  double residual_budget = 1e-6;
  std::uint64_t seed = 0xc033ULL;
  Tolerances tol;
};

struct CommDecomposition {
  IntervalKind kind = IntervalKind::kEffect;
  std::vector<int> mu;  // mu[y] = x
  std::vector<double> grid;
  std::vector<std::vector<double>> tables;  // tables[y][k] = f_y(grid[k])
  double residual = 0.0;

  // Piecewise-linear interpolation of f_y, linear extrapolation outside.
  double Interpolate(int y, double v) const;
};

// Source and target algebras must have only 1x1 blocks, equally many.
CommDecomposition DecomposeCommutative(const BlackBoxMap& phi,
                                       const CommOptions& options = {});

// Real diagonal of an element of a commutative algebra.
std::vector<double> ToPointValues(const Element& a);
Element FromPointValues(const std::vector<double>& values);

struct CentralSplit {
  std::vector<int> source_abelian_blocks;
  std::vector<int> source_other_blocks;
  std::vector<int> target_abelian_blocks;
  std::vector<int> target_other_blocks;
  // Empty when the corresponding summand is the zero algebra.
  std::optional<BlackBoxMap> abelian;
  std::optional<BlackBoxMap> nonabelian;
  double well_definedness_residual = 0.0;
  int pairs = 0;
};

struct SplitOptions {
  int pairs = 20;
  std::uint64_t seed = 0x5711ULL;
  Tolerances tol;
};

// Splits an order isomorphism along the abelian central projections
// p_A(1), p_B(1): Phi_1(p_A(1) a) = p_B(1) Phi(a), Phi_-1 likewise.
CentralSplit SplitCentral(const BlackBoxMap& phi,
                          const SplitOptions& options = {});

// Sub-algebra of the listed blocks and the matching restriction/embedding.
Algebra SubAlgebra(const Algebra& algebra, const std::vector<int>& blocks);
Element RestrictBlocks(const Element& a, const std::vector<int>& blocks);
// Places `part` on `blocks` of `filler` (an element of the full algebra).
Element EmbedBlocks(const Element& part, const std::vector<int>& blocks,
                    const Element& filler);
// Interior reference point of an interval used as filler: 1/2, 1, 1 or 0.
Element IntervalFiller(const Algebra& algebra, IntervalKind kind);

}  // namespace loewner

#endif  // LOEWNER_DECOMPOSE_H_
