#include "loewner/effects.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "loewner/projections.h"

namespace loewner {
namespace {

using EigenSolver = Eigen::SelfAdjointEigenSolver<Matrix>;

void RequireProjection(const Element& p, const char* what,
                       const Tolerances& tol) {
  if (!IsProjection(p, tol)) {
    throw DomainError(std::string(what) + ": input is not a projection");
  }
}

// Embeds the 2x2 scalar matrix m into M_2(base): block b of size 2n holds
// m (x) I_n.
Element Lift2x2(const Algebra& lifted, const Eigen::Matrix2cd& m) {
  std::vector<Matrix> blocks;
  for (int size : lifted.blocks()) {
    const int n = size / 2;
    Matrix out = Matrix::Zero(size, size);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        out.block(r * n, c * n, n, n) = m(r, c) * Matrix::Identity(n, n);
      }
    }
    blocks.push_back(std::move(out));
  }
  return Element(lifted, std::move(blocks), false);
}

}  // namespace

bool InEffect(const Element& a, const Tolerances& tol) {
  RequireHermitian(a, "InEffect");
  return IsPositive(a, tol) && IsPositive(Unit(a.algebra()) - a, tol);
}

Element SupWithHalf(const Element& q, const Tolerances& tol) {
  RequireProjection(q, "SupWithHalf", tol);
  const Element qh = q.HermitianPart();
  return (qh + 0.5 * Complement(qh)).AsHermitian(tol);
}

HomoCertificate MakeHomoCertificate(double t, const Algebra& base, Rng& rng,
                                    int samples, const Tolerances& tol) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError("homo certificate: t must lie in [0, 1]");
  }
  std::vector<int> doubled;
  for (int n : base.blocks()) doubled.push_back(2 * n);
  const Algebra lifted(doubled);

  const double s = std::sqrt(t * (1.0 - t));
  const double c = 1.0 / (2.0 - t);
  Eigen::Matrix2cd pm, qm, vv, wm;
  pm << 1, 0, 0, 0;
  qm << t, s, s, 1.0 - t;
  const double v0 = std::sqrt(t * (1.0 - t) / (2.0 - t));
  const double v1 = std::sqrt(2.0 - t);
  vv << v0 * v0, v0 * v1, v1 * v0, v1 * v1;
  wm << 1, 0, -s / (2.0 - t), 0;

  const Element p = Lift2x2(lifted, pm).AsHermitian(tol);
  const Element q = Lift2x2(lifted, qm).AsHermitian(tol);
  const Element w = Lift2x2(lifted, wm);
  const Element sup = SupWithHalf(q, tol);
  const Element lower = (c * p).AsHermitian(tol);

  HomoCertificate cert;
  cert.t = t;
  cert.coefficient = c;
  cert.samples = samples;

  const Element gap = (sup - lower).AsHermitian(tol);
  cert.residual_lower = std::max(
      {0.0, -MinEigenvalue(gap), -MinEigenvalue((p - lower).AsHermitian())});

  const Element factor = (0.5 * Lift2x2(lifted, vv)).AsHermitian(tol);
  cert.residual_factor = Distance(gap, factor);

  // The congruence by w fixes every a = a11 (+) 0 and maps sup{q,1/2} to
  // c p, so a <= sup{q,1/2} forces a <= c p.
  const Element compressed = (w.Adjoint() * sup * w).AsHermitian(tol);
  double worst = Distance(compressed, lower);
  for (int k = 0; k < samples; ++k) {
    // Lower bound of p: a11 (+) 0 with a11 a random base effect, scaled by
    // bisection to the largest multiple still below sup{q, 1/2}.
    const Element a11 = GenEffect(base, rng);
    std::vector<Matrix> blocks;
    for (int b = 0; b < base.num_blocks(); ++b) {
      const int n = base.block_dim(b);
      Matrix m = Matrix::Zero(2 * n, 2 * n);
      m.topLeftCorner(n, n) = a11.block(b);
      blocks.push_back(std::move(m));
    }
    const Element a(lifted, std::move(blocks), true);
    if (OpNorm(a) == 0.0) continue;
    double lo = 0.0;
    double hi = 1.0 / OpNorm(a);
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (MinEigenvalue((sup - mid * a).AsHermitian()) >= 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const Element scaled = lo * a;
    const Element moved = (w.Adjoint() * scaled * w).AsHermitian(tol);
    worst = std::max(worst, Distance(moved, scaled));
    worst = std::max(worst, -MinEigenvalue((lower - scaled).AsHermitian()));
  }
  cert.maximality_residual = std::max(0.0, worst);
  return cert;
}

Element InfPWithHalfSup(const Element& p, const Element& q,
                        const Tolerances& tol) {
  RequireProjection(p, "InfPWithHalfSup", tol);
  RequireProjection(q, "InfPWithHalfSup", tol);
  const TwoProjectionPosition pos = TwoProjectionPositionOf(p, q, tol);
  std::vector<Matrix> blocks = (pos.p_and_q + 0.5 * pos.p_and_qperp).blocks();
  for (const auto& g : pos.generic) {
    blocks[g.block] += (1.0 / (2.0 - g.t)) * (g.e * g.e.adjoint());
  }
  return Element(p.algebra(), std::move(blocks), false).AsHermitian(tol);
}

bool OrthByOrder(const Element& p, const Element& q, const Tolerances& tol) {
  const Element inf = InfPWithHalfSup(p, q, tol);
  return Distance(inf, 0.5 * p.HermitianPart()) <= tol.eq;
}

Element Staircase::Sum() const {
  Element sum = Element::Zero(residual.algebra());
  for (const auto& term : terms) sum += term.t * term.p;
  return sum;
}

Staircase SpectralStaircase(const Element& a, int n, const Tolerances& tol) {
  if (n < 1) throw DomainError("staircase: n must be positive");
  if (!InEffect(a, tol)) {
    throw DomainError("staircase: input outside the effect algebra");
  }
  const Algebra& algebra = a.algebra();
  // Grid level -> spectral projection, accumulated across blocks.
  std::map<int, std::vector<Matrix>> levels;
  for (int b = 0; b < algebra.num_blocks(); ++b) {
    EigenSolver es(a.block(b));
    for (int j = 0; j < es.eigenvalues().size(); ++j) {
      const double lambda = es.eigenvalues()(j);
      // The slack keeps eigenvalues that sit on a grid point on that point.
      int k = static_cast<int>(std::floor(lambda * n + 0.5 * tol.psd * n));
      k = std::clamp(k, 0, n);
      if (k == 0) continue;
      auto [it, inserted] = levels.try_emplace(k);
      if (inserted) it->second = Element::Zero(algebra).blocks();
      const Vector v = es.eigenvectors().col(j);
      it->second[b] += v * v.adjoint();
    }
  }
  Staircase out{{}, a, 0.0, n};
  for (auto& [k, blocks] : levels) {
    out.terms.push_back(
        {static_cast<double>(k) / n,
         Element(algebra, std::move(blocks), false).AsHermitian(tol)});
  }
  out.residual = (a - out.Sum()).AsHermitian(tol);
  out.residual_norm = OpNorm(out.residual);
  const Element top = Element::Scalar(algebra, 1.0 / n) - out.residual;
  if (!IsPositive(out.residual, tol) || !IsPositive(top.AsHermitian(), tol)) {
    throw CertificateError("staircase residual outside [0, 1/n]");
  }
  return out;
}

}  // namespace loewner
