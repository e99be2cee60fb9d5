#include "loewner/projections.h"

#include <algorithm>
#include <cmath>
#include <set>

namespace loewner {
namespace {

using EigenSolver = Eigen::SelfAdjointEigenSolver<Matrix>;

void RequireProjection(const Element& p, const char* what,
                       const Tolerances& tol) {
  if (!IsProjection(p, tol)) {
    throw DomainError(std::string(what) + ": input is not a projection");
  }
}

// Orthonormal basis of the range of a projection block.
Matrix RangeBasis(const Matrix& p) {
  EigenSolver es(p);
  std::vector<int> cols;
  for (int j = 0; j < es.eigenvalues().size(); ++j) {
    if (es.eigenvalues()(j) > 0.5) cols.push_back(j);
  }
  Matrix v(p.rows(), static_cast<int>(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c) {
    v.col(static_cast<int>(c)) = es.eigenvectors().col(cols[c]);
  }
  return v;
}

}  // namespace

bool IsProjection(const Element& p, const Tolerances& tol) {
  for (const auto& b : p.blocks()) {
    if ((b - b.adjoint()).norm() > tol.herm * (1.0 + b.norm())) return false;
  }
  const Element h = p.HermitianPart();
  return OpNorm(h * h - h) <= tol.eq;
}

Element Complement(const Element& p) {
  return (Unit(p.algebra()) - p).AsHermitian();
}

std::vector<int> BlockRanks(const Element& p, const Tolerances& tol) {
  RequireProjection(p, "BlockRanks", tol);
  std::vector<int> ranks;
  const Element h = p.HermitianPart();
  for (const auto& b : h.blocks()) {
    EigenSolver es(b, Eigen::EigenvaluesOnly);
    ranks.push_back(static_cast<int>((es.eigenvalues().array() > 0.5).count()));
  }
  return ranks;
}

Element ProjSup(const Element& p, const Element& q, const Tolerances& tol) {
  RequireSameAlgebra(p, q);
  RequireProjection(p, "ProjSup", tol);
  RequireProjection(q, "ProjSup", tol);
  return RangeProjection((p + q).AsHermitian(tol), tol);
}

Element ProjInf(const Element& p, const Element& q, const Tolerances& tol) {
  RequireSameAlgebra(p, q);
  RequireProjection(p, "ProjInf", tol);
  RequireProjection(q, "ProjInf", tol);
  // range(p) ^ range(q) is the kernel of p' + q'.
  const Element gap = (Complement(p) + Complement(q)).AsHermitian(tol);
  return Complement(RangeProjection(gap, tol));
}

bool OrthogonalDirect(const Element& p, const Element& q,
                      const Tolerances& tol) {
  RequireSameAlgebra(p, q);
  return OpNorm(p * q) <= tol.eq;
}

bool MvnEquivalent(const Element& p, const Element& q, const Tolerances& tol) {
  RequireSameAlgebra(p, q);
  return BlockRanks(p, tol) == BlockRanks(q, tol);
}

bool MvnSubordinate(const Element& p, const Element& q,
                    const Tolerances& tol) {
  RequireSameAlgebra(p, q);
  const auto rp = BlockRanks(p, tol);
  const auto rq = BlockRanks(q, tol);
  for (size_t i = 0; i < rp.size(); ++i) {
    if (rp[i] > rq[i]) return false;
  }
  return true;
}

Element MvnPartialIsometry(const Element& p, const Element& q,
                           const Tolerances& tol) {
  if (!MvnEquivalent(p, q, tol)) {
    throw DomainError("MvnPartialIsometry: projections are not equivalent");
  }
  std::vector<Matrix> blocks;
  for (int b = 0; b < p.algebra().num_blocks(); ++b) {
    const Matrix vp = RangeBasis(p.HermitianPart().block(b));
    const Matrix vq = RangeBasis(q.HermitianPart().block(b));
    blocks.push_back(vp * vq.adjoint());
  }
  return Element(p.algebra(), std::move(blocks), false);
}

Element TwoProjectionPosition::GenericProjection() const {
  std::vector<Matrix> blocks = Element::Zero(p_and_q.algebra()).blocks();
  for (const auto& g : generic) {
    blocks[g.block] += g.e * g.e.adjoint() + g.f * g.f.adjoint();
  }
  return Element(p_and_q.algebra(), std::move(blocks), false).AsHermitian();
}

Element TwoProjectionPosition::ReconstructP() const {
  std::vector<Matrix> blocks = (p_and_q + p_and_qperp).blocks();
  for (const auto& g : generic) blocks[g.block] += g.e * g.e.adjoint();
  return Element(p_and_q.algebra(), std::move(blocks), false).AsHermitian();
}

Element TwoProjectionPosition::ReconstructQ() const {
  std::vector<Matrix> blocks = (p_and_q + pperp_and_q).blocks();
  for (const auto& g : generic) {
    const double s = std::sqrt(g.t * (1.0 - g.t));
    blocks[g.block] += g.t * g.e * g.e.adjoint() +
                       s * (g.e * g.f.adjoint() + g.f * g.e.adjoint()) +
                       (1.0 - g.t) * g.f * g.f.adjoint();
  }
  return Element(p_and_q.algebra(), std::move(blocks), false).AsHermitian();
}

TwoProjectionPosition TwoProjectionPositionOf(const Element& p,
                                              const Element& q,
                                              const Tolerances& tol) {
  RequireSameAlgebra(p, q);
  RequireProjection(p, "TwoProjectionPosition", tol);
  RequireProjection(q, "TwoProjectionPosition", tol);
  const Element ph = p.HermitianPart();
  const Element qh = q.HermitianPart();
  const Element pp = Complement(ph);
  const Element qp = Complement(qh);

  TwoProjectionPosition pos{ProjInf(ph, qh, tol), ProjInf(ph, qp, tol),
                            ProjInf(pp, qh, tol), ProjInf(pp, qp, tol),
                            {}};

  // Generic part of p: what is left after removing both p-corners.
  const Element p0 = (ph - pos.p_and_q - pos.p_and_qperp).AsHermitian(tol);
  for (int b = 0; b < p.algebra().num_blocks(); ++b) {
    const Matrix v = RangeBasis(p0.block(b));
    if (v.cols() == 0) continue;
    const Matrix& qb = qh.block(b);
    Matrix compressed = v.adjoint() * qb * v;
    compressed = 0.5 * (compressed + compressed.adjoint());
    EigenSolver es(compressed);
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
      const double t = std::clamp(es.eigenvalues()(k), 0.0, 1.0);
      const Vector e = v * es.eigenvectors().col(k);
      Vector f = qb * e - t * e;
      const double norm = f.norm();
      if (norm <= 0.0) {
        throw CertificateError(
            "two-projection position: degenerate generic frame");
      }
      f /= norm;
      pos.generic.push_back(GenericFrame{b, t, e, f});
    }
  }
  return pos;
}

TypeDecomposition TypeDecompositionOf(const Algebra& algebra) {
  TypeDecomposition out;
  out.block_type = algebra.blocks();
  std::set<int> dims(algebra.blocks().begin(), algebra.blocks().end());
  dims.insert(1);
  for (int n : dims) {
    Element sum = Element::Zero(algebra);
    for (int b = 0; b < algebra.num_blocks(); ++b) {
      if (algebra.block_dim(b) == n) sum += BlockUnit(algebra, b);
    }
    out.by_dimension.emplace(n, sum);
  }
  return out;
}

bool IsCentral(const Element& p, const Tolerances& tol) {
  RequireProjection(p, "IsCentral", tol);
  const Algebra& algebra = p.algebra();
  for (int b = 0; b < algebra.num_blocks(); ++b) {
    const Matrix& pb = p.block(b);
    const int n = algebra.block_dim(b);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Matrix unit = Matrix::Zero(n, n);
        unit(j, k) = 1.0;
        if ((pb * unit - unit * pb).norm() > tol.eq) return false;
      }
    }
  }
  return true;
}

bool IsAbelianProjection(const Element& p, const Tolerances& tol) {
  const auto ranks = BlockRanks(p, tol);
  return std::all_of(ranks.begin(), ranks.end(), [](int r) { return r <= 1; });
}

}  // namespace loewner
