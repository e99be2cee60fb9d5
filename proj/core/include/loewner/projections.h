// Projection lattice, Murray-von Neumann comparison, the canonical position
// of two projections, and the central type decomposition of an algebra.

#ifndef LOEWNER_PROJECTIONS_H_
#define LOEWNER_PROJECTIONS_H_

#include <map>
#include <vector>

#include "loewner/algebra.h"

namespace loewner {

bool IsProjection(const Element& p, const Tolerances& tol = {});
// 1 - p.
Element Complement(const Element& p);

// Rank of a projection in each block.
std::vector<int> BlockRanks(const Element& p, const Tolerances& tol = {});

// Projection onto range(p) intersect range(q).
Element ProjInf(const Element& p, const Element& q, const Tolerances& tol = {});
// Projection onto range(p) + range(q).
Element ProjSup(const Element& p, const Element& q, const Tolerances& tol = {});

// |pq| <= tol.eq.
bool OrthogonalDirect(const Element& p, const Element& q,
                      const Tolerances& tol = {});

// Blockwise rank equality / inequality.
bool MvnEquivalent(const Element& p, const Element& q,
                   const Tolerances& tol = {});
bool MvnSubordinate(const Element& p, const Element& q,
                    const Tolerances& tol = {});
// A partial isometry v with v v^H = p and v^H v = q. Requires p ~ q.
Element MvnPartialIsometry(const Element& p, const Element& q,
                           const Tolerances& tol = {});

// One two-dimensional invariant subspace on which p and q act as
//   p = [[1, 0], [0, 0]],  q = [[t, s], [s, 1 - t]],  s = sqrt(t (1 - t))
// in the orthonormal frame (e, f) of block `block`.
struct GenericFrame {
  int block = 0;
  double t = 0.0;
  Vector e;
  Vector f;
};

struct TwoProjectionPosition {
  Element p_and_q;          // p ^ q
  Element p_and_qperp;      // p ^ q'
  Element pperp_and_q;      // p' ^ q
  Element pperp_and_qperp;  // p' ^ q'
  std::vector<GenericFrame> generic;

  // Projection onto the frames' spans.
  Element GenericProjection() const;
  // p and q reassembled from the corners and frames.
  Element ReconstructP() const;
  Element ReconstructQ() const;
};

TwoProjectionPosition TwoProjectionPositionOf(const Element& p,
                                              const Element& q,
                                              const Tolerances& tol = {});

struct TypeDecomposition {
  // Central projection summing the identities of all blocks of dimension n,
  // for every n present in the algebra. p(1) is always included.
  std::map<int, Element> by_dimension;
  // Block dimension of each block, in block order.
  std::vector<int> block_type;

  const Element& Abelian() const { return by_dimension.at(1); }
};

TypeDecomposition TypeDecompositionOf(const Algebra& algebra);

// Commutes with all matrix units of the algebra.
bool IsCentral(const Element& p, const Tolerances& tol = {});
// p A p commutative: blockwise rank at most one.
bool IsAbelianProjection(const Element& p, const Tolerances& tol = {});

}  // namespace loewner

#endif  // LOEWNER_PROJECTIONS_H_
