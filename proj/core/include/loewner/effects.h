// Effect-algebra constructions on the operator interval [0, 1]: the
// supremum of a projection with 1/2, the two-projection infimum formula and
// its 2x2 certificate, order-theoretic orthogonality, and the spectral
// staircase approximation of an effect.

#ifndef LOEWNER_EFFECTS_H_
#define LOEWNER_EFFECTS_H_

#include <vector>

#include "loewner/algebra.h"
#include "loewner/random.h"

namespace loewner {

// 0 <= a <= 1.
bool InEffect(const Element& a, const Tolerances& tol = {});

// q + q'/2, the least effect above both q and 1/2.
Element SupWithHalf(const Element& q, const Tolerances& tol = {});

// Numerical certificate that (1/(2-t)) p is the infimum of p and
// sup{q, 1/2} for p = diag(1, 0), q = [[t, s], [s, 1-t]], s = sqrt(t(1-t)),
// both taken in M_2(base).
struct HomoCertificate {
  double t = 0.0;
  double coefficient = 0.0;  // 1 / (2 - t)
  // max(0, -lambda_min) of sup{q,1/2} - c p and of p - c p.
  double residual_lower = 0.0;
  // |sup{q,1/2} - c p - v v^H / 2| for v = (sqrt(t(1-t)/(2-t)), sqrt(2-t)).
  double residual_factor = 0.0;
  // |w^H sup{q,1/2} w - c p| and the worst violation of a <= c p over
  // sampled lower bounds a of {p, sup{q,1/2}}, w = [[1,0],[-s/(2-t),0]].
  double maximality_residual = 0.0;
  int samples = 0;

  bool Passed(double threshold = 1e-9) const {
    return residual_lower <= threshold && residual_factor <= threshold &&
           maximality_residual <= threshold;
  }
};

// Throws DomainError if t is outside [0, 1].
HomoCertificate MakeHomoCertificate(double t, const Algebra& base, Rng& rng,
                                    int samples = 16,
                                    const Tolerances& tol = {});

// inf{p, sup{q, 1/2}} in the effect algebra, assembled from the
// two-projection position of (p, q): weight 1 on p^q, 1/2 on p^q', and
// 1/(2-t) on the p-line of every generic frame.
Element InfPWithHalfSup(const Element& p, const Element& q,
                        const Tolerances& tol = {});

// p and q orthogonal, decided purely from the order:
// inf{p, sup{q, 1/2}} == p / 2.
bool OrthByOrder(const Element& p, const Element& q,
                 const Tolerances& tol = {});

struct StaircaseTerm {
  double t = 0.0;  // grid level k/n in (0, 1]
  Element p;       // spectral projection of a
};

struct Staircase {
  std::vector<StaircaseTerm> terms;
  Element residual;  // a - sum t_i p_i, certified in [0, 1/n]
  double residual_norm = 0.0;
  int n = 1;

  Element Sum() const;
};

// Floor-to-grid spectral approximation: 0 <= a - sum t_i p_i <= 1/n, with
// mutually orthogonal spectral projections p_i of a.
Staircase SpectralStaircase(const Element& a, int n,
                            const Tolerances& tol = {});

}  // namespace loewner

#endif  // LOEWNER_EFFECTS_H_
