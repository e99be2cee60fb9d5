// Seeded generators and property suites.
//
// Every trial draws from its own stream Rng::ForTrial(seed, index), so a
// suite's report depends only on its TrialConfig.

#ifndef LOEWNER_HARNESS_H_
#define LOEWNER_HARNESS_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "loewner/algebra.h"
#include "loewner/canonical_maps.h"
#include "loewner/decompose.h"
#include "loewner/json_io.h"
#include "loewner/random.h"

namespace loewner {

struct TrialConfig {
  std::uint64_t seed = 0;
  int trials = 100;
  // Block signatures to draw algebras from; empty selects a suite default.
  std::vector<std::vector<int>> algebra_pool;
  Tolerances tol;
};

// Random Jordan *-isomorphism: blocks of equal size are shuffled, unitaries
// are Haar, and blocks of size >= 2 are transposed with probability 1/2.
// DomainError when the block-size multisets differ.
JordanSpec GenJordanSpec(const Algebra& source, const Algebra& target,
                         Rng& rng);
// Target algebra is a random reordering of the source blocks.
JordanSpec GenJordanSpec(const Algebra& source, Rng& rng);

// Canonical expression for an interval kind:
//   effect       Phi_alpha^{-1} o Phi_T o J
//   cone(_strict) b J(.) b
//   sa           b J(.) b + c
OrderIsoExpr GenOrderIsoExpr(const Algebra& algebra, IntervalKind kind,
                             Rng& rng);

// Pair a <= b inside the interval, built from a positive increment.
std::pair<Element, Element> GenComparablePair(const Algebra& algebra,
                                              IntervalKind kind, Rng& rng);

struct OrderIsoReport {
  int comparable_pairs = 0;
  int incomparable_pairs = 0;
  int violations = 0;
  std::vector<std::pair<Element, Element>> witnesses;  // at most 3 kept

  bool passed() const { return violations == 0; }
};

// leq(a, b) <=> leq(Phi(a), Phi(b)) on n comparable and n independent pairs.
OrderIsoReport CheckOrderIso(const BlackBoxMap& phi, int n, Rng& rng,
                             const Tolerances& tol = {});

// Bounded grid search for a <= b with a^2 not <= b^2 in M_2 effects.
std::optional<std::pair<Element, Element>> FindSquareCounterexample(
    const Tolerances& tol = {});

// Scalar increasing piecewise-linear map with knots on a grid.
struct PiecewiseLinear {
  std::vector<double> knots;
  std::vector<double> values;

  double operator()(double t) const;
};

// Product-form map a -> (f_y(a(mu(y))))_y on a commutative algebra.
struct ProductMap {
  std::vector<int> mu;
  std::vector<PiecewiseLinear> f;

  Element operator()(const Element& a) const;
};

// f_y on the interval's grid (see CommOptions) with random positive slopes;
// effect maps fix 0 and 1, cone maps fix 0.
ProductMap GenProductMap(int points, IntervalKind kind, const CommOptions& grid,
                         Rng& rng);

struct TrialResult {
  int index = 0;
  std::map<std::string, double> metrics;
  bool passed = true;
  std::string error;
};

struct SuiteReport {
  std::string suite;
  std::string statement;
  std::uint64_t seed = 0;
  int trials = 0;
  std::map<std::string, double> thresholds;
  std::vector<TrialResult> results;

  bool passed() const;
  int failures() const;
  Json ToJson() const;
};

const std::vector<std::string>& SuiteNames();
// DomainError for an unknown suite.
SuiteReport RunSuite(const std::string& name, const TrialConfig& config);
// Report for several suites; "all" expands to SuiteNames().
Json RunSuites(const std::string& name, const TrialConfig& config);

}  // namespace loewner

#endif  // LOEWNER_HARNESS_H_
