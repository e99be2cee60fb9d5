// Seeded random source and random instance generators.
//
// Every stream is derived from a 64-bit seed through splitmix64, and the
// Gaussian sampler is implemented here rather than through
// std::normal_distribution, so identical seeds give bit-identical streams
// across standard library implementations.

#ifndef LOEWNER_RANDOM_H_
#define LOEWNER_RANDOM_H_

#include <cstdint>
#include <random>
#include <vector>

#include "loewner/algebra.h"

namespace loewner {

class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  // Independent stream for trial `index` of a run seeded with `seed`.
  static Rng ForTrial(std::uint64_t seed, std::uint64_t index);

  // Uniform on [0, 1).
  double Uniform();
  double Uniform(double lo, double hi);
  // Uniform integer on [0, n).
  int UniformInt(int n);
  double Normal();
  Complex ComplexNormal();
  std::vector<int> Permutation(int n);

  std::uint64_t NextU64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t SplitMix64(std::uint64_t x);

// Haar-distributed n x n unitary (QR of a complex Gaussian, phase corrected).
Matrix RandomUnitary(int n, Rng& rng);

// Hermitian element with spectrum uniform on [-scale, scale].
Element GenHermitian(const Algebra& algebra, double scale, Rng& rng);
// Effect with clipped spectrum: eigenvalues clamp(U(-0.2, 1.2), 0, 1).
Element GenEffect(const Algebra& algebra, Rng& rng);
// Effect with spectrum uniform on [lo, hi] (0 <= lo <= hi <= 1).
Element GenEffectInRange(const Algebra& algebra, double lo, double hi,
                         Rng& rng);
// Projection with ranks[i] on block i; Haar-random frames.
Element GenProjection(const Algebra& algebra, const std::vector<int>& ranks,
                      Rng& rng);
// Projection with uniformly random rank in each block.
Element GenProjection(const Algebra& algebra, Rng& rng);
// Positive invertible with spectrum in [1/condition_cap, 1] * scale.
Element GenPosInvertible(const Algebra& algebra, double condition_cap,
                         Rng& rng, double scale = 1.0);
// Positive (possibly singular) element with spectrum in [0, scale].
Element GenPositive(const Algebra& algebra, double scale, Rng& rng);

}  // namespace loewner

#endif  // LOEWNER_RANDOM_H_
