#include "loewner/random.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace loewner {
namespace {

Element FromSpectrum(const Algebra& algebra, Rng& rng,
                     const std::function<double()>& draw) {
  std::vector<Matrix> blocks;
  for (int n : algebra.blocks()) {
    const Matrix u = RandomUnitary(n, rng);
    Eigen::VectorXcd d(n);
    for (int j = 0; j < n; ++j) d(j) = draw();
    Matrix m = u * d.asDiagonal() * u.adjoint();
    blocks.push_back(0.5 * (m + m.adjoint()));
  }
  return Element(algebra, std::move(blocks), true);
}

}  // namespace

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(SplitMix64(seed)) {}

Rng Rng::ForTrial(std::uint64_t seed, std::uint64_t index) {
  return Rng(SplitMix64(seed) ^ SplitMix64(index + 0x632be59bd9b4e019ULL));
}

double Rng::Uniform() {
  // 53 random mantissa bits.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

int Rng::UniformInt(int n) {
  return static_cast<int>(engine_() % static_cast<std::uint64_t>(n));
}

double Rng::Normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = Uniform();
  while (u1 <= 0.0) u1 = Uniform();
  const double u2 = Uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Complex Rng::ComplexNormal() {
  const double re = Normal();
  const double im = Normal();
  return Complex(re, im) / std::sqrt(2.0);
}

std::vector<int> Rng::Permutation(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(p[i], p[UniformInt(i + 1)]);
  return p;
}

Matrix RandomUnitary(int n, Rng& rng) {
  Matrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = rng.ComplexNormal();
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

Element GenHermitian(const Algebra& algebra, double scale, Rng& rng) {
  return FromSpectrum(algebra, rng,
                      [&] { return rng.Uniform(-scale, scale); });
}

Element GenEffect(const Algebra& algebra, Rng& rng) {
  return FromSpectrum(algebra, rng, [&] {
    return std::clamp(rng.Uniform(-0.2, 1.2), 0.0, 1.0);
  });
}

Element GenEffectInRange(const Algebra& algebra, double lo, double hi,
                         Rng& rng) {
  return FromSpectrum(algebra, rng, [&] { return rng.Uniform(lo, hi); });
}

Element GenProjection(const Algebra& algebra, const std::vector<int>& ranks,
                      Rng& rng) {
  if (static_cast<int>(ranks.size()) != algebra.num_blocks()) {
    throw AlgebraMismatchError("rank profile does not match algebra");
  }
  std::vector<Matrix> blocks;
  for (int b = 0; b < algebra.num_blocks(); ++b) {
    const int n = algebra.block_dim(b);
    if (ranks[b] < 0 || ranks[b] > n) throw DomainError("invalid rank");
    const Matrix u = RandomUnitary(n, rng);
    const Matrix v = u.leftCols(ranks[b]);
    Matrix p = v * v.adjoint();
    blocks.push_back(0.5 * (p + p.adjoint()));
  }
  return Element(algebra, std::move(blocks), true);
}

Element GenProjection(const Algebra& algebra, Rng& rng) {
  std::vector<int> ranks;
  for (int n : algebra.blocks()) ranks.push_back(rng.UniformInt(n + 1));
  return GenProjection(algebra, ranks, rng);
}

Element GenPosInvertible(const Algebra& algebra, double condition_cap,
                         Rng& rng, double scale) {
  const double lo = 1.0 / condition_cap;
  return FromSpectrum(algebra, rng,
                      [&] { return scale * rng.Uniform(lo, 1.0); });
}

Element GenPositive(const Algebra& algebra, double scale, Rng& rng) {
  return FromSpectrum(algebra, rng, [&] {
    return std::max(0.0, scale * rng.Uniform(-0.2, 1.0));
  });
}

}  // namespace loewner
