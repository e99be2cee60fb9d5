// Finite-dimensional C*-algebras realized as direct sums of full complex
// matrix blocks, together with the order, spectral calculus and norm
// primitives used throughout the library.
//
// An Algebra is a list of block sizes n_1, ..., n_k. An Element carries one
// dense n_i x n_i complex matrix per block. All operations are pure functions
// of immutable values.

#ifndef LOEWNER_ALGEBRA_H_
#define LOEWNER_ALGEBRA_H_

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace loewner {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two operands live in different algebras, or a shape does not match.
class AlgebraMismatchError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its domain (non-hermitian input, singular
// matrix, element outside the required interval, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A numerical certificate (linearity, reconstruction, well-definedness) failed.
class CertificateError : public Error {
 public:
  using Error::Error;
};

// Relative tolerances. All must be strictly positive.
struct Tolerances {
  double psd = 1e-9;    // eigenvalue slack for positivity
  double herm = 1e-10;  // hermitian symmetry
  double eq = 1e-8;     // element equality
  double rank = 1e-9;   // range-projection cutoff

  void Validate() const;
};

inline constexpr int kDefaultDimensionCap = 256;

class Algebra {
 public:
  // Throws DomainError on an empty block list, a non-positive block size or
  // when sum n_i^2 exceeds `dimension_cap`.
  explicit Algebra(std::vector<int> blocks,
                   int dimension_cap = kDefaultDimensionCap);

  const std::vector<int>& blocks() const { return blocks_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  int block_dim(int i) const { return blocks_[i]; }

  // Real dimension of the self-adjoint part, sum n_i^2.
  int dimension() const;
  // Sum n_i, the size of the block-diagonal matrix.
  int matrix_size() const;
  bool IsCommutative() const;

  std::string ToString() const;

  bool operator==(const Algebra& other) const = default;

 private:
  std::vector<int> blocks_;
};

class Element {
 public:
  // Validates shapes against `algebra`. When `hermitian` is set, every block
  // must satisfy |x - x^H| <= tol.herm (1 + |x|); the stored blocks are then
  // symmetrized. Violations raise DomainError.
  Element(Algebra algebra, std::vector<Matrix> blocks, bool hermitian,
          const Tolerances& tol = {});

  static Element Zero(const Algebra& algebra);
  static Element Scalar(const Algebra& algebra, double value);
  // Real diagonal element; `diagonal` lists the entries block after block.
  static Element Diagonal(const Algebra& algebra,
                          const std::vector<double>& diagonal);

  const Algebra& algebra() const { return algebra_; }
  const std::vector<Matrix>& blocks() const { return blocks_; }
  const Matrix& block(int i) const { return blocks_[i]; }
  bool hermitian() const { return hermitian_; }

  Element Adjoint() const;
  // (x + x^H) / 2 with the hermitian flag set.
  Element HermitianPart() const;
  // Marks a result as hermitian after checking it is within tolerance.
  Element AsHermitian(const Tolerances& tol = {}) const;
  // Block-diagonal dense matrix.
  Matrix ToDense() const;

  Element& operator+=(const Element& other);
  Element& operator-=(const Element& other);
  Element& operator*=(double scalar);

  friend Element operator+(Element lhs, const Element& rhs) {
    return lhs += rhs;
  }
  friend Element operator-(Element lhs, const Element& rhs) {
    return lhs -= rhs;
  }
  friend Element operator-(Element x) { return x *= -1.0; }
  friend Element operator*(double s, Element x) { return x *= s; }
  friend Element operator*(Element x, double s) { return x *= s; }
  // Algebra product. The hermitian flag of the result is cleared.
  friend Element operator*(const Element& lhs, const Element& rhs);

 private:
  Algebra algebra_;
  std::vector<Matrix> blocks_;
  bool hermitian_;
};

void RequireSameAlgebra(const Element& a, const Element& b);
void RequireHermitian(const Element& a, const char* what);

Element Unit(const Algebra& algebra);

// a o b = (ab + ba) / 2.
Element JordanProduct(const Element& a, const Element& b);

// Largest singular value over all blocks.
double OpNorm(const Element& a);
// max(1, |a|): the scale used by all relative tolerances.
double Scale(const Element& a);
// Distance |a - b| in operator norm; algebras must agree.
double Distance(const Element& a, const Element& b);

// Eigenvalues of a hermitian element, block after block, ascending in each.
std::vector<double> Eigenvalues(const Element& a);
double MinEigenvalue(const Element& a);
double MaxEigenvalue(const Element& a);

bool IsPositive(const Element& a, const Tolerances& tol = {});
// a <= b in the Loewner order.
bool Leq(const Element& a, const Element& b, const Tolerances& tol = {});
// b - a positive invertible.
bool LtStrict(const Element& a, const Element& b, const Tolerances& tol = {});
// Positive with lambda_min > tol.psd * scale.
bool IsPositiveInvertible(const Element& a, const Tolerances& tol = {});

// Spectral calculus on a hermitian element. DomainError if f returns a
// non-finite value on some eigenvalue.
Element FunCalc(const Element& a, const std::function<double(double)>& f);

Element SqrtPos(const Element& a, const Tolerances& tol = {});
// Hermitian inverse; requires min |lambda| > tol.psd * scale.
Element Inverse(const Element& a, const Tolerances& tol = {});
// a^r for positive a; negative r additionally requires invertibility.
Element Power(const Element& a, double r, const Tolerances& tol = {});
Element Exp(const Element& a);
Element Log(const Element& a, const Tolerances& tol = {});

// Spectral projection onto eigenvalues with |lambda| > tol.rank * |a|.
Element RangeProjection(const Element& a, const Tolerances& tol = {});

// Orthonormal basis of the self-adjoint part for the real inner product
// Re tr(x^H y): per block, E_jj, (E_jk + E_kj)/sqrt2 and i(E_jk - E_kj)/sqrt2.
std::vector<Element> HermitianBasis(const Algebra& algebra);
Eigen::VectorXd HermitianCoordinates(const Element& a);
Element FromHermitianCoordinates(const Algebra& algebra,
                                 const Eigen::VectorXd& coords);

// Matrix unit E_jk of block `block`.
Element MatrixUnit(const Algebra& algebra, int block, int j, int k);
// Identity on block `block`, zero elsewhere.
Element BlockUnit(const Algebra& algebra, int block);

}  // namespace loewner

#endif  // LOEWNER_ALGEBRA_H_
