#include "loewner/algebra.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace loewner {
namespace {

using EigenSolver = Eigen::SelfAdjointEigenSolver<Matrix>;

Matrix Symmetrize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

double MatrixOpNorm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

void Tolerances::Validate() const {
  if (!(psd > 0) || !(herm > 0) || !(eq > 0) || !(rank > 0)) {
    throw DomainError("tolerances must be strictly positive");
  }
}

Algebra::Algebra(std::vector<int> blocks, int dimension_cap)
    : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw DomainError("algebra needs at least one block");
  long total = 0;
  for (int n : blocks_) {
    if (n < 1) throw DomainError("block dimensions must be positive");
    total += static_cast<long>(n) * n;
  }
  if (total > dimension_cap) {
    throw DomainError("algebra dimension " + std::to_string(total) +
                      " exceeds cap " + std::to_string(dimension_cap));
  }
}

int Algebra::dimension() const {
  return std::accumulate(blocks_.begin(), blocks_.end(), 0,
                         [](int acc, int n) { return acc + n * n; });
}

int Algebra::matrix_size() const {
  return std::accumulate(blocks_.begin(), blocks_.end(), 0);
}

bool Algebra::IsCommutative() const {
  return std::all_of(blocks_.begin(), blocks_.end(),
                     [](int n) { return n == 1; });
}

std::string Algebra::ToString() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < blocks_.size(); ++i) {
    if (i) os << ",";
    os << blocks_[i];
  }
  os << "]";
  return os.str();
}

Element::Element(Algebra algebra, std::vector<Matrix> blocks, bool hermitian,
                 const Tolerances& tol)
    : algebra_(std::move(algebra)),
      blocks_(std::move(blocks)),
      hermitian_(hermitian) {
  if (static_cast<int>(blocks_.size()) != algebra_.num_blocks()) {
    throw AlgebraMismatchError("element has " +
                               std::to_string(blocks_.size()) +
                               " blocks, algebra " + algebra_.ToString());
  }
  for (int i = 0; i < algebra_.num_blocks(); ++i) {
    const int n = algebra_.block_dim(i);
    if (blocks_[i].rows() != n || blocks_[i].cols() != n) {
      throw AlgebraMismatchError("block " + std::to_string(i) +
                                 " shape does not match algebra " +
                                 algebra_.ToString());
    }
    if (!blocks_[i].allFinite()) {
      throw DomainError("element has non-finite entries");
    }
  }
  if (hermitian_) {
    for (auto& b : blocks_) {
      const double skew = (b - b.adjoint()).norm();
      if (skew > tol.herm * (1.0 + b.norm())) {
        throw DomainError("element is not hermitian within tolerance");
      }
      b = Symmetrize(b);
    }
  }
}

Element Element::Zero(const Algebra& algebra) {
  std::vector<Matrix> blocks;
  for (int n : algebra.blocks()) blocks.push_back(Matrix::Zero(n, n));
  return Element(algebra, std::move(blocks), true);
}

Element Element::Scalar(const Algebra& algebra, double value) {
  std::vector<Matrix> blocks;
  for (int n : algebra.blocks()) {
    blocks.push_back(Matrix::Identity(n, n) * Complex(value, 0.0));
  }
  return Element(algebra, std::move(blocks), true);
}

Element Element::Diagonal(const Algebra& algebra,
                          const std::vector<double>& diagonal) {
  if (static_cast<int>(diagonal.size()) != algebra.matrix_size()) {
    throw AlgebraMismatchError("diagonal length does not match algebra");
  }
  std::vector<Matrix> blocks;
  int offset = 0;
  for (int n : algebra.blocks()) {
    Matrix m = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) m(j, j) = diagonal[offset + j];
    offset += n;
    blocks.push_back(std::move(m));
  }
  return Element(algebra, std::move(blocks), true);
}

Element Element::Adjoint() const {
  std::vector<Matrix> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(b.adjoint());
  return Element(algebra_, std::move(out), hermitian_);
}

Element Element::HermitianPart() const {
  std::vector<Matrix> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(Symmetrize(b));
  return Element(algebra_, std::move(out), true);
}

Element Element::AsHermitian(const Tolerances& tol) const {
  if (hermitian_) return *this;
  return Element(algebra_, blocks_, true, tol);
}

Matrix Element::ToDense() const {
  const int size = algebra_.matrix_size();
  Matrix out = Matrix::Zero(size, size);
  int offset = 0;
  for (const auto& b : blocks_) {
    out.block(offset, offset, b.rows(), b.cols()) = b;
    offset += static_cast<int>(b.rows());
  }
  return out;
}

Element& Element::operator+=(const Element& other) {
  RequireSameAlgebra(*this, other);
  for (size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += other.blocks_[i];
  hermitian_ = hermitian_ && other.hermitian_;
  return *this;
}

Element& Element::operator-=(const Element& other) {
  RequireSameAlgebra(*this, other);
  for (size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= other.blocks_[i];
  hermitian_ = hermitian_ && other.hermitian_;
  return *this;
}

Element& Element::operator*=(double scalar) {
  for (auto& b : blocks_) b *= Complex(scalar, 0.0);
  return *this;
}

Element operator*(const Element& lhs, const Element& rhs) {
  RequireSameAlgebra(lhs, rhs);
  std::vector<Matrix> out;
  out.reserve(lhs.blocks_.size());
  for (size_t i = 0; i < lhs.blocks_.size(); ++i) {
    out.push_back(lhs.blocks_[i] * rhs.blocks_[i]);
  }
  return Element(lhs.algebra_, std::move(out), false);
}

void RequireSameAlgebra(const Element& a, const Element& b) {
  if (!(a.algebra() == b.algebra())) {
    throw AlgebraMismatchError("algebra mismatch: " + a.algebra().ToString() +
                               " vs " + b.algebra().ToString());
  }
}

void RequireHermitian(const Element& a, const char* what) {
  if (!a.hermitian()) {
    throw DomainError(std::string(what) + ": input must be hermitian");
  }
}

Element Unit(const Algebra& algebra) { return Element::Scalar(algebra, 1.0); }

Element JordanProduct(const Element& a, const Element& b) {
  RequireSameAlgebra(a, b);
  std::vector<Matrix> out;
  for (int i = 0; i < a.algebra().num_blocks(); ++i) {
    const Matrix& x = a.block(i);
    const Matrix& y = b.block(i);
    out.push_back(0.5 * (x * y + y * x));
  }
  if (a.hermitian() && b.hermitian()) {
    // The product of hermitians is hermitian up to rounding only.
    for (auto& m : out) m = Symmetrize(m);
    return Element(a.algebra(), std::move(out), true);
  }
  return Element(a.algebra(), std::move(out), false);
}

double OpNorm(const Element& a) {
  double norm = 0.0;
  for (const auto& b : a.blocks()) {
    if (a.hermitian()) {
      EigenSolver es(b, Eigen::EigenvaluesOnly);
      norm = std::max(norm, es.eigenvalues().cwiseAbs().maxCoeff());
    } else {
      norm = std::max(norm, MatrixOpNorm(b));
    }
  }
  return norm;
}

double Scale(const Element& a) { return std::max(1.0, OpNorm(a)); }

double Distance(const Element& a, const Element& b) { return OpNorm(a - b); }

std::vector<double> Eigenvalues(const Element& a) {
  RequireHermitian(a, "Eigenvalues");
  std::vector<double> out;
  for (const auto& b : a.blocks()) {
    EigenSolver es(b, Eigen::EigenvaluesOnly);
    for (int j = 0; j < es.eigenvalues().size(); ++j) {
      out.push_back(es.eigenvalues()(j));
    }
  }
  return out;
}

double MinEigenvalue(const Element& a) {
  const auto ev = Eigenvalues(a);
  return *std::min_element(ev.begin(), ev.end());
}

double MaxEigenvalue(const Element& a) {
  const auto ev = Eigenvalues(a);
  return *std::max_element(ev.begin(), ev.end());
}

bool IsPositive(const Element& a, const Tolerances& tol) {
  RequireHermitian(a, "IsPositive");
  const auto ev = Eigenvalues(a);
  double norm = 0.0;
  for (double l : ev) norm = std::max(norm, std::abs(l));
  const double slack = tol.psd * std::max(1.0, norm);
  return *std::min_element(ev.begin(), ev.end()) >= -slack;
}

bool Leq(const Element& a, const Element& b, const Tolerances& tol) {
  RequireSameAlgebra(a, b);
  RequireHermitian(a, "Leq");
  RequireHermitian(b, "Leq");
  return IsPositive(b - a, tol);
}

bool IsPositiveInvertible(const Element& a, const Tolerances& tol) {
  RequireHermitian(a, "IsPositiveInvertible");
  const auto ev = Eigenvalues(a);
  double norm = 0.0;
  for (double l : ev) norm = std::max(norm, std::abs(l));
  return *std::min_element(ev.begin(), ev.end()) >
         tol.psd * std::max(1.0, norm);
}

bool LtStrict(const Element& a, const Element& b, const Tolerances& tol) {
  RequireSameAlgebra(a, b);
  RequireHermitian(a, "LtStrict");
  RequireHermitian(b, "LtStrict");
  return IsPositiveInvertible(b - a, tol);
}

Element FunCalc(const Element& a, const std::function<double(double)>& f) {
  RequireHermitian(a, "FunCalc");
  std::vector<Matrix> out;
  out.reserve(a.blocks().size());
  for (const auto& b : a.blocks()) {
    EigenSolver es(b);
    Eigen::VectorXd values = es.eigenvalues();
    for (int j = 0; j < values.size(); ++j) {
      const double v = f(values(j));
      if (!std::isfinite(v)) {
        throw DomainError("function undefined on eigenvalue " +
                          std::to_string(values(j)));
      }
      values(j) = v;
    }
    const Matrix& u = es.eigenvectors();
    out.push_back(Symmetrize(u * values.cast<Complex>().asDiagonal() *
                             u.adjoint()));
  }
  return Element(a.algebra(), std::move(out), true);
}

Element SqrtPos(const Element& a, const Tolerances& tol) {
  if (!IsPositive(a, tol)) throw DomainError("SqrtPos: input not positive");
  return FunCalc(a, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

Element Inverse(const Element& a, const Tolerances& tol) {
  RequireHermitian(a, "Inverse");
  const auto ev = Eigenvalues(a);
  double norm = 0.0;
  double smallest = std::numeric_limits<double>::infinity();
  for (double l : ev) {
    norm = std::max(norm, std::abs(l));
    smallest = std::min(smallest, std::abs(l));
  }
  if (!(smallest > tol.psd * std::max(1.0, norm))) {
    throw DomainError("Inverse: singular input");
  }
  return FunCalc(a, [](double x) { return 1.0 / x; });
}

Element Power(const Element& a, double r, const Tolerances& tol) {
  if (r < 0) {
    if (!IsPositiveInvertible(a, tol)) {
      throw DomainError("Power: negative exponent needs positive invertible");
    }
    return FunCalc(a, [r](double x) { return std::pow(x, r); });
  }
  if (!IsPositive(a, tol)) throw DomainError("Power: input not positive");
  return FunCalc(a, [r](double x) { return std::pow(std::max(x, 0.0), r); });
}

Element Exp(const Element& a) {
  return FunCalc(a, [](double x) { return std::exp(x); });
}

Element Log(const Element& a, const Tolerances& tol) {
  if (!IsPositiveInvertible(a, tol)) {
    throw DomainError("Log: input not positive invertible");
  }
  return FunCalc(a, [](double x) { return std::log(x); });
}

Element RangeProjection(const Element& a, const Tolerances& tol) {
  RequireHermitian(a, "RangeProjection");
  const double cutoff = tol.rank * Scale(a);
  std::vector<Matrix> out;
  for (const auto& b : a.blocks()) {
    EigenSolver es(b);
    const int n = static_cast<int>(b.rows());
    Matrix p = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
      const double l = es.eigenvalues()(j);
      if (std::abs(l) > cutoff && l != 0.0) {
        const Vector v = es.eigenvectors().col(j);
        p += v * v.adjoint();
      }
    }
    out.push_back(Symmetrize(p));
  }
  return Element(a.algebra(), std::move(out), true);
}

std::vector<Element> HermitianBasis(const Algebra& algebra) {
  std::vector<Element> basis;
  basis.reserve(algebra.dimension());
  const double r = 1.0 / std::sqrt(2.0);
  for (int b = 0; b < algebra.num_blocks(); ++b) {
    const int n = algebra.block_dim(b);
    for (int j = 0; j < n; ++j) {
      basis.push_back(MatrixUnit(algebra, b, j, j).AsHermitian());
    }
    for (int j = 0; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        Element s = r * (MatrixUnit(algebra, b, j, k) +
                         MatrixUnit(algebra, b, k, j));
        basis.push_back(s.AsHermitian());
        std::vector<Matrix> blocks = Element::Zero(algebra).blocks();
        blocks[b](j, k) = Complex(0.0, r);
        blocks[b](k, j) = Complex(0.0, -r);
        basis.emplace_back(algebra, std::move(blocks), true);
      }
    }
  }
  return basis;
}

Eigen::VectorXd HermitianCoordinates(const Element& a) {
  const Algebra& algebra = a.algebra();
  Eigen::VectorXd coords(algebra.dimension());
  const double s = std::sqrt(2.0);
  int idx = 0;
  for (int b = 0; b < algebra.num_blocks(); ++b) {
    const int n = algebra.block_dim(b);
    const Matrix& m = a.block(b);
    for (int j = 0; j < n; ++j) coords(idx++) = m(j, j).real();
    for (int j = 0; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        // Re tr(E x) for E = (E_jk + E_kj)/sqrt2 and E = i(E_jk - E_kj)/sqrt2.
        coords(idx++) = (m(k, j).real() + m(j, k).real()) / s;
        coords(idx++) = (m(j, k).imag() - m(k, j).imag()) / s;
      }
    }
  }
  return coords;
}

Element FromHermitianCoordinates(const Algebra& algebra,
                                 const Eigen::VectorXd& coords) {
  if (coords.size() != algebra.dimension()) {
    throw AlgebraMismatchError("coordinate vector has wrong length");
  }
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<Matrix> blocks;
  int idx = 0;
  for (int b = 0; b < algebra.num_blocks(); ++b) {
    const int n = algebra.block_dim(b);
    Matrix m = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) m(j, j) = coords(idx++);
    for (int j = 0; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const double sym = coords(idx++) * r;
        const double anti = coords(idx++) * r;
        m(j, k) = Complex(sym, anti);
        m(k, j) = Complex(sym, -anti);
      }
    }
    blocks.push_back(std::move(m));
  }
  return Element(algebra, std::move(blocks), true);
}

Element MatrixUnit(const Algebra& algebra, int block, int j, int k) {
  if (block < 0 || block >= algebra.num_blocks() || j < 0 || k < 0 ||
      j >= algebra.block_dim(block) || k >= algebra.block_dim(block)) {
    throw DomainError("matrix unit index out of range");
  }
  std::vector<Matrix> blocks = Element::Zero(algebra).blocks();
  blocks[block](j, k) = 1.0;
  return Element(algebra, std::move(blocks), false);
}

Element BlockUnit(const Algebra& algebra, int block) {
  if (block < 0 || block >= algebra.num_blocks()) {
    throw DomainError("block index out of range");
  }
  std::vector<Matrix> blocks = Element::Zero(algebra).blocks();
  const int n = algebra.block_dim(block);
  blocks[block] = Matrix::Identity(n, n);
  return Element(algebra, std::move(blocks), true);
}

}  // namespace loewner
