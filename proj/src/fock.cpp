#include "holo/fock.hpp"

#include <cmath>

namespace holo {

namespace {

void require_same(const FockSpace& a, const FockSpace& b, const char* what) {
  if (!(a == b)) {
    throw DimensionMismatch(std::string(what) + ": cutoff " + std::to_string(a.cutoff()) + " vs " +
                            std::to_string(b.cutoff()));
  }
}

void require_mode(int mode) {
  if (mode != 1 && mode != 2) {
    throw std::invalid_argument("mode must be 1 or 2, got " + std::to_string(mode));
  }
}

}  // namespace

FockSpace::FockSpace(int cutoff) : cutoff_(cutoff) {
  if (cutoff < 0) throw std::invalid_argument("cutoff must be non-negative");
}

int FockSpace::index(int n1, int n2) const {
  if (n1 < 0 || n2 < 0 || n1 > cutoff_ || n2 > cutoff_) {
    throw std::out_of_range("occupation (" + std::to_string(n1) + ", " + std::to_string(n2) +
                            ") outside cutoff " + std::to_string(cutoff_));
  }
  return n1 * dim_per_mode() + n2;
}

std::pair<int, int> FockSpace::occupation(int flat) const {
  if (flat < 0 || flat >= dim()) throw std::out_of_range("flat index outside Fock space");
  return {flat / dim_per_mode(), flat % dim_per_mode()};
}

FockVector::FockVector(FockSpace space, Vector entries)
    : space_(space), entries_(std::move(entries)) {
  if (entries_.size() != space_.dim()) throw DimensionMismatch("vector length does not match space");
}

FockVector FockVector::operator+(const FockVector& other) const {
  require_same(space_, other.space_, "vector sum");
  return {space_, entries_ + other.entries_};
}

FockVector FockVector::operator-(const FockVector& other) const {
  require_same(space_, other.space_, "vector difference");
  return {space_, entries_ - other.entries_};
}

FockVector FockVector::operator*(cplx s) const { return {space_, entries_ * s}; }

FockOperator::FockOperator(FockSpace space, Matrix matrix)
    : space_(space), matrix_(std::move(matrix)) {
  if (matrix_.rows() != space_.dim() || matrix_.cols() != space_.dim()) {
    throw DimensionMismatch("matrix shape does not match space");
  }
}

FockOperator FockOperator::zero(const FockSpace& space) {
  return {space, Matrix::Zero(space.dim(), space.dim())};
}

FockOperator FockOperator::identity(const FockSpace& space) {
  return {space, Matrix::Identity(space.dim(), space.dim())};
}

FockOperator FockOperator::adjoint() const { return {space_, matrix_.adjoint()}; }

FockOperator FockOperator::operator+(const FockOperator& other) const {
  require_same(space_, other.space_, "operator sum");
  return {space_, matrix_ + other.matrix_};
}

FockOperator FockOperator::operator-(const FockOperator& other) const {
  require_same(space_, other.space_, "operator difference");
  return {space_, matrix_ - other.matrix_};
}

FockOperator FockOperator::operator*(const FockOperator& other) const {
  require_same(space_, other.space_, "operator product");
  return {space_, matrix_ * other.matrix_};
}

FockOperator FockOperator::operator*(cplx s) const { return {space_, matrix_ * s}; }

FockOperator FockOperator::operator-() const { return {space_, -matrix_}; }

FockVector FockOperator::operator*(const FockVector& v) const {
  require_same(space_, v.space(), "operator action");
  return {space_, matrix_ * v.entries()};
}

FockOperator annihilator(const FockSpace& space, int mode) {
  require_mode(mode);
  Matrix m = Matrix::Zero(space.dim(), space.dim());
  const int top = space.cutoff();
  for (int n1 = 0; n1 <= top; ++n1) {
    for (int n2 = 0; n2 <= top; ++n2) {
      const int n = mode == 1 ? n1 : n2;
      if (n == 0) continue;
      const int target = mode == 1 ? space.index(n1 - 1, n2) : space.index(n1, n2 - 1);
      m(target, space.index(n1, n2)) = std::sqrt(static_cast<double>(n));
    }
  }
  return {space, std::move(m)};
}

FockOperator creator(const FockSpace& space, int mode) { return annihilator(space, mode).adjoint(); }

FockOperator number_op(const FockSpace& space, int mode) {
  require_mode(mode);
  Matrix m = Matrix::Zero(space.dim(), space.dim());
  for (int i = 0; i < space.dim(); ++i) {
    const auto [n1, n2] = space.occupation(i);
    m(i, i) = static_cast<double>(mode == 1 ? n1 : n2);
  }
  return {space, std::move(m)};
}

FockVector basis_state(const FockSpace& space, int n1, int n2) {
  Vector v = Vector::Zero(space.dim());
  v(space.index(n1, n2)) = 1.0;
  return {space, std::move(v)};
}

FockOperator commutator(const FockOperator& a, const FockOperator& b) { return a * b - b * a; }

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double max_abs(const FockOperator& op) { return max_abs(op.matrix()); }

}  // namespace holo
