#pragma once

#include <cstddef>
#include <vector>

#include <gmpxx.h>
#include <Eigen/Dense>

namespace qpersist {

/// Dense matrix over Q, row-major. Backs the exact rank and null-space
/// computations used as ground truth for kernel dimensions.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  /// Converts every double exactly (doubles are dyadic rationals).
  static RationalMatrix from_double(const Eigen::MatrixXd& m);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  mpq_class& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const mpq_class& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  RationalMatrix transpose() const;
  RationalMatrix operator*(const RationalMatrix& rhs) const;
  RationalMatrix operator+(const RationalMatrix& rhs) const;
  bool is_zero() const;

  Eigen::MatrixXd to_double() const;

  /// Horizontal concatenation [this | rhs].
  RationalMatrix hstack(const RationalMatrix& rhs) const;
  RationalMatrix select_rows(const std::vector<std::size_t>& rows) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<mpq_class> data_;
};

/// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> rref(RationalMatrix& m);

std::size_t rank(const RationalMatrix& m);

/// Basis of {x : m x = 0}, one column per basis vector (cols() x nullity).
RationalMatrix null_space(const RationalMatrix& m);

/// Orthogonal (not normalised) basis of the column span via exact
/// Gram-Schmidt; zero columns are dropped.
RationalMatrix orthogonal_basis(const RationalMatrix& columns);

/// Orthogonal projector onto the column span of an orthogonal basis.
RationalMatrix projector_onto(const RationalMatrix& orthogonal_columns);

}  // namespace qpersist
