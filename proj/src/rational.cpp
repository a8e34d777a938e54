#include "qpersist/rational.hpp"

#include <utility>

#include "qpersist/errors.hpp"

namespace qpersist {

RationalMatrix RationalMatrix::from_double(const Eigen::MatrixXd& m) {
  RationalMatrix out(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out(r, c) = mpq_class(m(r, c));
  }
  return out;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  }
  return out;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw DimensionMismatch("rational product: inner dimensions differ");
  RationalMatrix out(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t i = 0; i < cols_; ++i) {
      const auto& a = (*this)(r, i);
      if (sgn(a) == 0) continue;
      for (std::size_t c = 0; c < rhs.cols_; ++c) {
        if (sgn(rhs(i, c)) != 0) out(r, c) += a * rhs(i, c);
      }
    }
  }
  return out;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionMismatch("rational sum: shapes differ");
  RationalMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
  return out;
}

bool RationalMatrix::is_zero() const {
  for (const auto& x : data_) {
    if (sgn(x) != 0) return false;
  }
  return true;
}

Eigen::MatrixXd RationalMatrix::to_double() const {
  Eigen::MatrixXd out(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c).get_d();
  }
  return out;
}

RationalMatrix RationalMatrix::hstack(const RationalMatrix& rhs) const {
  if (rows_ != rhs.rows_) throw DimensionMismatch("hstack: row counts differ");
  RationalMatrix out(rows_, cols_ + rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c);
    for (std::size_t c = 0; c < rhs.cols_; ++c) out(r, cols_ + c) = rhs(r, c);
  }
  return out;
}

RationalMatrix RationalMatrix::select_rows(const std::vector<std::size_t>& rows) const {
  RationalMatrix out(rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < cols_; ++c) out(i, c) = (*this)(rows[i], c);
  }
  return out;
}

std::vector<std::size_t> rref(RationalMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.rows() && sgn(m(pivot, col)) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row) {
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(pivot, c), m(row, c));
    }
    const mpq_class inv = 1 / m(row, col);
    for (std::size_t c = col; c < m.cols(); ++c) m(row, c) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || sgn(m(r, col)) == 0) continue;
      const mpq_class factor = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c) {
        if (sgn(m(row, c)) != 0) m(r, c) -= factor * m(row, c);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::size_t rank(const RationalMatrix& m) {
  RationalMatrix work = m;
  return rref(work).size();
}

RationalMatrix null_space(const RationalMatrix& m) {
  RationalMatrix work = m;
  const auto pivots = rref(work);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;

  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (!is_pivot[c]) free_cols.push_back(c);
  }
  RationalMatrix basis(m.cols(), free_cols.size());
  for (std::size_t j = 0; j < free_cols.size(); ++j) {
    const auto f = free_cols[j];
    basis(f, j) = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) basis(pivots[i], j) = -work(i, f);
  }
  return basis;
}

RationalMatrix orthogonal_basis(const RationalMatrix& columns) {
  const auto n = columns.rows();
  std::vector<std::vector<mpq_class>> kept;
  std::vector<mpq_class> norms;
  for (std::size_t c = 0; c < columns.cols(); ++c) {
    std::vector<mpq_class> v(n);
    for (std::size_t r = 0; r < n; ++r) v[r] = columns(r, c);
    for (std::size_t j = 0; j < kept.size(); ++j) {
      mpq_class dot = 0;
      for (std::size_t r = 0; r < n; ++r) dot += v[r] * kept[j][r];
      if (sgn(dot) == 0) continue;
      const mpq_class coeff = dot / norms[j];
      for (std::size_t r = 0; r < n; ++r) v[r] -= coeff * kept[j][r];
    }
    mpq_class norm = 0;
    for (const auto& x : v) norm += x * x;
    if (sgn(norm) == 0) continue;
    kept.push_back(std::move(v));
    norms.push_back(norm);
  }
  RationalMatrix out(n, kept.size());
  for (std::size_t j = 0; j < kept.size(); ++j) {
    for (std::size_t r = 0; r < n; ++r) out(r, j) = kept[j][r];
  }
  return out;
}

RationalMatrix projector_onto(const RationalMatrix& q) {
  const auto n = q.rows();
  RationalMatrix p(n, n);
  for (std::size_t j = 0; j < q.cols(); ++j) {
    mpq_class norm = 0;
    for (std::size_t r = 0; r < n; ++r) norm += q(r, j) * q(r, j);
    for (std::size_t a = 0; a < n; ++a) {
      if (sgn(q(a, j)) == 0) continue;
      for (std::size_t b = 0; b < n; ++b) {
        if (sgn(q(b, j)) != 0) p(a, b) += q(a, j) * q(b, j) / norm;
      }
    }
  }
  return p;
}

}  // namespace qpersist
