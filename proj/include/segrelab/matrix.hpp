#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "segrelab/error.hpp"
#include "segrelab/field.hpp"

namespace segrelab {

/// Dense row-major matrix over a prime field. The field is supplied by the
/// caller at each operation; entries are assumed to already lie in [0, p).
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0) {}
  Matrix(int rows, int cols, std::vector<Elem> data) : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != static_cast<std::size_t>(rows) * cols)
      fail(ErrorKind::ShapeMismatch, "matrix data size does not match its shape");
  }

  static Matrix from_rows(const std::vector<std::vector<Elem>>& rows, int cols) {
    Matrix m(static_cast<int>(rows.size()), cols);
    for (int r = 0; r < m.rows_; ++r) {
      if (static_cast<int>(rows[r].size()) != cols) fail(ErrorKind::ShapeMismatch, "ragged matrix rows");
      std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
    }
    return m;
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  Elem& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  Elem operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

  std::span<Elem> row(int r) { return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)}; }
  std::span<const Elem> row(int r) const {
    return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
  }

  const std::vector<Elem>& data() const noexcept { return data_; }

  void append_row(std::span<const Elem> values) {
    if (rows_ == 0 && cols_ == 0) cols_ = static_cast<int>(values.size());
    if (static_cast<int>(values.size()) != cols_) fail(ErrorKind::ShapeMismatch, "row length mismatch");
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;
  friend auto operator<=>(const Matrix& a, const Matrix& b) {
    if (auto c = a.rows_ <=> b.rows_; c != 0) return c;
    if (auto c = a.cols_ <=> b.cols_; c != 0) return c;
    return a.data_ <=> b.data_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Elem> data_;
};

inline Matrix multiply(const Matrix& a, const Matrix& b, const PrimeField& f) {
  if (a.cols() != b.rows()) fail(ErrorKind::ShapeMismatch, "matrix product shape mismatch");
  Matrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const Elem x = a(i, k);
      if (x == 0) continue;
      for (int j = 0; j < b.cols(); ++j) out(i, j) = f.add(out(i, j), f.mul(x, b(k, j)));
    }
  return out;
}

struct RrefResult {
  Matrix matrix;  // reduced row-echelon form with zero rows removed
  int rank = 0;
  std::vector<int> pivots;
};

/// Reduced row-echelon form: pivots normalised to 1, pivot columns cleared
/// above and below, zero rows dropped. The result is unique for the row space.
inline RrefResult rref(const Matrix& m, const PrimeField& f) {
  Matrix a = m;
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
    int sel = -1;
    for (int i = r; i < a.rows(); ++i)
      if (a(i, c) != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    if (sel != r)
      for (int j = 0; j < a.cols(); ++j) std::swap(a(sel, j), a(r, j));
    const Elem inv = f.inv(a(r, c));
    for (int j = 0; j < a.cols(); ++j) a(r, j) = f.mul(a(r, j), inv);
    for (int i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c) == 0) continue;
      const Elem factor = a(i, c);
      for (int j = 0; j < a.cols(); ++j) a(i, j) = f.sub(a(i, j), f.mul(factor, a(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  std::vector<Elem> kept(a.data().begin(), a.data().begin() + static_cast<std::ptrdiff_t>(r) * a.cols());
  return {Matrix(r, a.cols(), std::move(kept)), r, std::move(pivots)};
}

inline int rank(const Matrix& m, const PrimeField& f) { return rref(m, f).rank; }

/// Basis (as rows) of the right null space {x : m x = 0}.
inline Matrix nullspace(const Matrix& m, const PrimeField& f) {
  const auto red = rref(m, f);
  std::vector<char> is_pivot(m.cols(), 0);
  for (int c : red.pivots) is_pivot[c] = 1;
  Matrix basis(0, m.cols());
  for (int free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Elem> v(m.cols(), 0);
    v[free] = 1;
    for (int r = 0; r < red.rank; ++r) v[red.pivots[r]] = f.neg(red.matrix(r, free));
    basis.append_row(v);
  }
  return basis;
}

/// Determinant of a square matrix by elimination.
inline Elem determinant(Matrix a, const PrimeField& f) {
  if (a.rows() != a.cols()) fail(ErrorKind::ShapeMismatch, "determinant of a non-square matrix");
  const int n = a.rows();
  Elem det = 1;
  for (int c = 0; c < n; ++c) {
    int sel = -1;
    for (int i = c; i < n; ++i)
      if (a(i, c) != 0) {
        sel = i;
        break;
      }
    if (sel < 0) return 0;
    if (sel != c) {
      for (int j = 0; j < n; ++j) std::swap(a(sel, j), a(c, j));
      det = f.neg(det);
    }
    det = f.mul(det, a(c, c));
    const Elem inv = f.inv(a(c, c));
    for (int i = c + 1; i < n; ++i) {
      if (a(i, c) == 0) continue;
      const Elem factor = f.mul(a(i, c), inv);
      for (int j = c; j < n; ++j) a(i, j) = f.sub(a(i, j), f.mul(factor, a(c, j)));
    }
  }
  return det;
}

/// Minor of the k x n matrix `rows` on the columns listed (in increasing order) by `cols_mask`.
inline Elem minor_on_columns(const Matrix& rows, unsigned cols_mask, const PrimeField& f) {
  const int k = rows.rows();
  Matrix sq(k, k);
  int j = 0;
  for (int c = 0; c < rows.cols(); ++c) {
    if (!(cols_mask >> c & 1u)) continue;
    if (j >= k) fail(ErrorKind::ShapeMismatch, "column subset larger than row count");
    for (int r = 0; r < k; ++r) sq(r, j) = rows(r, c);
    ++j;
  }
  if (j != k) fail(ErrorKind::ShapeMismatch, "column subset size differs from row count");
  return determinant(std::move(sq), f);
}

}  // namespace segrelab
