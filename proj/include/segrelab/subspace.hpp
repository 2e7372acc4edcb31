#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "segrelab/error.hpp"
#include "segrelab/field.hpp"
#include "segrelab/matrix.hpp"

namespace segrelab {

/// A linear subspace of GF(p)^n stored by its canonical RREF basis. Two
/// subspaces are equal iff their basis matrices are identical.
class Subspace {
 public:
  Subspace() = default;

  /// Canonicalises the row space of `spanning_rows` (rows may be dependent).
  Subspace(int p, int ambient_dim, const Matrix& spanning_rows) : p_(p), n_(ambient_dim) {
    if (spanning_rows.rows() > 0 && spanning_rows.cols() != ambient_dim)
      fail(ErrorKind::ShapeMismatch, "spanning vectors do not live in the ambient space");
    auto red = rref(spanning_rows.rows() == 0 ? Matrix(0, ambient_dim) : spanning_rows, PrimeField(p));
    basis_ = std::move(red.matrix);
    pivots_ = std::move(red.pivots);
  }

  static Subspace zero(int p, int ambient_dim) { return Subspace(p, ambient_dim, Matrix(0, ambient_dim)); }

  int p() const noexcept { return p_; }
  int ambient_dim() const noexcept { return n_; }
  int dim() const noexcept { return basis_.rows(); }
  const Matrix& basis() const noexcept { return basis_; }
  const std::vector<int>& pivots() const noexcept { return pivots_; }

  bool contains(std::span<const Elem> v) const {
    Matrix m = basis_;
    m.append_row(v);
    return rank(m, PrimeField(p_)) == dim();
  }

  bool contains(const Subspace& other) const {
    if (other.dim() > dim()) return false;
    Matrix m = basis_;
    for (int r = 0; r < other.dim(); ++r) m.append_row(other.basis_.row(r));
    return rank(m, PrimeField(p_)) == dim();
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.p_ == b.p_ && a.n_ == b.n_ && a.basis_ == b.basis_;
  }
  /// Deterministic order: dimension, pivot set lexicographically, then entries row-major.
  friend auto operator<=>(const Subspace& a, const Subspace& b) {
    if (auto c = a.p_ <=> b.p_; c != 0) return c;
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    if (auto c = a.dim() <=> b.dim(); c != 0) return c;
    if (auto c = a.pivots_ <=> b.pivots_; c != 0) return c;
    return a.basis_.data() <=> b.basis_.data();
  }

 private:
  int p_ = 2;
  int n_ = 0;
  Matrix basis_;
  std::vector<int> pivots_;
};

/// Gaussian binomial coefficient [n choose k]_p by the product formula.
inline std::uint64_t gaussian_binomial(int n, int k, int p) {
  if (k < 0 || k > n) return 0;
  std::uint64_t num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    std::uint64_t a = 1, b = 1;
    for (int e = 0; e < n - i; ++e) a *= static_cast<std::uint64_t>(p);
    for (int e = 0; e < i + 1; ++e) b *= static_cast<std::uint64_t>(p);
    num *= (a - 1);
    den *= (b - 1);
  }
  return num / den;
}

/// All k-dimensional subspaces of GF(p)^n, each exactly once, ordered by pivot
/// set (lexicographic) and then by the free entries read row-major.
inline std::vector<Subspace> enumerate_subspaces(int n, int k, int p) {
  if (k < 0 || k > n) fail(ErrorKind::InvalidDimension, "subspace dimension out of range");
  PrimeField field(p);
  std::vector<Subspace> out;
  std::vector<int> pivots(k);
  // Enumerate pivot sets in lexicographic order.
  std::function<void(int, int)> choose = [&](int idx, int start) {
    if (idx == k) {
      std::vector<char> is_pivot(n, 0);
      for (int c : pivots) is_pivot[c] = 1;
      std::vector<std::pair<int, int>> free;
      for (int r = 0; r < k; ++r)
        for (int c = pivots[r] + 1; c < n; ++c)
          if (!is_pivot[c]) free.emplace_back(r, c);
      std::vector<Elem> digits(free.size(), 0);
      while (true) {
        Matrix m(k, n);
        for (int r = 0; r < k; ++r) m(r, pivots[r]) = 1;
        for (std::size_t j = 0; j < free.size(); ++j) m(free[j].first, free[j].second) = digits[j];
        out.emplace_back(p, n, m);
        // Increment with the first free position most significant.
        int pos = static_cast<int>(digits.size()) - 1;
        while (pos >= 0 && digits[pos] == p - 1) digits[pos--] = 0;
        if (pos < 0) break;
        ++digits[pos];
      }
      return;
    }
    for (int c = start; c <= n - (k - idx); ++c) {
      pivots[idx] = c;
      choose(idx + 1, c + 1);
    }
  };
  choose(0, 0);
  return out;
}

inline void require_same_ambient(const Subspace& u, const Subspace& w) {
  if (u.p() != w.p() || u.ambient_dim() != w.ambient_dim())
    fail(ErrorKind::AmbientMismatch, "subspaces live in different ambient spaces");
}

/// U + W.
inline Subspace join(const Subspace& u, const Subspace& w) {
  require_same_ambient(u, w);
  Matrix m = u.basis();
  if (m.rows() == 0) m = Matrix(0, u.ambient_dim());
  for (int r = 0; r < w.dim(); ++r) m.append_row(w.basis().row(r));
  return Subspace(u.p(), u.ambient_dim(), m);
}

/// U ∩ W, computed from the left kernel of the stacked bases.
inline Subspace meet(const Subspace& u, const Subspace& w) {
  require_same_ambient(u, w);
  const PrimeField f(u.p());
  const int n = u.ambient_dim();
  if (u.dim() == 0 || w.dim() == 0) return Subspace::zero(u.p(), n);
  Matrix stacked(0, n);
  for (int r = 0; r < u.dim(); ++r) stacked.append_row(u.basis().row(r));
  for (int r = 0; r < w.dim(); ++r) stacked.append_row(w.basis().row(r));
  // (a, b) with a*U + b*W = 0  <=>  stacked^T (a,b)^T = 0.
  const Matrix kernel = nullspace(stacked.transposed(), f);
  Matrix vectors(0, n);
  for (int r = 0; r < kernel.rows(); ++r) {
    std::vector<Elem> v(n, 0);
    for (int i = 0; i < u.dim(); ++i) {
      const Elem a = kernel(r, i);
      if (a == 0) continue;
      for (int c = 0; c < n; ++c) v[c] = f.add(v[c], f.mul(a, u.basis()(i, c)));
    }
    vectors.append_row(v);
  }
  return Subspace(u.p(), n, vectors);
}

/// Plücker coordinates: the k x k minors of the k given vectors, over column
/// subsets in lexicographic order. Zero iff the vectors are dependent.
inline std::vector<Elem> wedge_coords(const Matrix& vectors, int p) {
  const PrimeField f(p);
  const int k = vectors.rows();
  const int n = vectors.cols();
  if (k > n) fail(ErrorKind::InvalidDimension, "more vectors than the ambient dimension");
  std::vector<Elem> out;
  std::vector<int> idx(k);
  std::function<void(int, int)> rec = [&](int pos, int start) {
    if (pos == k) {
      unsigned mask = 0;
      for (int c : idx) mask |= 1u << c;
      out.push_back(minor_on_columns(vectors, mask, f));
      return;
    }
    for (int c = start; c <= n - (k - pos); ++c) {
      idx[pos] = c;
      rec(pos + 1, c + 1);
    }
  };
  rec(0, 0);
  return out;
}

/// Iterates all vectors of GF(p)^n in lexicographic order (first coordinate most significant).
template <class Fn>
void for_each_vector(int n, int p, Fn&& fn) {
  std::vector<Elem> v(n, 0);
  while (true) {
    fn(static_cast<const std::vector<Elem>&>(v));
    int pos = n - 1;
    while (pos >= 0 && v[pos] == p - 1) v[pos--] = 0;
    if (pos < 0) return;
    ++v[pos];
  }
}

/// Canonical projective representatives: nonzero vectors whose first nonzero entry is 1.
inline std::vector<std::vector<Elem>> projective_points(int n, int p) {
  std::vector<std::vector<Elem>> out;
  for_each_vector(n, p, [&](const std::vector<Elem>& v) {
    for (Elem x : v) {
      if (x == 0) continue;
      if (x == 1) out.push_back(v);
      return;
    }
  });
  return out;
}

}  // namespace segrelab
