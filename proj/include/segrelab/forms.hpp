#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "segrelab/error.hpp"
#include "segrelab/field.hpp"
#include "segrelab/matrix.hpp"
#include "segrelab/subspace.hpp"

namespace segrelab {

enum class FormKind { Symmetric, Alternating };

/// Reflexive bilinear form on GF(p)^n given by its Gram matrix.
class BilinearForm {
 public:
  BilinearForm(int p, Matrix gram, FormKind kind) : p_(p), gram_(std::move(gram)), kind_(kind) {
    PrimeField f(p);
    if (gram_.rows() != gram_.cols()) fail(ErrorKind::ShapeMismatch, "Gram matrix must be square");
    const int n = gram_.rows();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Elem a = gram_(i, j), b = gram_(j, i);
        if (a < 0 || a >= p) fail(ErrorKind::ShapeMismatch, "Gram entry outside [0, p)");
        if (kind_ == FormKind::Symmetric && a != b) fail(ErrorKind::ShapeMismatch, "symmetric form with non-symmetric matrix");
        if (kind_ == FormKind::Alternating && (i == j ? a != 0 : a != f.neg(b)))
          fail(ErrorKind::ShapeMismatch, "alternating form must be skew with zero diagonal");
      }
  }

  /// Standard symplectic form with blocks [[0,1],[-1,0]] on coordinate pairs (0,1), (2,3), ...
  static BilinearForm symplectic(int n, int p) {
    if (n % 2 != 0 || n <= 0) fail(ErrorKind::InvalidDimension, "symplectic form needs even dimension");
    PrimeField f(p);
    Matrix g(n, n);
    for (int i = 0; i < n; i += 2) {
      g(i, i + 1) = 1;
      g(i + 1, i) = f.neg(1);
    }
    return BilinearForm(p, g, FormKind::Alternating);
  }

  static BilinearForm diagonal(const std::vector<Elem>& diag, int p) {
    const int n = static_cast<int>(diag.size());
    Matrix g(n, n);
    for (int i = 0; i < n; ++i) g(i, i) = diag[i];
    return BilinearForm(p, g, FormKind::Symmetric);
  }

  int p() const noexcept { return p_; }
  int dim() const noexcept { return gram_.rows(); }
  const Matrix& gram() const noexcept { return gram_; }
  FormKind kind() const noexcept { return kind_; }

  Elem operator()(std::span<const Elem> x, std::span<const Elem> y) const {
    PrimeField f(p_);
    Elem s = 0;
    for (int i = 0; i < dim(); ++i) {
      if (x[i] == 0) continue;
      for (int j = 0; j < dim(); ++j) s = f.add(s, f.mul(x[i], f.mul(gram_(i, j), y[j])));
    }
    return s;
  }

  /// Totally isotropic: the form vanishes on every pair of vectors of U.
  bool is_isotropic(const Subspace& u) const {
    for (int a = 0; a < u.dim(); ++a)
      for (int b = a; b < u.dim(); ++b)
        if ((*this)(u.basis().row(a), u.basis().row(b)) != 0) return false;
    return true;
  }

  bool is_nondegenerate() const { return rank(gram_, PrimeField(p_)) == dim(); }

 private:
  int p_;
  Matrix gram_;
  FormKind kind_;
};

/// Segment-wise alternating multilinear form. A key holds, per segment, the
/// bitmask of a k_i-subset of basis indices; the form is
///   mu(u) = sum_key coeff(key) * prod_i minor(u^i on columns key_i),
/// which is alternating within every segment by construction. Absent keys are zero.
class MultiForm {
 public:
  using Key = std::vector<std::uint32_t>;

  MultiForm(int p, std::vector<int> segment_dims, std::vector<int> segment_arities)
      : p_(p), dims_(std::move(segment_dims)), arities_(std::move(segment_arities)) {
    static_cast<void>(PrimeField(p));  // validates the modulus
    if (dims_.size() != arities_.size() || dims_.empty())
      fail(ErrorKind::ShapeMismatch, "segment dims and arities must be non-empty and of equal length");
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (dims_[i] < 1 || dims_[i] > 31) fail(ErrorKind::InvalidDimension, "segment dimension out of range");
      if (arities_[i] < 1 || arities_[i] > dims_[i]) fail(ErrorKind::InvalidDimension, "segment arity out of range");
    }
  }

  /// Bilinear form on GF(p)^m x GF(p)^n with the given coefficient matrix.
  static MultiForm bilinear(const Matrix& coeffs, int p) {
    MultiForm mu(p, {coeffs.rows(), coeffs.cols()}, {1, 1});
    for (int i = 0; i < coeffs.rows(); ++i)
      for (int j = 0; j < coeffs.cols(); ++j) mu.set({1u << i, 1u << j}, coeffs(i, j));
    return mu;
  }

  /// Alternating 2-form on GF(p)^n (a single segment of arity 2) from a skew matrix's upper triangle.
  static MultiForm alternating2(const Matrix& skew, int p) {
    MultiForm mu(p, {skew.rows()}, {2});
    for (int i = 0; i < skew.rows(); ++i)
      for (int j = i + 1; j < skew.cols(); ++j) mu.set({(1u << i) | (1u << j)}, skew(i, j));
    return mu;
  }

  int p() const noexcept { return p_; }
  int num_segments() const noexcept { return static_cast<int>(dims_.size()); }
  const std::vector<int>& segment_dims() const noexcept { return dims_; }
  const std::vector<int>& segment_arities() const noexcept { return arities_; }
  const std::map<Key, Elem>& coefficients() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }

  Elem coefficient(const Key& key) const {
    auto it = coeffs_.find(key);
    return it == coeffs_.end() ? 0 : it->second;
  }

  void set(const Key& key, std::int64_t value) {
    check_key(key);
    const Elem v = PrimeField(p_).norm(value);
    if (v == 0)
      coeffs_.erase(key);
    else
      coeffs_[key] = v;
  }

  void check_key(const Key& key) const {
    if (key.size() != dims_.size()) fail(ErrorKind::ShapeMismatch, "key has the wrong number of segments");
    for (std::size_t i = 0; i < key.size(); ++i) {
      if (std::popcount(key[i]) != arities_[i]) fail(ErrorKind::ShapeMismatch, "key subset has the wrong size");
      if (dims_[i] < 32 && (key[i] >> dims_[i]) != 0) fail(ErrorKind::ShapeMismatch, "key subset exceeds segment dimension");
    }
  }

  void check_segments(const std::vector<Matrix>& u) const {
    if (u.size() != dims_.size()) fail(ErrorKind::ShapeMismatch, "wrong number of segments");
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i].rows() != arities_[i] || u[i].cols() != dims_[i])
        fail(ErrorKind::ShapeMismatch, "segment " + std::to_string(i) + " has the wrong shape");
  }

  friend bool operator==(const MultiForm&, const MultiForm&) = default;

 private:
  int p_;
  std::vector<int> dims_;
  std::vector<int> arities_;
  std::map<Key, Elem> coeffs_;
};

namespace detail {

/// Memoised minors of one segment matrix.
class MinorCache {
 public:
  MinorCache(const Matrix& rows, const PrimeField& f) : rows_(&rows), f_(&f) {}
  Elem operator()(std::uint32_t mask) {
    auto it = cache_.find(mask);
    if (it != cache_.end()) return it->second;
    const Elem v = minor_on_columns(*rows_, mask, *f_);
    cache_.emplace(mask, v);
    return v;
  }

 private:
  const Matrix* rows_;
  const PrimeField* f_;
  std::map<std::uint32_t, Elem> cache_;
};

}  // namespace detail

/// mu(u^1, ..., u^n); each u^i is a k_i x dim V_i matrix whose rows are the vectors of the segment.
inline Elem eval_multiform(const MultiForm& mu, const std::vector<Matrix>& u) {
  mu.check_segments(u);
  const PrimeField f(mu.p());
  std::vector<detail::MinorCache> minors;
  minors.reserve(u.size());
  for (const auto& seg : u) minors.emplace_back(seg, f);
  Elem total = 0;
  for (const auto& [key, c] : mu.coefficients()) {
    Elem term = c;
    for (std::size_t i = 0; i < key.size() && term != 0; ++i) term = f.mul(term, minors[i](key[i]));
    total = f.add(total, term);
  }
  return total;
}

/// The single-segment form x -> mu(u^1, ..., x, ..., u^n) on V_i; segment i of `u` is ignored.
inline MultiForm segment_restriction(const MultiForm& mu, const std::vector<Matrix>& u, int i) {
  if (i < 0 || i >= mu.num_segments()) fail(ErrorKind::ShapeMismatch, "segment index out of range");
  if (static_cast<int>(u.size()) != mu.num_segments()) fail(ErrorKind::ShapeMismatch, "wrong number of segments");
  for (int j = 0; j < mu.num_segments(); ++j) {
    if (j == i) continue;
    if (u[j].rows() != mu.segment_arities()[j] || u[j].cols() != mu.segment_dims()[j])
      fail(ErrorKind::ShapeMismatch, "segment " + std::to_string(j) + " has the wrong shape");
  }
  const PrimeField f(mu.p());
  std::vector<detail::MinorCache> minors;
  minors.reserve(u.size());
  for (const auto& seg : u) minors.emplace_back(seg, f);
  MultiForm out(mu.p(), {mu.segment_dims()[i]}, {mu.segment_arities()[i]});
  std::map<std::uint32_t, Elem> acc;
  for (const auto& [key, c] : mu.coefficients()) {
    Elem term = c;
    for (int j = 0; j < mu.num_segments() && term != 0; ++j)
      if (j != i) term = f.mul(term, minors[j](key[j]));
    if (term != 0) acc[key[i]] = f.add(acc[key[i]], term);
  }
  for (const auto& [mask, v] : acc) out.set({mask}, v);
  return out;
}

namespace detail {

/// Calls fn(u) for every tuple u whose segments j != skip range over the
/// canonical RREF bases of all k_j-subspaces of V_j. Stops early when fn returns false.
template <class Fn>
bool for_each_independent_tuple(const MultiForm& mu, int skip, Fn&& fn) {
  const int n = mu.num_segments();
  std::vector<std::vector<Subspace>> choices(n);
  for (int j = 0; j < n; ++j)
    if (j != skip) choices[j] = enumerate_subspaces(mu.segment_dims()[j], mu.segment_arities()[j], mu.p());
  std::vector<Matrix> u(n);
  if (skip >= 0) u[skip] = Matrix(mu.segment_arities()[skip], mu.segment_dims()[skip]);
  std::function<bool(int)> rec = [&](int j) -> bool {
    if (j == n) return fn(static_cast<const std::vector<Matrix>&>(u));
    if (j == skip) return rec(j + 1);
    for (const auto& s : choices[j]) {
      u[j] = s.basis();
      if (!rec(j + 1)) return false;
    }
    return true;
  };
  return rec(0);
}

}  // namespace detail

/// True iff for every u with independent segments j != i the restriction to segment i is non-zero.
inline bool segment_nonzero(const MultiForm& mu, int i) {
  if (i < 0 || i >= mu.num_segments()) fail(ErrorKind::ShapeMismatch, "segment index out of range");
  if (mu.is_zero()) return false;
  return detail::for_each_independent_tuple(mu, i, [&](const std::vector<Matrix>& u) {
    return !segment_restriction(mu, u, i).is_zero();
  });
}

/// Linear functional x -> eta(x_1, ..., x_{k-1}, x) of a single-segment form, as a coefficient vector.
inline std::vector<Elem> completion_functional(const MultiForm& eta, const Matrix& partial) {
  const int d = eta.segment_dims()[0];
  std::vector<Elem> out(d, 0);
  for (int c = 0; c < d; ++c) {
    Matrix full = partial.rows() == 0 ? Matrix(0, d) : partial;
    std::vector<Elem> e(d, 0);
    e[c] = 1;
    full.append_row(e);
    out[c] = eval_multiform(eta, {full});
  }
  return out;
}

/// True iff for every u with independent segments j != i, every independent
/// x_1..x_{k_i - 1} in V_i extends to x with mu_i^[u](x) != 0.
inline bool segment_nondegenerate(const MultiForm& mu, int i) {
  if (i < 0 || i >= mu.num_segments()) fail(ErrorKind::ShapeMismatch, "segment index out of range");
  if (mu.is_zero()) return false;
  const int k = mu.segment_arities()[i];
  const int d = mu.segment_dims()[i];
  const auto partials = enumerate_subspaces(d, k - 1, mu.p());
  return detail::for_each_independent_tuple(mu, i, [&](const std::vector<Matrix>& u) {
    const MultiForm eta = segment_restriction(mu, u, i);
    if (eta.is_zero()) return false;
    for (const auto& s : partials) {
      const auto fn = completion_functional(eta, s.basis());
      bool nonzero = false;
      for (Elem x : fn) nonzero = nonzero || x != 0;
      if (!nonzero) return false;
    }
    return true;
  });
}

/// GKZ non-degeneracy: for every assignment of nonzero vectors to all k slots,
/// some single-slot replacement makes mu non-zero. Slots range over projective representatives.
inline bool is_gkz_nondegenerate(const MultiForm& mu) {
  if (mu.is_zero()) return false;
  const int n = mu.num_segments();
  std::vector<std::pair<int, int>> slots;  // (segment, row)
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < mu.segment_arities()[i]; ++r) slots.emplace_back(i, r);
  std::vector<std::vector<std::vector<Elem>>> reps(n);
  for (int i = 0; i < n; ++i) reps[i] = projective_points(mu.segment_dims()[i], mu.p());
  std::vector<Matrix> u(n);
  for (int i = 0; i < n; ++i) u[i] = Matrix(mu.segment_arities()[i], mu.segment_dims()[i]);

  auto rescued = [&]() {
    for (auto [seg, row] : slots) {
      const std::vector<Elem> saved(u[seg].row(row).begin(), u[seg].row(row).end());
      bool ok = false;
      for (int c = 0; c < mu.segment_dims()[seg] && !ok; ++c) {
        for (int j = 0; j < mu.segment_dims()[seg]; ++j) u[seg](row, j) = j == c ? 1 : 0;
        ok = eval_multiform(mu, u) != 0;
      }
      for (int j = 0; j < mu.segment_dims()[seg]; ++j) u[seg](row, j) = saved[j];
      if (ok) return true;
    }
    return false;
  };

  std::function<bool(std::size_t)> rec = [&](std::size_t s) -> bool {
    if (s == slots.size()) return rescued();
    const auto [seg, row] = slots[s];
    for (const auto& v : reps[seg]) {
      for (int j = 0; j < mu.segment_dims()[seg]; ++j) u[seg](row, j) = v[j];
      if (!rec(s + 1)) return false;
    }
    return true;
  };
  return rec(0);
}

}  // namespace segrelab
