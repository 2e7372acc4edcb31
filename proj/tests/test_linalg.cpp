#include <gtest/gtest.h>

#include <random>
#include <set>

#include "segrelab/forms.hpp"
#include "segrelab/subspace.hpp"

using namespace segrelab;

namespace {

Matrix rows_of(std::vector<std::vector<Elem>> rows) { return Matrix::from_rows(rows, static_cast<int>(rows[0].size())); }

Matrix random_matrix(std::mt19937& rng, int r, int c, int p) {
  std::uniform_int_distribution<int> d(0, p - 1);
  Matrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

// Counts k-subspaces by brute force: ordered independent k-tuples divided by |GL(k,p)|.
std::uint64_t brute_subspace_count(int n, int k, int p) {
  std::uint64_t q = 1;
  for (int i = 0; i < n; ++i) q *= p;
  std::uint64_t ordered = 1, gl = 1, pk = 1;
  for (int i = 0; i < k; ++i) {
    std::uint64_t pi = 1;
    for (int e = 0; e < i; ++e) pi *= p;
    ordered *= (q - pi);
  }
  for (int i = 0; i < k; ++i) pk *= p;
  for (int i = 0; i < k; ++i) {
    std::uint64_t pi = 1;
    for (int e = 0; e < i; ++e) pi *= p;
    gl *= (pk - pi);
  }
  return ordered / gl;
}

// Sign of the permutation sorting `idx`; 0 on repeats.
int perm_sign(std::vector<int> idx) {
  int sign = 1;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      if (idx[i] == idx[j]) return 0;
      if (idx[i] > idx[j]) sign = -sign;
    }
  return sign;
}

// Independent expansion of mu(u) over basis-vector index tuples.
Elem expand_multiform(const MultiForm& mu, const std::vector<Matrix>& u) {
  const PrimeField f(mu.p());
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < mu.num_segments(); ++i)
    for (int r = 0; r < mu.segment_arities()[i]; ++r) slots.emplace_back(i, r);
  std::vector<int> pick(slots.size(), 0);
  std::int64_t total = 0;
  while (true) {
    std::int64_t weight = 1;
    for (std::size_t s = 0; s < slots.size(); ++s) weight = weight * u[slots[s].first](slots[s].second, pick[s]) % mu.p();
    if (weight != 0) {
      MultiForm::Key key;
      std::int64_t sign = 1;
      std::size_t s = 0;
      for (int i = 0; i < mu.num_segments(); ++i) {
        std::vector<int> idx;
        std::uint32_t mask = 0;
        for (int r = 0; r < mu.segment_arities()[i]; ++r, ++s) {
          idx.push_back(pick[s]);
          mask |= 1u << pick[s];
        }
        sign *= perm_sign(idx);
        key.push_back(mask);
      }
      if (sign != 0) total += sign * weight * mu.coefficient(key);
    }
    std::size_t pos = 0;
    while (pos < slots.size() && ++pick[pos] == mu.segment_dims()[slots[pos].first]) pick[pos++] = 0;
    if (pos == slots.size()) break;
  }
  return f.norm(total);
}

MultiForm random_form(std::mt19937& rng, int p, std::vector<int> dims, std::vector<int> ar) {
  MultiForm mu(p, dims, ar);
  std::uniform_int_distribution<int> d(0, p - 1);
  std::vector<std::vector<std::uint32_t>> masks(dims.size());
  for (std::size_t i = 0; i < dims.size(); ++i)
    for (std::uint32_t m = 0; m < (1u << dims[i]); ++m)
      if (std::popcount(m) == ar[i]) masks[i].push_back(m);
  std::function<void(std::size_t, MultiForm::Key&)> rec = [&](std::size_t i, MultiForm::Key& key) {
    if (i == dims.size()) {
      mu.set(key, d(rng));
      return;
    }
    for (auto m : masks[i]) {
      key.push_back(m);
      rec(i + 1, key);
      key.pop_back();
    }
  };
  MultiForm::Key key;
  rec(0, key);
  return mu;
}

}  // namespace

TEST(Field, InverseExamples) {
  EXPECT_EQ(fp_inv(1, 5), 1);
  EXPECT_EQ(fp_inv(2, 5), 3);
  try {
    fp_inv(0, 7);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DivisionByZero);
  }
  for (int p : {2, 3, 5, 7, 11, 13})
    for (int a = 1; a < p; ++a) EXPECT_EQ(a * fp_inv(a, p) % p, 1);
}

TEST(Field, RejectsComposite) { EXPECT_THROW(PrimeField(4), Error); }

TEST(Rref, Examples) {
  const PrimeField f2(2);
  auto id = rref(Matrix::identity(2), f2);
  EXPECT_EQ(id.rank, 2);
  EXPECT_EQ(id.matrix, Matrix::identity(2));
  EXPECT_EQ(rank(rows_of({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}), f2), 2);
  auto z = rref(Matrix(3, 3), f2);
  EXPECT_EQ(z.rank, 0);
  EXPECT_EQ(z.matrix.rows(), 0);
}

TEST(Rref, IdempotentOnRandomInput) {
  std::mt19937 rng(7);
  for (int t = 0; t < 200; ++t) {
    const int p = t % 2 ? 3 : 5;
    auto once = rref(random_matrix(rng, 4, 5, p), PrimeField(p));
    auto twice = rref(once.matrix, PrimeField(p));
    EXPECT_EQ(once.matrix, twice.matrix);
    EXPECT_EQ(once.rank, twice.rank);
  }
}

TEST(Subspaces, CountsMatchGaussianBinomial) {
  EXPECT_EQ(enumerate_subspaces(3, 1, 2).size(), 7u);
  EXPECT_EQ(enumerate_subspaces(4, 2, 2).size(), 35u);
  EXPECT_EQ(enumerate_subspaces(4, 0, 3).size(), 1u);
  for (int p : {2, 3})
    for (int n = 0; n <= 5; ++n)
      for (int k = 0; k <= n; ++k) {
        const auto subs = enumerate_subspaces(n, k, p);
        EXPECT_EQ(subs.size(), gaussian_binomial(n, k, p));
        EXPECT_EQ(subs.size(), brute_subspace_count(n, k, p));
        std::set<Subspace> uniq(subs.begin(), subs.end());
        EXPECT_EQ(uniq.size(), subs.size());
      }
  EXPECT_THROW(enumerate_subspaces(3, 4, 2), Error);
}

TEST(Subspaces, Meet) {
  const int p = 2;
  Subspace u(p, 4, rows_of({{1, 0, 0, 0}, {0, 1, 0, 0}}));
  EXPECT_EQ(meet(u, u), u);
  Subspace w(p, 4, rows_of({{0, 1, 0, 0}, {0, 0, 1, 0}}));
  EXPECT_EQ(meet(u, w).dim(), 1);
  EXPECT_EQ(meet(u, w), Subspace(p, 4, rows_of({{0, 1, 0, 0}})));
  Subspace c(p, 4, rows_of({{0, 0, 1, 0}, {0, 0, 0, 1}}));
  EXPECT_EQ(meet(u, c).dim(), 0);
  EXPECT_THROW(meet(u, Subspace(3, 4, rows_of({{1, 0, 0, 0}}))), Error);
  // dimension formula on random pairs
  std::mt19937 rng(3);
  for (int t = 0; t < 200; ++t) {
    Subspace a(3, 5, random_matrix(rng, 2 + t % 2, 5, 3));
    Subspace b(3, 5, random_matrix(rng, 3, 5, 3));
    EXPECT_EQ(meet(a, b).dim(), a.dim() + b.dim() - join(a, b).dim());
    EXPECT_TRUE(a.contains(meet(a, b)));
    EXPECT_TRUE(b.contains(meet(a, b)));
  }
}

TEST(Wedge, Examples) {
  EXPECT_EQ(wedge_coords(rows_of({{1, 0, 0}, {0, 1, 0}}), 2), (std::vector<Elem>{1, 0, 0}));
  EXPECT_EQ(wedge_coords(rows_of({{1, 0, 0}, {1, 0, 0}}), 2), (std::vector<Elem>{0, 0, 0}));
  EXPECT_EQ(wedge_coords(rows_of({{1, 1, 0}, {0, 1, 1}}), 2), (std::vector<Elem>{1, 1, 1}));
}

TEST(Wedge, ProportionalAcrossBases) {
  std::mt19937 rng(11);
  int checked = 0;
  while (checked < 500) {
    const int p = checked % 2 ? 3 : 2;
    Matrix b = random_matrix(rng, 2, 4, p);
    if (rank(b, PrimeField(p)) < 2) continue;
    Matrix g = random_matrix(rng, 2, 2, p);
    if (determinant(g, PrimeField(p)) == 0) continue;
    Matrix b2 = multiply(g, b, PrimeField(p));
    ASSERT_EQ(rref(b, PrimeField(p)).matrix, rref(b2, PrimeField(p)).matrix);
    auto w1 = wedge_coords(b, p), w2 = wedge_coords(b2, p);
    const Elem det = determinant(g, PrimeField(p));
    for (std::size_t i = 0; i < w1.size(); ++i) EXPECT_EQ(w2[i], PrimeField(p).mul(det, w1[i]));
    ++checked;
  }
}

TEST(MultiFormEval, Examples) {
  auto sym = MultiForm::alternating2(rows_of({{0, 1}, {1, 0}}), 2);
  EXPECT_EQ(eval_multiform(sym, {rows_of({{1, 0}, {0, 1}})}), 1);
  EXPECT_EQ(eval_multiform(sym, {rows_of({{1, 1}, {1, 1}})}), 0);
  auto id = MultiForm::bilinear(Matrix::identity(2), 2);
  EXPECT_EQ(eval_multiform(id, {rows_of({{1, 0}}), rows_of({{0, 1}})}), 0);
  EXPECT_EQ(eval_multiform(id, {rows_of({{1, 1}}), rows_of({{0, 1}})}), 1);
  EXPECT_THROW(eval_multiform(id, {rows_of({{1, 0, 0}}), rows_of({{0, 1}})}), Error);
}

TEST(MultiFormEval, MatchesIndependentExpansion) {
  std::mt19937 rng(5);
  struct Shape {
    int p;
    std::vector<int> dims, ar;
  };
  const std::vector<Shape> shapes = {
      {2, {2, 2}, {1, 1}}, {3, {3, 2}, {1, 1}}, {3, {4}, {2}}, {2, {4}, {3}},
      {3, {3, 3}, {2, 1}}, {2, {2, 2, 2}, {1, 1, 1}}, {3, {4, 4}, {2, 2}},
  };
  for (const auto& sh : shapes)
    for (int t = 0; t < 40; ++t) {
      auto mu = random_form(rng, sh.p, sh.dims, sh.ar);
      std::vector<Matrix> u;
      for (std::size_t i = 0; i < sh.dims.size(); ++i) u.push_back(random_matrix(rng, sh.ar[i], sh.dims[i], sh.p));
      EXPECT_EQ(eval_multiform(mu, u), expand_multiform(mu, u));
    }
}

TEST(MultiFormEval, MultilinearAndAlternating) {
  std::mt19937 rng(9);
  const int p = 5;
  const PrimeField f(p);
  for (int t = 0; t < 100; ++t) {
    auto mu = random_form(rng, p, {3, 4}, {2, 2});
    std::vector<Matrix> u = {random_matrix(rng, 2, 3, p), random_matrix(rng, 2, 4, p)};
    Matrix x = random_matrix(rng, 1, 4, p), y = random_matrix(rng, 1, 4, p);
    const Elem a = static_cast<Elem>(rng() % p), b = static_cast<Elem>(rng() % p);
    auto with_row = [&](const Matrix& r) {
      auto v = u;
      for (int c = 0; c < 4; ++c) v[1](0, c) = r(0, c);
      return eval_multiform(mu, v);
    };
    Matrix comb(1, 4);
    for (int c = 0; c < 4; ++c) comb(0, c) = f.add(f.mul(a, x(0, c)), f.mul(b, y(0, c)));
    EXPECT_EQ(with_row(comb), f.add(f.mul(a, with_row(x)), f.mul(b, with_row(y))));
    auto swapped = u;
    for (int c = 0; c < 3; ++c) std::swap(swapped[0](0, c), swapped[0](1, c));
    EXPECT_EQ(eval_multiform(mu, swapped), f.neg(eval_multiform(mu, u)));
  }
}

TEST(SegmentRestriction, Examples) {
  MultiForm zero(2, {2, 2}, {1, 1});
  EXPECT_TRUE(segment_restriction(zero, {Matrix(1, 2), rows_of({{0, 1}})}, 0).is_zero());
  auto id = MultiForm::bilinear(Matrix::identity(2), 2);
  auto eta = segment_restriction(id, {Matrix(1, 2), rows_of({{0, 1}})}, 0);
  EXPECT_EQ(eta.coefficient({0b10}), 1);
  EXPECT_EQ(eta.coefficient({0b01}), 0);
  std::mt19937 rng(1);
  for (int t = 0; t < 100; ++t) {
    auto mu = random_form(rng, 3, {3, 3, 2}, {2, 1, 1});
    std::vector<Matrix> u = {random_matrix(rng, 2, 3, 3), random_matrix(rng, 1, 3, 3), random_matrix(rng, 1, 2, 3)};
    const int i = t % 3;
    auto r = segment_restriction(mu, u, i);
    EXPECT_EQ(eval_multiform(r, {u[i]}), eval_multiform(mu, u));
  }
}

TEST(SegmentPredicates, Examples) {
  MultiForm zero(2, {2, 2}, {1, 1});
  EXPECT_FALSE(segment_nonzero(zero, 0));
  EXPECT_FALSE(is_gkz_nondegenerate(zero));
  auto id = MultiForm::bilinear(Matrix::identity(2), 2);
  EXPECT_TRUE(segment_nonzero(id, 0));
  EXPECT_TRUE(segment_nonzero(id, 1));
  EXPECT_TRUE(is_gkz_nondegenerate(id));
  auto rank1 = MultiForm::bilinear(rows_of({{1, 0}, {0, 0}}), 2);
  EXPECT_FALSE(segment_nonzero(rank1, 0));
  EXPECT_FALSE(is_gkz_nondegenerate(rank1));

  auto symp = MultiForm::alternating2(BilinearForm::symplectic(4, 2).gram(), 2);
  EXPECT_TRUE(segment_nondegenerate(symp, 0));
  Matrix singular(4, 4);
  singular(0, 1) = 1;
  singular(1, 0) = 1;
  auto radical = MultiForm::alternating2(singular, 2);
  EXPECT_FALSE(segment_nondegenerate(radical, 0));
}

TEST(SegmentPredicates, NondegenerateImpliesNonzero) {
  std::mt19937 rng(21);
  for (int t = 0; t < 60; ++t) {
    auto mu = random_form(rng, t % 2 ? 3 : 2, {3, 3}, {1 + t % 2, 1});
    for (int i = 0; i < 2; ++i)
      if (segment_nondegenerate(mu, i)) EXPECT_TRUE(segment_nonzero(mu, i));
  }
}

TEST(BilinearForms, Validation) {
  EXPECT_THROW(BilinearForm(3, rows_of({{0, 1}, {1, 0}}), FormKind::Alternating), Error);
  EXPECT_NO_THROW(BilinearForm(3, rows_of({{0, 1}, {2, 0}}), FormKind::Alternating));
  EXPECT_THROW(BilinearForm(3, rows_of({{1, 1}, {0, 1}}), FormKind::Symmetric), Error);
  auto w = BilinearForm::symplectic(4, 2);
  EXPECT_TRUE(w.is_nondegenerate());
  int isotropic_lines = 0;
  for (const auto& s : enumerate_subspaces(4, 2, 2)) isotropic_lines += w.is_isotropic(s) ? 1 : 0;
  EXPECT_EQ(isotropic_lines, 15);
}
