#include <gtest/gtest.h>

#include "segrelab/automorphism.hpp"
#include "segrelab/hyperplanes.hpp"
#include "segrelab/segre.hpp"
#include "segrelab/spaces.hpp"

using namespace segrelab;

namespace {

SegreProduct square(const IncidenceStructure& s) { return SegreProduct({s, s}); }

// Every nonzero d1 x d2 matrix over GF(p), first nonzero entry 1.
std::vector<Matrix> projective_matrices(int d1, int d2, int p) {
  std::vector<Matrix> out;
  for (const auto& v : projective_points(d1 * d2, p)) out.emplace_back(d1, d2, v);
  return out;
}

// Direct evaluation x^T xi y on representative vectors.
bool vanishes(const Matrix& xi, std::span<const Elem> x, std::span<const Elem> y, int p) {
  long s = 0;
  for (int i = 0; i < xi.rows(); ++i)
    for (int j = 0; j < xi.cols(); ++j) s += static_cast<long>(x[i]) * xi(i, j) * y[j];
  return s % p == 0;
}

}  // namespace

TEST(Segre, Counts) {
  const auto l = projective_space(2, 2);
  const auto grid = square(l);
  EXPECT_EQ(grid.num_points(), 9);
  EXPECT_EQ(grid.carrier().num_lines(), 6);
  EXPECT_EQ(automorphisms(grid.carrier()).order, 72u);
  const auto fano2 = square(projective_space(3, 2));
  EXPECT_EQ(fano2.num_points(), 49);
  EXPECT_EQ(fano2.carrier().num_lines(), 98);
  EXPECT_TRUE(is_gamma(fano2.carrier()));
  EXPECT_TRUE(is_veblenian(fano2.carrier()));
  EXPECT_THROW(SegreProduct({l}), Error);
  EXPECT_THROW(SegreProduct({l, l, l, l}), Error);
  EXPECT_THROW(SegreProduct({l, l, l}, 20), Error);
  EXPECT_EQ(SegreProduct({l, l, l}).carrier().num_lines(), 27);
}

TEST(Segre, EncodeDecode) {
  const SegreProduct P({projective_space(2, 2), projective_space(3, 2), projective_space(2, 3)});
  for (int a = 0; a < P.num_points(); ++a) EXPECT_EQ(P.encode(P.decode(a)), a);
  EXPECT_EQ(P.decode(1), (std::vector<int>{1, 0, 0}));
  EXPECT_EQ(P.decode(3), (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(P.subst(0, 2, 3), P.encode({0, 0, 3}));
  EXPECT_THROW(P.encode({3, 0, 0}), Error);
  EXPECT_THROW(P.decode(P.num_points()), Error);
  // each carrier line lies in one slice and projects onto its factor line
  for (int l = 0; l < P.carrier().num_lines(); ++l) {
    const auto& o = P.line_origin(l);
    PointSet proj;
    for (int a : P.carrier().line(l)) proj.push_back(P.coordinate(a, o.slot));
    std::sort(proj.begin(), proj.end());
    EXPECT_EQ(proj, P.factor(o.slot).line(o.factor_line));
  }
}

TEST(Segre, SliceCriterionMatchesDefinition) {
  const auto grid = square(projective_space(2, 2));
  int hyperplanes = 0;
  for (int mask = 0; mask < (1 << 9); ++mask) {
    PointSet x;
    for (int a = 0; a < 9; ++a)
      if (mask >> a & 1) x.push_back(a);
    const bool h = is_hyperplane(grid.carrier(), x);
    EXPECT_EQ(slice_criterion(grid, x), h) << mask;
    hyperplanes += h;
  }
  EXPECT_EQ(hyperplanes, 15);
  EXPECT_EQ(enumerate_hyperplanes(grid.carrier()).size(), 15u);
}

TEST(Segre, DegenerateProduct) {
  const auto fano = projective_space(3, 2);
  const auto P = square(fano);
  const auto h = degenerate_product_hyperplane(P, {fano.line(0), fano.line(3)});
  // complement is (7-3) x (7-3)
  EXPECT_EQ(h.points.size(), 33u);
  EXPECT_EQ(h.provenance, Provenance::DegenerateProduct);
  EXPECT_FALSE(is_nondegenerate(P, h.points));
  EXPECT_TRUE(slice_criterion(P, h.points));
  EXPECT_THROW(degenerate_product_hyperplane(P, {fano.line(0), {0, 1}}), Error);
  EXPECT_THROW(degenerate_product_hyperplane(P, {fano.line(0)}), Error);
}

TEST(Segre, WitnessAndIntersection) {
  const auto g = grassmann_space(4, 2, 2);
  const Subspace w(2, 4, Matrix::from_rows({{1, 0, 0, 0}, {0, 1, 0, 0}}, 4));
  const auto hw = witness_hyperplane_W(g, w);
  // 35 planes minus the 2^4 complements of W
  EXPECT_EQ(hw.points.size(), 19u);
  EXPECT_FALSE(is_spiky(g, hw.points));
  EXPECT_THROW(witness_hyperplane_W(g, Subspace(2, 4, Matrix::from_rows({{1, 0, 0, 0}}, 4))), Error);

  const auto P = square(g);
  const auto h22 = intersection_hyperplane(P);
  // 35^2 pairs minus 35 * 16 complementary pairs
  EXPECT_EQ(h22.points.size(), 665u);
  EXPECT_TRUE(is_nondegenerate(P, h22.points));
  EXPECT_FALSE(is_spiky(P.carrier(), h22.points));
  EXPECT_THROW(intersection_hyperplane(square(projective_space(4, 2))), Error);
}

TEST(Segre, FormHyperplanesMatchDirectEvaluation) {
  for (int p : {2, 3}) {
    const auto l = projective_space(2, p);
    const auto P = square(l);
    int proper = 0;
    for (const auto& xi : projective_matrices(2, 2, p)) {
      PointSet expected;
      for (int a = 0; a < P.num_points(); ++a)
        if (vanishes(xi, l.label(P.coordinate(a, 0)).basis().row(0), l.label(P.coordinate(a, 1)).basis().row(0), p))
          expected.push_back(a);
      const auto r = hyperplane_from_form(P, MultiForm::bilinear(xi, p));
      ASSERT_TRUE(std::holds_alternative<HyperplaneHandle>(r));
      EXPECT_EQ(std::get<HyperplaneHandle>(r).points, expected);
      ++proper;
    }
    EXPECT_EQ(proper, p == 2 ? 15 : 40);
  }
  const auto P = square(projective_space(2, 3));
  EXPECT_TRUE(std::holds_alternative<AllOfSpace>(hyperplane_from_form(P, MultiForm::bilinear(Matrix(2, 2), 3))));
}

TEST(Segre, SesquilinearRoundTrip) {
  for (int p : {2, 3}) {
    const auto P = square(projective_space(3, p));
    int checked = 0;
    for (const auto& xi : projective_matrices(3, 3, p)) {
      if (checked++ % (p == 2 ? 7 : 97) != 0) continue;
      const auto h = std::get<HyperplaneHandle>(hyperplane_from_form(P, MultiForm::bilinear(xi, p)));
      const Matrix back = sesquilinear_from_hyperplane(P, h.points);
      EXPECT_EQ(product_form_zero_locus(P, MultiForm::bilinear(back, p)), h.points);
      if (rank(xi, PrimeField(p)) == 3) EXPECT_EQ(back, xi);
      const auto c = correlation_of(P, h.points);
      EXPECT_TRUE(c.compatible);
      EXPECT_TRUE(c.reconstructs);
    }
  }
}

TEST(Segre, DegenerateHyperplaneIsRankOneForm) {
  // L1 x S u S x L2 is the zero locus of (a.x)(b.y)
  const auto fano = projective_space(3, 2);
  const auto P = square(fano);
  const auto h = degenerate_product_hyperplane(P, {fano.line(0), fano.line(1)});
  const Matrix xi = sesquilinear_from_hyperplane(P, h.points);
  EXPECT_EQ(rank(xi, PrimeField(2)), 1);
  EXPECT_EQ(product_form_zero_locus(P, MultiForm::bilinear(xi, 2)), h.points);
  EXPECT_THROW(sesquilinear_from_hyperplane(P, {0, 1}), Error);
  EXPECT_THROW(correlation_of(SegreProduct({fano, fano, projective_space(2, 2)}), {}), Error);
  EXPECT_THROW(correlation_of(P, {0}), Error);
}

TEST(Segre, NondegenerateFormIffSpiky) {
  for (int p : {2, 3}) {
    const auto P = square(projective_space(2, p));
    for (const auto& xi : projective_matrices(2, 2, p)) {
      const auto mu = MultiForm::bilinear(xi, p);
      const auto h = std::get<HyperplaneHandle>(hyperplane_from_form(P, mu));
      EXPECT_EQ(is_gkz_nondegenerate(mu), is_spiky(P.carrier(), h.points));
      EXPECT_EQ(is_gkz_nondegenerate(mu), rank(xi, PrimeField(p)) == 2);
    }
  }
}

TEST(Segre, SliceOfFormHyperplaneIsRestrictedForm) {
  const int p = 3;
  const auto g = projective_space(3, p);
  const auto P = square(g);
  const Matrix xi = Matrix::from_rows({{1, 2, 0}, {0, 1, 1}, {2, 0, 1}}, 3);
  const auto mu = MultiForm::bilinear(xi, p);
  const auto h = std::get<HyperplaneHandle>(hyperplane_from_form(P, mu));
  for (int i = 0; i < 2; ++i)
    for (int a : P.slice_anchors(i)) {
      std::vector<Matrix> u{g.label(P.coordinate(a, 0)).basis(), g.label(P.coordinate(a, 1)).basis()};
      const auto eta = segment_restriction(mu, u, i);
      PointSet expected;
      if (eta.is_zero())
        for (int x = 0; x < g.num_points(); ++x) expected.push_back(x);
      else
        expected = form_zero_locus(g, eta);
      EXPECT_EQ(slice(P, h.points, a, i), expected);
    }
}

TEST(Segre, PolarProductHypotheses) {
  const auto w = BilinearForm::symplectic(4, 3);
  const auto q = polar_space(w);
  const auto P = square(q);
  const Matrix id = Matrix::from_rows({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}, 4);
  const auto r = polar_product_hyperplane(P, MultiForm::bilinear(id, 3));
  if (std::holds_alternative<HyperplaneHandle>(r)) {
    const auto& h = std::get<HyperplaneHandle>(r);
    EXPECT_TRUE(is_hyperplane(P.carrier(), h.points));
    EXPECT_EQ(h.provenance, Provenance::PolarForm);
  }
  const auto bad = polar_product_hyperplane(P, MultiForm::bilinear(Matrix(4, 4), 3));
  ASSERT_TRUE(std::holds_alternative<HypothesisFailure>(bad));
  EXPECT_NE(std::get<HypothesisFailure>(bad).clause.find("containment"), std::string::npos);
}

TEST(Segre, ProductParallelisms) {
  const auto ag = affine_space(3, 3);
  const SegreProduct P({ag.base(), ag.base()});
  const auto any = product_parallelism(P, {ag, ag}, ProductParallel::Any);
  const auto pointwise = product_parallelism(P, {ag, ag}, ProductParallel::Pointwise);
  EXPECT_EQ(any.classes().size(), 8u);
  EXPECT_EQ(pointwise.classes().size(), 72u);
  for (int l1 = 0; l1 < P.carrier().num_lines(); ++l1)
    for (int l2 = 0; l2 < P.carrier().num_lines(); ++l2)
      if (pointwise.parallel(l1, l2)) EXPECT_TRUE(any.parallel(l1, l2));
  EXPECT_EQ(automorphisms(pointwise).order, automorphisms(any).order);
}
