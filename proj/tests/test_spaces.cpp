#include <gtest/gtest.h>

#include "segrelab/spaces.hpp"

using namespace segrelab;

TEST(Spaces, ProjectiveCounts) {
  auto f = projective_space(3, 2);
  EXPECT_EQ(f.num_points(), 7);
  EXPECT_EQ(f.num_lines(), 7);
  auto pg3 = projective_space(4, 2);
  EXPECT_EQ(pg3.num_points(), 15);
  EXPECT_EQ(pg3.num_lines(), 35);
  auto line = projective_space(2, 5);
  EXPECT_EQ(line.num_lines(), 1);
  EXPECT_EQ(line.line(0).size(), 6u);
  EXPECT_THROW(projective_space(1, 2), Error);
  EXPECT_EQ(automorphisms(f).order, 168u);
}

TEST(Spaces, GrassmannCounts) {
  for (int p : {2, 3})
    for (int n = 3; n <= 5; ++n)
      for (int k = 1; k < n; ++k) {
        if (p == 3 && n == 5) continue;
        auto g = grassmann_space(n, k, p);
        EXPECT_EQ(static_cast<std::uint64_t>(g.num_points()), gaussian_binomial(n, k, p));
        // lines: pairs (H, B) = [n,k-1] * [n-k+1, 2]
        EXPECT_EQ(static_cast<std::uint64_t>(g.num_lines()), gaussian_binomial(n, k - 1, p) * gaussian_binomial(n - k + 1, 2, p));
        for (const auto& l : g.lines()) EXPECT_EQ(static_cast<int>(l.size()), p + 1);
      }
  auto g = grassmann_space(4, 2, 2);
  EXPECT_EQ(g.num_points(), 35);
  EXPECT_EQ(g.num_lines(), 105);
  EXPECT_FALSE(is_linear(g));
  EXPECT_TRUE(is_gamma(g));
  EXPECT_TRUE(is_veblenian(g));
  EXPECT_TRUE(is_strongly_connected(g));
  EXPECT_EQ(grassmann_space(4, 1, 2), projective_space(4, 2));
  EXPECT_EQ(grassmann_space(4, 2, 3).num_lines(), 520);
  EXPECT_THROW(grassmann_space(4, 4, 2), Error);
}

TEST(Spaces, PolarSpaces) {
  auto w = BilinearForm::symplectic(4, 2);
  auto pts = polar_space(w);
  EXPECT_EQ(pts.num_points(), 15);
  EXPECT_EQ(pts.num_lines(), 15);
  auto dual = polar_grassmann_space(w, 2);
  EXPECT_EQ(dual.num_points(), 15);
  EXPECT_EQ(dual.num_lines(), 15);
  EXPECT_TRUE(is_gamma(dual));
  EXPECT_TRUE(is_veblenian(dual));
  // Rank-2 polar spaces are generalized quadrangles: lines share at most one
  // point, so no chain of strong subspaces with two-point overlaps leaves a line.
  EXPECT_FALSE(is_strongly_connected(dual));
  EXPECT_FALSE(is_strongly_connected(pts));
  auto w52 = polar_space(BilinearForm::symplectic(6, 2));
  EXPECT_EQ(w52.num_points(), 63);
  EXPECT_TRUE(is_strongly_connected(w52));
  EXPECT_TRUE(is_gamma(w52));
  EXPECT_TRUE(is_veblenian(w52));
  // Natural embedding: polar lines are Grassmann lines.
  auto g = grassmann_space(4, 2, 2);
  for (const auto& l : dual.lines()) {
    Line img;
    for (int a : l) {
      auto it = std::find(g.labels().begin(), g.labels().end(), dual.label(a));
      ASSERT_NE(it, g.labels().end());
      img.push_back(static_cast<int>(it - g.labels().begin()));
    }
    std::sort(img.begin(), img.end());
    EXPECT_GE(g.line_index(img), 0);
  }
  // Anisotropic form x^2 + y^2 over GF(3): no isotropic points.
  EXPECT_THROW(polar_space(BilinearForm::diagonal({1, 1}, 3)), Error);
  auto w33 = polar_space(BilinearForm::symplectic(4, 3));
  EXPECT_EQ(w33.num_points(), 40);
  EXPECT_EQ(w33.num_lines(), 40);
}

TEST(Spaces, AffinePlane) {
  auto ag = affine_space(3, 3);
  EXPECT_EQ(ag.base().num_points(), 9);
  EXPECT_EQ(ag.base().num_lines(), 12);
  EXPECT_EQ(ag.classes().size(), 4u);
  EXPECT_TRUE(satisfies_all_affine_axioms(ag));
  auto ag2 = affine_space(3, 2);
  EXPECT_EQ(ag2.base().num_points(), 4);
  EXPECT_EQ(ag2.base().num_lines(), 6);
  EXPECT_TRUE(satisfies_all_affine_axioms(ag2));
  // each class partitions the points
  for (const auto& cls : ag.classes()) {
    std::vector<int> cover;
    for (int l : cls)
      for (int a : ag.base().line(l)) cover.push_back(a);
    std::sort(cover.begin(), cover.end());
    EXPECT_EQ(cover.size(), 9u);
    EXPECT_TRUE(std::adjacent_find(cover.begin(), cover.end()) == cover.end());
  }
  EXPECT_EQ(automorphisms(ag).order, 432u);
  auto ag33 = affine_space(4, 3);
  EXPECT_EQ(ag33.base().num_points(), 27);
  EXPECT_TRUE(satisfies_all_affine_axioms(ag33));
}

TEST(Affine, ParallelRelationsAgreeWithSingleQueries) {
  auto ag = affine_space(3, 3);
  const auto& s = ag.base();
  auto rel = parallel_relations(s);
  for (int a = 0; a < s.num_lines(); ++a)
    for (int b = 0; b < s.num_lines(); ++b) {
      EXPECT_EQ(rel.veblen(a, b), par_veblen(s, a, b));
      EXPECT_EQ(rel.ast(a, b), par_ast(s, a, b));
      EXPECT_EQ(rel.quadr(a, b), par_quadr(s, a, b));
      // In an affine plane Veblen parallelism is the parallelism.
      EXPECT_EQ(rel.veblen(a, b), ag.parallel(a, b));
    }
}

TEST(Affine, NearPlanes) {
  auto pg = projective_space(3, 3);
  const int k = 0;
  int off = 0;
  while (pg.on_line(off, k)) ++off;
  auto np = near_plane(pg, off, k);
  EXPECT_EQ(np.kind, NearPlaneKind::NearPlane);
  EXPECT_EQ(np.points.size(), 13u);
  auto on = near_plane(pg, pg.line(k)[0], k);
  EXPECT_EQ(on.kind, NearPlaneKind::ThroughPoint);
  EXPECT_EQ(on.points.size(), 13u);
  EXPECT_TRUE(near_planes_meet_in_lines(pg, pg.line(k)));
  EXPECT_TRUE(lines_covered_by_near_planes(pg, pg.line(k)));
}

TEST(Affine, RecoveryAndExtensionInPlane) {
  auto pg = projective_space(3, 3);
  auto h = coordinate_hyperplane(pg);
  auto a = affinize(pg, h);
  auto rec = recover_directions(a);
  EXPECT_EQ(rec.num_classes, 4);
  ASSERT_EQ(rec.lines.size(), 1u);
  EXPECT_EQ(rec.lines[0].size(), 4u);
  auto aut = automorphisms(a.carrier);
  auto stab = automorphisms(pg, colouring_of(pg.num_points(), h));
  EXPECT_EQ(aut.order, stab.order);
  for (const auto& f : aut.generators) {
    auto big = extend_automorphism(a, f);
    EXPECT_TRUE(is_automorphism(pg, big));
    EXPECT_EQ(restrict_automorphism(a, big), f);
  }
  Permutation id(a.structure().num_points());
  std::iota(id.begin(), id.end(), 0);
  Permutation big_id(pg.num_points());
  std::iota(big_id.begin(), big_id.end(), 0);
  EXPECT_EQ(extend_automorphism(a, id), big_id);
}

TEST(Spaces, RuledSpaceExample) {
  const auto ex = ruled_space_example(2);
  const auto& s = ex.structure;
  // 3 joins a f(a) plus the 35 - 19 lines of PG(3,2) missing L
  EXPECT_EQ(s.num_points(), 15);
  EXPECT_EQ(s.num_lines(), 3 + 16);
  EXPECT_TRUE(is_hyperplane(s, ex.hyperplane));
  EXPECT_FALSE(is_flappy(s, ex.hyperplane));
  // e0 = f^{-1}(M cap H) has no neighbour off H
  EXPECT_FALSE(is_spiky(s, ex.hyperplane));
  const int w = non_spiky_witness(s, ex.hyperplane);
  ASSERT_GE(w, 0);
  EXPECT_EQ(s.label(w), Subspace(2, 4, Matrix::from_rows({{1, 0, 0, 0}}, 4)));
}

TEST(Spaces, TwoSubspacesExample) {
  const auto ex = two_subspaces_example(2, 2);
  EXPECT_EQ(ex.structure.num_points(), 11);
  EXPECT_EQ(ex.structure.num_lines(), 13);
  EXPECT_EQ(ex.hyperplane.size(), 3u);
  EXPECT_TRUE(is_hyperplane(ex.structure, ex.hyperplane));
  EXPECT_TRUE(is_flappy(ex.structure, ex.hyperplane));
  EXPECT_TRUE(is_veblenian(ex.structure));
  EXPECT_TRUE(is_gamma(ex.structure));
  EXPECT_TRUE(is_strongly_connected(ex.structure));
  EXPECT_FALSE(is_connected(affinize(ex.structure, ex.hyperplane).structure()));
  EXPECT_THROW(two_subspaces_example(1, 2), Error);
}
