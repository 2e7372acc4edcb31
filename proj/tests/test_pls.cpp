#include <gtest/gtest.h>

#include "segrelab/incidence.hpp"

using namespace segrelab;

namespace {

// Fano plane from difference set {0,1,3} mod 7.
IncidenceStructure fano() {
  RawIncidence raw{7, {}, {}};
  for (int i = 0; i < 7; ++i) raw.lines.push_back({i, (i + 1) % 7, (i + 3) % 7});
  return validate_pls(raw);
}

// 3x3 grid: point (r, c) = 3r + c; rows and columns are lines.
IncidenceStructure grid3() {
  RawIncidence raw{9, {}, {}};
  for (int r = 0; r < 3; ++r) raw.lines.push_back({3 * r, 3 * r + 1, 3 * r + 2});
  for (int c = 0; c < 3; ++c) raw.lines.push_back({c, c + 3, c + 6});
  return validate_pls(raw);
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::ParseError;
}

}  // namespace

TEST(Validate, Examples) {
  auto one = validate_pls({3, {{2, 0, 1}}, {}});
  EXPECT_EQ(one.num_lines(), 1);
  EXPECT_EQ(one.line(0), (Line{0, 1, 2}));
  EXPECT_EQ(kind_of([] { validate_pls({4, {{0, 1, 2}, {0, 1, 3}}, {}}); }), ErrorKind::TwoLinesShareTwoPoints);
  EXPECT_EQ(kind_of([] { validate_pls({4, {{0, 1, 2}}, {}}); }), ErrorKind::IsolatedPoint);
  EXPECT_EQ(kind_of([] { validate_pls({2, {{0, 1}, {1}}, {}}); }), ErrorKind::LineTooShort);
  EXPECT_EQ(kind_of([] { validate_pls({2, {{0, 5}}, {}}); }), ErrorKind::PointOutOfRange);
  EXPECT_EQ(kind_of([] { validate_pls({0, {}, {}}); }), ErrorKind::EmptyStructure);
  auto f = fano();
  EXPECT_EQ(f.num_points(), 7);
  EXPECT_EQ(f.num_lines(), 7);
  EXPECT_EQ(validate_pls(f.raw()), f);
}

TEST(Validate, ErrorNamesIndices) {
  try {
    validate_pls({4, {{0, 1, 2}, {0, 1, 3}}, {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("{0,1}"), std::string::npos);
  }
}

TEST(Properties, Examples) {
  auto f = fano();
  EXPECT_TRUE(check_property(f, Property::Veblenian));
  EXPECT_TRUE(check_property(f, Property::Gamma));
  EXPECT_TRUE(check_property(f, Property::Linear));
  EXPECT_TRUE(check_property(f, Property::Connected));
  EXPECT_TRUE(check_property(f, Property::StronglyConnected));
  auto g = grid3();
  EXPECT_FALSE(check_property(g, Property::Linear));
  EXPECT_TRUE(check_property(g, Property::Gamma));
  EXPECT_TRUE(check_property(g, Property::Veblenian));
  // Strong subspaces of the grid are points and lines; lines share at most one point.
  EXPECT_FALSE(check_property(g, Property::StronglyConnected));
  EXPECT_TRUE(check_property(g, Property::Connected));
  // Two disjoint lines: not connected.
  auto two = validate_pls({4, {{0, 1}, {2, 3}}, {}});
  EXPECT_FALSE(is_connected(two));
  EXPECT_FALSE(is_strongly_connected(two));
}

TEST(Properties, NonGammaAndNonVeblenian) {
  auto s = validate_pls({5, {{0, 1, 2}, {3, 0}, {3, 1}, {4, 2}}, {}});
  EXPECT_FALSE(is_gamma(s));  // point 3 sees 0 and 1 but not 2
  // Veblen failure: point p=0 with lines {0,1,2},{0,3,4}; transversals {1,3},{2,4} do not meet.
  auto v = validate_pls({5, {{0, 1, 2}, {0, 3, 4}, {1, 3}, {2, 4}}, {}});
  EXPECT_FALSE(is_veblenian(v));
}

TEST(Subspaces, Predicates) {
  auto f = fano();
  std::vector<int> all{0, 1, 2, 3, 4, 5, 6};
  EXPECT_TRUE(is_subspace(f, all));
  EXPECT_TRUE(is_subspace(f, f.line(0)));
  EXPECT_FALSE(is_subspace(f, {f.line(0)[0], f.line(0)[1]}));
  EXPECT_FALSE(is_hyperplane(f, all));
  EXPECT_TRUE(is_hyperplane(f, f.line(0)));
  EXPECT_FALSE(is_hyperplane(f, {0}));
  EXPECT_TRUE(is_flappy(f, f.line(0)));
  EXPECT_TRUE(is_spiky(f, f.line(0)));
  EXPECT_THROW(is_spiky(f, {0}), Error);
}

TEST(StrongSubspaces, Examples) {
  auto g = grid3();
  auto maxes = strong_subspaces(g, true);
  ASSERT_EQ(maxes.size(), 6u);
  std::set<PointSet> lines(g.lines().begin(), g.lines().end());
  for (const auto& m : maxes) EXPECT_TRUE(lines.count(m));
  auto f = fano();
  auto fm = strong_subspaces(f, true);
  ASSERT_EQ(fm.size(), 1u);
  EXPECT_EQ(fm[0].size(), 7u);
  auto every = strong_subspaces(g, false);
  // 9 singletons + 6 lines
  EXPECT_EQ(every.size(), 15u);
  for (int a = 0; a < 9; ++a) {
    bool covered = false;
    for (const auto& m : maxes) covered = covered || std::binary_search(m.begin(), m.end(), a);
    EXPECT_TRUE(covered);
  }
}

TEST(Triangles, Examples) {
  EXPECT_TRUE(triangles(grid3()).empty());
  EXPECT_EQ(triangles(fano()).size(), 28u);
  EXPECT_TRUE(triangles(validate_pls({3, {{0, 1, 2}}, {}})).empty());
}

TEST(Restrict, IdentityAndErrors) {
  auto f = fano();
  std::vector<int> all_lines(f.num_lines());
  std::iota(all_lines.begin(), all_lines.end(), 0);
  auto r = restrict(f, {0, 1, 2, 3, 4, 5, 6}, all_lines);
  EXPECT_EQ(r.structure, f);
  EXPECT_EQ(kind_of([&] { restrict(f, f.line(0), {1}); }), ErrorKind::LineNotInSubset);
}

TEST(Restrict, HyperplaneRestrictsToHyperplane) {
  // Lemma-style check: every hyperplane of the grid restricted to a sub-grid.
  auto g = grid3();
  for (std::uint32_t mask = 0; mask < (1u << 9); ++mask) {
    PointSet x;
    for (int i = 0; i < 9; ++i)
      if (mask >> i & 1u) x.push_back(i);
    if (!is_hyperplane(g, x)) continue;
    PointSet s0{0, 1, 3, 4, 6, 7};  // first two columns
    auto lines = lines_inside(g, s0);
    auto r = restrict(g, s0, lines);
    bool inside = std::includes(x.begin(), x.end(), s0.begin(), s0.end());
    if (!inside) EXPECT_TRUE(is_hyperplane(r.structure, r.map_set(x)));
  }
}

TEST(HyperplaneLemmas, FlappyImpliesSpikyOnGrid) {
  auto g = grid3();
  int count = 0;
  for (std::uint32_t mask = 0; mask < (1u << 9); ++mask) {
    PointSet x;
    for (int i = 0; i < 9; ++i)
      if (mask >> i & 1u) x.push_back(i);
    if (!is_hyperplane(g, x)) continue;
    ++count;
    if (is_flappy(g, x)) EXPECT_TRUE(is_spiky(g, x));
  }
  // 3x3 grid hyperplanes: 6 permutation sets + 9 crosses (row union column)
  EXPECT_EQ(count, 15);
}
