#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <numeric>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "segrelab/automorphism.hpp"
#include "segrelab/complement.hpp"
#include "segrelab/hyperplanes.hpp"
#include "segrelab/io.hpp"
#include "segrelab/segre.hpp"
#include "segrelab/spaces.hpp"

namespace segrelab {

enum class SuiteStatus { Pass, Fail, SkippedHypothesis };

inline std::string_view to_string(SuiteStatus s) {
  switch (s) {
    case SuiteStatus::Pass:
      return "PASS";
    case SuiteStatus::Fail:
      return "FAIL";
    case SuiteStatus::SkippedHypothesis:
      return "SKIPPED-HYPOTHESIS";
  }
  return "?";
}

struct SuiteParams {
  std::uint64_t seed = 0;
  int max_points = max_points_cap();
  std::optional<int> p;  // overrides the default field size where a suite has one
};

struct SuiteOutcome {
  SuiteStatus status = SuiteStatus::Pass;
  std::string instance;
  Json witness = nullptr;
  std::string detail;
  bool outside_hypothesis = false;  // run in characteristic 2 where char != 2 is assumed
};

struct SuiteRecord {
  std::string suite_id;
  std::string statement;
  SuiteOutcome outcome;
  double wall_ms = 0;
  std::uint64_t seed = 0;
};

struct SuiteDef {
  std::string id;
  std::string statement;
  std::function<SuiteOutcome(const SuiteParams&)> run;
};

namespace suites {

// Collects checks; the first failure (in deterministic order) is the witness.
class Check {
 public:
  bool operator()(bool ok, const std::string& what, Json witness = nullptr) {
    ++count_;
    if (!ok && failure_.empty()) {
      failure_ = what;
      witness_ = std::move(witness);
    }
    return ok;
  }
  bool ok() const noexcept { return failure_.empty(); }
  int count() const noexcept { return count_; }

  SuiteOutcome finish(std::string instance, std::string summary, bool outside = false) const {
    SuiteOutcome o;
    o.instance = std::move(instance);
    o.outside_hypothesis = outside;
    if (ok()) {
      o.status = SuiteStatus::Pass;
      o.detail = std::move(summary);
    } else {
      o.status = SuiteStatus::Fail;
      o.detail = failure_ + (summary.empty() ? "" : "; " + summary);
      o.witness = witness_;
    }
    return o;
  }

 private:
  int count_ = 0;
  std::string failure_;
  Json witness_ = nullptr;
};

inline int field(const SuiteParams& sp, int fallback) {
  const int p = sp.p.value_or(fallback);
  static_cast<void>(PrimeField(p));
  return p;
}

// Lines of size at least 4 in the spaces built over GF(p).
inline void require_long_lines(int p) {
  if (p + 1 < 4)
    fail(ErrorKind::HypothesisFailed, "lines have " + std::to_string(p + 1) + " < 4 points");
}

inline std::string pg(int n, int p) { return "PG(" + std::to_string(n - 1) + "," + std::to_string(p) + ")"; }

inline Json basis_json(const Subspace& u) {
  Json rows = Json::array();
  for (int r = 0; r < u.dim(); ++r) {
    const auto row = u.basis().row(r);
    rows.push_back(std::vector<Elem>(row.begin(), row.end()));
  }
  return rows;
}

inline Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    rows.push_back(std::vector<Elem>(row.begin(), row.end()));
  }
  return rows;
}

// Nonzero d1 x d2 matrices up to scalars.
inline std::vector<Matrix> projective_matrices(int d1, int d2, int p) {
  std::vector<Matrix> out;
  for (const auto& v : projective_points(d1 * d2, p)) out.emplace_back(d1, d2, v);
  return out;
}

// Nonzero trilinear forms on GF(p)^2 x GF(p)^2 x GF(p)^2 up to scalars.
inline std::vector<MultiForm> projective_trilinear(int p) {
  std::vector<MultiForm> out;
  for (const auto& v : projective_points(8, p)) {
    MultiForm mu(p, {2, 2, 2}, {1, 1, 1});
    for (int t = 0; t < 8; ++t) mu.set({1u << (t & 1), 1u << (t >> 1 & 1), 1u << (t >> 2 & 1)}, v[t]);
    out.push_back(std::move(mu));
  }
  return out;
}

// Nonzero alternating 2-forms on GF(p)^n up to scalars.
inline std::vector<MultiForm> projective_alternating2(int n, int p) {
  std::vector<MultiForm> out;
  const int m = n * (n - 1) / 2;
  for (const auto& v : projective_points(m, p)) {
    MultiForm mu(p, {n}, {2});
    int t = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) mu.set({(1u << i) | (1u << j)}, v[t++]);
    out.push_back(std::move(mu));
  }
  return out;
}

struct Named {
  std::string name;
  IncidenceStructure s;
};

// Spaces small enough for exhaustive hyperplane enumeration.
inline std::vector<Named> small_spaces() {
  std::vector<Named> out;
  out.push_back({"PG(2,2)", projective_space(3, 2)});
  out.push_back({"PG(3,2)", projective_space(4, 2)});
  out.push_back({"PG(2,3)", projective_space(3, 3)});
  const auto l2 = projective_space(2, 2), l3 = projective_space(2, 3);
  out.push_back({"PG(1,2)xPG(1,2)", SegreProduct({l2, l2}).carrier()});
  out.push_back({"PG(1,3)xPG(1,3)", SegreProduct({l3, l3}).carrier()});
  out.push_back({"PG(1,2)xPG(1,2)xPG(1,2)", SegreProduct({l2, l2, l2}).carrier()});
  out.push_back({"W(3,2)", polar_space(BilinearForm::symplectic(4, 2))});
  out.push_back({"grassmann(4,2,2)", grassmann_space(4, 2, 2)});
  out.push_back({"ruled(3,2)", ruled_space_example(2).structure});
  out.push_back({"two-planes(3,2)", two_subspaces_example(2, 2).structure});
  return out;
}

struct FormComplement {
  SegreProduct P;
  PointSet h;
  AffinizedStructure a;
};

// A fixed invertible 3x3 coefficient matrix per small prime.
inline Matrix plane_form(int p) {
  if (p == 3) return Matrix::from_rows({{1, 2, 0}, {0, 1, 1}, {2, 0, 1}}, 3);
  if (p == 2) return Matrix::identity(3);
  return Matrix::from_rows({{1, 2, 0}, {0, 1, 1}, {1, 0, 1}}, 3);
}

inline FormComplement plane_form_complement(int p, int max_points) {
  const auto g = projective_space(3, p);
  SegreProduct P({g, g}, max_points);
  auto r = hyperplane_from_form(P, MultiForm::bilinear(plane_form(p), p));
  auto h = std::get<HyperplaneHandle>(r).points;
  auto a = affinize(P, h);
  return {std::move(P), std::move(h), std::move(a)};
}

inline std::string plane_form_instance(int p) {
  return pg(3, p) + "(x)" + pg(3, p) + " minus H(mu), mu = " + matrix_json(plane_form(p)).dump();
}

inline bool is_flappy_hyperplane(const IncidenceStructure& s, const PointSet& x) {
  return is_hyperplane(s, x) && is_flappy(s, x);
}

inline bool is_spiky_hyperplane(const IncidenceStructure& s, const PointSet& x) {
  return is_hyperplane(s, x) && is_spiky(s, x);
}

// |GL(m, p)|
inline std::uint64_t gl_order(int m, int p) {
  std::uint64_t pm = 1, out = 1;
  for (int i = 0; i < m; ++i) pm *= p;
  std::uint64_t pi = 1;
  for (int i = 0; i < m; ++i, pi *= p) out *= pm - pi;
  return out;
}

inline PointSet all_points(int n) {
  PointSet x(n);
  std::iota(x.begin(), x.end(), 0);
  return x;
}

// ---------------------------------------------------------------------------
// Partial linear spaces

inline SuiteOutcome flappy_implies_spiky(const SuiteParams&) {
  Check c;
  int flappy = 0, total = 0;
  for (const auto& [name, s] : small_spaces())
    for (const auto& h : enumerate_hyperplanes(s)) {
      ++total;
      if (!is_flappy(s, h)) continue;
      ++flappy;
      c(is_spiky(s, h), "flappy hyperplane that is not spiky in " + name, Json{{"space", name}, {"hyperplane", h}});
    }
  return c.finish("every enumerated hyperplane of 10 spaces with at most 40 points",
                  std::to_string(flappy) + " of " + std::to_string(total) + " hyperplanes flappy, all spiky");
}

inline SuiteOutcome spiky_minimal(const SuiteParams&) {
  Check c;
  int nested = 0;
  for (const auto& [name, s] : small_spaces()) {
    const auto hs = enumerate_hyperplanes(s);
    for (const auto& h2 : hs) {
      if (!is_spiky(s, h2)) continue;
      for (const auto& h1 : hs) {
        if (h1 == h2 || !std::includes(h2.begin(), h2.end(), h1.begin(), h1.end())) continue;
        ++nested;
        c(false, "spiky hyperplane properly containing another in " + name,
          Json{{"space", name}, {"inner", h1}, {"outer", h2}});
      }
    }
  }
  return c.finish("all pairs of enumerated hyperplanes in 10 spaces with at most 40 points",
                  std::to_string(nested) + " proper inclusions under a spiky hyperplane");
}

inline SuiteOutcome spiky_nonflappy_example(const SuiteParams& sp) {
  const int p = field(sp, 2);
  Check c;
  const auto ex = ruled_space_example(p);
  const auto& s = ex.structure;
  c(is_hyperplane(s, ex.hyperplane), "H is not a hyperplane");
  const bool flappy = is_flappy(s, ex.hyperplane);
  c(!flappy, "H is flappy");
  const int w = non_spiky_witness(s, ex.hyperplane);
  Json witness = nullptr;
  if (w >= 0) witness = Json{{"point", w}, {"label", basis_json(s.label(w))}, {"neighbours_off_H", 0}};
  c(w < 0, "H is not spiky: a point of L on a single line inside H has no neighbour off H", witness);
  return c.finish(pg(4, p) + ", L = <e0,e1>, M = <e2,e3>, H = {x3 = 0}",
                  "spiky and non-flappy as stated");
}

inline SuiteOutcome nested_hyperplanes_example(const SuiteParams& sp) {
  const int p = field(sp, 2);
  Check c;
  const auto ex = two_subspaces_example(2, p);
  const auto& s = ex.structure;
  PointSet x2;
  for (int a = 0; a < s.num_points(); ++a)
    if (s.label(a).basis()(0, 2) == 0) x2.push_back(a);
  c(is_hyperplane(s, ex.hyperplane), "X1 n X2 is not a hyperplane", ex.hyperplane);
  c(is_hyperplane(s, x2), "X2 is not a hyperplane", x2);
  c(ex.hyperplane.size() < x2.size() && std::includes(x2.begin(), x2.end(), ex.hyperplane.begin(), ex.hyperplane.end()),
    "X1 n X2 is not properly inside X2");
  c(!is_spiky(s, x2), "X2 is spiky although it contains another hyperplane");
  return c.finish("restriction of " + pg(4, p) + " to two planes X1, X2", "two nested hyperplanes, the larger non-spiky");
}

inline SuiteOutcome hyperplane_restricted(const SuiteParams& sp) {
  const int p = field(sp, 3);
  Check c;
  const auto s = projective_space(4, p);
  std::mt19937_64 rng(sp.seed);
  // planes of PG(3,p) as hyperplanes
  std::vector<PointSet> planes;
  for (const auto& v : projective_points(4, p)) {
    PointSet h;
    for (int a = 0; a < s.num_points(); ++a) {
      const auto row = s.label(a).basis().row(0);
      long dot = 0;
      for (int t = 0; t < 4; ++t) dot += static_cast<long>(v[t]) * row[t];
      if (dot % p == 0) h.push_back(a);
    }
    planes.push_back(std::move(h));
  }
  int trials = 0;
  for (int t = 0; t < 200; ++t) {
    std::vector<int> ls;
    std::uniform_int_distribution<int> pick(0, s.num_lines() - 1);
    const int k = 2 + static_cast<int>(rng() % 4);
    for (int i = 0; i < k; ++i) ls.push_back(pick(rng));
    std::sort(ls.begin(), ls.end());
    ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
    PointSet s0;
    for (int l : ls) s0.insert(s0.end(), s.line(l).begin(), s.line(l).end());
    s0 = normalized(std::move(s0));
    const auto r = restrict(s, s0, ls);
    const auto& h = planes[rng() % planes.size()];
    if (std::includes(h.begin(), h.end(), s0.begin(), s0.end())) continue;
    ++trials;
    c(is_hyperplane(r.structure, r.map_set(h)), "H n S0 is not a hyperplane of <S0, L0>",
      Json{{"lines", ls}, {"hyperplane", h}});
  }
  return c.finish(pg(4, p) + ", 200 random unions of lines (seed " + std::to_string(sp.seed) + ")",
                  std::to_string(trials) + " restrictions with S0 not inside H");
}

inline SuiteOutcome disconnected_complement_example(const SuiteParams& sp) {
  const int p = field(sp, 2);
  Check c;
  const auto ex = two_subspaces_example(2, p);
  const auto& s = ex.structure;
  c(is_veblenian(s), "not Veblenian");
  c(is_gamma(s), "not a gamma space");
  c(is_strongly_connected(s), "not strongly connected");
  c(is_hyperplane(s, ex.hyperplane), "H is not a hyperplane");
  c(is_flappy(s, ex.hyperplane), "H is not flappy");
  const auto a = affinize(s, ex.hyperplane);
  c(!is_connected(a.structure()), "complement is connected");
  return c.finish("two planes of " + pg(4, p) + " meeting in a line",
                  std::to_string(s.num_points()) + " points, " + std::to_string(s.num_lines()) +
                      " lines, complement disconnected");
}

// ---------------------------------------------------------------------------
// Segre products

inline SuiteOutcome product_pls(const SuiteParams& sp) {
  Check c;
  const auto l2 = projective_space(2, 2), f = projective_space(3, 2);
  const std::vector<std::pair<std::string, std::vector<IncidenceStructure>>> cases{
      {"PG(1,2)xPG(1,2)", {l2, l2}}, {"PG(2,2)xPG(1,2)", {f, l2}}, {"PG(1,2)^3", {l2, l2, l2}}};
  for (const auto& [name, fs] : cases) {
    const SegreProduct P(fs, sp.max_points);
    const auto& s = P.carrier();
    c(is_connected(s), name + " is not connected");
    c(is_gamma(s), name + " is not a gamma space");
    c(is_veblenian(s), name + " is not Veblenian");
    for (const auto& t : triangles(s)) {
      int slots = 0;
      for (int i = 0; i < P.num_factors(); ++i)
        slots += !(P.coordinate(t[0], i) == P.coordinate(t[1], i) && P.coordinate(t[1], i) == P.coordinate(t[2], i));
      c(slots == 1, "triangle of " + name + " varies in " + std::to_string(slots) + " slots", t);
    }
    for (const auto& x : strong_subspaces(s, false)) {
      int slots = 0;
      for (int i = 0; i < P.num_factors(); ++i) {
        bool same = true;
        for (int a : x) same = same && P.coordinate(a, i) == P.coordinate(x[0], i);
        slots += !same;
      }
      c(slots <= 1, "strong subspace of " + name + " varies in several slots", x);
    }
  }
  return c.finish("PG(1,2)xPG(1,2), PG(2,2)xPG(1,2), PG(1,2)^3", "partial linear, connected, gamma, Veblenian; "
                                                                   "triangles and strong subspaces lie in slices");
}

inline SuiteOutcome product_apls(const SuiteParams& sp) {
  const int p = field(sp, 3);
  Check c;
  const auto ag = affine_space(3, p);
  const SegreProduct P({ag.base(), ag.base()}, sp.max_points);
  const auto par = product_parallelism(P, {ag, ag}, ProductParallel::Any);
  for (auto ax : {AffineAxiom::PartialAffine, AffineAxiom::AffinePls, AffineAxiom::Tamaschke, AffineAxiom::Parallelogram})
    c(check_affine_axiom(par, ax), "product fails " + std::string(to_string(ax)));
  c(is_connected(P.carrier()), "product is not connected");
  return c.finish("AG(2," + std::to_string(p) + ")(x)AG(2," + std::to_string(p) + ") with parallel factor lines",
                  "all four affine axioms hold");
}

inline SuiteOutcome pointwise_not_apls(const SuiteParams& sp) {
  const int p = field(sp, 3);
  Check c;
  const auto ag = affine_space(3, p);
  const SegreProduct P({ag.base(), ag.base()}, sp.max_points);
  const auto pw = product_parallelism(P, {ag, ag}, ProductParallel::Pointwise);
  c(check_affine_axiom(pw, AffineAxiom::PartialAffine), "pointwise parallelism is not partial affine");
  c(!check_affine_axiom(pw, AffineAxiom::AffinePls), "pointwise parallelism is an affine partial linear space");
  return c.finish("AG(2," + std::to_string(p) + ")(x)AG(2," + std::to_string(p) + ") with pointwise parallelism",
                  "partial affine, not affine");
}

// ---------------------------------------------------------------------------
// Complements

inline SuiteOutcome complement_reduct(const SuiteParams&) {
  Check c;
  int spiky = 0, total = 0;
  for (const auto& [name, s] : small_spaces()) {
    const bool linear = is_linear(s), veblen = is_veblenian(s);
    for (const auto& h : enumerate_hyperplanes(s)) {
      const auto a = affinize(s, h);
      if (a.structure().num_lines() == 0) continue;
      ++total;
      const Json w{{"space", name}, {"hyperplane", h}};
      c(check_affine_axiom(a.carrier, AffineAxiom::PartialAffine), "complement not partial affine in " + name, w);
      if (is_spiky(s, h)) {
        ++spiky;
        const auto in_h = membership(s.num_points(), h);
        bool all_adjacent = true;
        for (int x : h)
          for (int y = 0; y < s.num_points() && all_adjacent; ++y)
            if (!in_h[y]) all_adjacent = s.collinear(x, y);
        c(check_affine_axiom(a.carrier, AffineAxiom::AffinePls) == all_adjacent,
          "affine iff H ~ complement fails in " + name, w);
      }
      if (linear) c(is_linear(a.structure()) && check_affine_axiom(a.carrier, AffineAxiom::AffinePls),
                    "complement of a linear space is not affine linear in " + name, w);
      if (veblen)
        c(check_affine_axiom(a.carrier, AffineAxiom::Tamaschke) &&
              check_affine_axiom(a.carrier, AffineAxiom::Parallelogram),
          "complement of a Veblenian space fails Tamaschke or parallelogram in " + name, w);
    }
  }
  return c.finish("all enumerated hyperplanes of 10 spaces with at most 40 points",
                  std::to_string(total) + " complements, " + std::to_string(spiky) + " with spiky H");
}

inline SuiteOutcome linear_converse_fails(const SuiteParams& sp) {
  const int p = field(sp, 3);
  Check c;
  const auto m = projective_space(3, p);
  const auto h = m.line(0);
  std::vector<int> keep;
  for (int l = 1; l < m.num_lines(); ++l) keep.push_back(l);
  const auto r = restrict(m, all_points(m.num_points()), keep);
  const auto& mp = r.structure;
  c(!is_linear(mp), "M' is linear");
  c(is_hyperplane(mp, h), "H is not a hyperplane of M'");
  const auto a1 = affinize(m, h), a2 = affinize(mp, h);
  c(a1.structure() == a2.structure(), "M' minus H differs from M minus H");
  c(is_linear(a2.structure()), "M' minus H is not linear");
  return c.finish(pg(3, p) + " with the lines inside a line H removed", "complement linear, M' not linear");
}

inline SuiteOutcome strong_transfer(const SuiteParams& sp) {
  const int p = field(sp, 3);
  require_long_lines(p);
  Check c;
  const auto m = projective_space(4, p);
  const auto h = m.line(0).size() ? coordinate_hyperplane(m) : PointSet{};
  const auto a = affinize(m, h);
  std::set<PointSet> from_ambient;
  for (const auto& y : strong_subspaces(m, false)) {
    PointSet x;
    for (int q : y)
      if (a.from_ambient[q] >= 0) x.push_back(a.from_ambient[q]);
    if (!x.empty()) from_ambient.insert(normalized(std::move(x)));
  }
  const auto inside = strong_subspaces(a.structure(), false);
  const std::set<PointSet> got(inside.begin(), inside.end());
  for (const auto& x : got) c(from_ambient.count(x) == 1, "strong subspace of the complement not of the form Y minus H", x);
  for (const auto& x : from_ambient) c(got.count(x) == 1, "Y minus H is not a strong subspace of the complement", x);
  return c.finish(pg(4, p) + " minus a plane", std::to_string(got.size()) + " strong subspaces matched");
}

inline SuiteOutcome recover_hyperplane_lines(const SuiteParams& sp) {
  const int p = field(sp, 3);
  Check c;
  const auto m = projective_space(4, p);
  const auto h = coordinate_hyperplane(m);
  const auto a = affinize(m, h);
  const auto rec = recover_directions(a);
  std::set<Line> mapped;
  for (const auto& l : rec.lines) {
    Line x;
    for (int cls : l) x.push_back(rec.class_direction[cls]);
    mapped.insert(normalized(std::move(x)));
  }
  std::set<Line> truth;
  for (int l : lines_inside(m, h)) truth.insert(m.line(l));
  c(mapped == truth, "recovered lines differ from the lines inside H");
  const auto plane = validate_pls({rec.num_classes, rec.lines, {}});
  c(isomorphic(plane, projective_space(3, p)).has_value(), "recovered structure is not " + pg(3, p));
  return c.finish(pg(4, p) + " minus a plane", std::to_string(rec.num_classes) + " directions, " +
                                                   std::to_string(rec.lines.size()) + " recovered lines");
}

inline SuiteOutcome automorphisms_of_complement(const SuiteParams& sp) {
  const int p = field(sp, 3);
  Check c;
  const auto m = projective_space(3, p);
  const auto h = m.line(0);
  const auto a = affinize(m, h);
  const auto stab = automorphisms(m, colouring_of(m.num_points(), h));
  const auto aut = automorphisms(a.carrier);
  for (const auto& g : stab.generators) {
    const auto f = restrict_automorphism(a, g);
    c(is_automorphism(a.structure(), f, &a.carrier), "restriction of an ambient automorphism is not an automorphism");
    c(extend_automorphism(a, f) == g, "extension of the restriction differs");
  }
  for (const auto& f : aut.generators) {
    const auto g = extend_automorphism(a, f);
    c(is_automorphism(m, g), "extension is not an automorphism of M");
    c(restrict_automorphism(a, g) == f, "restriction of the extension differs");
  }
  c(stab.order == aut.order, "group orders differ",
    Json{{"stabiliser", stab.order}, {"complement", aut.order}});
  return c.finish(pg(3, p) + " minus a line", "|Aut| = " + std::to_string(aut.order));
}

inline SuiteOutcome near_planes(const SuiteParams&) {
  Check c;
  int checked = 0, flappy = 0;
  for (const auto& [name, s] : small_spaces()) {
    if (min_line_size(s) < 3 || !is_veblenian(s) || !is_gamma(s)) continue;
    for (const auto& h : enumerate_hyperplanes(s)) {
      ++checked;
      const Json w{{"space", name}, {"hyperplane", h}};
      c(near_planes_meet_in_lines(s, h), "a near-plane meets H outside a line in " + name, w);
      if (is_flappy(s, h)) {
        ++flappy;
        c(lines_covered_by_near_planes(s, h), "a line of a flappy H lies in no near-plane in " + name, w);
      }
    }
  }
  return c.finish("Veblenian gamma spaces among the 10 small spaces",
                  std::to_string(checked) + " hyperplanes, " + std::to_string(flappy) + " flappy");
}

inline SuiteOutcome unique_extension(const SuiteParams& sp) {
  const int p = field(sp, 3);
  Check c;
  const std::vector<std::pair<std::string, IncidenceStructure>> cases{{pg(3, p) + " minus a line", projective_space(3, p)},
                                                                      {"PG(3,2) minus a plane", projective_space(4, 2)}};
  for (const auto& [name, m] : cases) {
    const auto h = coordinate_hyperplane(m);
    const auto a = affinize(m, h);
    const auto aut = automorphisms(a.carrier);
    const auto stab = automorphisms(m, colouring_of(m.num_points(), h), true);
    for (const auto& f : aut.generators) c(is_automorphism(m, extend_automorphism(a, f)), "extension fails in " + name);
    c(aut.order == stab.order, "orders differ in " + name, Json{{"complement", aut.order}, {"stabiliser", stab.order}});
  }
  return c.finish(cases[0].first + "; " + cases[1].first, "every automorphism extends, orders equal");
}

// ---------------------------------------------------------------------------
// Hyperplanes of products

inline SuiteOutcome slice_criterion_suite(const SuiteParams& sp) {
  Check c;
  const auto l2 = projective_space(2, 2);
  const SegreProduct grid({l2, l2});
  for (int mask = 0; mask < (1 << 9); ++mask) {
    PointSet x;
    for (int a = 0; a < 9; ++a)
      if (mask >> a & 1) x.push_back(a);
    c(slice_criterion(grid, x) == is_hyperplane(grid.carrier(), x), "slice criterion disagrees on the grid", x);
  }
  auto compare = [&](const SegreProduct& P, const PointSet& h, const std::string& name) {
    c(slice_criterion(P, h) == is_hyperplane(P.carrier(), h), "slice criterion disagrees in " + name, h);
    // one point more or less breaks the hyperplane property
    PointSet x = h;
    x.erase(x.begin());
    c(slice_criterion(P, x) == is_hyperplane(P.carrier(), x), "slice criterion disagrees on a perturbed set in " + name, x);
  };
  const auto f = projective_space(3, 2);
  const SegreProduct F({f, f}, sp.max_points);
  int constructed = 0;
  for (const auto& xi : projective_matrices(3, 3, 2)) {
    compare(F, std::get<HyperplaneHandle>(hyperplane_from_form(F, MultiForm::bilinear(xi, 2))).points, "PG(2,2)^2");
    ++constructed;
  }
  for (int l1 = 0; l1 < f.num_lines(); ++l1)
    for (int l2i = 0; l2i < f.num_lines(); ++l2i) {
      compare(F, degenerate_product_hyperplane(F, {f.line(l1), f.line(l2i)}).points, "PG(2,2)^2");
      ++constructed;
    }
  const auto g = grassmann_space(4, 2, 2);
  const SegreProduct G({g, g}, sp.max_points);
  compare(G, intersection_hyperplane(G).points, "grassmann(4,2,2)^2");
  ++constructed;
  return c.finish("all 2^9 subsets of the 3x3 grid; form, degenerate and intersection hyperplanes",
                  std::to_string(c.count()) + " comparisons, " + std::to_string(constructed) + " constructed hyperplanes");
}

inline SuiteOutcome correlation_suite(const SuiteParams& sp) {
  const int p = field(sp, 2);
  Check c;
  const auto f = projective_space(3, p);
  const SegreProduct P({f, f}, sp.max_points);
  int n = 0;
  for (const auto& xi : projective_matrices(3, 3, p)) {
    if (p > 2 && n++ % 61 != 0) continue;
    const auto h = std::get<HyperplaneHandle>(hyperplane_from_form(P, MultiForm::bilinear(xi, p))).points;
    const auto corr = correlation_of(P, h);
    c(corr.compatible && corr.reconstructs, "correlation does not describe H", matrix_json(xi));
  }
  const auto l = projective_space(2, p);
  const SegreProduct L({l, l}, sp.max_points);
  for (const auto& h : enumerate_hyperplanes(L.carrier())) {
    const auto corr = correlation_of(L, h);
    c(corr.compatible && corr.reconstructs, "correlation does not describe an enumerated hyperplane", h);
  }
  return c.finish(pg(3, p) + "^2 form hyperplanes and every hyperplane of " + pg(2, p) + "^2",
                  std::to_string(c.count()) + " hyperplanes described by correlations");
}

inline SuiteOutcome spiky_product_not_apls(const SuiteParams& sp) {
  Check c;
  int spiky = 0;
  const auto l2 = projective_space(2, 2), l3 = projective_space(2, 3);
  const std::vector<std::pair<std::string, SegreProduct>> cases{{"PG(1,2)^2", SegreProduct({l2, l2})},
                                                                {"PG(1,3)^2", SegreProduct({l3, l3})}};
  for (const auto& [name, P] : cases)
    for (const auto& h : enumerate_hyperplanes(P.carrier())) {
      if (!is_spiky(P.carrier(), h)) continue;
      ++spiky;
      c(!check_affine_axiom(affinize(P, h).carrier, AffineAxiom::AffinePls),
        "complement of a spiky hyperplane is affine in " + name, h);
    }
  const auto f = projective_space(3, 2);
  const SegreProduct F({f, f}, sp.max_points);
  for (const auto& xi : projective_matrices(3, 3, 2)) {
    if (rank(xi, PrimeField(2)) < 3) continue;
    const auto h = std::get<HyperplaneHandle>(hyperplane_from_form(F, MultiForm::bilinear(xi, 2))).points;
    ++spiky;
    c(!check_affine_axiom(affinize(F, h).carrier, AffineAxiom::AffinePls), "complement is affine in PG(2,2)^2",
      matrix_json(xi));
  }
  return c.finish("spiky hyperplanes of PG(1,2)^2, PG(1,3)^2 and non-degenerate forms on PG(2,2)^2",
                  std::to_string(spiky) + " complements, none affine");
}

// Enumerated hyperplanes of small products, and form hyperplanes of PG(2,2)^2.
inline std::vector<std::pair<std::string, std::pair<SegreProduct, std::vector<PointSet>>>> product_hyperplanes(int max_points) {
  std::vector<std::pair<std::string, std::pair<SegreProduct, std::vector<PointSet>>>> out;
  const auto l2 = projective_space(2, 2), l3 = projective_space(2, 3), f = projective_space(3, 2);
  for (auto [name, P] : {std::pair{std::string("PG(1,2)^2"), SegreProduct({l2, l2})},
                         std::pair{std::string("PG(1,3)^2"), SegreProduct({l3, l3})},
                         std::pair{std::string("PG(1,2)^3"), SegreProduct({l2, l2, l2})}}) {
    auto hs = enumerate_hyperplanes(P.carrier());
    out.push_back({name, {std::move(P), std::move(hs)}});
  }
  SegreProduct F({f, f}, max_points);
  std::vector<PointSet> hs;
  for (const auto& xi : projective_matrices(3, 3, 2))
    hs.push_back(std::get<HyperplaneHandle>(hyperplane_from_form(F, MultiForm::bilinear(xi, 2))).points);
  out.push_back({"PG(2,2)^2", {std::move(F), std::move(hs)}});
  return out;
}

inline SuiteOutcome slice_flappy_spiky(const SuiteParams& sp) {
  Check c;
  int total = 0;
  for (const auto& [name, data] : product_hyperplanes(sp.max_points)) {
    const auto& [P, hs] = data;
    for (const auto& h : hs) {
      ++total;
      const auto in_h = membership(P.num_points(), h);
      bool slices_flappy = true, every_point_has_spiky_slice = true;
      for (int a = 0; a < P.num_points(); ++a) {
        bool some_spiky = false;
        for (int i = 0; i < P.num_factors(); ++i) {
          const auto x = slice(P, in_h, a, i);
          slices_flappy = slices_flappy && is_flappy_hyperplane(P.factor(i), x);
          some_spiky = some_spiky || is_spiky_hyperplane(P.factor(i), x);
        }
        every_point_has_spiky_slice = every_point_has_spiky_slice && some_spiky;
      }
      if (is_nondegenerate(P, h))
        c(is_flappy(P.carrier(), h) == slices_flappy, "flappy iff all slices flappy fails in " + name, h);
      c(is_spiky(P.carrier(), h) == every_point_has_spiky_slice, "spiky iff some slice spiky at every point fails in " + name,
        h);
    }
  }
  return c.finish("enumerated hyperplanes of PG(1,2)^2, PG(1,3)^2, PG(1,2)^3; 511 form hyperplanes of PG(2,2)^2",
                  std::to_string(total) + " hyperplanes");
}

inline SuiteOutcome slice_flappy_linear(const SuiteParams& sp) {
  Check c;
  int total = 0;
  for (const auto& [name, data] : product_hyperplanes(sp.max_points)) {
    const auto& [P, hs] = data;
    for (const auto& h : hs) {
      ++total;
      const auto in_h = membership(P.num_points(), h);
      bool every_point_has_hyperplane_slice = true;
      for (int a = 0; a < P.num_points(); ++a) {
        bool some = false;
        for (int i = 0; i < P.num_factors(); ++i) some = some || is_hyperplane(P.factor(i), slice(P, in_h, a, i));
        every_point_has_hyperplane_slice = every_point_has_hyperplane_slice && some;
      }
      c(is_flappy(P.carrier(), h) == is_nondegenerate(P, h), "flappy iff non-degenerate fails in " + name, h);
      c(is_spiky(P.carrier(), h) == every_point_has_hyperplane_slice,
        "spiky iff some slice is a hyperplane at every point fails in " + name, h);
    }
  }
  return c.finish("products of linear spaces: PG(1,2)^2, PG(1,3)^2, PG(1,2)^3, PG(2,2)^2",
                  std::to_string(total) + " hyperplanes");
}

inline SuiteOutcome redefine_product(const SuiteParams& sp) {
  const int p = field(sp, 2);
  Check c;
  const auto g = projective_space(3, p);
  const SegreProduct P({g, g}, sp.max_points);
  const auto h = std::get<HyperplaneHandle>(hyperplane_from_form(P, MultiForm::bilinear(plane_form(p), p))).points;
  c(is_nondegenerate(P, h) && is_flappy(P.carrier(), h), "H is not a non-degenerate flappy hyperplane");
  const auto a = affinize(P, h);
  const auto rec = recover_directions(a);
  // rebuild M: complement points, then one point per class
  const auto& s = a.structure();
  RawIncidence raw;
  raw.num_points = s.num_points() + rec.num_classes;
  for (int l = 0; l < s.num_lines(); ++l) {
    Line x = s.line(l);
    x.push_back(s.num_points() + a.carrier.class_of(l));
    raw.lines.push_back(std::move(x));
  }
  for (const auto& l : rec.lines) {
    Line x;
    for (int cls : l) x.push_back(s.num_points() + cls);
    raw.lines.push_back(std::move(x));
  }
  const auto rebuilt = validate_pls(std::move(raw));
  c(isomorphic(rebuilt, P.carrier()).has_value(), "structure rebuilt from the complement is not M");
  return c.finish(plane_form_instance(p), "M rebuilt from " + std::to_string(s.num_points()) + " points and " +
                                              std::to_string(rec.num_classes) + " parallel classes");
}

inline SuiteOutcome degenerate_not_flappy(const SuiteParams& sp) {
  Check c;
  int degenerate = 0;
  for (const auto& [name, data] : product_hyperplanes(sp.max_points)) {
    const auto& [P, hs] = data;
    for (const auto& h : hs) {
      if (is_nondegenerate(P, h)) continue;
      ++degenerate;
      c(!is_flappy(P.carrier(), h), "degenerate flappy hyperplane in " + name, h);
    }
  }
  return c.finish("enumerated and form hyperplanes of four small products",
                  std::to_string(degenerate) + " degenerate hyperplanes, none flappy");
}

inline SuiteOutcome degenerate_product(const SuiteParams& sp) {
  const int p = field(sp, 2);
  Check c;
  const auto f = projective_space(3, p);
  const SegreProduct P({f, f}, sp.max_points);
  std::size_t size = 0;
  for (int l1 = 0; l1 < f.num_lines(); ++l1)
    for (int l2 = 0; l2 < f.num_lines(); ++l2) {
      const auto h = degenerate_product_hyperplane(P, {f.line(l1), f.line(l2)}).points;
      const Json w{{"factor_hyperplanes", {f.line(l1), f.line(l2)}}};
      size = h.size();
      c(is_hyperplane(P.carrier(), h), "not a hyperplane", w);
      c(!is_nondegenerate(P, h), "not degenerate", w);
      c(!is_spiky(P.carrier(), h), "spiky", w);
    }
  return c.finish(pg(3, p) + "(x)" + pg(3, p) + ", every pair of factor lines", "|H| = " + std::to_string(size));
}

inline SuiteOutcome degenerate_isomorphism(const SuiteParams& sp) {
  const int p = field(sp, 2);
  Check c;
  const auto f = projective_space(3, p);
  const SegreProduct P({f, f}, sp.max_points);
  const auto h = degenerate_product_hyperplane(P, {f.line(0), f.line(0)});
  const auto a = affinize(P, h.points);
  const auto af = affinize(f, f.line(0));
  const SegreProduct Q({af.structure(), af.structure()}, sp.max_points);
  c(isomorphic(a.structure(), Q.carrier()).has_value(), "complement is not the product of factor complements");
  const auto pw = product_parallelism(Q, {af.carrier, af.carrier}, ProductParallel::Pointwise);
  c(isomorphic(a.carrier, pw).has_value(), "parallelism is not the pointwise product parallelism");
  return c.finish(pg(3, p) + "(x)" + pg(3, p) + " minus L x S u S x L", "|H| = " + std::to_string(h.points.size()) +
                                                                                ", isomorphic with and without parallelism");
}

// Strong subspaces of the complement, three ways.
inline SuiteOutcome strong_in_product_complement(const SuiteParams& sp, bool via_slices) {
  const int p = field(sp, 3);
  require_long_lines(p);
  Check c;
  const auto fc = plane_form_complement(p, sp.max_points);
  const auto& P = fc.P;
  const auto& a = fc.a;
  const auto got_list = strong_subspaces(a.structure(), false);
  const std::set<PointSet> got(got_list.begin(), got_list.end());
  std::set<PointSet> expected;
  if (!via_slices) {
    for (const auto& y : strong_subspaces(P.carrier(), false)) {
      PointSet x;
      for (int q : y)
        if (a.from_ambient[q] >= 0) x.push_back(a.from_ambient[q]);
      if (!x.empty()) expected.insert(normalized(std::move(x)));
    }
  } else {
    for (int i = 0; i < P.num_factors(); ++i)
      for (int anchor : P.slice_anchors(i)) {
        const auto r = slice_complement(P, fc.h, anchor, i);
        for (const auto& x : strong_subspaces(r.structure(), false)) {
          PointSet y;
          for (int q : x) y.push_back(a.from_ambient[P.subst(anchor, i, r.to_ambient[q])]);
          expected.insert(normalized(std::move(y)));
        }
      }
  }
  for (const auto& x : got) c(expected.count(x) == 1, "strong subspace of the complement has no expected form", x);
  for (const auto& x : expected) c(got.count(x) == 1, "expected set is not a strong subspace of the complement", x);
  return c.finish(plane_form_instance(p), std::to_string(got.size()) + " strong subspaces matched");
}

inline SuiteOutcome strong_affine(const SuiteParams& sp) {
  const int p = field(sp, 3);
  require_long_lines(p);
  Check c;
  const auto fc = plane_form_complement(p, sp.max_points);
  c(check_affine_axiom(fc.a.carrier, AffineAxiom::Tamaschke), "complement fails Tamaschke");
  c(check_affine_axiom(fc.a.carrier, AffineAxiom::Parallelogram), "complement fails parallelogram completion");
  int n = 0;
  for (const auto& x : strong_subspaces(fc.a.structure(), true)) {
    ++n;
    c(satisfies_all_affine_axioms(induced_parallel(fc.a.carrier, x)), "maximal strong subspace is not affine", x);
  }
  return c.finish(plane_form_instance(p), std::to_string(n) + " maximal strong subspaces, all affine");
}

inline SuiteOutcome define_parallelism(const SuiteParams& sp) {
  const int p = field(sp, 3);
  if (p < 3) fail(ErrorKind::HypothesisFailed, "affine lines have 2 points");
  Check c;
  const auto ag = affine_space(3, p);
  const SegreProduct P({ag.base(), ag.base()}, sp.max_points);
  const auto par = product_parallelism(P, {ag, ag}, ProductParallel::Any);
  const auto pw = product_parallelism(P, {ag, ag}, ProductParallel::Pointwise);
  const auto rel = parallel_relations(P.carrier());
  const int n = P.carrier().num_lines();
  for (int l1 = 0; l1 < n; ++l1)
    for (int l2 = 0; l2 < n; ++l2) {
      const Json w{{"lines", {P.carrier().line(l1), P.carrier().line(l2)}}};
      c(pw.parallel(l1, l2) == (l1 == l2 || rel.veblen(l1, l2)), "(a) pointwise parallelism differs from Veblen", w);
      if (rel.ast(l1, l2)) c(par.parallel(l1, l2), "(b) quadrangle-parallel lines are not parallel", w);
      bool composed = false;
      for (int l3 = 0; l3 < n && !composed; ++l3) composed = pw.parallel(l1, l3) && (l3 == l2 || rel.ast(l3, l2));
      c(composed == par.parallel(l1, l2), "(c) composition differs from the parallelism", w);
    }
  return c.finish("AG(2," + std::to_string(p) + ")(x)AG(2," + std::to_string(p) + ")",
                  std::to_string(n) + " lines, all ordered pairs");
}

inline SuiteOutcome quadrangle_net(const SuiteParams& sp) {
  const int p = field(sp, 2);
  Check c;
  const auto g = projective_space(3, p);
  const SegreProduct P({g, g}, sp.max_points);
  const auto& s = P.carrier();
  std::size_t quads = 0;
  for (const auto& q : quadrangles(s)) {
    ++quads;
    std::vector<int> first, second;
    for (int l = 0; l < s.num_lines(); ++l) {
      const bool m0 = detail::meet_or_equal(s, l, q.sides[0]), m2 = detail::meet_or_equal(s, l, q.sides[2]);
      const bool m1 = detail::meet_or_equal(s, l, q.sides[1]), m3 = detail::meet_or_equal(s, l, q.sides[3]);
      if (m0 && m2) first.push_back(l);
      if (m3 && m1) second.push_back(l);
    }
    for (int l : first)
      for (int m : second)
        c(detail::meet_or_equal(s, l, m), "transversals of opposite sides do not meet",
          Json{{"quadrangle", q.points}, {"L", s.line(l)}, {"M", s.line(m)}});
  }
  return c.finish(pg(3, p) + "(x)" + pg(3, p), std::to_string(quads) + " quadrangles without diagonals");
}

inline std::optional<std::pair<int, int>> first_missed_cross_pair(const FormComplement& fc,
                                                                  const NaturalParallelDecider& d, int& missed) {
  std::optional<std::pair<int, int>> first;
  missed = 0;
  const auto& s = fc.a.structure();
  for (int l1 = 0; l1 < s.num_lines(); ++l1)
    for (int l2 = l1 + 1; l2 < s.num_lines(); ++l2) {
      if (d.same_component(l1, l2) || d.relations().quadr(l1, l2) || !fc.a.carrier.parallel(l1, l2)) continue;
      ++missed;
      if (!first) first = std::make_pair(l1, l2);
    }
  return first;
}

inline Json line_pair_json(const FormComplement& fc, int l1, int l2) {
  const auto& s = fc.a.structure();
  return Json{{"lines", {fc.a.to_ambient_set(s.line(l1)), fc.a.to_ambient_set(s.line(l2))}},
              {"common_direction", fc.a.direction[l1]}};
}

inline SuiteOutcome quadrangle_parallel(const SuiteParams& sp) {
  const int p = field(sp, 3);
  require_long_lines(p);
  Check c;
  const auto fc = plane_form_complement(p, sp.max_points);
  const NaturalParallelDecider d(fc.P, fc.a);
  int missed = 0;
  const auto first = first_missed_cross_pair(fc, d, missed);
  if (first) c(false, std::to_string(missed) + " parallel pairs from different slices are not quadrangle-parallel",
               line_pair_json(fc, first->first, first->second));
  return c.finish(plane_form_instance(p), "lines through a common point of H in different slices");
}

inline SuiteOutcome parallelism_cases(const SuiteParams& sp) {
  const int p = field(sp, 3);
  require_long_lines(p);
  Check c;
  const auto fc = plane_form_complement(p, sp.max_points);
  const auto& P = fc.P;
  const auto& s = fc.a.structure();
  const auto rel = parallel_relations(s);
  int missed = 0;
  std::optional<std::pair<int, int>> first;
  for (int l1 = 0; l1 < s.num_lines(); ++l1)
    for (int l2 = l1; l2 < s.num_lines(); ++l2) {
      const auto& o1 = P.line_origin(fc.a.line_to_ambient[l1]);
      const auto& o2 = P.line_origin(fc.a.line_to_ambient[l2]);
      bool decided;
      if (o1.slot == o2.slot && P.subst(o1.anchor, o1.slot, 0) == P.subst(o2.anchor, o2.slot, 0)) {
        const auto r = slice_complement(P, fc.h, o1.anchor, o1.slot);
        const int k1 = r.structure().line_index(normalized([&] {
          PointSet x;
          for (int q : P.factor(o1.slot).line(o1.factor_line)) x.push_back(r.from_ambient[q]);
          std::erase(x, -1);
          return x;
        }()));
        const int k2 = r.structure().line_index(normalized([&] {
          PointSet x;
          for (int q : P.factor(o2.slot).line(o2.factor_line)) x.push_back(r.from_ambient[q]);
          std::erase(x, -1);
          return x;
        }()));
        decided = r.carrier.parallel(k1, k2);
        c(decided == fc.a.carrier.parallel(l1, l2), "same-slice case disagrees", line_pair_json(fc, l1, l2));
      } else {
        decided = rel.quadr(l1, l2);
        if (decided != fc.a.carrier.parallel(l1, l2)) {
          ++missed;
          if (!first) first = std::make_pair(l1, l2);
        }
      }
    }
  if (first) c(false, std::to_string(missed) + " cross-slice pairs decided wrongly by the quadrangle relation",
               line_pair_json(fc, first->first, first->second));
  return c.finish(plane_form_instance(p), "both cases against the direction map, all line pairs");
}

inline SuiteOutcome chain_components(const SuiteParams& sp) {
  const int p = field(sp, 3);
  require_long_lines(p);
  Check c;
  const auto fc = plane_form_complement(p, sp.max_points);
  detail::require_product_hypotheses(fc.P, fc.h, true);
  const auto comp = strong_chain_components(fc.a.structure());
  const int n = fc.a.structure().num_lines();
  for (int l1 = 0; l1 < n; ++l1)
    for (int l2 = l1 + 1; l2 < n; ++l2) {
      const auto& o1 = fc.P.line_origin(fc.a.line_to_ambient[l1]);
      const auto& o2 = fc.P.line_origin(fc.a.line_to_ambient[l2]);
      const bool same_slice =
          o1.slot == o2.slot && fc.P.subst(o1.anchor, o1.slot, 0) == fc.P.subst(o2.anchor, o2.slot, 0);
      c((comp[l1] == comp[l2]) == same_slice, "chain components differ from slices", line_pair_json(fc, l1, l2));
    }
  return c.finish(plane_form_instance(p), "chains of strong subspaces sharing lines stay inside slices");
}

inline SuiteOutcome parallel_from_incidence(const SuiteParams& sp) {
  const int p = field(sp, 3);
  require_long_lines(p);
  Check c;
  const auto fc = plane_form_complement(p, sp.max_points);
  const NaturalParallelDecider d(fc.P, fc.a);
  const auto& s = fc.a.structure();
  std::size_t pairs = 0, wrong = 0;
  std::optional<std::pair<int, int>> first;
  for (int l1 = 0; l1 < s.num_lines(); ++l1)
    for (int l2 = l1; l2 < s.num_lines(); ++l2) {
      ++pairs;
      if (d(l1, l2) != fc.a.carrier.parallel(l1, l2)) {
        ++wrong;
        if (!first) first = std::make_pair(l1, l2);
      }
    }
  if (first) c(false, std::to_string(wrong) + " of " + std::to_string(pairs) + " line pairs decided wrongly",
               line_pair_json(fc, first->first, first->second));
  return c.finish(plane_form_instance(p), std::to_string(pairs) + " line pairs against the direction map");
}

inline SuiteOutcome product_automorphisms(const SuiteParams& sp) {
  const int p = field(sp, 2);
  Check c;
  const auto g = projective_space(3, p);
  const SegreProduct P({g, g}, sp.max_points);
  const auto h = std::get<HyperplaneHandle>(hyperplane_from_form(P, MultiForm::bilinear(plane_form(p), p))).points;
  c(is_flappy(P.carrier(), h), "H is not flappy");
  const auto a = affinize(P, h);
  const auto stab = automorphisms(P.carrier(), colouring_of(P.num_points(), h));
  const auto aut = automorphisms(a.structure());
  c(stab.order == aut.order, "|Aut(M - H)| differs from |Stab_H(Aut M)|",
    Json{{"complement", aut.order}, {"stabiliser", stab.order}});
  for (const auto& f : aut.generators) {
    // the ambient map: points of H follow the parallel classes, which the complement determines
    Permutation big(P.num_points(), -1);
    for (int x = 0; x < a.structure().num_points(); ++x) big[a.to_ambient[x]] = a.to_ambient[f[x]];
    bool ok = true;
    for (int l = 0; l < a.structure().num_lines(); ++l) {
      Line img;
      for (int x : a.structure().line(l)) img.push_back(f[x]);
      const int target = a.direction[a.structure().line_index(normalized(std::move(img)))];
      int& slot = big[a.direction[l]];
      ok = ok && (slot < 0 || slot == target);
      slot = target;
    }
    ok = ok && is_automorphism(P.carrier(), big);
    // F permutes or fixes the two slots
    if (ok)
      for (int x = 0; x < P.num_points() && ok; ++x)
        for (int i = 0; i < 2; ++i) {
          const int y = P.subst(x, i, (P.coordinate(x, i) + 1) % g.num_points());
          const auto bx = P.decode(big[x]), by = P.decode(big[y]);
          int changed = 0;
          for (int j = 0; j < 2; ++j) changed += bx[j] != by[j];
          ok = ok && changed == 1;
        }
    c(ok, "automorphism of the complement is not induced by a product map");
  }
  return c.finish(plane_form_instance(p), "|Aut| = " + std::to_string(aut.order));
}

inline SuiteOutcome covering_suite(const SuiteParams& sp) {
  const int p = field(sp, 3);
  require_long_lines(p);
  Check c;
  const auto fc = plane_form_complement(p, sp.max_points);
  const auto cov = covering(fc.P, fc.a);
  const auto gaps = covering_gaps(fc.a, cov);
  c(gaps.empty(), "complement points outside the covering", gaps);
  for (const auto& m : cov)
    c(satisfies_all_affine_axioms(induced_parallel(fc.a.carrier, m.points)), "covering member is not affine",
      Json{{"slot", m.slot}, {"anchor", m.anchor}, {"points", m.points}});
  return c.finish(plane_form_instance(p), std::to_string(cov.size()) + " members, no gaps");
}

// ---------------------------------------------------------------------------
// Forms

inline bool char2(int p) { return p == 2; }

inline SuiteOutcome form_locus_dichotomy(const SuiteParams& sp) {
  const int p = field(sp, 3);
  Check c;
  int hyper = 0, whole = 0;
  const auto l = projective_space(2, p);
  const SegreProduct L({l, l}, sp.max_points);
  for (const auto& xi : projective_matrices(2, 2, p)) {
    const auto r = hyperplane_from_form(L, MultiForm::bilinear(xi, p));
    if (auto* h = std::get_if<HyperplaneHandle>(&r)) {
      ++hyper;
      c(is_hyperplane(L.carrier(), h->points), "H(mu) is neither a hyperplane nor everything", matrix_json(xi));
    } else {
      ++whole;
    }
  }
  const auto g = grassmann_space(4, 2, p);
  for (const auto& mu : projective_alternating2(4, p)) {
    const auto r = hyperplane_from_form(g, mu);
    if (auto* h = std::get_if<HyperplaneHandle>(&r)) {
      ++hyper;
      c(is_hyperplane(g, h->points), "H(mu) in the Grassmann space is not a hyperplane");
    } else {
      ++whole;
    }
  }
  const auto g1 = projective_space(2, p);
  const SegreProduct M({g1, g}, sp.max_points);
  std::mt19937_64 rng(sp.seed);
  for (int t = 0; t < 20; ++t) {
    MultiForm mu(p, {2, 4}, {1, 2});
    for (std::uint32_t a = 0; a < 2; ++a)
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) mu.set({1u << a, (1u << i) | (1u << j)}, static_cast<std::int64_t>(rng() % p));
    const auto r = hyperplane_from_form(M, mu);
    if (auto* h = std::get_if<HyperplaneHandle>(&r)) {
      ++hyper;
      c(is_hyperplane(M.carrier(), h->points), "H(mu) in PG(1,p)(x)grassmann(4,2,p) is not a hyperplane");
    } else {
      ++whole;
    }
  }
  return c.finish(pg(2, p) + "^2 all forms; grassmann(4,2," + std::to_string(p) + ") all alternating forms; 20 random on " +
                      pg(2, p) + "(x)grassmann(4,2," + std::to_string(p) + ")",
                  std::to_string(hyper) + " hyperplanes, " + std::to_string(whole) + " whole spaces", char2(p));
}

inline SuiteOutcome nonzero_segments(const SuiteParams& sp) {
  const int p = field(sp, 3);
  Check c;
  const auto g1 = projective_space(2, p);
  const auto g = grassmann_space(4, 2, p);
  const SegreProduct M({g1, g}, sp.max_points);
  std::mt19937_64 rng(sp.seed);
  int some = 0, all = 0;
  for (int t = 0; t < 30; ++t) {
    MultiForm mu(p, {2, 4}, {1, 2});
    const int density = 1 + t % 3;
    for (std::uint32_t a = 0; a < 2; ++a)
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
          if (static_cast<int>(rng() % 3) < density) mu.set({1u << a, (1u << i) | (1u << j)}, static_cast<std::int64_t>(rng() % p));
    const bool z0 = segment_nonzero(mu, 0), z1 = segment_nonzero(mu, 1);
    if (!z0 && !z1) continue;
    ++some;
    const auto r = hyperplane_from_form(M, mu);
    const auto* h = std::get_if<HyperplaneHandle>(&r);
    c(h && is_hyperplane(M.carrier(), h->points), "non-zero on a segment but H(mu) is not a hyperplane");
    if (h && z0 && z1) {
      ++all;
      c(is_nondegenerate(M, h->points), "non-zero on all segments but H(mu) is degenerate");
    }
  }
  const auto l = projective_space(3, p);
  const SegreProduct L({l, l}, sp.max_points);
  int n = 0;
  for (const auto& xi : projective_matrices(3, 3, p)) {
    if (p > 2 && n++ % 41 != 0) continue;
    const auto mu = MultiForm::bilinear(xi, p);
    const auto h = std::get<HyperplaneHandle>(hyperplane_from_form(L, mu)).points;
    ++some;
    if (segment_nonzero(mu, 0) && segment_nonzero(mu, 1)) {
      ++all;
      c(is_nondegenerate(L, h), "non-zero on both segments but degenerate", matrix_json(xi));
    }
  }
  return c.finish("30 random forms on " + pg(2, p) + "(x)grassmann(4,2," + std::to_string(p) + ") (seed " +
                      std::to_string(sp.seed) + "); bilinear forms on " + pg(3, p) + "^2",
                  std::to_string(some) + " forms non-zero somewhere, " + std::to_string(all) + " on all segments",
                  char2(p));
}

// Tr(xyz) on GF(p^2) viewed as GF(p)^2: no zero divisors, so every
// restriction to one segment is a non-zero functional.
inline MultiForm trace_form(int p) {
  const PrimeField f(p);
  int c0 = 1, c1 = 1;  // t^2 = c0 + c1 t
  if (p != 2) {
    c1 = 0;
    for (c0 = 2; c0 < p; ++c0) {
      bool square = false;
      for (int x = 1; x < p; ++x) square = square || f.mul(x, x) == c0;
      if (!square) break;
    }
  }
  using El = std::pair<Elem, Elem>;
  const auto mul = [&](El a, El b) {
    const Elem bb = f.mul(a.second, b.second);
    return El{f.add(f.mul(a.first, b.first), f.mul(bb, c0)),
              f.add(f.add(f.mul(a.first, b.second), f.mul(a.second, b.first)), f.mul(bb, c1))};
  };
  const auto trace = [&](El a) { return f.add(f.mul(2 % p, a.first), f.mul(a.second, c1)); };
  const El basis[2] = {{1, 0}, {0, 1}};
  MultiForm mu(p, {2, 2, 2}, {1, 1, 1});
  for (int t = 0; t < 8; ++t)
    mu.set({1u << (t & 1), 1u << (t >> 1 & 1), 1u << (t >> 2 & 1)},
           trace(mul(mul(basis[t & 1], basis[t >> 1 & 1]), basis[t >> 2 & 1])));
  return mu;
}

inline SuiteOutcome nondegenerate_exists(const SuiteParams& sp) {
  const int p = field(sp, 3);
  Check c;
  const auto l = projective_space(2, p);
  const SegreProduct M({l, l, l}, sp.max_points);
  const auto mu = trace_form(p);
  for (int i = 0; i < 3; ++i) c(segment_nonzero(mu, i), "trace form is zero on segment " + std::to_string(i));
  const auto r = hyperplane_from_form(M, mu);
  const auto* h = std::get_if<HyperplaneHandle>(&r);
  c(h && is_hyperplane(M.carrier(), h->points) && is_nondegenerate(M, h->points), "no non-degenerate hyperplane");
  return c.finish(pg(2, p) + "^3, mu(x,y,z) = Tr(xyz) over GF(" + std::to_string(p) + "^2)",
                  h ? "|H| = " + std::to_string(h->points.size()) : "", char2(p));
}

// x0 A + x1 B on PG(1,p) x grassmann(4,2,p) with Pf(x0 A + x1 B) anisotropic,
// so every restriction to the Grassmann segment is a symplectic form.
inline MultiForm line_grassmann_form(int p) {
  const PrimeField f(p);
  // Pfaffian of (a01, a02, a03, a12, a13, a23)
  const auto pf = [&](const std::array<Elem, 6>& a) {
    return f.add(f.sub(f.mul(a[0], a[5]), f.mul(a[1], a[4])), f.mul(a[2], a[3]));
  };
  const std::array<Elem, 6> a{1, 0, 0, 0, 0, 1};
  const std::uint32_t masks[6] = {0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100};
  for (const auto& v : projective_points(6, p)) {
    std::array<Elem, 6> b;
    std::copy(v.begin(), v.end(), b.begin());
    bool anisotropic = true;
    for (int x = 0; x <= p && anisotropic; ++x) {
      // (x0, x1) = (1, 0) and (x, 1)
      std::array<Elem, 6> m;
      for (int t = 0; t < 6; ++t) m[t] = x == p ? a[t] : f.add(f.mul(x, a[t]), b[t]);
      anisotropic = pf(m) != 0;
    }
    if (!anisotropic) continue;
    MultiForm mu(p, {2, 4}, {1, 2});
    for (int t = 0; t < 6; ++t) {
      if (a[t]) mu.set({1u, masks[t]}, a[t]);
      if (b[t]) mu.set({2u, masks[t]}, b[t]);
    }
    return mu;
  }
  fail(ErrorKind::HypothesisFailed, "no anisotropic pencil of alternating forms");
}

inline SuiteOutcome restricted_forms_flappy(const SuiteParams& sp) {
  const int p = field(sp, 3);
  Check c;
  const auto mu = line_grassmann_form(p);
  c(segment_nondegenerate(mu, 1), "form is degenerate on the Grassmann segment");
  const auto l = projective_space(2, p);
  const auto g = grassmann_space(4, 2, p);
  int checked = 0;
  for (int a = 0; a < l.num_points(); ++a) {
    const auto eta = segment_restriction(mu, {l.label(a).basis(), Matrix(2, 4)}, 1);
    ++checked;
    c(!eta.is_zero() && is_flappy_hyperplane(g, form_zero_locus(g, eta)),
      "restriction to the Grassmann segment is not a flappy hyperplane", basis_json(l.label(a)));
  }
  return c.finish(pg(2, p) + "(x)grassmann(4,2," + std::to_string(p) + "), pencil with anisotropic Pfaffian",
                  std::to_string(checked) + " restrictions, all flappy hyperplanes", char2(p));
}

inline SuiteOutcome nondegenerate_form_flappy(const SuiteParams& sp) {
  const int p = field(sp, 3);
  Check c;
  const auto l = projective_space(2, p);
  const auto mu = trace_form(p);
  for (int i = 0; i < 3; ++i) c(segment_nondegenerate(mu, i), "trace form degenerate on segment " + std::to_string(i));
  const SegreProduct M({l, l, l}, sp.max_points);
  const auto r = hyperplane_from_form(M, mu);
  const auto* h = std::get_if<HyperplaneHandle>(&r);
  c(h != nullptr, "H(mu) is the whole space");
  if (h) c(is_flappy_hyperplane(M.carrier(), h->points), "H(mu) is not a flappy hyperplane");
  return c.finish(pg(2, p) + "^3, mu(x,y,z) = Tr(xyz) over GF(" + std::to_string(p) + "^2)", "H(mu) flappy",
                  char2(p));
}

inline SuiteOutcome gkz_iff_spiky(const SuiteParams& sp) {
  Check c;
  std::vector<int> primes = sp.p ? std::vector<int>{field(sp, 2)} : std::vector<int>{2, 3};
  std::string counts;
  for (int p : primes) {
    const auto l = projective_space(2, p);
    const SegreProduct L({l, l}, sp.max_points);
    int n2 = 0, n3 = 0;
    for (const auto& xi : projective_matrices(2, 2, p)) {
      ++n2;
      const auto mu = MultiForm::bilinear(xi, p);
      const auto h = std::get<HyperplaneHandle>(hyperplane_from_form(L, mu)).points;
      c(is_gkz_nondegenerate(mu) == is_spiky(L.carrier(), h), "GKZ non-degeneracy differs from spikiness",
        Json{{"p", p}, {"form", matrix_json(xi)}});
    }
    const SegreProduct L3({l, l, l}, sp.max_points);
    for (const auto& mu : projective_trilinear(p)) {
      ++n3;
      const auto r = hyperplane_from_form(L3, mu);
      const auto* h = std::get_if<HyperplaneHandle>(&r);
      c(h && is_gkz_nondegenerate(mu) == is_spiky(L3.carrier(), h->points), "GKZ differs from spikiness (3 factors)",
        Json{{"p", p}});
    }
    counts += (counts.empty() ? "" : ", ") + std::string("p=") + std::to_string(p) + ": " + std::to_string(n2) +
              " bilinear, " + std::to_string(n3) + " trilinear";
  }
  const bool has2 = std::find(primes.begin(), primes.end(), 2) != primes.end();
  return c.finish("products of two and three projective lines, all forms up to scalars", counts, has2);
}

inline SuiteOutcome grassmann_hyperplanes(const SuiteParams& sp) {
  const int p = field(sp, 2);
  Check c;
  const auto g = grassmann_space(4, 2, p);
  if (g.num_points() > kHyperplaneEnumerationCap)
    fail(ErrorKind::HypothesisFailed, "grassmann(4,2," + std::to_string(p) + ") exceeds the enumeration cap");
  const auto hs = enumerate_hyperplanes(g);
  std::set<PointSet> from_forms;
  for (const auto& mu : projective_alternating2(4, p)) {
    const auto r = hyperplane_from_form(g, mu);
    if (auto* h = std::get_if<HyperplaneHandle>(&r)) from_forms.insert(h->points);
  }
  const std::set<PointSet> all(hs.begin(), hs.end());
  for (const auto& h : all) c(from_forms.count(h) == 1, "hyperplane not of the form H(mu)", h);
  for (const auto& h : from_forms) c(all.count(h) == 1, "H(mu) not among the enumerated hyperplanes", h);
  return c.finish("grassmann(4,2," + std::to_string(p) + ")",
                  std::to_string(all.size()) + " hyperplanes, " + std::to_string(from_forms.size()) + " form loci",
                  char2(p));
}

inline SuiteOutcome polar_hyperplanes(const SuiteParams& sp) {
  const int p = field(sp, 3);
  Check c;
  const auto xi = BilinearForm::symplectic(4, p);
  const auto q = polar_space(xi);
  const auto hs = enumerate_hyperplanes(q);
  std::set<PointSet> from_forms;
  for (const auto& v : projective_points(4, p)) {
    PointSet h;
    for (int a = 0; a < q.num_points(); ++a) {
      const auto row = q.label(a).basis().row(0);
      long dot = 0;
      for (int t = 0; t < 4; ++t) dot += static_cast<long>(v[t]) * row[t];
      if (dot % p == 0) h.push_back(a);
    }
    if (static_cast<int>(h.size()) < q.num_points()) from_forms.insert(h);
  }
  const std::set<PointSet> all(hs.begin(), hs.end());
  for (const auto& h : all) c(from_forms.count(h) == 1, "hyperplane of the polar space not cut by a linear form", h);
  for (const auto& h : from_forms) c(all.count(h) == 1, "section by a linear form is not a hyperplane", h);
  return c.finish("W(3," + std::to_string(p) + ")",
                  std::to_string(all.size()) + " hyperplanes, " + std::to_string(from_forms.size()) + " linear sections",
                  char2(p));
}

inline MultiForm identity_form(int n, int p) { return MultiForm::bilinear(Matrix::identity(n), p); }

inline SuiteOutcome polar_product(const SuiteParams& sp) {
  const int p = field(sp, 3);
  Check c;
  const auto q = polar_space(BilinearForm::symplectic(4, p));
  const SegreProduct P({q, q}, sp.max_points);
  const auto r = polar_product_hyperplane(P, identity_form(4, p));
  if (auto* f = std::get_if<HypothesisFailure>(&r)) fail(ErrorKind::HypothesisFailed, f->clause);
  const auto& h = std::get<HyperplaneHandle>(r).points;
  c(is_hyperplane(P.carrier(), h), "H(mu, xi) is not a hyperplane");
  c(is_nondegenerate(P, h), "H(mu, xi) is degenerate");
  return c.finish("W(3," + std::to_string(p) + ")(x)W(3," + std::to_string(p) + "), mu = identity",
                  "|H| = " + std::to_string(h.size()), char2(p));
}

inline SuiteOutcome symplectic_polar_product_flappy(const SuiteParams& sp) {
  const int p = field(sp, 3);
  Check c;
  const auto q = polar_space(BilinearForm::symplectic(4, p));
  const SegreProduct P({q, q}, sp.max_points);
  const auto mu = identity_form(4, p);
  c(segment_nonzero(mu, 0) && segment_nonzero(mu, 1), "form is zero on a segment");
  const auto r = polar_product_hyperplane(P, mu);
  if (auto* f = std::get_if<HypothesisFailure>(&r)) fail(ErrorKind::HypothesisFailed, f->clause);
  const auto& h = std::get<HyperplaneHandle>(r).points;
  c(is_hyperplane(P.carrier(), h), "H(mu, xi) is not a hyperplane");
  const auto in_h = membership(P.num_points(), h);
  // a slice is a plane u-perp of the polar space; its pole has no neighbour off it
  const int w = non_spiky_witness(P.carrier(), h);
  Json witness = nullptr;
  if (w >= 0) witness = Json{{"point", w}, {"slices", {slice(P, in_h, w, 0), slice(P, in_h, w, 1)}}};
  c(is_flappy(P.carrier(), h), "H(mu, xi) is not flappy: every slice is the perp of a point, hence not spiky", witness);
  return c.finish("W(3," + std::to_string(p) + ")(x)W(3," + std::to_string(p) + "), mu = identity",
                  "|H| = " + std::to_string(h.size()), char2(p));
}

inline SuiteOutcome symplectic_radical(const SuiteParams& sp) {
  const int p = field(sp, 3);
  Check c;
  const auto g = grassmann_space(4, 2, p);
  const auto w = BilinearForm::symplectic(4, p);
  PointSet q2;
  for (int a = 0; a < g.num_points(); ++a)
    if (w.is_isotropic(g.label(a))) q2.push_back(a);
  c(is_hyperplane(g, q2), "Q_2 is not a hyperplane");
  c(is_flappy(g, q2), "Q_2 is not flappy");
  const auto r = hyperplane_from_form(g, MultiForm::alternating2(w.gram(), p));
  c(std::holds_alternative<HyperplaneHandle>(r) && std::get<HyperplaneHandle>(r).points == q2, "Q_2 differs from H(mu)");
  return c.finish("grassmann(4,2," + std::to_string(p) + "), standard symplectic form",
                  std::to_string(g.num_points()) + " points, |Q_2| = " + std::to_string(q2.size()), char2(p));
}

inline SuiteOutcome projective_pair_forms(const SuiteParams& sp) {
  const int p = field(sp, 2);
  Check c;
  int enumerated = 0;
  const auto l = projective_space(2, p);
  const SegreProduct L({l, l}, sp.max_points);
  // on projective lines any bijection graph is a hyperplane; only PGL(2,p) ones are perps
  for (const auto& h : enumerate_hyperplanes(L.carrier())) {
    ++enumerated;
    try {
      const Matrix xi = sesquilinear_from_hyperplane(L, h);
      c(product_form_zero_locus(L, MultiForm::bilinear(xi, p)) == h, "hyperplane is not the perp of its form", h);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoFormExists) throw;
      c(false, "hyperplane of " + pg(2, p) + "^2 is the perp of no bilinear form", h);
    }
  }
  const auto f = projective_space(3, p);
  const SegreProduct F({f, f}, sp.max_points);
  int forms = 0;
  for (const auto& xi : projective_matrices(3, 3, p)) {
    if (p > 2 && forms % 97 != 0) {
      ++forms;
      continue;
    }
    ++forms;
    const auto h = std::get<HyperplaneHandle>(hyperplane_from_form(F, MultiForm::bilinear(xi, p))).points;
    c(is_hyperplane(F.carrier(), h), "perp of a form is not a hyperplane", matrix_json(xi));
    c(product_form_zero_locus(F, MultiForm::bilinear(sesquilinear_from_hyperplane(F, h), p)) == h,
      "form recovered from H does not give H", matrix_json(xi));
  }
  return c.finish("every hyperplane of " + pg(2, p) + "^2; forms on " + pg(3, p) + "^2",
                  std::to_string(enumerated) + " enumerated hyperplanes, all perps of forms", char2(p));
}

inline SuiteOutcome alternating_nonspiky(const SuiteParams& sp) {
  const int p = field(sp, 3);
  Check c;
  const auto g = projective_space(3, p);
  const SegreProduct P({g, g, g}, sp.max_points);
  MultiForm det(p, {3, 3, 3}, {1, 1, 1});
  const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
  for (int t = 0; t < 6; ++t) det.set({1u << perms[t][0], 1u << perms[t][1], 1u << perms[t][2]}, t < 3 ? 1 : -1);
  const auto r = hyperplane_from_form(P, det);
  const auto* h = std::get_if<HyperplaneHandle>(&r);
  c(h && is_hyperplane(P.carrier(), h->points), "H(det) is not a hyperplane");
  if (h) {
    c(!is_spiky(P.carrier(), h->points), "H(det) is spiky");
    c(!is_flappy(P.carrier(), h->points), "H(det) is flappy");
  }
  return c.finish(pg(3, p) + "^3, mu = determinant", h ? "|H| = " + std::to_string(h->points.size()) : "", char2(p));
}

inline SuiteOutcome witness_hyperplanes(const SuiteParams& sp) {
  const int p = field(sp, 2);
  Check c;
  const auto g = grassmann_space(4, 2, p);
  int n = 0;
  std::size_t size = 0;
  for (const auto& w : enumerate_subspaces(4, 2, p)) {
    const auto h = witness_hyperplane_W(g, w).points;
    ++n;
    size = h.size();
    c(is_hyperplane(g, h), "H(W) is not a hyperplane", basis_json(w));
    c(!is_spiky(g, h), "H(W) is spiky", basis_json(w));
  }
  return c.finish("grassmann(4,2," + std::to_string(p) + "), every 2-dimensional W",
                  std::to_string(n) + " hyperplanes H(W), |H(W)| = " + std::to_string(size));
}

inline SuiteOutcome intersection_suite(const SuiteParams& sp) {
  const int p = field(sp, 2);
  Check c;
  const auto g = grassmann_space(4, 2, p);
  const SegreProduct P({g, g}, sp.max_points);
  const auto h = intersection_hyperplane(P).points;
  c(is_hyperplane(P.carrier(), h), "H_{2,2} is not a hyperplane");
  c(is_nondegenerate(P, h), "H_{2,2} is degenerate");
  c(!is_spiky(P.carrier(), h), "H_{2,2} is spiky");
  return c.finish("grassmann(4,2," + std::to_string(p) + ")^2", "|H_{2,2}| = " + std::to_string(h.size()));
}

// Products of at most three affine spaces AG(d, q) with the given number of points.
inline std::vector<std::pair<std::string, IncidenceStructure>> affine_products_with(int points, int max_points) {
  struct Factor {
    std::string name;
    ParallelStructure a;
    int size;
  };
  std::vector<Factor> fs;
  for (int q : {2, 3, 5, 7})
    for (int d = 1; d <= 3; ++d) {
      int size = 1;
      for (int i = 0; i < d; ++i) size *= q;
      if (size > points || size < 2) continue;
      fs.push_back({"AG(" + std::to_string(d) + "," + std::to_string(q) + ")", affine_space(d + 1, q), size});
    }
  std::vector<std::pair<std::string, IncidenceStructure>> out;
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = i; j < fs.size(); ++j) {
      if (fs[i].size * fs[j].size == points)
        out.push_back({fs[i].name + "(x)" + fs[j].name, SegreProduct({fs[i].a.base(), fs[j].a.base()}, max_points).carrier()});
      for (std::size_t k = j; k < fs.size(); ++k)
        if (fs[i].size * fs[j].size * fs[k].size == points)
          out.push_back({fs[i].name + "(x)" + fs[j].name + "(x)" + fs[k].name,
                         SegreProduct({fs[i].a.base(), fs[j].a.base(), fs[k].a.base()}, max_points).carrier()});
    }
  return out;
}

inline SuiteOutcome spiky_complement_not_affine_product(const SuiteParams& sp) {
  Check c;
  int compared = 0;
  for (int p : {2, 3}) {
    const auto l = projective_space(2, p);
    const SegreProduct L({l, l}, sp.max_points);
    const auto h = std::get<HyperplaneHandle>(hyperplane_from_form(L, identity_form(2, p))).points;
    c(is_spiky(L.carrier(), h), "perp hyperplane is not spiky");
    const auto a = affinize(L, h);
    c(!check_affine_axiom(a.carrier, AffineAxiom::AffinePls), "spiky complement satisfies the affine axiom",
      Json{{"p", p}});
    for (const auto& [name, s] : affine_products_with(a.structure().num_points(), sp.max_points)) {
      ++compared;
      c(!isomorphic(a.structure(), s).has_value(), "complement is isomorphic to " + name, Json{{"p", p}});
    }
  }
  return c.finish("PG(1,2)^2 and PG(1,3)^2 minus the perp of the identity form",
                  "not affine; not isomorphic to any of " + std::to_string(compared) + " affine products of equal size");
}

inline SuiteOutcome final_example(const SuiteParams& sp) {
  Check c;
  Json orders = Json::array();
  for (auto [n, p] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
    const auto l = projective_space(n, p);
    const SegreProduct L({l, l}, sp.max_points);
    const auto h = std::get<HyperplaneHandle>(hyperplane_from_form(L, identity_form(n, p))).points;
    const auto a = affinize(L, h);
    const auto got = automorphisms(a.structure(), {}, true).order;
    const std::uint64_t formula = 2 * gl_order(n, p) / (p - 1);
    orders.push_back({{"space", pg(n, p) + "^2"}, {"order", got}, {"formula", formula}});
    c(got == formula, "|Aut| of the perp complement differs from 2|GL|/(p-1)", orders.back());
  }
  // products of two affine planes: n! (p^m |GL(m,p)|)^n
  for (int p : {2, 3}) {
    const auto ag = affine_space(3, p);
    const SegreProduct A({ag.base(), ag.base()}, sp.max_points);
    const auto got = automorphisms(product_parallelism(A, {ag, ag}, ProductParallel::Any), {}, true).order;
    const std::uint64_t one = static_cast<std::uint64_t>(p * p) * gl_order(2, p);
    c(got == 2 * one * one, "|Aut| of AG(2,p)^2 differs from 2 (p^2 |GL(2,p)|)^2",
      Json{{"p", p}, {"order", got}, {"formula", 2 * one * one}});
    orders.push_back({{"space", "AG(2," + std::to_string(p) + ")^2"}, {"order", got}, {"formula", 2 * one * one}});
  }
  auto o = c.finish("perp complements of PG(1,2)^2, PG(1,3)^2, PG(2,2)^2; AG(2,2)^2, AG(2,3)^2", orders.dump());
  if (o.status == SuiteStatus::Pass) o.witness = orders;
  return o;
}

}  // namespace suites

inline const std::vector<SuiteDef>& suite_registry() {
  using namespace suites;
  static const std::vector<SuiteDef> registry = [] {
    std::vector<SuiteDef> r{
        {"cor-autext", "cor:autext", unique_extension},
        {"cor-hip-inpolarprod-1", "cor:hip:inpolarprod:1", symplectic_polar_product_flappy},
        {"cor-hyperplane-exists", "cor:hyperplane-exists", nondegenerate_exists},
        {"cor-radical", "cor:radical", symplectic_radical},
        {"cor-strongasaffine", "cor:strongasaffine", strong_affine},
        {"cor-wystawls", "cor:wystawLS", slice_flappy_linear},
        {"exm-affin-disconnected", "exm:affinconnected", disconnected_complement_example},
        {"exm-nested-hyperplanes", "exm:nested-hyperplanes", nested_hyperplanes_example},
        {"exm-spiky-nonflappy", "exm:spiky:nonfloppy", spiky_nonflappy_example},
        {"fact-afred", "fct:afred:gener", complement_reduct},
        {"fact-autyaf", "fct:autyaf:gener", automorphisms_of_complement},
        {"fact-covering", "fact:covering", covering_suite},
        {"fact-hipygrass", "fct:hipygrass", grassmann_hyperplanes},
        {"fact-hipypolar", "fct:hipypolar", polar_hyperplanes},
        {"fact-parallelism", "fct:parallelism", parallelism_cases},
        {"fact-prezerw-wystaw", "lem:prezerw:wystaw", slice_flappy_spiky},
        {"fact-prodapls", "fct:prodapls:gener", product_apls},
        {"fact-prodpls", "fct:prodpls:gener", product_pls},
        {"fact-prostewlistku", "fct:prostewlistku", chain_components},
        {"final-example-aut", "exm:final-aut", final_example},
        {"lem-affofprod-strong", "cor:affofprod:strong",
         [](const SuiteParams& sp) { return strong_in_product_complement(sp, false); }},
        {"lem-flappy-implies-spiky", "prop:wystaje2kolczaty", flappy_implies_spiky},
        {"lem-hip-restricted", "lem:hip:restricted", hyperplane_restricted},
        {"lem-hipynieluskowate", "lem:hipynieluskowate", degenerate_not_flappy},
        {"lem-klinear", "lem:klinear", restricted_forms_flappy},
        {"lem-niekolczaty", "lem:niekolczaty", witness_hyperplanes},
        {"lem-quadrparal", "lem:quadrparal", quadrangle_parallel},
        {"lem-siec", "lem:siec", quadrangle_net},
        {"lem-spiky-minimal", "lem:kolczat2minim", spiky_minimal},
        {"lem-strong-transfer", "prop:strong:afprodPLS", strong_transfer},
        {"lem-veblgamma", "lem:veblgamma", near_planes},
        {"prop-af2horlines", "prop:af2horlines", recover_hyperplane_lines},
        {"prop-affofprod-strong", "prop:affofprod:strong",
         [](const SuiteParams& sp) { return strong_in_product_complement(sp, true); }},
        {"prop-affproj", "prop:affproj", spiky_complement_not_affine_product},
        {"prop-degenkolcz", "prop:degenkolcz", degenerate_product},
        {"prop-fct-mu", "fct:mu", nonzero_segments},
        {"prop-h-k1k2", "prop:hk1k2", intersection_suite},
        {"prop-hip-inpolarprod", "prop:hip:inpolarprod", polar_product},
        {"prop-hip-inproj2prod", "cor:hip:inproj2prod", projective_pair_forms},
        {"prop-hipaingrass", "prop:hipaingrass", nondegenerate_form_flappy},
        {"prop-hipamu", "prop:hipamu", form_locus_dichotomy},
        {"prop-isomorph", "prop:isomorph", degenerate_isomorphism},
        {"prop-parallelglobal", "prop:parallelglobal", parallel_from_incidence},
        {"prop-redefprod", "prop:redefprod", redefine_product},
        {"rem-afred-converse", "rem:afred-converse", linear_converse_fails},
        {"rem-alternating-nonspiky", "rem:alternating-nonspiky", alternating_nonspiky},
        {"rem-correl", "rem:correl", correlation_suite},
        {"rem-gkz-iff-spiky", "rem:gkz-spiky", gkz_iff_spiky},
        {"rem-notapls", "rem:notapls", pointwise_not_apls},
        {"rem-reduct-notapls", "rem:reduct:notAPLS", spiky_product_not_apls},
        {"thm-auty-prod", "thm:auty:prod", product_automorphisms},
        {"thm-defofparal", "thm:defofparal", define_parallelism},
        {"thm-hip-inprod", "thm:hip:inprod", slice_criterion_suite},
    };
    std::sort(r.begin(), r.end(), [](const SuiteDef& a, const SuiteDef& b) { return a.id < b.id; });
    return r;
  }();
  return registry;
}

inline const SuiteDef* find_suite(std::string_view id) {
  for (const auto& s : suite_registry())
    if (s.id == id) return &s;
  return nullptr;
}

/// Runs one suite; failed hypothesis gates and size caps become SKIPPED-HYPOTHESIS, any
/// other error is a FAIL carrying the message.
inline SuiteRecord run_suite(const SuiteDef& def, const SuiteParams& params) {
  SuiteRecord rec{def.id, def.statement, {}, 0, params.seed};
  const auto start = std::chrono::steady_clock::now();
  try {
    rec.outcome = def.run(params);
  } catch (const Error& e) {
    const bool gated = e.kind() == ErrorKind::HypothesisFailed || e.kind() == ErrorKind::CapExceeded;
    rec.outcome.status = gated ? SuiteStatus::SkippedHypothesis : SuiteStatus::Fail;
    rec.outcome.detail = e.what();
  } catch (const std::exception& e) {
    rec.outcome.status = SuiteStatus::Fail;
    rec.outcome.detail = e.what();
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

inline Json to_json(const SuiteRecord& r, bool with_timing = true) {
  Json j{{"suite_id", r.suite_id},
         {"statement", r.statement},
         {"instance", r.outcome.instance},
         {"status", std::string(to_string(r.outcome.status))},
         {"witness", r.outcome.witness},
         {"detail", r.outcome.detail},
         {"outside_hypothesis", r.outcome.outside_hypothesis},
         {"seed", r.seed}};
  if (with_timing) j["wall_ms"] = std::round(r.wall_ms * 1000) / 1000;
  return j;
}

}  // namespace segrelab
