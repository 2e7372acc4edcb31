#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "segrelab/automorphism.hpp"
#include "segrelab/error.hpp"
#include "segrelab/incidence.hpp"

namespace segrelab {

/// A hyperplane complement: surviving points and lines, with the parallelism
/// given by the unique deleted point on each line.
struct AffinizedStructure {
  IncidenceStructure ambient;
  PointSet removed;
  ParallelStructure carrier;
  std::vector<int> direction;        // carrier line -> ambient point on the hyperplane
  std::vector<int> to_ambient;       // carrier point -> ambient point
  std::vector<int> from_ambient;     // ambient point -> carrier point or -1
  std::vector<int> line_to_ambient;  // carrier line -> ambient line

  const IncidenceStructure& structure() const noexcept { return carrier.base(); }
  PointSet to_ambient_set(const PointSet& x) const {
    PointSet out;
    for (int a : x) out.push_back(to_ambient.at(a));
    std::sort(out.begin(), out.end());
    return out;
  }
};

inline AffinizedStructure affinize(const IncidenceStructure& m, const PointSet& h) {
  require_hyperplane(m, h);
  const auto in_h = membership(m.num_points(), h);
  std::vector<int> to_ambient, from_ambient(m.num_points(), -1);
  for (int a = 0; a < m.num_points(); ++a)
    if (!in_h[a]) {
      from_ambient[a] = static_cast<int>(to_ambient.size());
      to_ambient.push_back(a);
    }
  RawIncidence raw{static_cast<int>(to_ambient.size()), {}, {}};
  for (const auto& l : m.lines()) {
    if (count_in(l, in_h) == static_cast<int>(l.size())) continue;
    Line kept;
    for (int a : l)
      if (!in_h[a]) kept.push_back(from_ambient[a]);
    raw.lines.push_back(std::move(kept));
  }
  if (m.has_labels())
    for (int a : to_ambient) raw.labels.push_back(m.label(a));
  IncidenceStructure s = validate_pls(std::move(raw));

  std::vector<int> direction(s.num_lines()), line_to_ambient(s.num_lines());
  for (int l = 0; l < s.num_lines(); ++l) {
    const auto& pts = s.line(l);
    const int al = m.line_through(to_ambient[pts[0]], to_ambient[pts[1]]);
    line_to_ambient[l] = al;
    for (int a : m.line(al))
      if (in_h[a]) direction[l] = a;
  }
  auto carrier = ParallelStructure::from_class_ids(s, direction);
  return {m, h, std::move(carrier), std::move(direction), std::move(to_ambient), std::move(from_ambient),
          std::move(line_to_ambient)};
}

// ---------------------------------------------------------------------------
// Affine axioms

enum class AffineAxiom { PartialAffine, AffinePls, Tamaschke, Parallelogram };

inline std::optional<AffineAxiom> parse_affine_axiom(std::string_view name) {
  if (name == "partial_affine") return AffineAxiom::PartialAffine;
  if (name == "affine_pls") return AffineAxiom::AffinePls;
  if (name == "tamaschke") return AffineAxiom::Tamaschke;
  if (name == "parallelogram") return AffineAxiom::Parallelogram;
  return std::nullopt;
}

inline std::string_view to_string(AffineAxiom a) {
  switch (a) {
    case AffineAxiom::PartialAffine:
      return "partial_affine";
    case AffineAxiom::AffinePls:
      return "affine_pls";
    case AffineAxiom::Tamaschke:
      return "tamaschke";
    case AffineAxiom::Parallelogram:
      return "parallelogram";
  }
  return "?";
}

namespace detail {

// Shares a point, counting a line as meeting itself.
inline bool meet_or_equal(const IncidenceStructure& s, int l, int k) { return l == k || s.lines_meet(l, k); }

inline bool partial_affine(const ParallelStructure& a) {
  const auto& s = a.base();
  for (const auto& cls : a.classes())
    for (std::size_t i = 0; i < cls.size(); ++i)
      for (std::size_t j = i + 1; j < cls.size(); ++j)
        if (s.lines_meet(cls[i], cls[j])) return false;
  return true;
}

inline bool affine_pls(const ParallelStructure& a) {
  const auto& s = a.base();
  const int nc = static_cast<int>(a.classes().size());
  for (int p = 0; p < s.num_points(); ++p) {
    std::vector<char> seen(nc, 0);
    for (int l : s.lines_through(p)) seen[a.class_of(l)] = 1;
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) return false;
  }
  return true;
}

inline bool tamaschke(const ParallelStructure& a) {
  const auto& s = a.base();
  for (int p = 0; p < s.num_points(); ++p) {
    const auto& through = s.lines_through(p);
    for (int l1 : through)
      for (int l2 : through) {
        if (l1 == l2) continue;
        for (int k1 = 0; k1 < s.num_lines(); ++k1) {
          if (s.on_line(p, k1) || !s.lines_meet(k1, l1) || !s.lines_meet(k1, l2)) continue;
          for (int k2 : a.classes()[a.class_of(k1)]) {
            if (s.on_line(p, k2) || !s.lines_meet(k2, l1)) continue;
            if (!s.lines_meet(k2, l2)) return false;
          }
        }
      }
  }
  return true;
}

inline bool parallelogram(const ParallelStructure& a) {
  const auto& s = a.base();
  for (int l1 = 0; l1 < s.num_lines(); ++l1)
    for (int l2 : a.classes()[a.class_of(l1)])
      for (int k1 = 0; k1 < s.num_lines(); ++k1) {
        if (!meet_or_equal(s, l1, k1) || !meet_or_equal(s, l2, k1)) continue;
        for (int k2 : a.classes()[a.class_of(k1)])
          if (meet_or_equal(s, l1, k2) && !meet_or_equal(s, l2, k2)) return false;
      }
  return true;
}

}  // namespace detail

inline bool check_affine_axiom(const ParallelStructure& a, AffineAxiom axiom) {
  switch (axiom) {
    case AffineAxiom::PartialAffine:
      return detail::partial_affine(a);
    case AffineAxiom::AffinePls:
      return detail::affine_pls(a);
    case AffineAxiom::Tamaschke:
      return detail::tamaschke(a);
    case AffineAxiom::Parallelogram:
      return detail::parallelogram(a);
  }
  return false;
}

inline bool check_affine_axiom(const AffinizedStructure& a, AffineAxiom axiom) {
  return check_affine_axiom(a.carrier, axiom);
}

inline bool satisfies_all_affine_axioms(const ParallelStructure& a) {
  for (auto ax : {AffineAxiom::PartialAffine, AffineAxiom::AffinePls, AffineAxiom::Tamaschke, AffineAxiom::Parallelogram})
    if (!check_affine_axiom(a, ax)) return false;
  return true;
}

/// The substructure on X (lines inside X) with the induced parallelism.
inline ParallelStructure induced_parallel(const ParallelStructure& a, const PointSet& x) {
  const auto r = induced(a.base(), x);
  std::vector<int> ids(r.structure.num_lines());
  for (int l = 0; l < r.structure.num_lines(); ++l) {
    Line old;
    for (int b : r.structure.line(l)) old.push_back(r.to_old[b]);
    ids[l] = a.class_of(a.base().line_index(old));
  }
  return ParallelStructure::from_class_ids(r.structure, ids);
}

// ---------------------------------------------------------------------------
// Parallelisms defined from incidence

/// Dense boolean relation on lines.
class LineRelation {
 public:
  explicit LineRelation(int n = 0) : n_(n), bits_(static_cast<std::size_t>(n) * n, 0) {}
  int size() const noexcept { return n_; }
  bool operator()(int a, int b) const { return bits_[static_cast<std::size_t>(a) * n_ + b] != 0; }
  void set(int a, int b) {
    bits_[static_cast<std::size_t>(a) * n_ + b] = 1;
    bits_[static_cast<std::size_t>(b) * n_ + a] = 1;
  }
  std::size_t count() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1)); }
  friend bool operator==(const LineRelation&, const LineRelation&) = default;

 private:
  int n_;
  std::vector<char> bits_;
};

/// Quadrangle p,q,r,s: pq, qr, rs, sp are lines, p and r (q and s) not collinear.
struct Quadrangle {
  std::array<int, 4> points;
  std::array<int, 4> sides;  // pq, qr, rs, sp
};

/// Every quadrangle without diagonals, once each (p smallest, q < s).
inline std::vector<Quadrangle> quadrangles(const IncidenceStructure& s) {
  std::vector<Quadrangle> out;
  for (int p = 0; p < s.num_points(); ++p) {
    const auto& nb = s.neighbors(p);
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        const int q = nb[i].point, t = nb[j].point;
        if (q < p || t < p || nb[i].line == nb[j].line || s.collinear(q, t)) continue;
        for (const auto& [r, qr] : s.neighbors(q)) {
          if (r <= p || r == t || s.collinear(p, r)) continue;
          const int rt = s.line_through(r, t);
          if (rt < 0) continue;
          out.push_back({{p, q, r, t}, {nb[i].line, qr, rt, nb[j].line}});
        }
      }
  }
  return out;
}

/// L1 and L2 equal, or non-adjacent with two lines through a point off both meeting each.
inline bool par_veblen(const IncidenceStructure& s, int l1, int l2) {
  if (l1 == l2) return true;
  if (s.lines_meet(l1, l2)) return false;
  std::vector<int> count(s.num_points(), 0);
  for (int x : s.line(l1))
    for (int y : s.line(l2)) {
      const int k = s.line_through(x, y);
      if (k < 0) continue;
      for (int p : s.line(k))
        if (p != x && p != y && ++count[p] >= 2) return true;
    }
  return false;
}

/// L1 = pq and L2 = rs for a quadrangle p,q,r,s without diagonals.
inline bool par_ast(const IncidenceStructure& s, int l1, int l2) {
  if (l1 == l2) return false;
  for (int p : s.line(l1))
    for (int q : s.line(l1)) {
      if (p == q) continue;
      for (int r : s.line(l2))
        for (int t : s.line(l2)) {
          if (r == t || p == r || q == t || p == t || q == r) continue;
          if (s.collinear(q, r) && s.collinear(t, p) && !s.collinear(p, r) && !s.collinear(q, t)) return true;
        }
    }
  return false;
}

namespace detail {

// Lines sharing a point with both a and b.
inline std::vector<int> common_transversals(const IncidenceStructure& s, int a, int b) {
  std::vector<int> meets_a;
  for (int x : s.line(a))
    for (int l : s.lines_through(x)) meets_a.push_back(l);
  std::sort(meets_a.begin(), meets_a.end());
  meets_a.erase(std::unique(meets_a.begin(), meets_a.end()), meets_a.end());
  std::vector<int> out;
  for (int l : meets_a)
    if (meet_or_equal(s, l, b)) out.push_back(l);
  return out;
}

}  // namespace detail

/// L1 and L2 non-adjacent; some quadrangle without diagonals has one pair of
/// opposite sides both met by L1 and the other pair both met by L2.
inline bool par_quadr(const IncidenceStructure& s, int l1, int l2) {
  if (l1 == l2 || s.lines_meet(l1, l2)) return false;
  for (const auto& q : quadrangles(s)) {
    const auto& sd = q.sides;
    auto meets = [&](int l, int a, int b) { return detail::meet_or_equal(s, l, a) && detail::meet_or_equal(s, l, b); };
    if ((meets(l1, sd[0], sd[2]) && meets(l2, sd[1], sd[3])) || (meets(l1, sd[1], sd[3]) && meets(l2, sd[0], sd[2])))
      return true;
  }
  return false;
}

/// All three relations on every line pair at once.
struct ParallelRelations {
  LineRelation veblen, ast, quadr;
};

inline ParallelRelations parallel_relations(const IncidenceStructure& s) {
  const int n = s.num_lines();
  ParallelRelations out{LineRelation(n), LineRelation(n), LineRelation(n)};
  for (int l = 0; l < n; ++l) out.veblen.set(l, l);

  // Veblen: for K1 != K2 through p, the lines meeting both away from p.
  for (int p = 0; p < s.num_points(); ++p) {
    const auto& through = s.lines_through(p);
    for (std::size_t i = 0; i < through.size(); ++i)
      for (std::size_t j = i + 1; j < through.size(); ++j) {
        std::vector<int> b;
        for (int l : detail::common_transversals(s, through[i], through[j]))
          if (!s.on_line(p, l)) b.push_back(l);
        for (std::size_t x = 0; x < b.size(); ++x)
          for (std::size_t y = x + 1; y < b.size(); ++y)
            if (!s.lines_meet(b[x], b[y])) out.veblen.set(b[x], b[y]);
      }
  }

  for (const auto& q : quadrangles(s)) {
    const auto& sd = q.sides;
    out.ast.set(sd[0], sd[2]);
    out.ast.set(sd[1], sd[3]);
    const auto a1 = detail::common_transversals(s, sd[0], sd[2]);
    const auto a2 = detail::common_transversals(s, sd[1], sd[3]);
    for (int x : a1)
      for (int y : a2)
        if (x != y && !s.lines_meet(x, y)) out.quadr.set(x, y);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Near-planes

enum class NearPlaneKind { ThroughPoint, Empty, SingleLine, NearPlane };

struct NearPlane {
  PointSet points;
  NearPlaneKind kind = NearPlaneKind::Empty;
};

/// Union of the lines through p that meet K.
inline NearPlane near_plane(const IncidenceStructure& m, int p, int k) {
  NearPlane out;
  std::vector<char> in(m.num_points(), 0);
  int used = 0;
  const bool on_k = m.on_line(p, k);
  for (int l : m.lines_through(p)) {
    if (!on_k && !m.lines_meet(l, k)) continue;
    ++used;
    for (int a : m.line(l)) in[a] = 1;
  }
  out.points = to_point_set(in);
  if (on_k)
    out.kind = NearPlaneKind::ThroughPoint;
  else if (used == 0)
    out.kind = NearPlaneKind::Empty;
  else if (used == 1)
    out.kind = NearPlaneKind::SingleLine;
  else
    out.kind = NearPlaneKind::NearPlane;
  return out;
}

/// Every near-plane Pi(p,K) with p off H and K not inside H meets H within a
/// single line (at least two points of it).
inline bool near_planes_meet_in_lines(const IncidenceStructure& m, const PointSet& h) {
  const auto in_h = membership(m.num_points(), h);
  for (int p = 0; p < m.num_points(); ++p) {
    if (in_h[p]) continue;
    for (int k = 0; k < m.num_lines(); ++k) {
      if (count_in(m.line(k), in_h) == static_cast<int>(m.line(k).size())) continue;
      const auto np = near_plane(m, p, k);
      if (np.kind != NearPlaneKind::NearPlane) continue;
      PointSet meet;
      for (int a : np.points)
        if (in_h[a]) meet.push_back(a);
      if (meet.size() < 2) return false;
      const int l = m.line_through(meet[0], meet[1]);
      if (l < 0) return false;
      for (int a : meet)
        if (!m.on_line(a, l)) return false;
    }
  }
  return true;
}

/// Every line inside H lies in a near-plane Pi(p,K) with p off H and K not inside H.
inline bool lines_covered_by_near_planes(const IncidenceStructure& m, const PointSet& h) {
  const auto in_h = membership(m.num_points(), h);
  std::vector<int> pending;
  for (int l = 0; l < m.num_lines(); ++l)
    if (count_in(m.line(l), in_h) == static_cast<int>(m.line(l).size())) pending.push_back(l);
  if (pending.empty()) return true;
  std::vector<char> done(m.num_lines(), 0);
  std::size_t remaining = pending.size();
  for (int p = 0; p < m.num_points() && remaining > 0; ++p) {
    if (in_h[p]) continue;
    for (int k = 0; k < m.num_lines() && remaining > 0; ++k) {
      if (count_in(m.line(k), in_h) == static_cast<int>(m.line(k).size())) continue;
      const auto np = near_plane(m, p, k);
      if (np.kind != NearPlaneKind::NearPlane) continue;
      const auto in_np = membership(m.num_points(), np.points);
      for (int l : pending)
        if (!done[l] && count_in(m.line(l), in_np) == static_cast<int>(m.line(l).size())) {
          done[l] = 1;
          --remaining;
        }
    }
  }
  return remaining == 0;
}

// ---------------------------------------------------------------------------
// Recovery of the hyperplane from the complement

inline int min_line_size(const IncidenceStructure& s) {
  std::size_t m = s.num_lines() ? s.line(0).size() : 0;
  for (const auto& l : s.lines()) m = std::min(m, l.size());
  return static_cast<int>(m);
}

inline void require_veblen_gamma(const IncidenceStructure& m, int min_size) {
  if (!is_veblenian(m)) fail(ErrorKind::HypothesisFailed, "ambient space is not Veblenian");
  if (!is_gamma(m)) fail(ErrorKind::HypothesisFailed, "ambient space is not a gamma space");
  if (min_line_size(m) < min_size)
    fail(ErrorKind::HypothesisFailed, "ambient lines need at least " + std::to_string(min_size) + " points");
}

/// Directions recovered from the complement alone: one point per parallel
/// class, three classes collinear when some triangle has its sides in them.
struct RecoveredDirections {
  int num_classes = 0;
  std::vector<Line> lines;          // over class indices, sorted
  std::vector<int> class_direction;  // class -> ambient hyperplane point (for checking only)
  std::set<std::array<int, 3>> collinear_triples;
};

inline RecoveredDirections recover_directions(const AffinizedStructure& a) {
  require_veblen_gamma(a.ambient, 3);
  if (!is_flappy(a.ambient, a.removed)) fail(ErrorKind::HypothesisFailed, "the removed hyperplane is not flappy");
  const auto& s = a.structure();
  RecoveredDirections out;
  out.num_classes = static_cast<int>(a.carrier.classes().size());
  for (const auto& cls : a.carrier.classes()) out.class_direction.push_back(a.direction[cls[0]]);
  for (const auto& t : triangles(s)) {
    std::array<int, 3> c{a.carrier.class_of(s.line_through(t[0], t[1])), a.carrier.class_of(s.line_through(t[1], t[2])),
                         a.carrier.class_of(s.line_through(t[0], t[2]))};
    std::sort(c.begin(), c.end());
    if (c[0] != c[1] && c[1] != c[2]) out.collinear_triples.insert(c);
  }
  std::set<Line> lines;
  for (const auto& t : out.collinear_triples)
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        Line l{t[i], t[j]};
        for (int c = 0; c < out.num_classes; ++c) {
          if (c == t[i] || c == t[j]) continue;
          std::array<int, 3> probe{t[i], t[j], c};
          std::sort(probe.begin(), probe.end());
          if (out.collinear_triples.count(probe)) l.push_back(c);
        }
        std::sort(l.begin(), l.end());
        lines.insert(l);
      }
  out.lines.assign(lines.begin(), lines.end());
  return out;
}

// ---------------------------------------------------------------------------
// Automorphism extension

/// Extends an automorphism f of the complement (preserving parallelism) to
/// the ambient space: F = f off H and F(L^inf) = f(L)^inf.
inline Permutation extend_automorphism(const AffinizedStructure& a, const Permutation& f) {
  const auto& s = a.structure();
  if (!is_automorphism(s, f, &a.carrier))
    fail(ErrorKind::NotParallelismPreserving, "map is not an automorphism of the complement with its parallelism");
  if (!is_spiky(a.ambient, a.removed))
    fail(ErrorKind::HypothesisFailed, "the removed hyperplane is not spiky, so directions do not cover it");
  if (!near_planes_meet_in_lines(a.ambient, a.removed))
    fail(ErrorKind::HypothesisFailed, "some near-plane does not meet the hyperplane in a line");
  if (!lines_covered_by_near_planes(a.ambient, a.removed))
    fail(ErrorKind::HypothesisFailed, "some line of the hyperplane lies in no suitable near-plane");
  Permutation big(a.ambient.num_points(), -1);
  for (int x = 0; x < s.num_points(); ++x) big[a.to_ambient[x]] = a.to_ambient[f[x]];
  for (int l = 0; l < s.num_lines(); ++l) {
    Line img;
    for (int x : s.line(l)) img.push_back(f[x]);
    std::sort(img.begin(), img.end());
    const int target = a.direction[s.line_index(img)];
    int& slot = big[a.direction[l]];
    if (slot >= 0 && slot != target) fail(ErrorKind::NotParallelismPreserving, "directions are not mapped consistently");
    slot = target;
  }
  return big;
}

/// Restriction of an ambient automorphism preserving H to the complement.
inline Permutation restrict_automorphism(const AffinizedStructure& a, const Permutation& big) {
  Permutation f(a.to_ambient.size());
  for (std::size_t x = 0; x < f.size(); ++x) {
    const int y = a.from_ambient.at(big.at(a.to_ambient[x]));
    if (y < 0) fail(ErrorKind::HypothesisFailed, "map does not preserve the hyperplane");
    f[x] = y;
  }
  return f;
}

}  // namespace segrelab
