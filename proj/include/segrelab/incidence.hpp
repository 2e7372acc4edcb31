#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "segrelab/error.hpp"
#include "segrelab/subspace.hpp"

namespace segrelab {

/// Sorted, duplicate-free list of point indices.
using PointSet = std::vector<int>;
using Line = std::vector<int>;

/// Unvalidated point/line data as read from a file or built by a constructor.
struct RawIncidence {
  int num_points = 0;
  std::vector<std::vector<int>> lines;
  std::vector<Subspace> labels;  // empty, or one per point
};

inline std::string describe_points(std::initializer_list<int> pts) {
  std::string s = "{";
  bool first = true;
  for (int p : pts) {
    if (!first) s += ",";
    s += std::to_string(p);
    first = false;
  }
  return s + "}";
}

class IncidenceStructure;
IncidenceStructure validate_pls(RawIncidence raw);

/// A partial linear space: points 0..N-1, lines as strictly increasing point
/// lists sorted lexicographically. Instances only come out of validate_pls, so
/// the axioms (line size >= 2, no isolated point, two lines share <= 1 point) hold.
class IncidenceStructure {
 public:
  struct Neighbor {
    int point;
    int line;
    friend bool operator<(const Neighbor& a, const Neighbor& b) { return a.point < b.point; }
  };

  IncidenceStructure() = default;

  int num_points() const noexcept { return num_points_; }
  int num_lines() const noexcept { return static_cast<int>(lines_.size()); }
  const std::vector<Line>& lines() const noexcept { return lines_; }
  const Line& line(int l) const { return lines_.at(l); }
  const std::vector<int>& lines_through(int a) const { return through_.at(a); }
  const std::vector<Neighbor>& neighbors(int a) const { return neighbors_.at(a); }

  /// Index of the line joining a and b, or -1 when they are not collinear (or equal).
  int line_through(int a, int b) const {
    if (a == b) return -1;
    const auto& nb = neighbors_[a];
    auto it = std::lower_bound(nb.begin(), nb.end(), Neighbor{b, 0});
    return (it != nb.end() && it->point == b) ? it->line : -1;
  }

  /// Collinearity; irreflexive.
  bool collinear(int a, int b) const { return line_through(a, b) >= 0; }

  /// Index of a line given by its sorted point list, or -1.
  int line_index(const Line& pts) const {
    auto it = std::lower_bound(lines_.begin(), lines_.end(), pts);
    return (it != lines_.end() && *it == pts) ? static_cast<int>(it - lines_.begin()) : -1;
  }

  bool lines_meet(int l, int k) const {
    const auto& a = lines_[l];
    const auto& b = lines_[k];
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] == b[j]) return true;
      if (a[i] < b[j])
        ++i;
      else
        ++j;
    }
    return false;
  }

  /// Common point of two distinct lines, or -1.
  int meeting_point(int l, int k) const {
    const auto& a = lines_[l];
    const auto& b = lines_[k];
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] == b[j]) return a[i];
      if (a[i] < b[j])
        ++i;
      else
        ++j;
    }
    return -1;
  }

  bool on_line(int point, int l) const { return std::binary_search(lines_[l].begin(), lines_[l].end(), point); }

  bool has_labels() const noexcept { return !labels_.empty(); }
  const std::vector<Subspace>& labels() const noexcept { return labels_; }
  const Subspace& label(int a) const { return labels_.at(a); }

  RawIncidence raw() const { return {num_points_, lines_, labels_}; }

  friend bool operator==(const IncidenceStructure& a, const IncidenceStructure& b) {
    return a.num_points_ == b.num_points_ && a.lines_ == b.lines_;
  }

 private:
  friend IncidenceStructure validate_pls(RawIncidence raw);

  int num_points_ = 0;
  std::vector<Line> lines_;
  std::vector<std::vector<int>> through_;
  std::vector<std::vector<Neighbor>> neighbors_;
  std::vector<Subspace> labels_;
};

/// Checks the partial linear space axioms and builds the derived adjacency.
inline IncidenceStructure validate_pls(RawIncidence raw) {
  const int n = raw.num_points;
  if (n <= 0 || raw.lines.empty()) fail(ErrorKind::EmptyStructure, "a partial linear space needs points and lines");
  if (!raw.labels.empty() && static_cast<int>(raw.labels.size()) != n)
    fail(ErrorKind::ShapeMismatch, "label count differs from point count");
  for (auto& l : raw.lines) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
    for (int p : l)
      if (p < 0 || p >= n) fail(ErrorKind::PointOutOfRange, "point " + std::to_string(p) + " out of range");
  }
  std::sort(raw.lines.begin(), raw.lines.end());
  raw.lines.erase(std::unique(raw.lines.begin(), raw.lines.end()), raw.lines.end());
  for (std::size_t i = 0; i < raw.lines.size(); ++i)
    if (raw.lines[i].size() < 2)
      fail(ErrorKind::LineTooShort,
           "line " + std::to_string(i) + " has " + std::to_string(raw.lines[i].size()) + " point(s)");

  IncidenceStructure s;
  s.num_points_ = n;
  s.lines_ = std::move(raw.lines);
  s.labels_ = std::move(raw.labels);
  s.through_.assign(n, {});
  s.neighbors_.assign(n, {});
  for (int l = 0; l < s.num_lines(); ++l)
    for (int a : s.lines_[l]) {
      s.through_[a].push_back(l);
      for (int b : s.lines_[l])
        if (b != a) s.neighbors_[a].push_back({b, l});
    }
  for (int a = 0; a < n; ++a) {
    if (s.through_[a].empty()) fail(ErrorKind::IsolatedPoint, "point " + std::to_string(a) + " is on no line");
    auto& nb = s.neighbors_[a];
    std::sort(nb.begin(), nb.end(), [](const auto& x, const auto& y) {
      return x.point != y.point ? x.point < y.point : x.line < y.line;
    });
    for (std::size_t i = 1; i < nb.size(); ++i)
      if (nb[i].point == nb[i - 1].point)
        fail(ErrorKind::TwoLinesShareTwoPoints, "lines " + std::to_string(nb[i - 1].line) + " and " +
                                                    std::to_string(nb[i].line) + " share points " +
                                                    describe_points({a, nb[i].point}));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Point-set helpers

inline std::vector<char> membership(int num_points, const PointSet& x) {
  std::vector<char> m(num_points, 0);
  for (int a : x) {
    if (a < 0 || a >= num_points) fail(ErrorKind::PointOutOfRange, "point " + std::to_string(a) + " out of range");
    m[a] = 1;
  }
  return m;
}

inline PointSet to_point_set(const std::vector<char>& mask) {
  PointSet out;
  for (int i = 0; i < static_cast<int>(mask.size()); ++i)
    if (mask[i]) out.push_back(i);
  return out;
}

inline PointSet normalized(PointSet x) {
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  return x;
}

inline PointSet complement_of(int num_points, const PointSet& x) {
  const auto m = membership(num_points, x);
  PointSet out;
  for (int i = 0; i < num_points; ++i)
    if (!m[i]) out.push_back(i);
  return out;
}

inline int count_in(const Line& l, const std::vector<char>& mask) {
  int c = 0;
  for (int a : l) c += mask[a] ? 1 : 0;
  return c;
}

// ---------------------------------------------------------------------------
// Parallel structures

/// A partial linear space together with an equivalence relation on its lines,
/// given as a partition of the line indices.
class ParallelStructure {
 public:
  ParallelStructure(IncidenceStructure base, std::vector<std::vector<int>> classes)
      : base_(std::move(base)), classes_(std::move(classes)) {
    class_of_.assign(base_.num_lines(), -1);
    for (auto& c : classes_) std::sort(c.begin(), c.end());
    std::erase_if(classes_, [](const auto& c) { return c.empty(); });
    std::sort(classes_.begin(), classes_.end());
    for (int ci = 0; ci < static_cast<int>(classes_.size()); ++ci)
      for (int l : classes_[ci]) {
        if (l < 0 || l >= base_.num_lines()) fail(ErrorKind::IndexOutOfRange, "parallel class names a missing line");
        if (class_of_[l] >= 0) fail(ErrorKind::ShapeMismatch, "parallel classes overlap");
        class_of_[l] = ci;
      }
    for (int l = 0; l < base_.num_lines(); ++l)
      if (class_of_[l] < 0) fail(ErrorKind::ShapeMismatch, "parallel classes do not cover every line");
  }

  static ParallelStructure from_class_ids(IncidenceStructure base, const std::vector<int>& ids) {
    std::map<int, std::vector<int>> groups;
    for (int l = 0; l < static_cast<int>(ids.size()); ++l) groups[ids[l]].push_back(l);
    std::vector<std::vector<int>> classes;
    for (auto& [id, ls] : groups) classes.push_back(std::move(ls));
    return ParallelStructure(std::move(base), std::move(classes));
  }

  const IncidenceStructure& base() const noexcept { return base_; }
  const std::vector<std::vector<int>>& classes() const noexcept { return classes_; }
  int class_of(int line) const { return class_of_.at(line); }
  bool parallel(int l, int k) const { return class_of_.at(l) == class_of_.at(k); }

 private:
  IncidenceStructure base_;
  std::vector<std::vector<int>> classes_;
  std::vector<int> class_of_;
};

// ---------------------------------------------------------------------------
// Global properties

inline bool is_linear(const IncidenceStructure& s) {
  std::uint64_t pairs = 0;
  for (const auto& l : s.lines()) pairs += static_cast<std::uint64_t>(l.size()) * (l.size() - 1) / 2;
  const std::uint64_t n = static_cast<std::uint64_t>(s.num_points());
  return pairs == n * (n - 1) / 2;
}

/// None-one-or-all: every line not through a has 0, 1 or all of its points collinear with a.
inline bool is_gamma(const IncidenceStructure& s) {
  const int n = s.num_points();
  std::vector<char> adj(n, 0);
  std::vector<char> seen(s.num_lines(), 0);
  for (int a = 0; a < n; ++a) {
    for (const auto& nb : s.neighbors(a)) adj[nb.point] = 1;
    std::vector<int> touched;
    for (const auto& nb : s.neighbors(a))
      for (int l : s.lines_through(nb.point)) {
        if (seen[l]) continue;
        seen[l] = 1;
        touched.push_back(l);
        if (s.on_line(a, l)) continue;
        const int c = count_in(s.line(l), adj);
        if (c != 0 && c != 1 && c != static_cast<int>(s.line(l).size())) return false;
      }
    for (int l : touched) seen[l] = 0;
    for (const auto& nb : s.neighbors(a)) adj[nb.point] = 0;
  }
  return true;
}

/// Veblen condition: for distinct lines L1, L2 through p and distinct lines
/// K1, K2 missing p, if each K meets both L's then K1 meets K2.
inline bool is_veblenian(const IncidenceStructure& s) {
  for (int p = 0; p < s.num_points(); ++p) {
    const auto& through = s.lines_through(p);
    for (std::size_t i = 0; i < through.size(); ++i)
      for (std::size_t j = i + 1; j < through.size(); ++j) {
        std::vector<int> transversals;
        for (int x : s.line(through[i])) {
          if (x == p) continue;
          for (int y : s.line(through[j])) {
            if (y == p) continue;
            const int k = s.line_through(x, y);
            if (k >= 0) transversals.push_back(k);
          }
        }
        std::sort(transversals.begin(), transversals.end());
        transversals.erase(std::unique(transversals.begin(), transversals.end()), transversals.end());
        for (std::size_t a = 0; a < transversals.size(); ++a)
          for (std::size_t b = a + 1; b < transversals.size(); ++b)
            if (!s.lines_meet(transversals[a], transversals[b])) return false;
      }
  }
  return true;
}

/// Connected components of the collinearity graph restricted to `alive` points (all when empty).
inline std::vector<int> component_ids(const IncidenceStructure& s, const std::vector<char>& alive = {}) {
  const int n = s.num_points();
  std::vector<int> comp(n, -1);
  int next = 0;
  for (int start = 0; start < n; ++start) {
    if (comp[start] >= 0 || (!alive.empty() && !alive[start])) continue;
    std::vector<int> stack{start};
    comp[start] = next;
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      for (const auto& nb : s.neighbors(a)) {
        if (comp[nb.point] >= 0 || (!alive.empty() && !alive[nb.point])) continue;
        comp[nb.point] = next;
        stack.push_back(nb.point);
      }
    }
    ++next;
  }
  return comp;
}

inline bool is_connected(const IncidenceStructure& s) {
  const auto comp = component_ids(s);
  return std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; });
}

// ---------------------------------------------------------------------------
// Subspaces and hyperplanes

inline bool is_subspace(const IncidenceStructure& s, const PointSet& x) {
  const auto m = membership(s.num_points(), x);
  for (const auto& l : s.lines()) {
    const int c = count_in(l, m);
    if (c >= 2 && c != static_cast<int>(l.size())) return false;
  }
  return true;
}

inline bool is_hyperplane_mask(const IncidenceStructure& s, const std::vector<char>& m) {
  bool proper = false;
  for (char c : m) proper = proper || !c;
  if (!proper) return false;
  for (const auto& l : s.lines()) {
    const int c = count_in(l, m);
    if (c != 1 && c != static_cast<int>(l.size())) return false;
  }
  return true;
}

/// Proper subspace meeting every line, i.e. every line meets X in one or all points.
inline bool is_hyperplane(const IncidenceStructure& s, const PointSet& x) {
  return is_hyperplane_mask(s, membership(s.num_points(), x));
}

inline void require_hyperplane(const IncidenceStructure& s, const PointSet& x) {
  if (!is_hyperplane(s, x)) fail(ErrorKind::NotAHyperplane, "the given point set is not a hyperplane");
}

inline bool is_spiky_mask(const IncidenceStructure& s, const std::vector<char>& m) {
  for (int a = 0; a < s.num_points(); ++a) {
    if (!m[a]) continue;
    bool ok = false;
    for (const auto& nb : s.neighbors(a))
      if (!m[nb.point]) {
        ok = true;
        break;
      }
    if (!ok) return false;
  }
  return true;
}

/// Every point of X is collinear with some point off X.
inline bool is_spiky(const IncidenceStructure& s, const PointSet& x) {
  require_hyperplane(s, x);
  return is_spiky_mask(s, membership(s.num_points(), x));
}

/// A point of X all of whose neighbours lie in X (a witness of non-spikiness), or -1.
inline int non_spiky_witness(const IncidenceStructure& s, const PointSet& x) {
  const auto m = membership(s.num_points(), x);
  for (int a : x) {
    bool ok = false;
    for (const auto& nb : s.neighbors(a)) ok = ok || !m[nb.point];
    if (!ok) return a;
  }
  return -1;
}

/// A line inside X that no point off X sees entirely, or -1.
inline int non_flappy_witness(const IncidenceStructure& s, const std::vector<char>& m) {
  for (int l = 0; l < s.num_lines(); ++l) {
    const auto& pts = s.line(l);
    if (count_in(pts, m) != static_cast<int>(pts.size())) continue;
    // Candidates: outside neighbours of the first point, filtered by the rest.
    bool found = false;
    for (const auto& nb : s.neighbors(pts[0])) {
      if (m[nb.point]) continue;
      bool all = true;
      for (std::size_t i = 1; i < pts.size() && all; ++i) all = s.collinear(nb.point, pts[i]);
      if (all) {
        found = true;
        break;
      }
    }
    if (!found) return l;
  }
  return -1;
}

/// Every line inside X is contained in [a] for some point a off X.
inline bool is_flappy(const IncidenceStructure& s, const PointSet& x) {
  require_hyperplane(s, x);
  return non_flappy_witness(s, membership(s.num_points(), x)) < 0;
}

// ---------------------------------------------------------------------------
// Strong subspaces

/// Closure of `seed` under joining lines, or nullopt as soon as two
/// non-collinear points appear (the closure is then not strong).
inline std::optional<PointSet> strong_closure(const IncidenceStructure& s, const PointSet& seed,
                                              const std::vector<char>& alive = {}) {
  std::vector<char> in(s.num_points(), 0);
  std::vector<int> members;
  std::vector<int> queue;
  auto add = [&](int a) {
    if (!in[a]) {
      in[a] = 1;
      queue.push_back(a);
    }
  };
  for (int a : seed) add(a);
  std::size_t head = 0;
  while (head < queue.size()) {
    const int x = queue[head++];
    for (int y : members) {
      const int l = s.line_through(x, y);
      if (l < 0) return std::nullopt;
      for (int z : s.line(l)) {
        if (!alive.empty() && !alive[z]) continue;
        add(z);
      }
    }
    members.push_back(x);
  }
  std::sort(members.begin(), members.end());
  return members;
}

inline constexpr int kStrongSubspaceCap = 1 << 14;

/// Strong subspaces (pairwise collinear subspaces). With maximal_only the
/// inclusion-maximal ones; otherwise every non-empty one. Sorted lexicographically.
inline std::vector<PointSet> strong_subspaces(const IncidenceStructure& s, bool maximal_only) {
  if (s.num_points() > kStrongSubspaceCap) fail(ErrorKind::CapExceeded, "too many points for strong subspace search");
  std::set<PointSet> seen;
  std::vector<PointSet> stack;
  std::vector<PointSet> out;
  auto push = [&](PointSet x) {
    if (seen.insert(x).second) stack.push_back(std::move(x));
  };
  if (maximal_only) {
    for (const auto& l : s.lines()) push(l);
  } else {
    for (int a = 0; a < s.num_points(); ++a) push({a});
  }
  while (!stack.empty()) {
    PointSet cur = std::move(stack.back());
    stack.pop_back();
    std::vector<char> in(s.num_points(), 0);
    for (int a : cur) in[a] = 1;
    bool extendable = false;
    for (const auto& nb : s.neighbors(cur[0])) {
      const int c = nb.point;
      if (in[c]) continue;
      bool all = true;
      for (std::size_t i = 1; i < cur.size() && all; ++i) all = s.collinear(c, cur[i]);
      if (!all) continue;
      PointSet seed = cur;
      seed.push_back(c);
      if (auto closed = strong_closure(s, seed)) {
        extendable = true;
        push(std::move(*closed));
      }
    }
    if (!maximal_only || !extendable) out.push_back(std::move(cur));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Strong connectivity evaluated on maximal strong subspaces: the graph whose
/// vertices are maximal strong subspaces, joined when they share >= 2 points
/// (equivalently a line), must be connected.
inline bool is_strongly_connected(const IncidenceStructure& s) {
  const auto maxes = strong_subspaces(s, true);
  if (maxes.empty()) return false;
  std::vector<int> parent(maxes.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  std::vector<int> owner(s.num_lines(), -1);
  for (int m = 0; m < static_cast<int>(maxes.size()); ++m) {
    const auto& pts = maxes[m];
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const int l = s.line_through(pts[i], pts[j]);
        if (owner[l] < 0)
          owner[l] = m;
        else
          parent[find(m)] = find(owner[l]);
      }
  }
  const int root = find(0);
  for (int m = 0; m < static_cast<int>(maxes.size()); ++m)
    if (find(m) != root) return false;
  return true;
}

enum class Property { Linear, Gamma, Veblenian, Connected, StronglyConnected };

inline std::optional<Property> parse_property(std::string_view name) {
  if (name == "linear") return Property::Linear;
  if (name == "gamma") return Property::Gamma;
  if (name == "veblenian") return Property::Veblenian;
  if (name == "connected") return Property::Connected;
  if (name == "strongly_connected") return Property::StronglyConnected;
  return std::nullopt;
}

inline std::string_view to_string(Property p) {
  switch (p) {
    case Property::Linear: return "linear";
    case Property::Gamma: return "gamma";
    case Property::Veblenian: return "veblenian";
    case Property::Connected: return "connected";
    case Property::StronglyConnected: return "strongly_connected";
  }
  return "?";
}

inline bool check_property(const IncidenceStructure& s, Property prop) {
  switch (prop) {
    case Property::Linear: return is_linear(s);
    case Property::Gamma: return is_gamma(s);
    case Property::Veblenian: return is_veblenian(s);
    case Property::Connected: return is_connected(s);
    case Property::StronglyConnected: return is_strongly_connected(s);
  }
  return false;
}

/// Unordered triples of pairwise collinear points not on a common line.
inline std::vector<std::array<int, 3>> triangles(const IncidenceStructure& s) {
  std::vector<std::array<int, 3>> out;
  for (int a = 0; a < s.num_points(); ++a) {
    const auto& nb = s.neighbors(a);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (nb[i].point < a) continue;
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        if (nb[i].line == nb[j].line) continue;
        if (s.collinear(nb[i].point, nb[j].point)) out.push_back({a, nb[i].point, nb[j].point});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Substructures

struct Restriction {
  IncidenceStructure structure;
  std::vector<int> to_new;  // old point -> new point, or -1
  std::vector<int> to_old;  // new point -> old point

  PointSet map_set(const PointSet& x) const {
    PointSet out;
    for (int a : x)
      if (to_new.at(a) >= 0) out.push_back(to_new[a]);
    std::sort(out.begin(), out.end());
    return out;
  }
};

/// The substructure on S0 with the given subset of lines (each must lie in S0).
inline Restriction restrict(const IncidenceStructure& s, const PointSet& s0, const std::vector<int>& line_subset) {
  Restriction r;
  const auto in = membership(s.num_points(), s0);
  r.to_new.assign(s.num_points(), -1);
  for (int a = 0; a < s.num_points(); ++a)
    if (in[a]) {
      r.to_new[a] = static_cast<int>(r.to_old.size());
      r.to_old.push_back(a);
    }
  RawIncidence raw;
  raw.num_points = static_cast<int>(r.to_old.size());
  for (int l : line_subset) {
    if (l < 0 || l >= s.num_lines()) fail(ErrorKind::LineNotInSubset, "line " + std::to_string(l) + " does not exist");
    Line nl;
    for (int a : s.line(l)) {
      if (!in[a]) fail(ErrorKind::LineNotInSubset, "line " + std::to_string(l) + " leaves the point subset");
      nl.push_back(r.to_new[a]);
    }
    raw.lines.push_back(std::move(nl));
  }
  if (s.has_labels())
    for (int a : r.to_old) raw.labels.push_back(s.label(a));
  r.structure = validate_pls(std::move(raw));
  return r;
}

/// Lines of s entirely inside the point set.
inline std::vector<int> lines_inside(const IncidenceStructure& s, const PointSet& x) {
  const auto m = membership(s.num_points(), x);
  std::vector<int> out;
  for (int l = 0; l < s.num_lines(); ++l)
    if (count_in(s.line(l), m) == static_cast<int>(s.line(l).size())) out.push_back(l);
  return out;
}

/// The structure induced on X: its points and the lines contained in X.
inline Restriction induced(const IncidenceStructure& s, const PointSet& x) { return restrict(s, x, lines_inside(s, x)); }

}  // namespace segrelab
