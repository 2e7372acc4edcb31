#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "segrelab/error.hpp"
#include "segrelab/incidence.hpp"

namespace segrelab {

inline constexpr int kAutomorphismPointCap = 512;

/// A permutation of points: perm[a] is the image of a.
using Permutation = std::vector<int>;

struct AutomorphismGroup {
  std::uint64_t order = 1;
  std::vector<Permutation> generators;  // empty when only the order was requested
};

/// Does `perm` map lines onto lines (and parallel classes onto parallel classes)?
inline bool is_isomorphism(const IncidenceStructure& a, const IncidenceStructure& b, const Permutation& perm,
                           const ParallelStructure* pa = nullptr, const ParallelStructure* pb = nullptr) {
  if (a.num_points() != b.num_points() || a.num_lines() != b.num_lines()) return false;
  if (static_cast<int>(perm.size()) != a.num_points()) return false;
  std::vector<int> line_image(a.num_lines(), -1);
  for (int l = 0; l < a.num_lines(); ++l) {
    Line img;
    for (int x : a.line(l)) img.push_back(perm[x]);
    std::sort(img.begin(), img.end());
    line_image[l] = b.line_index(img);
    if (line_image[l] < 0) return false;
  }
  if (pa && pb) {
    std::vector<int> class_image(pa->classes().size(), -1);
    for (int l = 0; l < a.num_lines(); ++l) {
      const int ca = pa->class_of(l), cb = pb->class_of(line_image[l]);
      if (class_image[ca] < 0)
        class_image[ca] = cb;
      else if (class_image[ca] != cb)
        return false;
    }
  }
  return true;
}

inline bool is_automorphism(const IncidenceStructure& s, const Permutation& perm, const ParallelStructure* par = nullptr) {
  return is_isomorphism(s, s, perm, par, par);
}

namespace detail {

// Incidence graph: points, then lines, then parallel classes. Vertex types and
// optional point colours form the initial partition.
struct IncidenceGraph {
  int num_points = 0;
  std::vector<std::vector<int>> adj;
  std::vector<int> base_colour;

  IncidenceGraph(const IncidenceStructure& s, const ParallelStructure* par, const std::vector<int>& point_colours) {
    num_points = s.num_points();
    const int nl = s.num_lines();
    const int nc = par ? static_cast<int>(par->classes().size()) : 0;
    adj.assign(num_points + nl + nc, {});
    base_colour.assign(adj.size(), 0);
    for (int l = 0; l < nl; ++l)
      for (int a : s.line(l)) {
        adj[a].push_back(num_points + l);
        adj[num_points + l].push_back(a);
      }
    for (int c = 0; c < nc; ++c)
      for (int l : par->classes()[c]) {
        adj[num_points + l].push_back(num_points + nl + c);
        adj[num_points + nl + c].push_back(num_points + l);
      }
    // Colour 0.. for points (shifted user colours), then lines, then classes.
    int max_pc = 0;
    for (int a = 0; a < num_points; ++a) {
      base_colour[a] = point_colours.empty() ? 0 : point_colours[a];
      max_pc = std::max(max_pc, base_colour[a]);
    }
    for (int l = 0; l < nl; ++l) base_colour[num_points + l] = max_pc + 1;
    for (int c = 0; c < nc; ++c) base_colour[num_points + nl + c] = max_pc + 2;
  }
};

// Two graphs side by side, refined jointly so that colour names agree.
class PairSearch {
 public:
  PairSearch(const IncidenceGraph& left, const IncidenceGraph& right) : l_(left), r_(right) {
    nl_ = static_cast<int>(l_.adj.size());
    total_ = nl_ + static_cast<int>(r_.adj.size());
  }

  const std::vector<int>& colours() const { return colours_; }

  /// Refines the partition after individualising each (x, y) pair with a fresh shared colour.
  /// Returns false when some colour class has different sizes on the two sides.
  bool refine(const std::vector<std::pair<int, int>>& fixed) {
    colours_.assign(total_, 0);
    for (int v = 0; v < nl_; ++v) colours_[v] = l_.base_colour[v];
    for (int v = 0; v < total_ - nl_; ++v) colours_[nl_ + v] = r_.base_colour[v];
    int next = 1 + *std::max_element(colours_.begin(), colours_.end());
    for (auto [x, y] : fixed) {
      colours_[x] = next;
      colours_[nl_ + y] = next;
      ++next;
    }
    int classes = relabel_initial();
    std::vector<std::pair<std::vector<int>, int>> sig(total_);
    std::vector<int> order(total_);
    while (true) {
      for (int v = 0; v < total_; ++v) {
        auto& s = sig[v].first;
        s.clear();
        s.push_back(colours_[v]);
        const auto& nb = v < nl_ ? l_.adj[v] : r_.adj[v - nl_];
        const int off = v < nl_ ? 0 : nl_;
        for (int w : nb) s.push_back(colours_[off + w]);
        std::sort(s.begin() + 1, s.end());
        sig[v].second = v;
      }
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) { return sig[a].first < sig[b].first; });
      int c = 0;
      std::vector<int> fresh(total_);
      for (int i = 0; i < total_; ++i) {
        if (i > 0 && sig[order[i]].first != sig[order[i - 1]].first) ++c;
        fresh[order[i]] = c;
      }
      colours_ = std::move(fresh);
      if (c + 1 == classes) break;
      classes = c + 1;
    }
    return balanced(classes);
  }

  /// Colour classes as (left members, right members), indexed by colour.
  std::vector<std::pair<std::vector<int>, std::vector<int>>> cells() const {
    const int k = 1 + *std::max_element(colours_.begin(), colours_.end());
    std::vector<std::pair<std::vector<int>, std::vector<int>>> out(k);
    for (int v = 0; v < nl_; ++v) out[colours_[v]].first.push_back(v);
    for (int v = nl_; v < total_; ++v) out[colours_[v]].second.push_back(v - nl_);
    return out;
  }

 private:
  int relabel_initial() {
    std::vector<int> vals(colours_);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (auto& c : colours_) c = static_cast<int>(std::lower_bound(vals.begin(), vals.end(), c) - vals.begin());
    return static_cast<int>(vals.size());
  }

  bool balanced(int classes) const {
    std::vector<int> count(classes, 0);
    for (int v = 0; v < nl_; ++v) ++count[colours_[v]];
    for (int v = nl_; v < total_; ++v) --count[colours_[v]];
    return std::all_of(count.begin(), count.end(), [](int c) { return c == 0; });
  }

  const IncidenceGraph& l_;
  const IncidenceGraph& r_;
  int nl_ = 0, total_ = 0;
  std::vector<int> colours_;
};

// Individualisation-refinement search for one isomorphism extending `fixed`.
class IsoSearch {
 public:
  IsoSearch(const IncidenceStructure& a, const IncidenceStructure& b, const ParallelStructure* pa,
            const ParallelStructure* pb, const IncidenceGraph& ga, const IncidenceGraph& gb)
      : a_(a), b_(b), pa_(pa), pb_(pb), ga_(ga), pair_(ga, gb) {}

  std::optional<Permutation> find(std::vector<std::pair<int, int>> fixed) {
    if (!pair_.refine(fixed)) return std::nullopt;
    const auto cells = pair_.cells();
    int chosen = -1;
    for (int c = 0; c < static_cast<int>(cells.size()); ++c) {
      const auto& left = cells[c].first;
      if (left.size() > 1 && left[0] < ga_.num_points) {
        chosen = c;
        break;
      }
    }
    if (chosen < 0) {
      Permutation perm(ga_.num_points, -1);
      for (const auto& [left, right] : cells)
        if (!left.empty() && left[0] < ga_.num_points) perm[left[0]] = right[0];
      if (is_isomorphism(a_, b_, perm, pa_, pb_)) return perm;
      return std::nullopt;
    }
    const int x = cells[chosen].first[0];
    const std::vector<int> targets = cells[chosen].second;
    for (int y : targets) {
      fixed.emplace_back(x, y);
      if (auto perm = find(fixed)) return perm;
      fixed.pop_back();
    }
    return std::nullopt;
  }

  // Used to compute a base for the automorphism group.
  PairSearch& pair() { return pair_; }

 private:
  const IncidenceStructure& a_;
  const IncidenceStructure& b_;
  const ParallelStructure* pa_;
  const ParallelStructure* pb_;
  const IncidenceGraph& ga_;
  PairSearch pair_;
};

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) fail(ErrorKind::CapExceeded, "automorphism group order overflows 64 bits");
  return r;
}

inline AutomorphismGroup automorphism_search(const IncidenceStructure& s, const ParallelStructure* par,
                                             const std::vector<int>& point_colours, bool count_only) {
  if (s.num_points() > kAutomorphismPointCap)
    fail(ErrorKind::CapExceeded, "automorphism search is limited to " + std::to_string(kAutomorphismPointCap) + " points");
  if (!point_colours.empty() && static_cast<int>(point_colours.size()) != s.num_points())
    fail(ErrorKind::ShapeMismatch, "one colour per point expected");
  const IncidenceGraph g(s, par, point_colours);
  IsoSearch search(s, s, par, par, g, g);

  // Base points and the candidate cells at each level.
  std::vector<int> base;
  std::vector<std::vector<int>> level_cells;
  std::vector<std::pair<int, int>> fixed;
  while (true) {
    search.pair().refine(fixed);
    const auto cells = search.pair().cells();
    int chosen = -1;
    for (int c = 0; c < static_cast<int>(cells.size()); ++c)
      if (cells[c].first.size() > 1 && cells[c].first[0] < g.num_points) {
        chosen = c;
        break;
      }
    if (chosen < 0) break;
    base.push_back(cells[chosen].first[0]);
    level_cells.push_back(cells[chosen].first);
    fixed.emplace_back(base.back(), base.back());
  }

  AutomorphismGroup out;
  std::vector<Permutation> gens;
  for (int level = static_cast<int>(base.size()) - 1; level >= 0; --level) {
    std::vector<std::pair<int, int>> prefix;
    for (int j = 0; j < level; ++j) prefix.emplace_back(base[j], base[j]);
    std::vector<char> in_orbit(s.num_points(), 0);
    std::vector<int> orbit{base[level]};
    in_orbit[base[level]] = 1;
    auto close = [&] {
      for (std::size_t i = 0; i < orbit.size(); ++i)
        for (const auto& gperm : gens) {
          const int y = gperm[orbit[i]];
          if (!in_orbit[y]) {
            in_orbit[y] = 1;
            orbit.push_back(y);
          }
        }
    };
    close();
    for (int c : level_cells[level]) {
      if (in_orbit[c]) continue;
      auto trial = prefix;
      trial.emplace_back(base[level], c);
      if (auto perm = search.find(trial)) {
        gens.push_back(std::move(*perm));
        close();
      }
    }
    out.order = checked_mul(out.order, orbit.size());
  }
  if (!count_only) out.generators = std::move(gens);
  return out;
}

}  // namespace detail

/// Automorphism group of a partial linear space, optionally preserving point
/// colours (e.g. a hyperplane given as colour 1). Exact order and generators.
inline AutomorphismGroup automorphisms(const IncidenceStructure& s, const std::vector<int>& point_colours = {},
                                       bool count_only = false) {
  return detail::automorphism_search(s, nullptr, point_colours, count_only);
}

/// Automorphisms that also map parallel classes onto parallel classes.
inline AutomorphismGroup automorphisms(const ParallelStructure& a, const std::vector<int>& point_colours = {},
                                       bool count_only = false) {
  return detail::automorphism_search(a.base(), &a, point_colours, count_only);
}

/// Point colouring marking the members of X with 1.
inline std::vector<int> colouring_of(int num_points, const PointSet& x) {
  std::vector<int> c(num_points, 0);
  for (int a : x) c.at(a) = 1;
  return c;
}

namespace detail {

inline std::optional<Permutation> isomorphism_search(const IncidenceStructure& a, const IncidenceStructure& b,
                                                     const ParallelStructure* pa, const ParallelStructure* pb) {
  if (std::max(a.num_points(), b.num_points()) > kAutomorphismPointCap)
    fail(ErrorKind::CapExceeded, "isomorphism search is limited to " + std::to_string(kAutomorphismPointCap) + " points");
  if (a.num_points() != b.num_points() || a.num_lines() != b.num_lines()) return std::nullopt;
  if (pa && pb && pa->classes().size() != pb->classes().size()) return std::nullopt;
  const IncidenceGraph ga(a, pa, {}), gb(b, pb, {});
  return IsoSearch(a, b, pa, pb, ga, gb).find({});
}

}  // namespace detail

/// A line-preserving point bijection a -> b, or nullopt when none exists.
inline std::optional<Permutation> isomorphic(const IncidenceStructure& a, const IncidenceStructure& b) {
  return detail::isomorphism_search(a, b, nullptr, nullptr);
}

/// As above, additionally mapping parallel classes onto parallel classes.
inline std::optional<Permutation> isomorphic(const ParallelStructure& a, const ParallelStructure& b) {
  return detail::isomorphism_search(a.base(), b.base(), &a, &b);
}

}  // namespace segrelab
