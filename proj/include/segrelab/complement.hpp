#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "segrelab/affine.hpp"
#include "segrelab/error.hpp"
#include "segrelab/incidence.hpp"
#include "segrelab/segre.hpp"

namespace segrelab {

/// Complement of a hyperplane of a Segre product.
inline AffinizedStructure affinize(const SegreProduct& P, const PointSet& h) { return affinize(P.carrier(), h); }

/// The factor complement M_i minus the slice of H through a.
inline AffinizedStructure slice_complement(const SegreProduct& P, const PointSet& h, int a, int i) {
  return affinize(P.factor(i), slice(P, h, a, i));
}

namespace detail {

[[noreturn]] inline void hypothesis(const std::string& what) { fail(ErrorKind::HypothesisFailed, what); }

// Gates shared by the incidence-only parallelism and the covering.
inline void require_product_hypotheses(const SegreProduct& P, const PointSet& h, bool need_strong_connectivity) {
  if (!is_nondegenerate(P, h)) hypothesis("hyperplane is degenerate");
  for (int i = 0; i < P.num_factors(); ++i) {
    const auto& f = P.factor(i);
    if (min_line_size(f) < 4) hypothesis("factor " + std::to_string(i) + " has lines with fewer than 4 points");
    if (!is_veblenian(f) || !is_gamma(f)) hypothesis("factor " + std::to_string(i) + " is not a Veblenian gamma space");
    if (!need_strong_connectivity) continue;
    for (int a : P.slice_anchors(i))
      if (!is_strongly_connected(slice_complement(P, h, a, i).structure()))
        hypothesis("slice complement in factor " + std::to_string(i) + " at point " + std::to_string(a) +
                   " is not strongly connected");
  }
}

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace detail

/// Component id per line of s: lines are linked when some chain of maximal
/// strong subspaces, consecutive ones sharing a line, joins them.
inline std::vector<int> strong_chain_components(const IncidenceStructure& s) {
  const auto subs = strong_subspaces(s, true);
  detail::DisjointSets ds(s.num_lines());
  for (const auto& y : subs) {
    const auto inside = lines_inside(s, y);
    for (std::size_t t = 1; t < inside.size(); ++t) ds.unite(inside[0], inside[t]);
  }
  std::vector<int> out(s.num_lines());
  for (int l = 0; l < s.num_lines(); ++l) out[l] = ds.find(l);
  return out;
}

/// Decides the natural parallelism of a product hyperplane complement from
/// incidence alone: within a chain component by the Veblen relation, across
/// components by the quadrangle relation.
class NaturalParallelDecider {
 public:
  NaturalParallelDecider(const SegreProduct& P, const AffinizedStructure& a) : a_(&a) {
    if (!(a.ambient == P.carrier())) fail(ErrorKind::ShapeMismatch, "complement is not taken in this product");
    detail::require_product_hypotheses(P, a.removed, true);
    const auto& s = a.structure();
    component_ = strong_chain_components(s);
    relations_ = parallel_relations(s);
  }

  bool same_component(int l1, int l2) const { return component_.at(l1) == component_.at(l2); }

  bool operator()(int l1, int l2) const {
    if (same_component(l1, l2)) return l1 == l2 || relations_.veblen(l1, l2);
    return relations_.quadr(l1, l2);
  }

  /// First line pair where the decision differs from the direction map.
  std::optional<std::pair<int, int>> first_disagreement() const {
    const int n = a_->structure().num_lines();
    for (int l1 = 0; l1 < n; ++l1)
      for (int l2 = l1; l2 < n; ++l2)
        if ((*this)(l1, l2) != a_->carrier.parallel(l1, l2)) return std::make_pair(l1, l2);
    return std::nullopt;
  }

  const ParallelRelations& relations() const noexcept { return relations_; }

 private:
  const AffinizedStructure* a_;
  std::vector<int> component_;
  ParallelRelations relations_;
};

struct CoveringMember {
  int slot;
  int anchor;       // slice representative: coordinate `slot` is 0
  PointSet points;  // complement point indices
};

/// The family subst(a, i, X) with X a maximal strong subspace of a factor
/// slice complement, in complement coordinates.
inline std::vector<CoveringMember> covering(const SegreProduct& P, const AffinizedStructure& a) {
  if (!(a.ambient == P.carrier())) fail(ErrorKind::ShapeMismatch, "complement is not taken in this product");
  detail::require_product_hypotheses(P, a.removed, false);
  std::vector<CoveringMember> out;
  for (int i = 0; i < P.num_factors(); ++i)
    for (int anchor : P.slice_anchors(i)) {
      const auto r = slice_complement(P, a.removed, anchor, i);
      for (const auto& x : strong_subspaces(r.structure(), true)) {
        CoveringMember m{i, anchor, {}};
        for (int y : x) m.points.push_back(a.from_ambient[P.subst(anchor, i, r.to_ambient[y])]);
        std::sort(m.points.begin(), m.points.end());
        out.push_back(std::move(m));
      }
    }
  return out;
}

/// Complement points missed by the covering.
inline PointSet covering_gaps(const AffinizedStructure& a, const std::vector<CoveringMember>& c) {
  std::vector<char> hit(a.structure().num_points(), 0);
  for (const auto& m : c)
    for (int x : m.points) hit[x] = 1;
  PointSet out;
  for (int x = 0; x < static_cast<int>(hit.size()); ++x)
    if (!hit[x]) out.push_back(x);
  return out;
}

}  // namespace segrelab
