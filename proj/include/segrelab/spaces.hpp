#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "segrelab/affine.hpp"
#include "segrelab/error.hpp"
#include "segrelab/forms.hpp"
#include "segrelab/incidence.hpp"
#include "segrelab/subspace.hpp"

namespace segrelab {

enum class SpaceKind { Projective, Grassmann, Polar, PolarGrassmann, Affine };

struct SpaceSpec {
  SpaceKind kind = SpaceKind::Projective;
  int p = 2;
  int n = 3;
  int k = 1;
  std::optional<BilinearForm> form;
};

namespace detail {

// Pencils inside a (k+1)-space, in local coordinates: for each (k-1)-subspace H,
// the k-subspaces containing it.
struct LocalPencils {
  std::vector<Matrix> points;               // bases of local k-subspaces
  std::vector<std::vector<int>> pencils;    // indices into points
};

inline LocalPencils local_pencils(int k, int p) {
  LocalPencils out;
  const auto ks = enumerate_subspaces(k + 1, k, p);
  for (const auto& u : ks) out.points.push_back(u.basis());
  for (const auto& h : enumerate_subspaces(k + 1, k - 1, p)) {
    std::vector<int> pencil;
    for (int i = 0; i < static_cast<int>(ks.size()); ++i)
      if (ks[i].contains(h)) pencil.push_back(i);
    out.pencils.push_back(std::move(pencil));
  }
  return out;
}

inline Subspace to_global(const Matrix& local, const Subspace& b) {
  return Subspace(b.p(), b.ambient_dim(), multiply(local, b.basis(), PrimeField(b.p())));
}

// Points are the given k-subspaces; lines are the pencils inside every B in `tops`.
inline IncidenceStructure pencil_structure(std::vector<Subspace> points, const std::vector<Subspace>& tops, int k,
                                           int p) {
  std::map<Subspace, int> index;
  for (int i = 0; i < static_cast<int>(points.size()); ++i) index.emplace(points[i], i);
  RawIncidence raw{static_cast<int>(points.size()), {}, {}};
  const LocalPencils local = local_pencils(k, p);
  for (const auto& b : tops) {
    std::vector<int> global(local.points.size());
    for (std::size_t i = 0; i < local.points.size(); ++i) global[i] = index.at(to_global(local.points[i], b));
    for (const auto& pencil : local.pencils) {
      Line l;
      for (int i : pencil) l.push_back(global[i]);
      std::sort(l.begin(), l.end());
      raw.lines.push_back(std::move(l));
    }
  }
  raw.labels = std::move(points);
  return validate_pls(std::move(raw));
}

}  // namespace detail

/// Grassmann space of k-subspaces of GF(p)^n with k-pencils as lines.
inline IncidenceStructure grassmann_space(int n, int k, int p) {
  if (k < 1 || k > n - 1) fail(ErrorKind::InvalidDimension, "grassmann space needs 1 <= k <= n-1");
  return detail::pencil_structure(enumerate_subspaces(n, k, p), enumerate_subspaces(n, k + 1, p), k, p);
}

/// PG(n-1, p): points are 1-subspaces of GF(p)^n.
inline IncidenceStructure projective_space(int n, int p) {
  if (n < 2) fail(ErrorKind::InvalidDimension, "projective space needs vector dimension >= 2");
  return grassmann_space(n, 1, p);
}

inline std::vector<Subspace> isotropic_subspaces(const BilinearForm& xi, int k) {
  std::vector<Subspace> out;
  for (auto& u : enumerate_subspaces(xi.dim(), k, xi.p()))
    if (xi.is_isotropic(u)) out.push_back(std::move(u));
  return out;
}

/// Polar Grassmann space of isotropic k-subspaces. When no isotropic
/// (k+1)-subspace exists, the lines are the sets {U in Q_k : H < U} for
/// H in Q_{k-1} that span a (k+1)-space (the dual polar case).
inline IncidenceStructure polar_grassmann_space(const BilinearForm& xi, int k) {
  const int n = xi.dim(), p = xi.p();
  if (k < 1 || k > n - 1) fail(ErrorKind::InvalidDimension, "polar grassmann space needs 1 <= k <= n-1");
  auto points = isotropic_subspaces(xi, k);
  if (points.empty()) fail(ErrorKind::EmptyPointSet, "no isotropic " + std::to_string(k) + "-subspaces");
  const auto tops = isotropic_subspaces(xi, k + 1);
  if (!tops.empty()) return detail::pencil_structure(std::move(points), tops, k, p);

  RawIncidence raw{static_cast<int>(points.size()), {}, {}};
  for (const auto& h : isotropic_subspaces(xi, k - 1)) {
    Line l;
    Subspace span = Subspace::zero(p, n);
    for (int i = 0; i < static_cast<int>(points.size()); ++i)
      if (points[i].contains(h)) {
        l.push_back(i);
        span = join(span, points[i]);
      }
    if (l.size() >= 2 && span.dim() == k + 1) raw.lines.push_back(std::move(l));
  }
  raw.labels = std::move(points);
  return validate_pls(std::move(raw));
}

/// Polar space of the form: isotropic points and isotropic lines.
inline IncidenceStructure polar_space(const BilinearForm& xi) { return polar_grassmann_space(xi, 1); }

/// Points of PG(n-1, p) on the hyperplane x_0 = 0.
inline PointSet coordinate_hyperplane(const IncidenceStructure& pg) {
  PointSet h;
  for (int a = 0; a < pg.num_points(); ++a)
    if (pg.label(a).basis()(0, 0) == 0) h.push_back(a);
  return h;
}

/// AG(n-1, p) as the complement of x_0 = 0 in PG(n-1, p), with its direction map.
inline AffinizedStructure affine_complement(int n, int p) {
  const auto pg = projective_space(n, p);
  return affinize(pg, coordinate_hyperplane(pg));
}

/// AG(n-1, p) with parallel classes = directions.
inline ParallelStructure affine_space(int n, int p) { return affine_complement(n, p).carrier; }

/// A structure together with a distinguished hyperplane candidate.
struct StructureWithHyperplane {
  IncidenceStructure structure;
  PointSet hyperplane;
};

/// PG(3,p) with L = <e0,e1>, H = {x3 = 0}, M = <e2,e3> and f(<s e0 + t e1>) =
/// <s e2 + t e3>; lines are the joins a f(a) together with all lines missing L.
inline StructureWithHyperplane ruled_space_example(int p) {
  const auto pg = projective_space(4, p);
  const PrimeField f(p);
  const Subspace l(p, 4, Matrix::from_rows({{1, 0, 0, 0}, {0, 1, 0, 0}}, 4));
  std::map<Subspace, int> index;
  for (int a = 0; a < pg.num_points(); ++a) index.emplace(pg.label(a), a);
  RawIncidence raw{pg.num_points(), {}, {}};
  for (const auto& v : projective_points(2, p)) {
    const int a = index.at(Subspace(p, 4, Matrix(1, 4, {v[0], v[1], 0, 0})));
    const int b = index.at(Subspace(p, 4, Matrix(1, 4, {0, 0, v[0], v[1]})));
    raw.lines.push_back(pg.line(pg.line_through(a, b)));
  }
  for (const auto& line : pg.lines()) {
    bool misses = true;
    for (int a : line) misses = misses && !l.contains(pg.label(a));
    if (misses) raw.lines.push_back(line);
  }
  raw.labels = pg.labels();
  PointSet h;
  for (int a = 0; a < pg.num_points(); ++a)
    if (pg.label(a).basis()(0, 3) == 0) h.push_back(a);
  return {validate_pls(std::move(raw)), std::move(h)};
}

/// Two projective k-subspaces of PG(k+1,p) meeting in a (k-1)-subspace: the
/// restriction of PG to their union, with H their intersection.
inline StructureWithHyperplane two_subspaces_example(int k, int p) {
  if (k < 2) fail(ErrorKind::InvalidDimension, "the meet must be at least a line (k >= 2)");
  const int n = k + 2;
  const auto pg = projective_space(n, p);
  PointSet both, h;
  for (int a = 0; a < pg.num_points(); ++a) {
    const auto& b = pg.label(a).basis();
    const bool in1 = b(0, n - 1) == 0, in2 = b(0, n - 2) == 0;
    if (in1 || in2) both.push_back(a);
    if (in1 && in2) h.push_back(a);
  }
  auto r = induced(pg, both);
  return {std::move(r.structure), r.map_set(h)};
}

inline IncidenceStructure build_space(const SpaceSpec& spec) {
  switch (spec.kind) {
    case SpaceKind::Projective:
      return projective_space(spec.n, spec.p);
    case SpaceKind::Grassmann:
      return grassmann_space(spec.n, spec.k, spec.p);
    case SpaceKind::Polar:
    case SpaceKind::PolarGrassmann: {
      const BilinearForm xi = spec.form ? *spec.form : BilinearForm::symplectic(spec.n, spec.p);
      if (xi.dim() != spec.n) fail(ErrorKind::ShapeMismatch, "form dimension differs from n");
      return polar_grassmann_space(xi, spec.kind == SpaceKind::Polar ? 1 : spec.k);
    }
    case SpaceKind::Affine:
      break;
  }
  fail(ErrorKind::InvalidDimension, "affine spaces carry a parallelism; use affine_space");
}

}  // namespace segrelab
