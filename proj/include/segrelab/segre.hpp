#pragma once

#include <cstdlib>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "segrelab/affine.hpp"
#include "segrelab/error.hpp"
#include "segrelab/forms.hpp"
#include "segrelab/incidence.hpp"
#include "segrelab/subspace.hpp"

namespace segrelab {

inline constexpr int kMaxFactors = 3;
inline constexpr int kDefaultMaxPoints = 20000;

/// Carrier cap; SEGRELAB_MAX_POINTS overrides the default.
inline int max_points_cap() {
  if (const char* env = std::getenv("SEGRELAB_MAX_POINTS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, 1L << 30));
  }
  return kDefaultMaxPoints;
}

/// Segre product of partial linear spaces. Points are tuples coded in mixed
/// radix with factor 0 varying fastest.
class SegreProduct {
 public:
  struct LineOrigin {
    int slot;
    int anchor;  // carrier point on the line whose slot coordinate is the factor line's first point
    int factor_line;
  };

  explicit SegreProduct(std::vector<IncidenceStructure> factors, int max_points = max_points_cap())
      : factors_(std::move(factors)) {
    if (factors_.size() < 2) fail(ErrorKind::TooFewFactors, "a Segre product needs at least two factors");
    if (static_cast<int>(factors_.size()) > kMaxFactors)
      fail(ErrorKind::CapExceeded, "at most " + std::to_string(kMaxFactors) + " factors are supported");
    std::int64_t total = 1;
    for (const auto& f : factors_) {
      stride_.push_back(static_cast<int>(total));
      total *= f.num_points();
      if (total > max_points)
        fail(ErrorKind::CapExceeded, "product exceeds " + std::to_string(max_points) + " points");
    }
    num_points_ = static_cast<int>(total);

    RawIncidence raw{num_points_, {}, {}};
    for (int i = 0; i < num_factors(); ++i) {
      const auto& f = factors_[i];
      for (int a = 0; a < num_points_; ++a) {
        if (coordinate(a, i) != 0) continue;
        for (const auto& l : f.lines()) {
          Line line;
          for (int x : l) line.push_back(a + x * stride_[i]);
          raw.lines.push_back(std::move(line));
        }
      }
    }
    carrier_ = validate_pls(std::move(raw));
    origin_.reserve(carrier_.num_lines());
    for (int l = 0; l < carrier_.num_lines(); ++l) {
      const auto& pts = carrier_.line(l);
      int slot = 0;
      while (coordinate(pts[0], slot) == coordinate(pts[1], slot)) ++slot;
      const int fl = factors_[slot].line_through(coordinate(pts[0], slot), coordinate(pts[1], slot));
      origin_.push_back({slot, pts[0], fl});
    }
  }

  int num_factors() const noexcept { return static_cast<int>(factors_.size()); }
  int num_points() const noexcept { return num_points_; }
  const std::vector<IncidenceStructure>& factors() const noexcept { return factors_; }
  const IncidenceStructure& factor(int i) const { return factors_.at(i); }
  const IncidenceStructure& carrier() const noexcept { return carrier_; }
  const LineOrigin& line_origin(int l) const { return origin_.at(l); }

  int coordinate(int a, int i) const { return (a / stride_[i]) % factors_[i].num_points(); }

  std::vector<int> decode(int a) const {
    check_point(a);
    std::vector<int> t(num_factors());
    for (int i = 0; i < num_factors(); ++i) t[i] = coordinate(a, i);
    return t;
  }

  int encode(const std::vector<int>& tuple) const {
    if (static_cast<int>(tuple.size()) != num_factors()) fail(ErrorKind::IndexOutOfRange, "tuple has the wrong length");
    int a = 0;
    for (int i = 0; i < num_factors(); ++i) {
      if (tuple[i] < 0 || tuple[i] >= factors_[i].num_points())
        fail(ErrorKind::IndexOutOfRange, "tuple coordinate " + std::to_string(i) + " out of range");
      a += tuple[i] * stride_[i];
    }
    return a;
  }

  /// Replace coordinate i of point a by x.
  int subst(int a, int i, int x) const {
    check_point(a);
    check_slot(i);
    if (x < 0 || x >= factors_[i].num_points()) fail(ErrorKind::IndexOutOfRange, "factor point out of range");
    return a + (x - coordinate(a, i)) * stride_[i];
  }

  PointSet subst(int a, int i, const PointSet& xs) const {
    PointSet out;
    for (int x : xs) out.push_back(subst(a, i, x));
    std::sort(out.begin(), out.end());
    return out;
  }

  /// The slice subst(a, i, S_i).
  PointSet slice_points(int a, int i) const {
    PointSet out;
    for (int x = 0; x < factors_.at(i).num_points(); ++x) out.push_back(subst(a, i, x));
    return out;
  }

  /// One point per slice in direction i: those with coordinate i equal to 0.
  std::vector<int> slice_anchors(int i) const {
    check_slot(i);
    std::vector<int> out;
    for (int a = 0; a < num_points_; ++a)
      if (coordinate(a, i) == 0) out.push_back(a);
    return out;
  }

  void check_slot(int i) const {
    if (i < 0 || i >= num_factors()) fail(ErrorKind::IndexOutOfRange, "factor index out of range");
  }
  void check_point(int a) const {
    if (a < 0 || a >= num_points_) fail(ErrorKind::IndexOutOfRange, "product point out of range");
  }

 private:
  std::vector<IncidenceStructure> factors_;
  std::vector<int> stride_;
  int num_points_ = 0;
  IncidenceStructure carrier_;
  std::vector<LineOrigin> origin_;
};

// ---------------------------------------------------------------------------
// Hyperplane handles

enum class Provenance { Enumerated, DegenerateProduct, Form, WitnessW, Intersection, Correlation, PolarForm };

inline std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Enumerated:
      return "enumerated";
    case Provenance::DegenerateProduct:
      return "degenerate_product";
    case Provenance::Form:
      return "form";
    case Provenance::WitnessW:
      return "witness_W";
    case Provenance::Intersection:
      return "intersection";
    case Provenance::Correlation:
      return "correlation";
    case Provenance::PolarForm:
      return "polar_form";
  }
  return "?";
}

/// A verified hyperplane of some structure, with how it was built.
struct HyperplaneHandle {
  PointSet points;
  Provenance provenance = Provenance::Enumerated;
};

inline HyperplaneHandle make_handle(const IncidenceStructure& s, PointSet x, Provenance prov) {
  x = normalized(std::move(x));
  require_hyperplane(s, x);
  return {std::move(x), prov};
}

/// Zero locus of a form covering the whole space.
struct AllOfSpace {};

/// The named hypothesis clause that did not hold.
struct HypothesisFailure {
  std::string clause;
};

// ---------------------------------------------------------------------------
// Slices

/// {x in S_i : subst(a, i, x) in X}.
inline PointSet slice(const SegreProduct& P, const std::vector<char>& in_x, int a, int i) {
  PointSet out;
  for (int x = 0; x < P.factor(i).num_points(); ++x)
    if (in_x[P.subst(a, i, x)]) out.push_back(x);
  return out;
}

inline PointSet slice(const SegreProduct& P, const PointSet& x, int a, int i) {
  return slice(P, membership(P.num_points(), x), a, i);
}

/// Every slice is a hyperplane of its factor or the whole factor, and some slice is proper.
inline bool slice_criterion(const SegreProduct& P, const PointSet& x) {
  const auto in_x = membership(P.num_points(), x);
  bool some_proper = false;
  for (int i = 0; i < P.num_factors(); ++i) {
    const int size = P.factor(i).num_points();
    for (int a : P.slice_anchors(i)) {
      std::vector<char> m(size);
      int count = 0;
      for (int y = 0; y < size; ++y) count += (m[y] = in_x[P.subst(a, i, y)]);
      if (count == size) continue;
      if (!is_hyperplane_mask(P.factor(i), m)) return false;
      some_proper = true;
    }
  }
  return some_proper;
}

/// No slice of the hyperplane is a whole factor.
inline bool is_nondegenerate(const SegreProduct& P, const PointSet& h) {
  require_hyperplane(P.carrier(), h);
  const auto in_h = membership(P.num_points(), h);
  for (int i = 0; i < P.num_factors(); ++i)
    for (int a : P.slice_anchors(i))
      if (static_cast<int>(slice(P, in_h, a, i).size()) == P.factor(i).num_points()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Constructions

/// Union over i of S_1 x ... x H_i x ... x S_n.
inline HyperplaneHandle degenerate_product_hyperplane(const SegreProduct& P, const std::vector<PointSet>& hs) {
  if (static_cast<int>(hs.size()) != P.num_factors()) fail(ErrorKind::WrongArity, "one hyperplane per factor expected");
  std::vector<std::vector<char>> in(P.num_factors());
  for (int i = 0; i < P.num_factors(); ++i) {
    require_hyperplane(P.factor(i), hs[i]);
    in[i] = membership(P.factor(i).num_points(), hs[i]);
  }
  PointSet x;
  for (int a = 0; a < P.num_points(); ++a)
    for (int i = 0; i < P.num_factors(); ++i)
      if (in[i][P.coordinate(a, i)]) {
        x.push_back(a);
        break;
      }
  return make_handle(P.carrier(), std::move(x), Provenance::DegenerateProduct);
}

namespace detail {

inline void require_labels(const IncidenceStructure& s, int dim, int arity, int p) {
  if (!s.has_labels()) fail(ErrorKind::ShapeMismatch, "factor carries no subspace labels");
  const auto& l = s.label(0);
  if (l.ambient_dim() != dim || l.dim() != arity || l.p() != p)
    fail(ErrorKind::ShapeMismatch, "factor labels do not match the form's segment shape");
}

}  // namespace detail

/// Points of a labelled space where a single-segment form vanishes.
inline PointSet form_zero_locus(const IncidenceStructure& s, const MultiForm& eta) {
  if (eta.num_segments() != 1) fail(ErrorKind::ShapeMismatch, "single-segment form expected");
  detail::require_labels(s, eta.segment_dims()[0], eta.segment_arities()[0], eta.p());
  PointSet out;
  for (int a = 0; a < s.num_points(); ++a)
    if (eval_multiform(eta, {s.label(a).basis()}) == 0) out.push_back(a);
  return out;
}

/// Zero locus of mu evaluated on canonical bases of the factor labels.
inline PointSet product_form_zero_locus(const SegreProduct& P, const MultiForm& mu) {
  if (mu.num_segments() != P.num_factors()) fail(ErrorKind::ShapeMismatch, "form has the wrong number of segments");
  for (int i = 0; i < P.num_factors(); ++i)
    detail::require_labels(P.factor(i), mu.segment_dims()[i], mu.segment_arities()[i], mu.p());
  PointSet out;
  std::vector<Matrix> u(P.num_factors());
  for (int a = 0; a < P.num_points(); ++a) {
    for (int i = 0; i < P.num_factors(); ++i) u[i] = P.factor(i).label(P.coordinate(a, i)).basis();
    if (eval_multiform(mu, u) == 0) out.push_back(a);
  }
  return out;
}

using FormHyperplane = std::variant<HyperplaneHandle, AllOfSpace>;

inline FormHyperplane hyperplane_from_form(const SegreProduct& P, const MultiForm& mu) {
  auto x = product_form_zero_locus(P, mu);
  if (static_cast<int>(x.size()) == P.num_points()) return AllOfSpace{};
  return make_handle(P.carrier(), std::move(x), Provenance::Form);
}

/// Single-space version (n = 1): H(mu) in a labelled Grassmann space.
inline std::variant<HyperplaneHandle, AllOfSpace> hyperplane_from_form(const IncidenceStructure& g,
                                                                       const MultiForm& mu) {
  auto x = form_zero_locus(g, mu);
  if (static_cast<int>(x.size()) == g.num_points()) return AllOfSpace{};
  return make_handle(g, std::move(x), Provenance::Form);
}

/// H(W): the k-subspaces meeting W non-trivially, in a labelled Grassmann space.
inline HyperplaneHandle witness_hyperplane_W(const IncidenceStructure& g, const Subspace& w) {
  if (!g.has_labels()) fail(ErrorKind::ShapeMismatch, "Grassmann space labels required");
  const int n = g.label(0).ambient_dim(), k = g.label(0).dim();
  if (w.ambient_dim() != n || w.dim() != n - k) fail(ErrorKind::InvalidDimension, "W must have codimension k");
  PointSet x;
  for (int a = 0; a < g.num_points(); ++a)
    if (meet(g.label(a), w).dim() > 0) x.push_back(a);
  return make_handle(g, std::move(x), Provenance::WitnessW);
}

/// H_{k1,k2}(V) in grassmann(n,k1) x grassmann(n,k2), k1 + k2 = n.
inline HyperplaneHandle intersection_hyperplane(const SegreProduct& P) {
  if (P.num_factors() != 2) fail(ErrorKind::WrongArity, "two Grassmann factors expected");
  const auto& f1 = P.factor(0);
  const auto& f2 = P.factor(1);
  if (!f1.has_labels() || !f2.has_labels()) fail(ErrorKind::ShapeMismatch, "Grassmann space labels required");
  const int n = f1.label(0).ambient_dim(), k1 = f1.label(0).dim(), k2 = f2.label(0).dim();
  if (f2.label(0).ambient_dim() != n || k1 + k2 != n || k1 <= 1 || k1 >= n - 1)
    fail(ErrorKind::InvalidDimension, "need 1 < k1 < n-1 and k1 + k2 = n");
  PointSet x;
  for (int a = 0; a < P.num_points(); ++a)
    if (meet(f1.label(P.coordinate(a, 0)), f2.label(P.coordinate(a, 1))).dim() > 0) x.push_back(a);
  return make_handle(P.carrier(), std::move(x), Provenance::Intersection);
}

using PolarHyperplane = std::variant<HyperplaneHandle, HypothesisFailure>;

/// H(mu) restricted to a product of polar Grassmann spaces, when the stated
/// hypotheses hold; otherwise the first violated clause.
inline PolarHyperplane polar_product_hyperplane(const SegreProduct& P, const MultiForm& mu) {
  const auto x = product_form_zero_locus(P, mu);
  if (static_cast<int>(x.size()) == P.num_points())
    return HypothesisFailure{"containment: the product of isotropic sets lies inside H(mu)"};
  for (int i = 0; i < mu.num_segments(); ++i)
    if (!segment_nonzero(mu, i)) return HypothesisFailure{"non-zero on segment " + std::to_string(i)};
  const auto in_x = membership(P.num_points(), x);
  for (int i = 0; i < P.num_factors(); ++i)
    for (int a : P.slice_anchors(i)) {
      const auto s = slice(P, in_x, a, i);
      if (s.size() < 2)
        return HypothesisFailure{"slice in factor " + std::to_string(i) + " at point " + std::to_string(a) +
                                 (s.empty() ? " is empty" : " is a single point")};
    }
  return make_handle(P.carrier(), x, Provenance::PolarForm);
}

// ---------------------------------------------------------------------------
// Two-factor correlations and forms

struct Correlation {
  std::vector<PointSet> delta1;  // a1 -> slice in factor 2
  std::vector<PointSet> delta2;  // a2 -> slice in factor 1
  bool compatible = false;       // delta2(a2) = {a1 : a2 in delta1(a1)}
  bool reconstructs = false;     // H = {(a1, a2) : a2 in delta1(a1)}
};

inline Correlation correlation_of(const SegreProduct& P, const PointSet& h) {
  if (P.num_factors() != 2) fail(ErrorKind::WrongArity, "correlations need exactly two factors");
  require_hyperplane(P.carrier(), h);
  const auto in_h = membership(P.num_points(), h);
  const int n1 = P.factor(0).num_points(), n2 = P.factor(1).num_points();
  Correlation c;
  for (int a1 = 0; a1 < n1; ++a1) c.delta1.push_back(slice(P, in_h, P.encode({a1, 0}), 1));
  for (int a2 = 0; a2 < n2; ++a2) c.delta2.push_back(slice(P, in_h, P.encode({0, a2}), 0));
  c.compatible = true;
  for (int a2 = 0; a2 < n2; ++a2) {
    PointSet back;
    for (int a1 = 0; a1 < n1; ++a1)
      if (std::binary_search(c.delta1[a1].begin(), c.delta1[a1].end(), a2)) back.push_back(a1);
    c.compatible = c.compatible && back == c.delta2[a2];
  }
  PointSet rebuilt;
  for (int a1 = 0; a1 < n1; ++a1)
    for (int a2 : c.delta1[a1]) rebuilt.push_back(P.encode({a1, a2}));
  std::sort(rebuilt.begin(), rebuilt.end());
  c.reconstructs = rebuilt == h;
  return c;
}

/// Bilinear form xi on V1 x V2 with H = {(<x>, <y>) : x^T xi y = 0}, recovered
/// by solving the linear system given by the points of H. Normalised so the
/// first nonzero entry is 1.
inline Matrix sesquilinear_from_hyperplane(const SegreProduct& P, const PointSet& h) {
  if (P.num_factors() != 2) fail(ErrorKind::WrongArity, "two projective factors expected");
  require_hyperplane(P.carrier(), h);
  const auto& f1 = P.factor(0);
  const auto& f2 = P.factor(1);
  if (!f1.has_labels() || !f2.has_labels() || f1.label(0).dim() != 1 || f2.label(0).dim() != 1)
    fail(ErrorKind::ShapeMismatch, "projective factors with point labels required");
  const int p = f1.label(0).p(), d1 = f1.label(0).ambient_dim(), d2 = f2.label(0).ambient_dim();
  const PrimeField f(p);
  Matrix system(0, d1 * d2);
  std::vector<Elem> row(d1 * d2);
  for (int a : h) {
    const auto x = f1.label(P.coordinate(a, 0)).basis().row(0);
    const auto y = f2.label(P.coordinate(a, 1)).basis().row(0);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d2; ++j) row[i * d2 + j] = f.mul(x[i], y[j]);
    system.append_row(row);
  }
  const Matrix kernel = nullspace(system, f);
  // Any kernel vector whose zero locus is exactly H; scan projectively when the kernel is not a line.
  std::optional<Matrix> found;
  const auto try_vector = [&](const std::vector<Elem>& v) {
    Matrix xi(d1, d2);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d2; ++j) xi(i, j) = v[i * d2 + j];
    if (product_form_zero_locus(P, MultiForm::bilinear(xi, p)) == h) found = xi;
    return found.has_value();
  };
  if (kernel.rows() > 0) {
    for_each_vector(kernel.rows(), p, [&](const std::vector<Elem>& c) {
      if (found) return;
      bool nonzero = false, leading_one = false;
      for (Elem e : c)
        if (e != 0) {
          nonzero = true;
          leading_one = e == 1;
          break;
        }
      if (!nonzero || !leading_one) return;
      std::vector<Elem> v(d1 * d2, 0);
      for (int r = 0; r < kernel.rows(); ++r)
        for (int t = 0; t < d1 * d2; ++t) v[t] = f.add(v[t], f.mul(c[r], kernel(r, t)));
      try_vector(v);
    });
  }
  if (!found) fail(ErrorKind::NoFormExists, "no bilinear form has this hyperplane as its zero locus");
  Matrix xi = *found;
  Elem lead = 0;
  for (Elem e : xi.data())
    if (e != 0) {
      lead = e;
      break;
    }
  const Elem inv = f.inv(lead);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j) xi(i, j) = f.mul(xi(i, j), inv);
  return xi;
}

// ---------------------------------------------------------------------------
// Parallelisms on products of partial affine spaces

enum class ProductParallel {
  Any,       // same slot, parallel factor lines, other coordinates free
  Pointwise  // same slot, same other coordinates, parallel factor lines
};

/// Parallelism on the product of the factor parallel structures (whose bases
/// must be P's factors).
inline ParallelStructure product_parallelism(const SegreProduct& P, const std::vector<ParallelStructure>& pars,
                                             ProductParallel kind) {
  if (static_cast<int>(pars.size()) != P.num_factors()) fail(ErrorKind::WrongArity, "one parallelism per factor");
  for (int i = 0; i < P.num_factors(); ++i)
    if (!(pars[i].base() == P.factor(i))) fail(ErrorKind::ShapeMismatch, "parallelism base differs from factor");
  std::map<std::tuple<int, int, int>, int> ids;
  std::vector<int> cls(P.carrier().num_lines());
  for (int l = 0; l < P.carrier().num_lines(); ++l) {
    const auto& o = P.line_origin(l);
    const int others = kind == ProductParallel::Any ? -1 : P.subst(o.anchor, o.slot, 0);
    const auto key = std::make_tuple(o.slot, pars[o.slot].class_of(o.factor_line), others);
    cls[l] = ids.emplace(key, static_cast<int>(ids.size())).first->second;
  }
  return ParallelStructure::from_class_ids(P.carrier(), cls);
}

}  // namespace segrelab
