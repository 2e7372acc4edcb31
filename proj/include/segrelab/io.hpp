#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "segrelab/complement.hpp"
#include "segrelab/error.hpp"
#include "segrelab/incidence.hpp"
#include "segrelab/segre.hpp"
#include "segrelab/spaces.hpp"

namespace segrelab {

using Json = nlohmann::ordered_json;

/// A structure as stored on disk: incidence plus an optional parallelism.
struct IncidenceFile {
  IncidenceStructure structure;
  std::optional<ParallelStructure> parallel;
};

// ---------------------------------------------------------------------------
// Incidence JSON

inline Json labels_to_json(const IncidenceStructure& s) {
  if (!s.has_labels()) return nullptr;
  const auto& first = s.label(0);
  Json bases = Json::array();
  for (const auto& u : s.labels()) {
    Json rows = Json::array();
    for (int r = 0; r < u.dim(); ++r) {
      const auto row = u.basis().row(r);
      rows.push_back(std::vector<Elem>(row.begin(), row.end()));
    }
    bases.push_back(std::move(rows));
  }
  return Json{{"p", first.p()}, {"ambient_dim", first.ambient_dim()}, {"bases", std::move(bases)}};
}

/// Canonical form: line arrays increasing, lines sorted, classes sorted.
inline Json to_json(const IncidenceStructure& s, const ParallelStructure* par = nullptr) {
  Json out;
  out["points"] = s.num_points();
  out["lines"] = s.lines();
  if (par) {
    out["parallel_classes"] = par->classes();  // already canonical
  } else {
    out["parallel_classes"] = nullptr;
  }
  out["labels"] = labels_to_json(s);
  return out;
}

inline Json to_json(const IncidenceFile& f) { return to_json(f.structure, f.parallel ? &*f.parallel : nullptr); }

namespace detail {

[[noreturn]] inline void schema_error(const std::string& where, const std::string& what) {
  fail(ErrorKind::ParseError, where + ": " + what);
}

inline std::string location(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline const Json& require(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) schema_error(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(where, "missing key \"" + key + "\"");
  return *it;
}

inline int as_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) schema_error(where, "expected an integer");
  return j.get<int>();
}

inline int int_field(const Json& j, const std::string& key, const std::string& where) {
  return as_int(require(j, key, where), where + "." + key);
}

inline int int_field_or(const Json& j, const std::string& key, int fallback, const std::string& where) {
  auto it = j.find(key);
  return it == j.end() ? fallback : as_int(*it, where + "." + key);
}

inline std::vector<std::vector<int>> int_matrix(const Json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array of arrays");
  std::vector<std::vector<int>> out;
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string at = where + "[" + std::to_string(r) + "]";
    if (!j[r].is_array()) schema_error(at, "expected an array");
    std::vector<int> row;
    for (std::size_t c = 0; c < j[r].size(); ++c) row.push_back(as_int(j[r][c], at + "[" + std::to_string(c) + "]"));
    out.push_back(std::move(row));
  }
  return out;
}

inline Matrix field_matrix(const Json& j, int p, const std::string& where) {
  const auto rows = int_matrix(j, where);
  if (rows.empty()) schema_error(where, "matrix has no rows");
  std::vector<std::vector<Elem>> reduced;
  for (const auto& r : rows) {
    std::vector<Elem> e;
    for (int v : r) e.push_back(static_cast<Elem>(((v % p) + p) % p));
    reduced.push_back(std::move(e));
  }
  return Matrix::from_rows(reduced, static_cast<int>(reduced[0].size()));
}

inline PointSet point_list(const Json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array of point indices");
  PointSet out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_int(j[i], where + "[" + std::to_string(i) + "]"));
  return normalized(std::move(out));
}

inline Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::string msg = e.what();
    if (auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    fail(ErrorKind::ParseError, location(text, e.byte) + ": " + msg);
  }
}

}  // namespace detail

inline IncidenceFile incidence_from_json(const Json& j) {
  const std::string where = "$";
  RawIncidence raw;
  raw.num_points = detail::int_field(j, "points", where);
  raw.lines = detail::int_matrix(detail::require(j, "lines", where), where + ".lines");
  if (auto it = j.find("labels"); it != j.end() && !it->is_null()) {
    const std::string at = where + ".labels";
    const int p = detail::int_field(*it, "p", at);
    const int n = detail::int_field(*it, "ambient_dim", at);
    const auto& bases = detail::require(*it, "bases", at);
    if (!bases.is_array() || static_cast<int>(bases.size()) != raw.num_points)
      detail::schema_error(at + ".bases", "expected one basis per point");
    for (std::size_t a = 0; a < bases.size(); ++a)
      raw.labels.emplace_back(p, n, detail::field_matrix(bases[a], p, at + ".bases[" + std::to_string(a) + "]"));
  }
  IncidenceFile out{validate_pls(std::move(raw)), std::nullopt};
  if (auto it = j.find("parallel_classes"); it != j.end() && !it->is_null()) {
    auto classes = detail::int_matrix(*it, where + ".parallel_classes");
    // line indices in the file refer to its own line order, which validation may sort
    const auto raw_lines = detail::int_matrix(j["lines"], where + ".lines");
    std::vector<int> ids(out.structure.num_lines(), -1);
    for (std::size_t c = 0; c < classes.size(); ++c)
      for (int l : classes[c]) {
        if (l < 0 || l >= static_cast<int>(raw_lines.size()))
          detail::schema_error(where + ".parallel_classes", "line index " + std::to_string(l) + " out of range");
        Line sorted = raw_lines[l];
        std::sort(sorted.begin(), sorted.end());
        const int idx = out.structure.line_index(sorted);
        if (ids[idx] >= 0) detail::schema_error(where + ".parallel_classes", "line listed twice");
        ids[idx] = static_cast<int>(c);
      }
    for (int id : ids)
      if (id < 0) detail::schema_error(where + ".parallel_classes", "classes do not cover every line");
    out.parallel = ParallelStructure::from_class_ids(out.structure, ids);
  }
  return out;
}

inline IncidenceFile parse_incidence(const std::string& text) { return incidence_from_json(detail::parse_text(text)); }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::ParseError, "cannot write " + path);
  out << text;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Build configurations
//
//   {"kind": "projective" | "grassmann" | "polar" | "polar_grassmann" | "affine",
//    "n": 3, "p": 2, "k": 1, "form": [[...]]}
//   {"kind": "product", "factors": [<space>, ...],
//    "remove": {"form": [[...]]} | {"factor_hyperplanes": [[...], ...]} | {"points": [...]}}
// A space may also carry "remove": {"points": [...]}.

namespace detail {

inline std::optional<SpaceKind> parse_space_kind(const std::string& s) {
  if (s == "projective") return SpaceKind::Projective;
  if (s == "grassmann") return SpaceKind::Grassmann;
  if (s == "polar") return SpaceKind::Polar;
  if (s == "polar_grassmann") return SpaceKind::PolarGrassmann;
  if (s == "affine") return SpaceKind::Affine;
  return std::nullopt;
}

inline std::string kind_of(const Json& j, const std::string& where) {
  const auto& k = require(j, "kind", where);
  if (!k.is_string()) schema_error(where + ".kind", "expected a string");
  return k.get<std::string>();
}

inline IncidenceFile build_single(const Json& j, const std::string& where) {
  const std::string name = kind_of(j, where);
  const auto kind = parse_space_kind(name);
  if (!kind) schema_error(where + ".kind", "unknown space kind \"" + name + "\"");
  SpaceSpec spec;
  spec.kind = *kind;
  spec.p = int_field(j, "p", where);
  spec.n = int_field(j, "n", where);
  spec.k = int_field_or(j, "k", 1, where);
  if (auto it = j.find("form"); it != j.end()) {
    const Matrix g = field_matrix(*it, spec.p, where + ".form");
    bool alternating = true;
    for (int r = 0; r < g.rows(); ++r)
      for (int c = 0; c < g.cols(); ++c) alternating = alternating && (r == c ? g(r, c) == 0 : g(r, c) == (spec.p - g(c, r)) % spec.p);
    spec.form = BilinearForm(spec.p, g, alternating ? FormKind::Alternating : FormKind::Symmetric);
  }
  if (spec.kind == SpaceKind::Affine) {
    auto a = affine_space(spec.n, spec.p);
    return {a.base(), a};
  }
  return {build_space(spec), std::nullopt};
}

}  // namespace detail

inline IncidenceFile build_from_config(const Json& j) {
  const std::string where = "$";
  if (!j.is_object()) detail::schema_error(where, "expected an object");
  const std::string kind = detail::kind_of(j, where);
  if (kind != "product") {
    auto f = detail::build_single(j, where);
    if (auto it = j.find("remove"); it != j.end()) {
      const auto h = detail::point_list(detail::require(*it, "points", where + ".remove"), where + ".remove.points");
      auto a = affinize(f.structure, h);
      return {a.structure(), a.carrier};
    }
    return f;
  }
  const auto& fs = detail::require(j, "factors", where);
  if (!fs.is_array()) detail::schema_error(where + ".factors", "expected an array");
  std::vector<IncidenceStructure> factors;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    auto f = detail::build_single(fs[i], where + ".factors[" + std::to_string(i) + "]");
    factors.push_back(std::move(f.structure));
  }
  const SegreProduct P(std::move(factors));
  auto it = j.find("remove");
  if (it == j.end()) return {P.carrier(), std::nullopt};
  const std::string at = where + ".remove";
  PointSet h;
  if (auto f = it->find("form"); f != it->end()) {
    if (P.num_factors() != 2) detail::schema_error(at + ".form", "a bilinear form needs exactly two factors");
    const int p = P.factor(0).has_labels() ? P.factor(0).label(0).p() : 2;
    const auto r = hyperplane_from_form(P, MultiForm::bilinear(detail::field_matrix(*f, p, at + ".form"), p));
    if (std::holds_alternative<AllOfSpace>(r)) fail(ErrorKind::NotAHyperplane, "the form vanishes on every point");
    h = std::get<HyperplaneHandle>(r).points;
  } else if (auto fh = it->find("factor_hyperplanes"); fh != it->end()) {
    if (!fh->is_array()) detail::schema_error(at + ".factor_hyperplanes", "expected an array");
    std::vector<PointSet> hs;
    for (std::size_t i = 0; i < fh->size(); ++i)
      hs.push_back(detail::point_list((*fh)[i], at + ".factor_hyperplanes[" + std::to_string(i) + "]"));
    h = degenerate_product_hyperplane(P, hs).points;
  } else {
    h = detail::point_list(detail::require(*it, "points", at), at + ".points");
  }
  auto a = affinize(P, h);
  return {a.structure(), a.carrier};
}

inline IncidenceFile build_from_config_text(const std::string& text) {
  return build_from_config(detail::parse_text(text));
}

}  // namespace segrelab
