#ifndef OUA_SERIALIZATION_HPP
#define OUA_SERIALIZATION_HPP

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cctype>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "oua/algebra.hpp"
#include "oua/checks.hpp"
#include "oua/errors.hpp"

namespace oua {

/// Insertion-ordered JSON keeps report layout stable, which the CLI relies
/// on for byte-identical reruns.
using Json = nlohmann::ordered_json;

inline Json algebra_to_json(const AlgebraSpec& spec) {
  Json j;
  j["dim"] = spec.dim();
  j["unit"] = std::vector<double>(spec.unit().data(),
                                  spec.unit().data() + spec.dim());
  Json entries = Json::array();
  for (const StructureEntry& e : spec.structure_entries())
    entries.push_back(Json::array({e.i, e.j, e.k, e.value}));
  j["structure"] = std::move(entries);
  if (!spec.trace_form().isIdentity(0.0)) {
    Json rows = Json::array();
    for (int r = 0; r < spec.dim(); ++r) {
      std::vector<double> row(spec.dim());
      for (int c = 0; c < spec.dim(); ++c) row[static_cast<std::size_t>(c)] =
          spec.trace_form()(r, c);
      rows.push_back(row);
    }
    j["trace_form"] = std::move(rows);
  }
  j["labels"] = spec.labels();
  if (!spec.catalog_tag().empty()) j["catalog_tag"] = spec.catalog_tag();
  if (!spec.extreme_rays().empty()) {
    Json rays = Json::array();
    for (const Eigen::VectorXd& r : spec.extreme_rays())
      rays.push_back(std::vector<double>(r.data(), r.data() + r.size()));
    j["extreme_rays"] = std::move(rays);
  }
  return j;
}

inline AlgebraSpec algebra_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("unit") ||
      !j.contains("structure"))
    throw ValidationError(
        "algebra spec needs at least \"dim\", \"unit\" and \"structure\"");
  const int dim = j.at("dim").get<int>();
  if (dim < 1) throw ValidationError("\"dim\" must be a positive integer");

  std::vector<double> unit_v = j.at("unit").get<std::vector<double>>();
  if (static_cast<int>(unit_v.size()) != dim)
    throw ValidationError("\"unit\" must have exactly dim entries");
  Eigen::VectorXd unit =
      Eigen::Map<const Eigen::VectorXd>(unit_v.data(), dim);

  std::vector<StructureEntry> entries;
  for (const Json& t : j.at("structure")) {
    if (!t.is_array() || t.size() != 4)
      throw ValidationError("structure entries must be [i, j, k, value]");
    entries.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>(),
                       t[3].get<double>()});
  }

  Eigen::MatrixXd trace_form = Eigen::MatrixXd::Identity(dim, dim);
  if (j.contains("trace_form")) {
    const Json& tf = j.at("trace_form");
    if (static_cast<int>(tf.size()) != dim)
      throw ValidationError("\"trace_form\" must be a dim x dim matrix");
    for (int r = 0; r < dim; ++r) {
      std::vector<double> row = tf[static_cast<std::size_t>(r)]
                                    .get<std::vector<double>>();
      if (static_cast<int>(row.size()) != dim)
        throw ValidationError("\"trace_form\" must be a dim x dim matrix");
      for (int c = 0; c < dim; ++c) trace_form(r, c) = row[
          static_cast<std::size_t>(c)];
    }
  }

  std::vector<std::string> labels;
  if (j.contains("labels"))
    labels = j.at("labels").get<std::vector<std::string>>();

  std::vector<Eigen::VectorXd> rays;
  if (j.contains("extreme_rays"))
    for (const Json& r : j.at("extreme_rays")) {
      std::vector<double> v = r.get<std::vector<double>>();
      if (static_cast<int>(v.size()) != dim)
        throw ValidationError("extreme rays must have dim entries");
      rays.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), dim));
    }

  return build_custom(dim, entries, unit, trace_form, std::move(rays),
                      std::move(labels));
}

/// Parses "H<n>(<F>)" with F in {R, C, H, O}. Returns false when the string
/// does not have that shape (so it can fall through to a file path).
inline bool parse_catalog_tag(const std::string& tag, int* n,
                              DivisionTag* out) {
  if (tag.size() < 5 || tag[0] != 'H' || tag.back() != ')') return false;
  std::size_t open = tag.find('(');
  if (open == std::string::npos || open + 2 != tag.size() - 1) return false;
  int value = 0;
  for (std::size_t p = 1; p < open; ++p) {
    if (!std::isdigit(static_cast<unsigned char>(tag[p]))) return false;
    value = 10 * value + (tag[p] - '0');
  }
  if (open == 1) return false;
  switch (tag[open + 1]) {
    case 'R': *out = DivisionTag::R; break;
    case 'C': *out = DivisionTag::C; break;
    case 'H': *out = DivisionTag::H; break;
    case 'O': *out = DivisionTag::O; break;
    default: return false;
  }
  *n = value;
  return true;
}

/// Catalog tag or path to a JSON spec file.
inline AlgebraSpec load_algebra(const std::string& source) {
  int n = 0;
  DivisionTag tag = DivisionTag::R;
  if (parse_catalog_tag(source, &n, &tag))
    return build_hermitian_algebra(n, tag);
  std::ifstream in(source);
  if (!in)
    throw ValidationError("cannot open algebra spec file: " + source);
  Json j = Json::parse(in);  // malformed JSON raises nlohmann parse_error
  return algebra_from_json(j);
}

inline Json report_to_json(const CheckReport& rep) {
  Json j;
  j["check"] = rep.check;
  j["algebra"] = rep.algebra;
  j["samples"] = rep.samples;
  j["seed"] = rep.seed;
  j["tolerance"] = rep.tolerance;
  j["max_violation"] = rep.max_violation;
  j["passed"] = rep.passed;
  return j;
}

inline Eigen::VectorXd element_from_json(const Json& j, int dim) {
  const Json* arr = &j;
  if (j.is_object()) {
    if (!j.contains("coords"))
      throw ValidationError("element file must be an array or {\"coords\"}");
    arr = &j.at("coords");
  }
  std::vector<double> v = arr->get<std::vector<double>>();
  if (static_cast<int>(v.size()) != dim)
    throw ValidationError("element has " + std::to_string(v.size()) +
                          " coordinates, algebra has dimension " +
                          std::to_string(dim));
  return Eigen::Map<const Eigen::VectorXd>(v.data(), dim);
}

}  // namespace oua

#endif  // OUA_SERIALIZATION_HPP
