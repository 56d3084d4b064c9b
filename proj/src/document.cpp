#include "naimark_lab/document.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "naimark_lab/measurements.hpp"

namespace naimark_lab {

using nlohmann::json;

namespace {

std::string index_path(const std::string& base, size_t i) { return base + "[" + std::to_string(i) + "]"; }
std::string field_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw DocumentError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw DocumentError(field_path(path, key), "missing field");
  return *it;
}

double require_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw DocumentError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw DocumentError(path, "expected a finite number");
  return v;
}

Complex complex_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw DocumentError(path, "expected a complex number as [re, im]");
  return {require_number(j[0], index_path(path, 0)), require_number(j[1], index_path(path, 1))};
}

json number(double v) {
  // Integral values stay floating point so the serialized form is stable.
  return json(v);
}

ObservableSpec observable_from_json(const json& j, const std::string& path, int dim) {
  if (!j.is_object()) throw DocumentError(path, "expected an object");
  ObservableSpec spec;
  const json& name = require(j, "name", path);
  if (!name.is_string() || name.get<std::string>().empty())
    throw DocumentError(field_path(path, "name"), "expected a non-empty string");
  spec.name = name.get<std::string>();

  const int forms = static_cast<int>(j.contains("effects")) + static_cast<int>(j.contains("unsharp_spin")) +
                    static_cast<int>(j.contains("unsharp_trio"));
  if (forms != 1)
    throw DocumentError(path, "expected exactly one of \"effects\", \"unsharp_spin\", \"unsharp_trio\"");

  if (j.contains("effects")) {
    const std::string epath = field_path(path, "effects");
    const json& effects = j["effects"];
    if (!effects.is_array() || effects.empty()) throw DocumentError(epath, "expected a non-empty list of matrices");
    for (size_t i = 0; i < effects.size(); ++i)
      spec.effects.push_back(matrix_from_json(effects[i], index_path(epath, i), dim, dim));
    spec.kind = ObservableKind::effects;
  } else if (j.contains("unsharp_spin")) {
    const std::string spath = field_path(path, "unsharp_spin");
    const json& s = j["unsharp_spin"];
    const json& axis = require(s, "axis", spath);
    const std::string apath = field_path(spath, "axis");
    if (axis.is_string()) {
      const std::string label = axis.get<std::string>();
      if (label != "x" && label != "y" && label != "z")
        throw DocumentError(apath, "expected \"x\", \"y\", \"z\" or a 3-vector");
      spec.axis_label = label[0];
      spec.axis = axis_from_label(label[0]);
    } else if (axis.is_array() && axis.size() == 3) {
      for (size_t k = 0; k < 3; ++k) spec.axis[k] = require_number(axis[k], index_path(apath, k));
    } else {
      throw DocumentError(apath, "expected \"x\", \"y\", \"z\" or a 3-vector");
    }
    spec.lambda = require_number(require(s, "lambda", spath), field_path(spath, "lambda"));
    try {
      UnsharpSpin(spec.axis, spec.lambda);
    } catch (const std::invalid_argument& e) {
      throw DocumentError(spath, e.what());
    }
    spec.kind = ObservableKind::unsharp_spin;
  } else {
    const std::string tpath = field_path(path, "unsharp_trio");
    spec.lambda = require_number(require(j["unsharp_trio"], "lambda", tpath), field_path(tpath, "lambda"));
    if (spec.lambda < 0.0 || spec.lambda > 1.0) throw DocumentError(field_path(tpath, "lambda"), "must lie in [0, 1]");
    spec.kind = ObservableKind::unsharp_trio;
  }
  if (spec.kind != ObservableKind::effects && dim != 2)
    throw DocumentError(path, "spin shorthand requires dim 2");
  return spec;
}

json observable_to_json(const ObservableSpec& spec) {
  json j;
  j["name"] = spec.name;
  switch (spec.kind) {
    case ObservableKind::effects: {
      json list = json::array();
      for (const auto& e : spec.effects) list.push_back(matrix_to_json(e));
      j["effects"] = std::move(list);
      break;
    }
    case ObservableKind::unsharp_spin: {
      json axis = spec.axis_label ? json(std::string(1, *spec.axis_label))
                                  : json::array({number(spec.axis[0]), number(spec.axis[1]), number(spec.axis[2])});
      j["unsharp_spin"] = {{"axis", std::move(axis)}, {"lambda", number(spec.lambda)}};
      break;
    }
    case ObservableKind::unsharp_trio:
      j["unsharp_trio"] = {{"lambda", number(spec.lambda)}};
      break;
  }
  return j;
}

}  // namespace

std::array<double, 3> axis_from_label(char label) {
  switch (label) {
    case 'x': return kAxisX;
    case 'y': return kAxisY;
    case 'z': return kAxisZ;
  }
  throw std::invalid_argument(std::string("unknown axis label '") + label + "'");
}

std::vector<ComplexMatrix> ObservableSpec::expand(int dim) const {
  switch (kind) {
    case ObservableKind::effects: return effects;
    case ObservableKind::unsharp_spin:
      if (dim != 2) throw DimensionError("unsharp spin shorthand needs dim 2");
      return unsharp_spin(UnsharpSpin(axis, lambda)).effects();
    case ObservableKind::unsharp_trio:
      if (dim != 2) throw DimensionError("unsharp trio shorthand needs dim 2");
      return unsharp_trio_joint(lambda).cells;
  }
  return {};
}

const ObservableSpec* PovmDocument::find(const std::string& name) const {
  for (const auto& o : observables)
    if (o.name == name) return &o;
  return nullptr;
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(json::array({number(m(r, c).real()), number(m(r, c).imag())}));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j, const std::string& path, int rows, int cols) {
  if (!j.is_array() || j.empty()) throw DocumentError(path, "expected a matrix (list of rows)");
  const int n_rows = static_cast<int>(j.size());
  if (rows >= 0 && n_rows != rows) {
    std::ostringstream os;
    os << "expected " << rows << " rows, got " << n_rows;
    throw DocumentError(path, os.str());
  }
  const int expect_cols = cols >= 0 ? cols : n_rows;
  ComplexMatrix m(n_rows, expect_cols);
  for (int r = 0; r < n_rows; ++r) {
    const std::string rpath = index_path(path, static_cast<size_t>(r));
    const json& row = j[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != expect_cols) {
      std::ostringstream os;
      os << "expected a row of " << expect_cols << " complex entries";
      throw DocumentError(rpath, os.str());
    }
    for (int c = 0; c < expect_cols; ++c)
      m(r, c) = complex_from_json(row[static_cast<size_t>(c)], index_path(rpath, static_cast<size_t>(c)));
  }
  return m;
}

PovmDocument parse_document(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << "invalid JSON at byte " << e.byte << ": " << e.what();
    throw DocumentError("", os.str());
  }
  if (!root.is_object()) throw DocumentError("", "document must be a JSON object");

  PovmDocument doc;
  const json& version = require(root, "schema_version", "");
  if (!version.is_string()) throw DocumentError("schema_version", "expected a string");
  doc.schema_version = version.get<std::string>();
  if (doc.schema_version != kDocumentSchemaVersion)
    throw DocumentError("schema_version", "unsupported version \"" + doc.schema_version + "\"");

  const json& dim = require(root, "dim", "");
  if (!dim.is_number_integer() || dim.get<long long>() <= 0)
    throw DocumentError("dim", "expected a positive integer");
  doc.dim = dim.get<int>();

  const json& observables = require(root, "observables", "");
  if (!observables.is_array()) throw DocumentError("observables", "expected a list");
  for (size_t i = 0; i < observables.size(); ++i) {
    ObservableSpec spec = observable_from_json(observables[i], index_path("observables", i), doc.dim);
    if (doc.find(spec.name) != nullptr)
      throw DocumentError(field_path(index_path("observables", i), "name"), "duplicate name \"" + spec.name + "\"");
    doc.observables.push_back(std::move(spec));
  }
  if (root.contains("metadata")) doc.metadata = root["metadata"];
  for (const auto& [key, value] : root.items())
    if (key != "schema_version" && key != "dim" && key != "observables" && key != "metadata")
      throw DocumentError(key, "unknown field");
  return doc;
}

PovmDocument load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DocumentError("", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

std::string serialize_document(const PovmDocument& doc) {
  json root;
  root["schema_version"] = doc.schema_version;
  root["dim"] = doc.dim;
  json list = json::array();
  for (const auto& o : doc.observables) list.push_back(observable_to_json(o));
  root["observables"] = std::move(list);
  if (!doc.metadata.is_null()) root["metadata"] = doc.metadata;
  return root.dump(2) + "\n";
}

}  // namespace naimark_lab
