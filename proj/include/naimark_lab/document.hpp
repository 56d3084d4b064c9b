// JSON measurement documents.
//
//   {
//     "schema_version": "1",
//     "dim": 2,
//     "observables": [
//       {"name": "A", "effects": [[[[1,0],[0,0]], [[0,0],[0,0]]], ...]},
//       {"name": "Sx", "unsharp_spin": {"axis": "x", "lambda": 0.5}},
//       {"name": "xyz", "unsharp_trio": {"lambda": 0.5}}
//     ],
//     "metadata": {...}
//   }
//
// Complex entries are [re, im] pairs; matrices are lists of rows. Shorthand
// observables stay in shorthand form when re-serialized.

#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "naimark_lab/linalg.hpp"

namespace naimark_lab {

inline constexpr const char* kDocumentSchemaVersion = "1";

/// Parse or load failure. path() is a JSON-pointer-like location such as
/// "observables[1].effects[0][1][0]", empty for file-level errors.
class DocumentError : public std::runtime_error {
 public:
  DocumentError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class ObservableKind { effects, unsharp_spin, unsharp_trio };

struct ObservableSpec {
  std::string name;
  ObservableKind kind = ObservableKind::effects;
  std::vector<ComplexMatrix> effects;      // kind == effects
  std::array<double, 3> axis{0, 0, 1};     // kind == unsharp_spin
  std::optional<char> axis_label;          // 'x', 'y' or 'z' when given by name
  double lambda = 0.0;                     // unsharp_spin, unsharp_trio

  /// Effects on `dim`, unvalidated. Shorthand kinds require dim == 2.
  std::vector<ComplexMatrix> expand(int dim) const;
};

struct PovmDocument {
  std::string schema_version = kDocumentSchemaVersion;
  int dim = 0;
  std::vector<ObservableSpec> observables;
  nlohmann::json metadata;  // null when absent

  const ObservableSpec* find(const std::string& name) const;
};

PovmDocument parse_document(const std::string& text);
PovmDocument load_document(const std::string& path);
std::string serialize_document(const PovmDocument& doc);

nlohmann::json matrix_to_json(const ComplexMatrix& m);
/// Throws DocumentError at `path` unless `j` is a rows x cols matrix of
/// [re, im] pairs (rows, cols < 0 accept any consistent square shape).
ComplexMatrix matrix_from_json(const nlohmann::json& j, const std::string& path, int rows = -1, int cols = -1);

std::array<double, 3> axis_from_label(char label);

}  // namespace naimark_lab
