#pragma once

// JSON documents (format_version "1") for functionals, behaviors, quantum
// models and reports. Layout:
//
//   {
//     "kind": "functional" | "behavior" | "quantum_model" | "report",
//     "scenario": {"inputs_a": .., "inputs_b": .., "outputs_a": .., "outputs_b": ..},
//     "payload": {...},
//     "metadata": {"name": .., "provenance": .., "format_version": "1"}
//   }
//
// functional payload:    {"coeffs": [x][y][a][b]}
// behavior payload:      {"probs": [x][y][a][b], "completeness": "complete"|"incomplete",
//                         optional "marginals_a": [x][a], "marginals_b": [y][b]}
// quantum_model payload: {"dim_a", "dim_b", "completeness", "state": [i][j][re, im],
//                         "alice_povms": [x][a][i][j][re, im], "bob_povms": [y][b][i][j][re, im]}
//
// Numbers are written as shortest round-trip decimals, so parse(serialize(x))
// reproduces every finite double bit for bit.

#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"

#include "bell/scenario.hpp"

namespace bell {

inline constexpr std::string_view kFormatVersion = "1";

/// Malformed or invalid document. `where` is a JSON-pointer style path or a
/// byte offset for syntax errors.
class DocumentError : public std::invalid_argument {
 public:
  DocumentError(const std::string& where, const std::string& message)
      : std::invalid_argument(where + ": " + message), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

struct Metadata {
  std::string name;
  std::string provenance;
};

nlohmann::json to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j, const std::string& where = "/scenario");

nlohmann::json to_document(const BellFunctional& t, const Metadata& meta);
nlohmann::json to_document(const Behavior& p, const Metadata& meta);
nlohmann::json to_document(const QuantumModel& m, const Metadata& meta);
nlohmann::json report_document(const std::string& command, const nlohmann::json& result,
                               const Metadata& meta = {});

/// Parses text; syntax errors become DocumentError naming the byte offset.
nlohmann::json parse_json(std::string_view text);

std::string document_kind(const nlohmann::json& doc);
Metadata metadata_from_document(const nlohmann::json& doc);

BellFunctional functional_from_document(const nlohmann::json& doc);
Behavior behavior_from_document(const nlohmann::json& doc);
QuantumModel quantum_model_from_document(const nlohmann::json& doc);

/// Serialized form used by the CLI: two-space indented with trailing newline.
std::string serialize(const nlohmann::json& doc);

nlohmann::json tensor_to_json(const Scenario& s, std::span<const double> values);
nlohmann::json matrix_to_json(const CMatrix& m);
nlohmann::json local_model_to_json(const LocalModel& model);

}  // namespace bell
