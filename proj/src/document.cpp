#include "bell/document.hpp"

#include <cmath>

namespace bell {

using nlohmann::json;

namespace {

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw DocumentError(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw DocumentError(where + "/" + key, "missing field");
  return *it;
}

int count_field(const json& obj, const char* key, const std::string& where, int min_value) {
  const json& v = field(obj, key, where);
  const std::string path = where + "/" + key;
  if (!v.is_number_integer()) throw DocumentError(path, "expected an integer");
  const auto n = v.get<long long>();
  if (n < min_value || n > 1'000'000) throw DocumentError(path, "out of range");
  return static_cast<int>(n);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw DocumentError(where, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw DocumentError(where, "expected a finite number");
  return d;
}

const json& array_of(const json& v, std::size_t n, const std::string& where) {
  if (!v.is_array()) throw DocumentError(where, "expected an array");
  if (v.size() != n) throw DocumentError(where, "expected " + std::to_string(n) + " entries, found " + std::to_string(v.size()));
  return v;
}

std::vector<double> read_tensor(const json& v, const Scenario& s, const std::string& where) {
  std::vector<double> out(s.size());
  array_of(v, static_cast<std::size_t>(s.inputs_a), where);
  for (int x = 0; x < s.inputs_a; ++x) {
    const std::string px = where + "/" + std::to_string(x);
    array_of(v[x], static_cast<std::size_t>(s.inputs_b), px);
    for (int y = 0; y < s.inputs_b; ++y) {
      const std::string py = px + "/" + std::to_string(y);
      array_of(v[x][y], static_cast<std::size_t>(s.outputs_a), py);
      for (int a = 0; a < s.outputs_a; ++a) {
        const std::string pa = py + "/" + std::to_string(a);
        array_of(v[x][y][a], static_cast<std::size_t>(s.outputs_b), pa);
        for (int b = 0; b < s.outputs_b; ++b)
          out[s.index(x, y, a, b)] = number(v[x][y][a][b], pa + "/" + std::to_string(b));
      }
    }
  }
  return out;
}

std::vector<double> read_matrix(const json& v, int rows, int cols, const std::string& where) {
  std::vector<double> out;
  array_of(v, static_cast<std::size_t>(rows), where);
  for (int i = 0; i < rows; ++i) {
    array_of(v[i], static_cast<std::size_t>(cols), where + "/" + std::to_string(i));
    for (int j = 0; j < cols; ++j) out.push_back(number(v[i][j], where + "/" + std::to_string(i) + "/" + std::to_string(j)));
  }
  return out;
}

json real_matrix_to_json(std::span<const double> values, int rows, int cols) {
  json out = json::array();
  for (int i = 0; i < rows; ++i) {
    json row = json::array();
    for (int j = 0; j < cols; ++j) row.push_back(values[static_cast<std::size_t>(i) * cols + j]);
    out.push_back(std::move(row));
  }
  return out;
}

CMatrix read_complex_matrix(const json& v, int dim, const std::string& where) {
  CMatrix m(dim, dim);
  array_of(v, static_cast<std::size_t>(dim), where);
  for (int i = 0; i < dim; ++i) {
    const std::string pi = where + "/" + std::to_string(i);
    array_of(v[i], static_cast<std::size_t>(dim), pi);
    for (int j = 0; j < dim; ++j) {
      const std::string pj = pi + "/" + std::to_string(j);
      array_of(v[i][j], 2, pj);
      m(i, j) = {number(v[i][j][0], pj + "/0"), number(v[i][j][1], pj + "/1")};
    }
  }
  return m;
}

Completeness read_completeness(const json& payload, const std::string& where) {
  const json& c = field(payload, "completeness", where);
  if (c == "complete") return Completeness::complete;
  if (c == "incomplete") return Completeness::incomplete;
  throw DocumentError(where + "/completeness", "expected \"complete\" or \"incomplete\"");
}

const char* completeness_name(Completeness c) { return c == Completeness::complete ? "complete" : "incomplete"; }

json metadata_json(const Metadata& meta) {
  return {{"name", meta.name}, {"provenance", meta.provenance}, {"format_version", std::string(kFormatVersion)}};
}

json envelope(const char* kind, const Scenario& s, json payload, const Metadata& meta) {
  return {{"kind", kind}, {"scenario", to_json(s)}, {"payload", std::move(payload)}, {"metadata", metadata_json(meta)}};
}

void expect_kind(const json& doc, const char* kind) {
  const std::string k = document_kind(doc);
  if (k != kind) throw DocumentError("/kind", "expected \"" + std::string(kind) + "\", found \"" + k + "\"");
}

template <typename Report>
void raise_issues(const Report& issues, const std::string& where) {
  if (issues.empty()) return;
  std::string msg = issues.front().what;
  if (issues.size() > 1) msg += " (and " + std::to_string(issues.size() - 1) + " more issues)";
  throw DocumentError(where, msg);
}

}  // namespace

json to_json(const Scenario& s) {
  return {{"inputs_a", s.inputs_a}, {"inputs_b", s.inputs_b}, {"outputs_a", s.outputs_a}, {"outputs_b", s.outputs_b}};
}

Scenario scenario_from_json(const json& j, const std::string& where) {
  return Scenario(count_field(j, "inputs_a", where, 1), count_field(j, "inputs_b", where, 1),
                  count_field(j, "outputs_a", where, 1), count_field(j, "outputs_b", where, 1));
}

json tensor_to_json(const Scenario& s, std::span<const double> values) {
  json out = json::array();
  for (int x = 0; x < s.inputs_a; ++x) {
    json jx = json::array();
    for (int y = 0; y < s.inputs_b; ++y) {
      json jy = json::array();
      for (int a = 0; a < s.outputs_a; ++a) {
        json ja = json::array();
        for (int b = 0; b < s.outputs_b; ++b) ja.push_back(values[s.index(x, y, a, b)]);
        jy.push_back(std::move(ja));
      }
      jx.push_back(std::move(jy));
    }
    out.push_back(std::move(jx));
  }
  return out;
}

json matrix_to_json(const CMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    out.push_back(std::move(row));
  }
  return out;
}

json local_model_to_json(const LocalModel& model) {
  json terms = json::array();
  for (const auto& t : model.terms)
    terms.push_back({{"weight", t.weight}, {"alice", t.strategy.alice}, {"bob", t.strategy.bob}});
  return terms;
}

json to_document(const BellFunctional& t, const Metadata& meta) {
  return envelope("functional", t.scenario(), {{"coeffs", tensor_to_json(t.scenario(), t.coeffs())}}, meta);
}

json to_document(const Behavior& p, const Metadata& meta) {
  const Scenario& s = p.scenario();
  json payload = {{"probs", tensor_to_json(s, p.probs())}, {"completeness", completeness_name(p.completeness())}};
  if (p.marginals_a() && p.marginals_b()) {
    payload["marginals_a"] = real_matrix_to_json(*p.marginals_a(), s.inputs_a, s.outputs_a);
    payload["marginals_b"] = real_matrix_to_json(*p.marginals_b(), s.inputs_b, s.outputs_b);
  }
  return envelope("behavior", s, std::move(payload), meta);
}

json to_document(const QuantumModel& m, const Metadata& meta) {
  auto povms_json = [](const std::vector<std::vector<CMatrix>>& povms) {
    json out = json::array();
    for (const auto& povm : povms) {
      json p = json::array();
      for (const auto& e : povm) p.push_back(matrix_to_json(e));
      out.push_back(std::move(p));
    }
    return out;
  };
  json payload = {{"dim_a", m.dim_a},
                  {"dim_b", m.dim_b},
                  {"completeness", completeness_name(m.completeness)},
                  {"state", matrix_to_json(m.state)},
                  {"alice_povms", povms_json(m.alice_povms)},
                  {"bob_povms", povms_json(m.bob_povms)}};
  return envelope("quantum_model", m.scenario(), std::move(payload), meta);
}

json report_document(const std::string& command, const json& result, const Metadata& meta) {
  return {{"kind", "report"}, {"command", command}, {"payload", result}, {"metadata", metadata_json(meta)}};
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw DocumentError("byte " + std::to_string(e.byte), "malformed JSON");
  }
}

std::string document_kind(const json& doc) {
  if (!doc.is_object()) throw DocumentError("/", "expected a JSON object");
  const json& meta = field(doc, "metadata", "");
  const json& version = field(meta, "format_version", "/metadata");
  if (!version.is_string() || version.get<std::string>() != kFormatVersion)
    throw DocumentError("/metadata/format_version", "expected \"1\"");
  const json& kind = field(doc, "kind", "");
  if (!kind.is_string()) throw DocumentError("/kind", "expected a string");
  return kind.get<std::string>();
}

Metadata metadata_from_document(const json& doc) {
  Metadata m;
  const json& meta = field(doc, "metadata", "");
  if (auto it = meta.find("name"); it != meta.end() && it->is_string()) m.name = it->get<std::string>();
  if (auto it = meta.find("provenance"); it != meta.end() && it->is_string()) m.provenance = it->get<std::string>();
  return m;
}

BellFunctional functional_from_document(const json& doc) {
  expect_kind(doc, "functional");
  const Scenario s = scenario_from_json(field(doc, "scenario", ""));
  const json& payload = field(doc, "payload", "");
  return BellFunctional(s, read_tensor(field(payload, "coeffs", "/payload"), s, "/payload/coeffs"));
}

Behavior behavior_from_document(const json& doc) {
  expect_kind(doc, "behavior");
  const Scenario s = scenario_from_json(field(doc, "scenario", ""));
  const json& payload = field(doc, "payload", "");
  Behavior p(s, read_tensor(field(payload, "probs", "/payload"), s, "/payload/probs"), read_completeness(payload, "/payload"));
  const bool has_a = payload.contains("marginals_a"), has_b = payload.contains("marginals_b");
  if (has_a != has_b) throw DocumentError("/payload", "marginals_a and marginals_b must appear together");
  if (has_a) {
    p.set_marginals(read_matrix(payload["marginals_a"], s.inputs_a, s.outputs_a, "/payload/marginals_a"),
                    read_matrix(payload["marginals_b"], s.inputs_b, s.outputs_b, "/payload/marginals_b"));
  }
  raise_issues(validate(p), "/payload/probs");
  return p;
}

QuantumModel quantum_model_from_document(const json& doc) {
  expect_kind(doc, "quantum_model");
  const Scenario s = scenario_from_json(field(doc, "scenario", ""));
  const json& payload = field(doc, "payload", "");
  QuantumModel m;
  m.dim_a = count_field(payload, "dim_a", "/payload", 1);
  m.dim_b = count_field(payload, "dim_b", "/payload", 1);
  m.completeness = read_completeness(payload, "/payload");
  m.state = read_complex_matrix(field(payload, "state", "/payload"), m.dim_a * m.dim_b, "/payload/state");
  auto read_povms = [&](const char* key, int inputs, int outputs, int dim) {
    const std::string where = std::string("/payload/") + key;
    const json& v = array_of(field(payload, key, "/payload"), static_cast<std::size_t>(inputs), where);
    std::vector<std::vector<CMatrix>> out(inputs);
    for (int x = 0; x < inputs; ++x) {
      const std::string px = where + "/" + std::to_string(x);
      array_of(v[x], static_cast<std::size_t>(outputs), px);
      for (int a = 0; a < outputs; ++a) out[x].push_back(read_complex_matrix(v[x][a], dim, px + "/" + std::to_string(a)));
    }
    return out;
  };
  m.alice_povms = read_povms("alice_povms", s.inputs_a, s.outputs_a, m.dim_a);
  m.bob_povms = read_povms("bob_povms", s.inputs_b, s.outputs_b, m.dim_b);
  raise_issues(validate(m), "/payload");
  return m;
}

std::string serialize(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace bell
