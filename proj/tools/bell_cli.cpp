// bell: batch front end over the bellkit core.
//
// Exit codes: 0 success, 1 internal failure, 2 parse or validation error,
// 3 guard exceeded, 4 undefined quantity.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "bell/classical.hpp"
#include "bell/document.hpp"
#include "bell/generators.hpp"
#include "bell/seesaw.hpp"
#include "bell/violation.hpp"

namespace {

using nlohmann::json;
using namespace bell;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DocumentError(path, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json load(const std::string& path) {
  try {
    return parse_json(read_file(path));
  } catch (const DocumentError& e) {
    throw DocumentError(path + ": " + e.where(), "malformed JSON");
  }
}

json functional_json(const BellFunctional& t) { return tensor_to_json(t.scenario(), t.coeffs()); }

json strategy_json(const DeterministicStrategy& s) { return {{"alice", s.alice}, {"bob", s.bob}}; }

// Behavior commands accept behavior documents and quantum models.
Behavior load_behavior(const json& doc) {
  const std::string kind = document_kind(doc);
  if (kind == "quantum_model") return behavior_from_quantum(quantum_model_from_document(doc));
  return behavior_from_document(doc);
}

void require_complete(const Behavior& q) {
  if (!q.is_complete())
    throw InvalidObject("behavior is incomplete; run `bell behavior complete` first");
}

struct SearchFlags {
  int dim = 2;
  int seeds = 20;
  int sweeps = 2000;
  double tol = 1e-9;
  std::uint64_t rng_seed = 0;

  void add(CLI::App* cmd, bool with_dim) {
    if (with_dim) cmd->add_option("--dim", dim, "local Hilbert space dimension")->required();
    cmd->add_option("--seeds", seeds, "random restarts")->capture_default_str();
    cmd->add_option("--sweeps", sweeps, "maximum sweeps per restart")->capture_default_str();
    cmd->add_option("--tol", tol, "stop when a sweep gains less than this")->capture_default_str();
    cmd->add_option("--rng-seed", rng_seed, "base seed; restart k uses rng-seed + k")->capture_default_str();
  }
  SeesawConfig config() const {
    SeesawConfig c;
    c.dim = dim;
    c.seeds = seeds;
    c.max_sweeps = sweeps;
    c.tol = tol;
    c.rng_seed = rng_seed;
    c.check();
    return c;
  }
};

json cmd_classical(const std::string& path, const Limits& limits) {
  const BellFunctional t = functional_from_document(load(path));
  const ClassicalOptimum opt = classical_optimum(t, limits);
  const double cin = classical_value_incomplete(t, limits);
  const double norm = banach_norm(t, limits);
  return {{"classical_value", opt.value},
          {"max_value", opt.max_value},
          {"min_value", opt.min_value},
          {"argmax", strategy_json(opt.argmax)},
          {"argmin", strategy_json(opt.argmin)},
          {"classical_value_incomplete", cin},
          {"banach_norm", norm},
          {"sandwich_ratio", cin > 0.0 ? json(norm / cin) : json(nullptr)}};
}

json cmd_quantum(const std::string& path, const SearchFlags& flags, bool incomplete, const std::string& emit,
                 const Limits& limits) {
  const json doc = load(path);
  const BellFunctional t = functional_from_document(doc);
  SeesawConfig cfg = flags.config();
  cfg.mode = incomplete ? Completeness::incomplete : Completeness::complete;
  const double denom = incomplete ? classical_value_incomplete(t, limits) : classical_value(t, limits);
  const SeesawResult r = seesaw(t, cfg);
  json out = {{"value", r.value},
              {"classical_denominator", denom},
              {"ratio", denom > 0.0 ? json(r.value / denom) : json(nullptr)},
              {"converged", r.converged},
              {"sweeps_used", r.sweeps_used},
              {"per_seed_values", r.per_seed_values},
              {"dim", cfg.dim},
              {"mode", incomplete ? "incomplete" : "complete"}};
  if (!emit.empty()) {
    Metadata meta{metadata_from_document(doc).name, "bell quantum --dim " + std::to_string(cfg.dim)};
    std::ofstream f(emit, std::ios::binary);
    if (!f) throw DocumentError(emit, "cannot write model file");
    f << serialize(to_document(r.model, meta));
    out["model_path"] = emit;
  }
  return out;
}

json membership_json(const Behavior& q, const Limits& limits) {
  const MembershipCertificate c = is_local(q, limits);
  json out = {{"membership", to_string(c.verdict)}, {"warnings", c.warnings}};
  if (c.verdict == Verdict::local || !c.model.terms.empty()) {
    out["reconstruction_error"] = c.reconstruction_error;
    out["local_model"] = local_model_to_json(c.model);
  }
  if (c.verdict == Verdict::nonlocal || c.separator_value != 0.0) {
    out["separator"] = functional_json(c.separator);
    out["separator_value"] = c.separator_value;
    out["max_vertex_value"] = c.max_vertex_value;
    out["margin"] = c.separator_value - c.max_vertex_value;
  }
  return out;
}

json cmd_behavior(const std::string& sub, const std::string& path, const Limits& limits, bool& is_document) {
  const json doc = load(path);
  const Behavior q = load_behavior(doc);
  if (sub == "complete") {
    is_document = true;
    Metadata meta = metadata_from_document(doc);
    meta.provenance = "bell behavior complete";
    return to_document(complete_behavior(q), meta);
  }
  require_complete(q);
  if (sub == "membership") return membership_json(q, limits);
  if (sub == "commbits") {
    const MaxViolation mv = max_violation(q, limits);
    return {{"commbits", std::max(0.0, std::log2(mv.nu))}, {"nu", mv.nu}, {"boundary", mv.boundary}};
  }
  if (sub == "nu") {
    const MaxViolation mv = max_violation(q, limits);
    return {{"nu", mv.nu}, {"boundary", mv.boundary}, {"witness", functional_json(mv.witness)},
            {"witness_value", pair(mv.witness, q)}};
  }
  // robustness
  const ViolationReport r = violation_report(q, limits);
  return {{"pi", r.pi},
          {"nu", r.nu},
          {"identity_residual", r.identity_residual},
          {"commbits", r.comm_bound_bits},
          {"boundary", r.boundary},
          {"witness", functional_json(r.witness)}};
}

json cmd_witness(const std::string& path, double observed, int max_dim, const SearchFlags& flags) {
  const BellFunctional t = functional_from_document(load(path));
  SeesawConfig cfg = flags.config();
  const DimensionWitnessReport rep = dimension_witness_report(t, observed, max_dim, cfg);
  json rows = json::array();
  for (const auto& r : rep.rows) rows.push_back({{"dim", r.dim}, {"best_value", r.best_value}, {"exceeded", r.exceeded}});
  return {{"label", rep.label},
          {"observed", rep.observed},
          {"tolerance", kWitnessTolerance},
          {"algebraic_bound", rep.algebraic_bound},
          {"rows", rows},
          {"warnings", rep.warnings}};
}

json cmd_eq4(const std::string& path, const SearchFlags& flags, const Limits& limits) {
  const BellFunctional t = functional_from_document(load(path));
  const Eq4Result r = eq4_gap(t, flags.config(), limits);
  return {{"lhs_lower", r.lhs_lower},
          {"rhs", r.rhs},
          {"holds", r.lhs_lower >= r.rhs - 1e-6},
          {"quantum_value", r.quantum_value},
          {"classical_value_incomplete", r.classical_value_incomplete},
          {"boundary", r.violation.boundary},
          {"witness", functional_json(r.violation.witness)}};
}

struct GenFlags {
  std::string name;
  std::string table;
  int na = 2, nb = 2, ma = 2, mb = 2;
  std::uint64_t seed = 0;
};

json cmd_gen(const GenFlags& g) {
  if (g.name == "chsh") return to_document(chsh(), {"chsh", "bell gen chsh"});
  if (g.name == "magic-square") return to_document(magic_square(), {"magic-square", "bell gen magic-square"});
  if (g.name == "random") {
    const Scenario s(g.na, g.nb, g.ma, g.mb);
    std::ostringstream prov;
    prov << "bell gen random --na " << g.na << " --nb " << g.nb << " --ma " << g.ma << " --mb " << g.mb << " --seed " << g.seed;
    return to_document(random_functional(s, g.seed), {"random", prov.str()});
  }
  // game: {"scenario": {...}, "win": [x][y][a][b], optional "input_distribution": [x][y]}
  if (g.table.empty()) throw std::invalid_argument("gen game needs --table FILE");
  const json tab = load(g.table);
  if (!tab.is_object() || !tab.contains("scenario") || !tab.contains("win"))
    throw DocumentError(g.table, "game table needs \"scenario\" and \"win\"");
  const Scenario s = scenario_from_json(tab["scenario"]);
  // Reuse the functional reader for the [x][y][a][b] win table.
  const json wrapped = {{"kind", "functional"},
                        {"scenario", tab["scenario"]},
                        {"payload", {{"coeffs", tab["win"]}}},
                        {"metadata", {{"format_version", "1"}}}};
  const BellFunctional win = functional_from_document(wrapped);
  std::vector<double> dist;
  if (tab.contains("input_distribution")) {
    const json& d = tab["input_distribution"];
    if (!d.is_array() || d.size() != static_cast<std::size_t>(s.inputs_a))
      throw DocumentError(g.table + ": /input_distribution", "expected inputs_a rows");
    for (const auto& row : d) {
      if (!row.is_array() || row.size() != static_cast<std::size_t>(s.inputs_b))
        throw DocumentError(g.table + ": /input_distribution", "expected inputs_b entries per row");
      for (const auto& v : row) {
        if (!v.is_number()) throw DocumentError(g.table + ": /input_distribution", "expected numbers");
        dist.push_back(v.get<double>());
      }
    }
  } else {
    dist.assign(static_cast<std::size_t>(s.inputs_a) * s.inputs_b, 1.0 / (static_cast<double>(s.inputs_a) * s.inputs_b));
  }
  const std::vector<double> w(win.coeffs().begin(), win.coeffs().end());
  return to_document(nonlocal_game(s, w, dist), {"game", "bell gen game"});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bell: Bell-scenario analysis over JSON documents"};
  app.require_subcommand(1);

  std::string file;
  SearchFlags search;
  bool incomplete = false;
  std::string emit;
  std::string behavior_sub;
  double observed = 0.0;
  int max_dim = 1;
  GenFlags gen;

  auto* classical = app.add_subcommand("classical", "classical value, incomplete classical value and Banach norm");
  classical->add_option("file", file, "functional document")->required();

  auto* quantum = app.add_subcommand("quantum", "see-saw lower bound on the quantum value at fixed dimension");
  quantum->add_option("file", file, "functional document")->required();
  search.add(quantum, true);
  quantum->add_flag("--incomplete", incomplete, "search POVMs with sum <= 1");
  quantum->add_option("--emit-model", emit, "write the best model to this path");

  auto* behavior = app.add_subcommand("behavior", "behavior-centric quantities");
  behavior->add_option("quantity", behavior_sub, "nu | robustness | commbits | membership | complete")
      ->required()
      ->check(CLI::IsMember({"nu", "robustness", "commbits", "membership", "complete"}));
  behavior->add_option("file", file, "behavior or quantum_model document")->required();

  auto* witness = app.add_subcommand("witness", "heuristic dimension-witness sweep");
  witness->add_option("file", file, "functional document")->required();
  witness->add_option("--observed", observed, "observed value of the functional")->required();
  witness->add_option("--max-dim", max_dim, "largest dimension to search")->required();
  search.add(witness, false);

  auto* eq4 = app.add_subcommand("eq4", "incomplete-model violation pipeline");
  eq4->add_option("file", file, "functional document")->required();
  search.add(eq4, true);

  auto* genc = app.add_subcommand("gen", "emit a functional document");
  genc->add_option("name", gen.name, "chsh | magic-square | game | random")
      ->required()
      ->check(CLI::IsMember({"chsh", "magic-square", "game", "random"}));
  genc->add_option("--table", gen.table, "game: JSON win table");
  genc->add_option("--na", gen.na, "random: Alice inputs");
  genc->add_option("--nb", gen.nb, "random: Bob inputs");
  genc->add_option("--ma", gen.ma, "random: Alice outputs");
  genc->add_option("--mb", gen.mb, "random: Bob outputs");
  genc->add_option("--seed", gen.seed, "random: RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    const Limits limits = Limits::from_env();
    json out;
    if (*classical) {
      out = report_document("classical", cmd_classical(file, limits));
    } else if (*quantum) {
      out = report_document("quantum", cmd_quantum(file, search, incomplete, emit, limits));
    } else if (*behavior) {
      bool is_document = false;
      json r = cmd_behavior(behavior_sub, file, limits, is_document);
      out = is_document ? std::move(r) : report_document("behavior " + behavior_sub, r);
    } else if (*witness) {
      out = report_document("witness", cmd_witness(file, observed, max_dim, search));
    } else if (*eq4) {
      out = report_document("eq4", cmd_eq4(file, search, limits));
    } else {
      out = cmd_gen(gen);
    }
    std::cout << serialize(out);
    return 0;
  } catch (const GuardExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const UndefinedQuantity& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
