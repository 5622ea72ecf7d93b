#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bell/document.hpp"
#include "bell/generators.hpp"
#include "cli_runner.hpp"
#include "oracles.hpp"

using namespace bell;
using nlohmann::json;

class CliTest : public ::testing::Test {
 protected:
  cli::TempDir dir;

  std::string gen(const std::string& name) {
    const cli::Result r = cli::run({"gen", name});
    EXPECT_EQ(r.code, 0) << r.err;
    return dir.write(name + ".json", r.out);
  }
  json ok(const std::vector<std::string>& args) {
    const cli::Result r = cli::run(args);
    EXPECT_EQ(r.code, 0) << r.err;
    return json::parse(r.out);
  }
};

TEST_F(CliTest, ClassicalOnChsh) {
  const json r = ok({"classical", gen("chsh")});
  EXPECT_EQ(r["kind"], "report");
  EXPECT_EQ(r["payload"]["classical_value"].get<double>(), 2.0);
  EXPECT_EQ(r["payload"]["classical_value_incomplete"].get<double>(), 2.0);
  EXPECT_EQ(r["payload"]["banach_norm"].get<double>(), 2.0);
  EXPECT_EQ(r["payload"]["sandwich_ratio"].get<double>(), 1.0);
}

TEST_F(CliTest, ClassicalOnZeroFunctionalReportsNullRatio) {
  const std::string path =
      dir.write("zero.json", serialize(to_document(BellFunctional(Scenario(2, 2, 2, 2)), {"zero", "test"})));
  const json r = ok({"classical", path});
  EXPECT_EQ(r["payload"]["classical_value"].get<double>(), 0.0);
  EXPECT_EQ(r["payload"]["banach_norm"].get<double>(), 0.0);
  EXPECT_TRUE(r["payload"]["sandwich_ratio"].is_null());
}

TEST_F(CliTest, MagicSquareGenerator) {
  const json doc = json::parse(cli::read_file(gen("magic-square")));
  EXPECT_EQ(doc["scenario"]["inputs_a"], 3);
  EXPECT_EQ(doc["scenario"]["outputs_b"], 4);
  EXPECT_FALSE(doc["metadata"]["provenance"].get<std::string>().empty());
  const json r = ok({"classical", gen("magic-square")});
  EXPECT_EQ(r["payload"]["classical_value"].get<double>(), 8.0 / 9.0);
}

TEST_F(CliTest, MalformedJsonExitsWithParseCode) {
  const cli::Result r = cli::run({"classical", dir.write("bad.json", "{\"kind\": [1, 2")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("byte"), std::string::npos);
}

TEST_F(CliTest, QuantumOnChsh) {
  const std::string f = gen("chsh");
  const json r = ok({"quantum", f, "--dim", "2", "--seeds", "20"});
  EXPECT_NEAR(r["payload"]["value"].get<double>(), 2 * std::numbers::sqrt2, 1e-6);
  EXPECT_NEAR(r["payload"]["ratio"].get<double>(), std::numbers::sqrt2, 1e-6);
  EXPECT_EQ(r["payload"]["per_seed_values"].size(), 20u);
  const json one = ok({"quantum", f, "--dim", "1"});
  EXPECT_NEAR(one["payload"]["value"].get<double>(), 2.0, 1e-6);
  EXPECT_NEAR(one["payload"]["ratio"].get<double>(), 1.0, 1e-6);
  EXPECT_EQ(cli::run({"quantum", f, "--dim", "0"}).code, 2);
}

TEST_F(CliTest, EmittedModelFeedsBehaviorCommands) {
  const std::string model = dir.file("model.json");
  ok({"quantum", gen("chsh"), "--dim", "2", "--seeds", "5", "--emit-model", model});
  const QuantumModel m = quantum_model_from_document(json::parse(cli::read_file(model)));
  EXPECT_TRUE(validate(m).empty());
  const json nu = ok({"behavior", "nu", model});
  EXPECT_NEAR(nu["payload"]["nu"].get<double>(), std::numbers::sqrt2, 1e-6);
}

TEST_F(CliTest, BehaviorCommandsOnChshOptimal) {
  const std::string f =
      dir.write("q.json", serialize(to_document(behavior_from_quantum(oracle::chsh_optimal_model()), {"q", "test"})));
  const json nu = ok({"behavior", "nu", f});
  EXPECT_NEAR(nu["payload"]["nu"].get<double>(), std::numbers::sqrt2, 1e-7);
  const BellFunctional w = functional_from_document(
      json{{"kind", "functional"},
           {"scenario", to_json(Scenario(2, 2, 2, 2))},
           {"payload", {{"coeffs", nu["payload"]["witness"]}}},
           {"metadata", {{"format_version", "1"}}}});
  EXPECT_TRUE(validate(w).empty());
  EXPECT_NEAR(std::abs(oracle::pair_brute(w, behavior_from_quantum(oracle::chsh_optimal_model()))) /
                  oracle::classical_value_brute(w),
              std::numbers::sqrt2, 1e-7);
  const json pi = ok({"behavior", "robustness", f});
  EXPECT_NEAR(pi["payload"]["pi"].get<double>(), 2 / (std::numbers::sqrt2 + 1), 1e-7);
  EXPECT_LE(pi["payload"]["identity_residual"].get<double>(), 1e-6);
  const json bits = ok({"behavior", "commbits", f});
  EXPECT_NEAR(bits["payload"]["commbits"].get<double>(), 0.5, 1e-6);
  const json mem = ok({"behavior", "membership", f});
  EXPECT_EQ(mem["payload"]["membership"], "nonlocal");
}

TEST_F(CliTest, BehaviorCommandsOnLocal) {
  const std::string f = dir.write("u.json", serialize(to_document(uniform_behavior(Scenario(2, 2, 2, 2)), {})));
  EXPECT_EQ(ok({"behavior", "nu", f})["payload"]["nu"].get<double>(), 1.0);
  EXPECT_NEAR(ok({"behavior", "robustness", f})["payload"]["pi"].get<double>(), 1.0, 1e-9);
  EXPECT_EQ(ok({"behavior", "commbits", f})["payload"]["commbits"].get<double>(), 0.0);
  EXPECT_EQ(ok({"behavior", "membership", f})["payload"]["membership"], "local");
}

TEST_F(CliTest, SignalingBehaviorExitsWithUndefinedCode) {
  const Scenario s(2, 2, 2, 2);
  std::vector<double> probs(16, 0.0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) probs[s.index(x, y, 0, x)] = 1.0;
  const std::string f = dir.write("sig.json", serialize(to_document(Behavior(s, probs), {})));
  const cli::Result r = cli::run({"behavior", "nu", f});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("nu undefined for signaling behaviors"), std::string::npos);
}

TEST_F(CliTest, CompleteEmitsBehaviorDocument) {
  const Behavior in(Scenario(1, 1, 2, 2), {0.2, 0.1, 0.0, 0.3}, Completeness::incomplete);
  const std::string f = dir.write("in.json", serialize(to_document(in, {})));
  const json doc = ok({"behavior", "complete", f});
  const Behavior full = behavior_from_document(doc);
  EXPECT_TRUE(full.is_complete());
  EXPECT_EQ(full.scenario(), Scenario(1, 1, 3, 3));
  EXPECT_EQ(cli::run({"behavior", "nu", f}).code, 2);
}

TEST_F(CliTest, WitnessAndEq4) {
  const std::string f = gen("chsh");
  const json w = ok({"witness", f, "--observed", "2.8284271247461903", "--max-dim", "2", "--seeds", "10"});
  EXPECT_TRUE(w["payload"]["rows"][0]["exceeded"].get<bool>());
  EXPECT_FALSE(w["payload"]["rows"][1]["exceeded"].get<bool>());
  EXPECT_EQ(w["payload"]["label"].get<std::string>().rfind("HEURISTIC", 0), 0u);
  const json e = ok({"eq4", f, "--dim", "2"});
  EXPECT_GE(e["payload"]["lhs_lower"].get<double>(), e["payload"]["rhs"].get<double>() - 1e-6);
  EXPECT_TRUE(e["payload"]["holds"].get<bool>());
}

TEST_F(CliTest, GameGenerator) {
  // CHSH as a game: win iff a xor b = x and y.
  json table;
  table["scenario"] = {{"inputs_a", 2}, {"inputs_b", 2}, {"outputs_a", 2}, {"outputs_b", 2}};
  table["win"] = json::array();
  for (int x = 0; x < 2; ++x) {
    json jx = json::array();
    for (int y = 0; y < 2; ++y) {
      json jy = json::array();
      for (int a = 0; a < 2; ++a) {
        json ja = json::array();
        for (int b = 0; b < 2; ++b) ja.push_back(((a ^ b) == (x & y)) ? 1 : 0);
        jy.push_back(ja);
      }
      jx.push_back(jy);
    }
    table["win"].push_back(jx);
  }
  const std::string t = dir.write("table.json", table.dump());
  const cli::Result r = cli::run({"gen", "game", "--table", t});
  ASSERT_EQ(r.code, 0) << r.err;
  const json c = ok({"classical", dir.write("game.json", r.out)});
  EXPECT_DOUBLE_EQ(c["payload"]["classical_value"].get<double>(), 0.75);

  table["win"][0][0][0][0] = 2;
  EXPECT_EQ(cli::run({"gen", "game", "--table", dir.write("bad.json", table.dump())}).code, 2);
}

TEST_F(CliTest, RandomGeneratorIsDeterministic) {
  const std::vector<std::string> args = {"gen", "random", "--na", "2", "--nb", "2", "--ma", "2", "--mb", "2", "--seed", "7"};
  const cli::Result a = cli::run(args), b = cli::run(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, GuardExceededExitCode) {
  const cli::Result r = cli::run({"classical", gen("magic-square")}, "BELL_GUARD_LIMIT=2");
  EXPECT_EQ(r.code, 3);
}

TEST_F(CliTest, UnknownGeneratorRejected) {
  EXPECT_EQ(cli::run({"gen", "nonsense"}).code, 2);
}
