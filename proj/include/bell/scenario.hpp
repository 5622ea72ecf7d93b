#pragma once

// Data model for bipartite Bell scenarios: functionals, behaviors, local and
// quantum models, and the pairing <T,P>.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bell/errors.hpp"

namespace bell {

inline constexpr double kFeasibilityTol = 1e-9;
inline constexpr double kNoSignalingTol = 1e-8;

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

enum class Completeness { complete, incomplete };

/// Input/output counts for Alice (a) and Bob (b). All counts are >= 1.
struct Scenario {
  int inputs_a = 1;
  int inputs_b = 1;
  int outputs_a = 1;
  int outputs_b = 1;

  Scenario() = default;
  Scenario(int inputs_a, int inputs_b, int outputs_a, int outputs_b);

  std::size_t size() const {
    return static_cast<std::size_t>(inputs_a) * inputs_b * outputs_a * outputs_b;
  }
  /// Dense row-major offset for the [x][y][a][b] layout.
  std::size_t index(int x, int y, int a, int b) const {
    return ((static_cast<std::size_t>(x) * inputs_b + y) * outputs_a + a) * outputs_b + b;
  }
  /// Same counts with one extra output per party.
  Scenario with_abstain() const { return {inputs_a, inputs_b, outputs_a + 1, outputs_b + 1}; }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

std::string to_string(const Scenario& s);

/// Real coefficient tensor T[x][y][a][b].
class BellFunctional {
 public:
  BellFunctional() = default;
  explicit BellFunctional(const Scenario& scenario);
  /// Throws InvalidObject on size mismatch or non-finite entries.
  BellFunctional(const Scenario& scenario, std::vector<double> coeffs);

  const Scenario& scenario() const { return scenario_; }
  std::span<const double> coeffs() const { return coeffs_; }

  double operator()(int x, int y, int a, int b) const { return coeffs_[scenario_.index(x, y, a, b)]; }
  double& operator()(int x, int y, int a, int b) { return coeffs_[scenario_.index(x, y, a, b)]; }

  BellFunctional scaled(double factor) const;
  /// Embeds into the scenario with one extra (zero-coefficient) output per party.
  BellFunctional with_abstain() const;

  friend BellFunctional operator+(const BellFunctional& lhs, const BellFunctional& rhs);

 private:
  Scenario scenario_;
  std::vector<double> coeffs_;
};

/// Conditional probability table p(a,b|x,y), complete or incomplete.
///
/// Incomplete behaviors may carry each party's own outcome marginals
/// (Alice: [x][a], Bob: [y][b]). The joint table alone does not determine
/// them, and complete_behavior() uses them when present.
class Behavior {
 public:
  Behavior() = default;
  Behavior(const Scenario& scenario, std::vector<double> probs,
           Completeness completeness = Completeness::complete);

  const Scenario& scenario() const { return scenario_; }
  std::span<const double> probs() const { return probs_; }
  Completeness completeness() const { return completeness_; }
  bool is_complete() const { return completeness_ == Completeness::complete; }

  double operator()(int x, int y, int a, int b) const { return probs_[scenario_.index(x, y, a, b)]; }

  /// Total mass of the (x,y) block.
  double mass(int x, int y) const;

  const std::optional<std::vector<double>>& marginals_a() const { return marginals_a_; }
  const std::optional<std::vector<double>>& marginals_b() const { return marginals_b_; }
  void set_marginals(std::vector<double> alice, std::vector<double> bob);

  /// Convex combination weight*this + (1-weight)*other.
  Behavior mixed_with(const Behavior& other, double weight) const;

 private:
  Scenario scenario_;
  std::vector<double> probs_;
  Completeness completeness_ = Completeness::complete;
  std::optional<std::vector<double>> marginals_a_;
  std::optional<std::vector<double>> marginals_b_;
};

/// Deterministic local strategy: one output per input for each party.
struct DeterministicStrategy {
  std::vector<int> alice;
  std::vector<int> bob;

  friend bool operator==(const DeterministicStrategy&, const DeterministicStrategy&) = default;
};

/// Finite convex (or sub-convex) mixture of deterministic strategies.
struct LocalModel {
  struct Term {
    double weight = 0.0;
    DeterministicStrategy strategy;
  };
  std::vector<Term> terms;

  double total_weight() const;
};

/// Bipartite state plus per-input POVMs; see behavior_from_quantum().
struct QuantumModel {
  int dim_a = 1;
  int dim_b = 1;
  CMatrix state;                                  // (dim_a*dim_b) square, Alice factor first
  std::vector<std::vector<CMatrix>> alice_povms;  // [x][a], dim_a square
  std::vector<std::vector<CMatrix>> bob_povms;    // [y][b], dim_b square
  Completeness completeness = Completeness::complete;

  /// Scenario implied by the POVM counts (outputs taken from input 0).
  Scenario scenario() const;
};

// --- strategy enumeration -------------------------------------------------

/// outputs^inputs, saturating at UINT64_MAX.
std::uint64_t strategy_count(int inputs, int outputs);

/// Strategy number `index` in lexicographic order of (s(0), ..., s(inputs-1)).
std::vector<int> decode_strategy(std::uint64_t index, int inputs, int outputs);

/// Number of deterministic vertices of the local polytope, saturating.
std::uint64_t vertex_count(const Scenario& s);

/// Vertex `index` = alice_index * (#Bob strategies) + bob_index.
DeterministicStrategy decode_vertex(const Scenario& s, std::uint64_t index);

// --- operations -----------------------------------------------------------

/// Sum over all entries of T*P. Throws ScenarioMismatch.
double pair(const BellFunctional& t, const Behavior& p);

/// Sum_i w_i [a = alice_i(x)][b = bob_i(y)]; incomplete when total weight < 1.
Behavior behavior_from_local(const LocalModel& model, const Scenario& scenario);

/// p(ab|xy) = tr(rho E_a^x (x) F_b^y). Throws InvalidObject if the model
/// fails validate(). Incomplete models also record the party marginals.
Behavior behavior_from_quantum(const QuantumModel& model);

/// Deterministic vertex behavior.
Behavior vertex_behavior(const Scenario& s, const DeterministicStrategy& strategy);

/// p = 1/(M_A M_B) everywhere.
Behavior uniform_behavior(const Scenario& s);

struct Issue {
  std::string what;
  double slack = 0.0;
};
using ValidationReport = std::vector<Issue>;

ValidationReport validate(const BellFunctional& t);
ValidationReport validate(const Behavior& p);
ValidationReport validate(const LocalModel& model, const Scenario& scenario,
                          Completeness completeness = Completeness::complete);
ValidationReport validate(const QuantumModel& model);

struct NoSignalingCheck {
  bool ok = false;
  double max_residual = 0.0;
};

/// Marginal independence within 1e-8. Throws InvalidObject for incomplete input.
NoSignalingCheck no_signaling_check(const Behavior& p);

}  // namespace bell
