#pragma once

// Alternating (see-saw) lower bounds on sup |<T,Q>| over quantum behaviors
// with both local dimensions fixed.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "bell/scenario.hpp"

namespace bell {

struct SeesawConfig {
  int dim = 2;
  int seeds = 20;
  int max_sweeps = 2000;
  double tol = 1e-9;
  std::uint64_t rng_seed = 0;
  Completeness mode = Completeness::complete;
  /// Optional starting model for seed 0 (padded to `dim` if smaller).
  std::optional<QuantumModel> warm_start;

  /// Throws std::invalid_argument unless dim >= 1, seeds >= 1, tol > 0,
  /// max_sweeps >= 1.
  void check() const;
};

struct SeesawRun {
  double value = 0.0;             // best |<T,Q>| of this seed
  int sweeps = 0;
  bool converged = false;
  std::vector<double> trace;          // objective after every sub-step on +T
  std::vector<double> trace_negated;  // same for the run on -T
};

struct SeesawResult {
  double value = 0.0;
  QuantumModel model;
  int sweeps_used = 0;
  bool converged = false;
  std::vector<double> per_seed_values;
  std::vector<SeesawRun> runs;
};

/// B = sum T[x][y][a][b] E_a^x (x) F_b^y.
CMatrix bell_operator(const BellFunctional& t, const std::vector<std::vector<CMatrix>>& alice_povms,
                      const std::vector<std::vector<CMatrix>>& bob_povms);

enum class Party { alice, bob };

/// Per input, the M Hermitian operators R_a^x with
/// sum_{x,a} tr(E_a^x R_a^x) = <T, behavior> for the given state and the
/// other party's POVMs.
std::vector<std::vector<CMatrix>> reduced_operators(const BellFunctional& t, const CMatrix& rho,
                                                    const std::vector<std::vector<CMatrix>>& other_povms,
                                                    Party party, int dim_a, int dim_b);

/// Random POVM: PSD-projected Gaussian Hermitian blocks normalized by
/// S^{-1/2} E S^{-1/2}. Incomplete mode draws one extra outcome and drops it.
std::vector<CMatrix> random_povm(int dim, int outcomes, Completeness mode, std::mt19937_64& rng);

/// Random pure state (normalized complex Gaussian vector) with random POVMs.
QuantumModel random_quantum_model(const Scenario& s, int dim, Completeness mode, std::mt19937_64& rng);

/// Embeds a model into larger local dimensions: the state is zero padded and
/// the new basis directions are assigned to outcome 0 (complete) or to no
/// outcome (incomplete).
QuantumModel pad_model(const QuantumModel& model, int dim_a, int dim_b);

SeesawResult seesaw(const BellFunctional& t, const SeesawConfig& cfg);

/// Seesaw value over the classical value (L for complete mode, L^in for
/// incomplete mode). Throws UndefinedQuantity when that value is 0.
double quantum_ratio(const BellFunctional& t, const SeesawConfig& cfg, const Limits& limits = {});

}  // namespace bell
