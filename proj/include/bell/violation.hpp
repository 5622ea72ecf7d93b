#pragma once

// Behavior-centric quantities: maximal violation nu(Q), LHV-noise robustness
// pi(Q), their identity nu = 2/pi - 1, completion of incomplete behaviors,
// communication bounds and dimension-witness sweeps.

#include <string>
#include <vector>

#include "bell/scenario.hpp"
#include "bell/seesaw.hpp"

namespace bell {

/// |<T,Q>| / classical_value(T). Throws UndefinedQuantity when the classical
/// value is 0.
double violation_ratio(const BellFunctional& t, const Behavior& q, const Limits& limits = {});

struct MaxViolation {
  double nu = 1.0;
  /// Optimal functional, scaled so its largest |<W,D>| over vertices is 1.
  BellFunctional witness;
  /// nu was within 1e-9 of 1 and has been reported as exactly 1.
  bool boundary = false;
};

/// nu(Q) = sup_T |<T,Q>| / sup_L |<T,P>| by LP. Requires a complete,
/// no-signaling Q; otherwise UndefinedQuantity.
MaxViolation max_violation(const Behavior& q, const Limits& limits = {});

/// pi(Q): the largest v with v Q + (1-v) P local for some local P.
double noise_robustness(const Behavior& q, const Limits& limits = {});

/// |nu - (2/pi - 1)| from two independent LPs.
double check_noise_identity(const Behavior& q, const Limits& limits = {});

struct ViolationReport {
  double nu = 1.0;
  BellFunctional witness;
  double pi = 1.0;
  double identity_residual = 0.0;
  double comm_bound_bits = 0.0;
  bool boundary = false;
};

ViolationReport violation_report(const Behavior& q, const Limits& limits = {});

/// Appends an abstain outcome to each party. Missing mass goes to the new
/// outcomes using the stored party marginals when present, otherwise the
/// smallest no-signaling marginals max_y sum_b p(a,b|x,y). Throws
/// InvalidObject naming (x,y) when no nonnegative completion exists.
Behavior complete_behavior(const Behavior& q);

/// Completed POVMs {E_a, 1 - sum E_a} for an incomplete quantum model.
QuantumModel complete_model(const QuantumModel& model);

struct Eq4Result {
  double lhs_lower = 0.0;  // nu of the completed best incomplete behavior
  double rhs = 0.0;        // incomplete seesaw value / incomplete classical value
  double quantum_value = 0.0;
  double classical_value_incomplete = 0.0;
  Behavior completed;
  MaxViolation violation;
};

/// Instantiates sup nu(Q) >= sup_T (sup_{Q^in} |<T,Q>|) / (sup_{L^in} |<T,P>|)
/// on the best incomplete model found by the seesaw.
Eq4Result eq4_gap(const BellFunctional& t, SeesawConfig cfg, const Limits& limits = {});

/// log2(nu), clipped at 0.
double comm_lower_bound(const Behavior& q, const Limits& limits = {});

struct DimensionRow {
  int dim = 1;
  double best_value = 0.0;
  bool exceeded = false;  // observed > best_value + tolerance
};

struct DimensionWitnessReport {
  double observed = 0.0;
  std::vector<DimensionRow> rows;
  double algebraic_bound = 0.0;  // sup over all (not necessarily quantum) behaviors
  std::vector<std::string> warnings;
  std::string label;
};

inline constexpr double kWitnessTolerance = 1e-6;

/// Seesaw sweep d = 1..max_dim. Heuristic: a seesaw value is a lower bound
/// on sup over Q_d, so an exceeded row is evidence, not a certificate.
DimensionWitnessReport dimension_witness_report(const BellFunctional& t, double observed, int max_dim,
                                                const SeesawConfig& cfg);

}  // namespace bell
