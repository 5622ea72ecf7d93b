#pragma once

#include <span>
#include <vector>

#include "bell/scenario.hpp"

namespace bell {

struct PovmOptions {
  int ipm_max_iterations = 80;
  double ipm_gap_tol = 1e-12;
  /// Cap and stopping gain for the fixed-point refinement pass.
  int max_iterations = 500;
  double gain_tol = 1e-10;
};

struct PovmUpdateResult {
  std::vector<CMatrix> povm;
  double objective = 0.0;          // sum_a tr(E_a R_a)
  CMatrix dual;                    // Y with Y >= R_a for every a
  double dual_bound = 0.0;         // tr(Y), an upper bound on the optimum
  bool converged = false;
  int iterations = 0;
  std::vector<double> objective_log;  // accepted iterates, non-decreasing
};

/// Maximizes sum_a tr(E_a R_a) over POVMs {E_a} (sum = 1 in complete mode,
/// sum <= 1 in incomplete mode).
///
/// Two outcomes use the closed form (projector onto the strictly positive
/// eigenspace of R_0 - R_1). More outcomes run a primal-dual interior point
/// method on the SDP and its dual min tr(Y) s.t. Y >= R_a, followed by a
/// shifted fixed-point refinement that only accepts improving iterates. The
/// result never scores below `warm_start` when one is supplied.
PovmUpdateResult povm_update(std::span<const CMatrix> reduced, Completeness mode,
                             std::span<const CMatrix> warm_start = {},
                             const PovmOptions& options = {});

double povm_objective(std::span<const CMatrix> reduced, std::span<const CMatrix> povm);

}  // namespace bell
