#pragma once

// Two-phase primal simplex with dual and Farkas certificates.
//
// The solver converts to standard form (x >= 0, equality rows, b >= 0) and
// runs a revised simplex: an explicit basis inverse with periodic
// reinversion, sparse pricing, Dantzig's rule and a Bland fallback after a
// run of degenerate pivots. Final primal and dual vectors are re-derived from
// an LU factorization of the optimal basis; a basis that fails the
// feasibility or optimality checks is refactored and pivoting resumes.

#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace bell {

enum class RowSense { less_equal, equal, greater_equal };
enum class Direction { minimize, maximize };

struct LinearProgram {
  Direction direction = Direction::maximize;
  Eigen::VectorXd objective;   // c, length n
  Eigen::MatrixXd constraints; // A, m x n
  std::vector<RowSense> senses;
  Eigen::VectorXd rhs;         // b, length m
  Eigen::VectorXd lower;       // empty means all 0
  Eigen::VectorXd upper;       // empty means all +inf

  static constexpr double inf = std::numeric_limits<double>::infinity();

  int rows() const { return static_cast<int>(constraints.rows()); }
  int cols() const { return static_cast<int>(constraints.cols()); }
  double lower_bound(int j) const { return lower.size() ? lower[j] : 0.0; }
  double upper_bound(int j) const { return upper.size() ? upper[j] : inf; }
};

enum class LpStatus { optimal, infeasible, unbounded, numerical_failure };

const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::numerical_failure;
  Eigen::VectorXd primal;
  /// Shadow prices d(optimum)/d(b_i). For a maximization, <= rows carry
  /// y >= 0 and >= rows y <= 0; signs flip for a minimization.
  Eigen::VectorXd dual;
  double objective = 0.0;
  /// When infeasible: y over the original rows with y^T A <= 0 on every
  /// column whose variable is only bounded below at 0 and y^T b > 0
  /// (a Farkas certificate for {Ax = b, x >= 0}). The value y^T b equals the
  /// phase-one infeasibility.
  Eigen::VectorXd farkas;
  double infeasibility = 0.0;
  int iterations = 0;
};

struct LpOptions {
  int max_iterations = 200'000;
  int degenerate_run_before_bland = 50;
  double pivot_tol = 1e-9;
  double optimality_tol = 1e-9;
  double feasibility_tol = 1e-9;
  /// Phase-one optimum above this is reported as infeasible.
  double infeasibility_tol = 1e-8;
};

LpSolution lp_solve(const LinearProgram& lp, const LpOptions& options = {});

struct LpResiduals {
  double primal = 0.0;  // max violation of rows and bounds
  double dual = 0.0;    // max violation of dual sign conditions
  double gap = 0.0;     // |primal objective - dual objective|
};

/// Independent check of an optimal solution against the LP data.
LpResiduals lp_residuals(const LinearProgram& lp, const LpSolution& solution);

}  // namespace bell
