#include "bell/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/LU>
#include <Eigen/SparseCore>

namespace bell {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class ColumnKind { structural, slack, surplus, artificial };

// Standard form: minimize cost . z  s.t.  A z = b,  z >= 0,  b >= 0.
struct StandardForm {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd cost;            // phase-two cost
  std::vector<ColumnKind> kind;
  std::vector<int> initial_basis;  // slack or artificial per row
  std::vector<double> row_sign;    // +1 or -1 applied to each row
  int original_rows = 0;

  // structural column k -> original variable var[k] with x += sign[k] * z_k
  std::vector<int> var;
  std::vector<double> sign;
  Eigen::VectorXd shift;           // per original variable
};

void check_shapes(const LinearProgram& lp) {
  const auto m = lp.constraints.rows();
  const auto n = lp.constraints.cols();
  if (lp.objective.size() != n || lp.rhs.size() != m || static_cast<Eigen::Index>(lp.senses.size()) != m ||
      (lp.lower.size() != 0 && lp.lower.size() != n) || (lp.upper.size() != 0 && lp.upper.size() != n)) {
    throw std::invalid_argument("lp_solve: inconsistent dimensions");
  }
  if (!lp.constraints.allFinite() || !lp.objective.allFinite() || !lp.rhs.allFinite()) {
    throw std::invalid_argument("lp_solve: non-finite data");
  }
  for (int j = 0; j < n; ++j) {
    if (std::isnan(lp.lower_bound(j)) || std::isnan(lp.upper_bound(j)) || lp.lower_bound(j) > lp.upper_bound(j) ||
        lp.lower_bound(j) == LinearProgram::inf || lp.upper_bound(j) == -LinearProgram::inf) {
      throw std::invalid_argument("lp_solve: invalid bounds on variable " + std::to_string(j));
    }
  }
}

StandardForm to_standard_form(const LinearProgram& lp) {
  const int m = lp.rows();
  const int n = lp.cols();
  StandardForm sf;
  sf.original_rows = m;
  sf.shift = Eigen::VectorXd::Zero(n);

  std::vector<int> bounded_vars;  // both bounds finite: extra row z <= u - l
  for (int j = 0; j < n; ++j) {
    const double lo = lp.lower_bound(j);
    const double hi = lp.upper_bound(j);
    if (std::isfinite(lo)) {
      sf.shift[j] = lo;
      sf.var.push_back(j);
      sf.sign.push_back(1.0);
      if (std::isfinite(hi)) bounded_vars.push_back(static_cast<int>(sf.var.size()) - 1);
    } else if (std::isfinite(hi)) {
      sf.shift[j] = hi;
      sf.var.push_back(j);
      sf.sign.push_back(-1.0);
    } else {
      sf.var.push_back(j);
      sf.sign.push_back(1.0);
      sf.var.push_back(j);
      sf.sign.push_back(-1.0);
    }
  }
  const int n_struct = static_cast<int>(sf.var.size());
  const int rows = m + static_cast<int>(bounded_vars.size());

  Eigen::MatrixXd a_struct = Eigen::MatrixXd::Zero(rows, n_struct);
  Eigen::VectorXd b(rows);
  std::vector<RowSense> senses(rows);
  const Eigen::VectorXd rhs_shifted = lp.rhs - lp.constraints * sf.shift;
  for (int k = 0; k < n_struct; ++k) a_struct.block(0, k, m, 1) = sf.sign[k] * lp.constraints.col(sf.var[k]);
  for (int i = 0; i < m; ++i) {
    b[i] = rhs_shifted[i];
    senses[i] = lp.senses[i];
  }
  for (std::size_t r = 0; r < bounded_vars.size(); ++r) {
    const int k = bounded_vars[r];
    const int i = m + static_cast<int>(r);
    a_struct(i, k) = 1.0;
    b[i] = lp.upper_bound(sf.var[k]) - lp.lower_bound(sf.var[k]);
    senses[i] = RowSense::less_equal;
  }

  sf.row_sign.assign(rows, 1.0);
  for (int i = 0; i < rows; ++i) {
    if (b[i] < 0.0) {
      sf.row_sign[i] = -1.0;
      b[i] = -b[i];
      a_struct.row(i) *= -1.0;
      if (senses[i] == RowSense::less_equal) senses[i] = RowSense::greater_equal;
      else if (senses[i] == RowSense::greater_equal) senses[i] = RowSense::less_equal;
    }
  }

  int n_slack = 0, n_art = 0;
  for (RowSense s : senses) {
    if (s == RowSense::less_equal) ++n_slack;
    else if (s == RowSense::greater_equal) { ++n_slack; ++n_art; }
    else ++n_art;
  }
  const int cols = n_struct + n_slack + n_art;
  sf.a = Eigen::MatrixXd::Zero(rows, cols);
  sf.a.leftCols(n_struct) = a_struct;
  sf.b = b;
  sf.kind.assign(cols, ColumnKind::structural);
  sf.initial_basis.assign(rows, -1);
  int next = n_struct;
  for (int i = 0; i < rows; ++i) {
    if (senses[i] == RowSense::less_equal) {
      sf.a(i, next) = 1.0;
      sf.kind[next] = ColumnKind::slack;
      sf.initial_basis[i] = next++;
    } else if (senses[i] == RowSense::greater_equal) {
      sf.a(i, next) = -1.0;
      sf.kind[next++] = ColumnKind::surplus;
    }
  }
  for (int i = 0; i < rows; ++i) {
    if (senses[i] != RowSense::less_equal) {
      sf.a(i, next) = 1.0;
      sf.kind[next] = ColumnKind::artificial;
      sf.initial_basis[i] = next++;
    }
  }

  sf.cost = Eigen::VectorXd::Zero(cols);
  const double dir = lp.direction == Direction::maximize ? -1.0 : 1.0;
  for (int k = 0; k < n_struct; ++k) sf.cost[k] = dir * lp.objective[sf.var[k]] * sf.sign[k];
  return sf;
}

// Revised simplex on the standard form: keeps an explicit basis inverse,
// prices against the sparse constraint matrix and reinverts periodically.
class Simplex {
 public:
  // The initial basis is made of unit slack/artificial columns, so B = I.
  Simplex(const StandardForm& sf, const LpOptions& options)
      : sf_(sf), opt_(options), basis_(sf.initial_basis), a_(sf.a.sparseView()) {
    const auto m = sf_.a.rows();
    binv_ = RowMatrix::Identity(m, m);
    xb_ = sf_.b;
    is_basic_.assign(static_cast<std::size_t>(sf_.a.cols()), false);
    for (int j : basis_) is_basic_[j] = true;
  }

  enum class Outcome { optimal, unbounded, iteration_limit };

  const std::vector<int>& basis() const { return basis_; }
  int iterations() const { return iterations_; }

  void set_cost(const Eigen::VectorXd& cost, std::vector<bool> barred) {
    cost_ = cost;
    barred_ = std::move(barred);
  }

  // Refactors B for the current basis and recomputes x_B.
  bool load_from_basis() {
    const int m = static_cast<int>(sf_.a.rows());
    since_reinvert_ = 0;
    if (m == 0) return true;
    Eigen::MatrixXd bmat(m, m);
    for (int i = 0; i < m; ++i) bmat.col(i) = sf_.a.col(basis_[i]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(bmat);
    if (!lu.isInvertible()) return false;
    binv_ = lu.inverse();
    xb_ = binv_ * sf_.b;
    return true;
  }

  Outcome run() {
    const int m = static_cast<int>(sf_.a.rows());
    const int n = static_cast<int>(sf_.a.cols());
    int degenerate_run = 0;
    bool bland = false;
    Eigen::VectorXd cb(m), alpha(m);
    while (true) {
      if (iterations_ >= opt_.max_iterations) return Outcome::iteration_limit;
      if (since_reinvert_ >= kReinvertEvery && !load_from_basis()) return Outcome::iteration_limit;
      for (int i = 0; i < m; ++i) cb[i] = cost_[basis_[i]];
      const Eigen::VectorXd y = binv_.transpose() * cb;
      const Eigen::VectorXd d = cost_ - a_.transpose() * y;

      int entering = -1;
      double best = -opt_.optimality_tol;
      for (int j = 0; j < n; ++j) {
        if (barred_[j] || is_basic_[j] || d[j] >= -opt_.optimality_tol) continue;
        if (bland) {
          entering = j;
          break;
        }
        if (d[j] < best) {
          best = d[j];
          entering = j;
        }
      }
      if (entering < 0) return Outcome::optimal;

      column(entering, alpha);
      // Harris two-pass ratio test: bound the step with slightly relaxed
      // feasibility, then take the largest pivot among rows within it.
      double bound = INFINITY;
      for (int i = 0; i < m; ++i) {
        if (alpha[i] <= opt_.pivot_tol) continue;
        bound = std::min(bound, (std::max(xb_[i], 0.0) + kHarrisTol) / alpha[i]);
      }
      if (!std::isfinite(bound)) return Outcome::unbounded;
      int leaving = -1;
      double min_ratio = 0.0;
      for (int i = 0; i < m; ++i) {
        const double coef = alpha[i];
        if (coef <= opt_.pivot_tol) continue;
        const double ratio = std::max(xb_[i], 0.0) / coef;
        if (ratio > bound) continue;
        const bool prefer = leaving < 0 || (bland ? basis_[i] < basis_[leaving] : coef > alpha[leaving]);
        if (prefer) leaving = i;
      }
      min_ratio = std::max(xb_[leaving], 0.0) / alpha[leaving];

      if (min_ratio <= 1e-12) {
        if (++degenerate_run > opt_.degenerate_run_before_bland) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
      pivot(leaving, entering, alpha);
    }
  }

  // Pivots basic artificial variables out where a structural/slack column
  // can replace them. Rows where none can are linearly redundant.
  void drive_out_artificials() {
    const int m = static_cast<int>(sf_.a.rows());
    const int n = static_cast<int>(sf_.a.cols());
    Eigen::VectorXd alpha(m);
    for (int r = 0; r < m; ++r) {
      if (sf_.kind[basis_[r]] != ColumnKind::artificial) continue;
      const Eigen::VectorXd row = a_.transpose() * binv_.row(r).transpose();
      int best = -1;
      double best_abs = 1e-7;
      for (int j = 0; j < n; ++j) {
        if (sf_.kind[j] == ColumnKind::artificial || is_basic_[j]) continue;
        if (std::abs(row[j]) > best_abs) {
          best_abs = std::abs(row[j]);
          best = j;
        }
      }
      if (best < 0) continue;
      column(best, alpha);
      pivot(r, best, alpha);
    }
  }

 private:
  static constexpr int kReinvertEvery = 100;
  static constexpr double kHarrisTol = 1e-9;

  // alpha = B^{-1} A_q
  void column(int q, Eigen::VectorXd& alpha) const {
    alpha.setZero();
    for (SparseMatrix::InnerIterator it(a_, q); it; ++it) alpha += it.value() * binv_.col(it.row());
  }

  void pivot(int r, int q, const Eigen::VectorXd& alpha) {
    const int m = static_cast<int>(binv_.rows());
    const double pr = alpha[r];
    binv_.row(r) /= pr;
    xb_[r] /= pr;
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      const double f = alpha[i];
      if (f == 0.0) continue;
      binv_.row(i) -= f * binv_.row(r);
      xb_[i] -= f * xb_[r];
    }
    is_basic_[basis_[r]] = false;
    is_basic_[q] = true;
    basis_[r] = q;
    ++iterations_;
    ++since_reinvert_;
  }

  using SparseMatrix = Eigen::SparseMatrix<double>;

  const StandardForm& sf_;
  const LpOptions& opt_;
  std::vector<int> basis_;
  SparseMatrix a_;
  RowMatrix binv_;
  Eigen::VectorXd xb_;
  std::vector<bool> is_basic_;
  Eigen::VectorXd cost_;
  std::vector<bool> barred_;
  int iterations_ = 0;
  int since_reinvert_ = 0;
};

struct BasisSolution {
  Eigen::VectorXd z;       // all standard columns
  Eigen::VectorXd y;       // standard-form duals
  Eigen::VectorXd reduced;  // cost - A^T y
  bool ok = false;
};

BasisSolution solve_basis(const StandardForm& sf, const std::vector<int>& basis, const Eigen::VectorXd& cost) {
  const int m = static_cast<int>(sf.a.rows());
  Eigen::MatrixXd bmat(m, m);
  Eigen::VectorXd cb(m);
  for (int i = 0; i < m; ++i) {
    bmat.col(i) = sf.a.col(basis[i]);
    cb[i] = cost[basis[i]];
  }
  BasisSolution out;
  if (m == 0) {
    out.y = Eigen::VectorXd::Zero(0);
    out.z = Eigen::VectorXd::Zero(sf.a.cols());
    out.reduced = cost;
    out.ok = true;
    return out;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(bmat);
  if (!lu.isInvertible()) return out;
  const Eigen::VectorXd zb = lu.solve(sf.b);
  Eigen::FullPivLU<Eigen::MatrixXd> lut(bmat.transpose());
  out.y = lut.solve(cb);
  out.z = Eigen::VectorXd::Zero(sf.a.cols());
  for (int i = 0; i < m; ++i) out.z[basis[i]] = zb[i];
  out.reduced = cost - sf.a.transpose() * out.y;
  out.ok = true;
  return out;
}

// Runs one phase to an optimal basis whose basis also checks out after
// refactorization. Returns false on numerical trouble.
enum class PhaseResult { optimal, unbounded, failure };

PhaseResult run_phase(Simplex& tab, const StandardForm& sf, const Eigen::VectorXd& cost,
                      const std::vector<bool>& barred, const LpOptions& opt, BasisSolution& sol) {
  tab.set_cost(cost, barred);
  const double scale_b = 1.0 + sf.b.cwiseAbs().maxCoeff();
  const double scale_c = 1.0 + cost.cwiseAbs().maxCoeff();
  for (int round = 0; round < 4; ++round) {
    const auto outcome = tab.run();
    if (outcome == Simplex::Outcome::unbounded) return PhaseResult::unbounded;
    if (outcome == Simplex::Outcome::iteration_limit) return PhaseResult::failure;
    sol = solve_basis(sf, tab.basis(), cost);
    if (!sol.ok) return PhaseResult::failure;
    double primal_viol = 0.0, dual_viol = 0.0;
    for (Eigen::Index j = 0; j < sol.z.size(); ++j) {
      primal_viol = std::max(primal_viol, -sol.z[j]);
      if (!barred[j]) dual_viol = std::max(dual_viol, -sol.reduced[j]);
    }
    if (primal_viol <= opt.feasibility_tol * scale_b && dual_viol <= opt.optimality_tol * scale_c) {
      return PhaseResult::optimal;
    }
    if (!tab.load_from_basis()) return PhaseResult::failure;
  }
  return PhaseResult::failure;
}

}  // namespace

LpSolution lp_solve(const LinearProgram& lp, const LpOptions& options) {
  check_shapes(lp);
  const StandardForm sf = to_standard_form(lp);
  const int m = static_cast<int>(sf.a.rows());
  const int ncols = static_cast<int>(sf.a.cols());
  LpSolution result;

  Simplex tab(sf, options);
  BasisSolution sol;

  bool has_artificial = false;
  Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(ncols);
  for (int j = 0; j < ncols; ++j) {
    if (sf.kind[j] == ColumnKind::artificial) {
      phase1_cost[j] = 1.0;
      has_artificial = true;
    }
  }

  if (has_artificial) {
    const auto phase1 = run_phase(tab, sf, phase1_cost, std::vector<bool>(ncols, false), options, sol);
    result.iterations = tab.iterations();
    if (phase1 != PhaseResult::optimal) {
      result.status = LpStatus::numerical_failure;
      return result;
    }
    const double infeasibility = phase1_cost.dot(sol.z);
    if (infeasibility > options.infeasibility_tol * (1.0 + sf.b.cwiseAbs().maxCoeff())) {
      result.status = LpStatus::infeasible;
      result.infeasibility = infeasibility;
      result.farkas.resize(sf.original_rows);
      for (int i = 0; i < sf.original_rows; ++i) result.farkas[i] = sf.row_sign[i] * sol.y[i];
      return result;
    }
    tab.drive_out_artificials();
  }

  std::vector<bool> barred(ncols, false);
  for (int j = 0; j < ncols; ++j) barred[j] = sf.kind[j] == ColumnKind::artificial;
  const auto phase2 = run_phase(tab, sf, sf.cost, barred, options, sol);
  result.iterations = tab.iterations();
  if (phase2 == PhaseResult::unbounded) {
    result.status = LpStatus::unbounded;
    return result;
  }
  if (phase2 != PhaseResult::optimal) {
    result.status = LpStatus::numerical_failure;
    return result;
  }
  // Basic artificials must sit at zero; anything else means phase two drifted.
  for (int i = 0; i < m; ++i) {
    const int col = tab.basis()[i];
    if (sf.kind[col] == ColumnKind::artificial &&
        std::abs(sol.z[col]) > options.infeasibility_tol * (1.0 + sf.b.cwiseAbs().maxCoeff())) {
      result.status = LpStatus::numerical_failure;
      return result;
    }
  }

  result.primal = sf.shift;
  for (std::size_t k = 0; k < sf.var.size(); ++k) result.primal[sf.var[k]] += sf.sign[k] * std::max(sol.z[k], 0.0);
  result.objective = lp.objective.dot(result.primal);
  result.dual.resize(lp.rows());
  const double dir = lp.direction == Direction::maximize ? -1.0 : 1.0;
  for (int i = 0; i < lp.rows(); ++i) result.dual[i] = dir * sf.row_sign[i] * sol.y[i];
  result.status = LpStatus::optimal;
  return result;
}

LpResiduals lp_residuals(const LinearProgram& lp, const LpSolution& solution) {
  LpResiduals res;
  if (solution.status != LpStatus::optimal) return res;
  const Eigen::VectorXd& x = solution.primal;
  const Eigen::VectorXd ax = lp.constraints * x;
  for (int i = 0; i < lp.rows(); ++i) {
    double viol = 0.0;
    switch (lp.senses[i]) {
      case RowSense::less_equal: viol = ax[i] - lp.rhs[i]; break;
      case RowSense::greater_equal: viol = lp.rhs[i] - ax[i]; break;
      case RowSense::equal: viol = std::abs(ax[i] - lp.rhs[i]); break;
    }
    res.primal = std::max(res.primal, viol);
  }
  for (int j = 0; j < lp.cols(); ++j) {
    res.primal = std::max(res.primal, lp.lower_bound(j) - x[j]);
    res.primal = std::max(res.primal, x[j] - lp.upper_bound(j));
  }

  // Work in maximization form.
  const double dir = lp.direction == Direction::maximize ? 1.0 : -1.0;
  const Eigen::VectorXd c = dir * lp.objective;
  const Eigen::VectorXd y = dir * solution.dual;
  for (int i = 0; i < lp.rows(); ++i) {
    if (lp.senses[i] == RowSense::less_equal) res.dual = std::max(res.dual, -y[i]);
    if (lp.senses[i] == RowSense::greater_equal) res.dual = std::max(res.dual, y[i]);
  }
  const Eigen::VectorXd reduced = c - lp.constraints.transpose() * y;
  double dual_objective = y.dot(lp.rhs);
  for (int j = 0; j < lp.cols(); ++j) {
    const double dj = reduced[j];
    if (dj > 0.0) {
      if (std::isfinite(lp.upper_bound(j))) dual_objective += dj * lp.upper_bound(j);
      else res.dual = std::max(res.dual, dj);
    } else if (dj < 0.0) {
      if (std::isfinite(lp.lower_bound(j))) dual_objective += dj * lp.lower_bound(j);
      else res.dual = std::max(res.dual, -dj);
    }
  }
  res.gap = std::abs(dual_objective - c.dot(x));
  return res;
}

}  // namespace bell
