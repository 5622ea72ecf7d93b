#include "bell/violation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bell/classical.hpp"
#include "bell/lp.hpp"

namespace bell {

namespace {

void require_behavior_lp_input(const Behavior& q, const Limits& limits) {
  if (!q.is_complete()) throw UndefinedQuantity("nu undefined for incomplete behaviors; complete it first");
  if (!no_signaling_check(q).ok) throw UndefinedQuantity("nu undefined for signaling behaviors");
  const std::uint64_t v = vertex_count(q.scenario());
  if (v > limits.lp_vertices)
    throw GuardExceeded("behavior LP needs " + std::to_string(v) + " vertices, limit is " +
                        std::to_string(limits.lp_vertices) + " (BELL_GUARD_LIMIT)");
}

// Column v holds the 0/1 vertex behavior D_v.
Eigen::MatrixXd vertex_matrix(const Scenario& s) {
  const auto count = static_cast<Eigen::Index>(vertex_count(s));
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s.size()), count);
  for (Eigen::Index v = 0; v < count; ++v) {
    const DeterministicStrategy st = decode_vertex(s, static_cast<std::uint64_t>(v));
    for (int x = 0; x < s.inputs_a; ++x)
      for (int y = 0; y < s.inputs_b; ++y) d(static_cast<Eigen::Index>(s.index(x, y, st.alice[x], st.bob[y])), v) = 1.0;
  }
  return d;
}

Eigen::VectorXd as_vector(std::span<const double> p) { return Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size())); }

}  // namespace

double violation_ratio(const BellFunctional& t, const Behavior& q, const Limits& limits) {
  const double c = classical_value(t, limits);
  if (c == 0.0) throw UndefinedQuantity("ratio undefined: classical value is 0");
  return std::abs(pair(t, q)) / c;
}

MaxViolation max_violation(const Behavior& q, const Limits& limits) {
  require_behavior_lp_input(q, limits);
  const Scenario& s = q.scenario();
  const Eigen::MatrixXd d = vertex_matrix(s);
  const Eigen::Index n = d.cols();

  // min sum(alpha + beta) s.t. sum (alpha_i - beta_i) D_i = Q. Its shadow
  // prices are the optimal T of max <T,Q> s.t. |<T,D_i>| <= 1.
  LinearProgram lp;
  lp.direction = Direction::minimize;
  lp.objective = Eigen::VectorXd::Ones(2 * n);
  lp.constraints.resize(d.rows(), 2 * n);
  lp.constraints << d, -d;
  lp.senses.assign(static_cast<std::size_t>(d.rows()), RowSense::equal);
  lp.rhs = as_vector(q.probs());
  const LpSolution sol = lp_solve(lp);
  if (sol.status == LpStatus::infeasible) throw UndefinedQuantity("nu undefined for signaling behaviors");
  if (sol.status != LpStatus::optimal)
    throw std::runtime_error(std::string("violation LP ended with status ") + to_string(sol.status));

  MaxViolation out;
  BellFunctional raw(s, std::vector<double>(sol.dual.data(), sol.dual.data() + sol.dual.size()));
  const double scale = classical_value(raw, limits);
  out.witness = scale > 0.0 ? raw.scaled(1.0 / scale) : raw;
  out.nu = sol.objective;
  if (std::abs(out.nu - 1.0) <= 1e-9) {
    out.nu = 1.0;
    out.boundary = true;
  }
  return out;
}

double noise_robustness(const Behavior& q, const Limits& limits) {
  require_behavior_lp_input(q, limits);
  const Scenario& s = q.scenario();
  const Eigen::MatrixXd d = vertex_matrix(s);
  const Eigen::Index n = d.cols();
  const Eigen::Index m = d.rows();

  // Variables (v, lambda, mu): v Q + sum mu D - sum lambda D = 0,
  // sum lambda = 1, sum mu + v = 1.
  LinearProgram lp;
  lp.direction = Direction::maximize;
  lp.objective = Eigen::VectorXd::Zero(1 + 2 * n);
  lp.objective[0] = 1.0;
  lp.constraints = Eigen::MatrixXd::Zero(m + 2, 1 + 2 * n);
  lp.constraints.block(0, 0, m, 1) = as_vector(q.probs());
  lp.constraints.block(0, 1, m, n) = -d;
  lp.constraints.block(0, 1 + n, m, n) = d;
  lp.constraints.block(m, 1, 1, n).setOnes();
  lp.constraints.block(m + 1, 1 + n, 1, n).setOnes();
  lp.constraints(m + 1, 0) = 1.0;
  lp.senses.assign(static_cast<std::size_t>(m + 2), RowSense::equal);
  lp.rhs = Eigen::VectorXd::Zero(m + 2);
  lp.rhs[m] = 1.0;
  lp.rhs[m + 1] = 1.0;
  const LpSolution sol = lp_solve(lp);
  if (sol.status != LpStatus::optimal)
    throw std::runtime_error(std::string("robustness LP ended with status ") + to_string(sol.status));
  return std::clamp(sol.objective, 0.0, 1.0);
}

double check_noise_identity(const Behavior& q, const Limits& limits) {
  const double nu = max_violation(q, limits).nu;
  const double pi = noise_robustness(q, limits);
  return std::abs(nu - (2.0 / pi - 1.0));
}

double comm_lower_bound(const Behavior& q, const Limits& limits) {
  return std::max(0.0, std::log2(max_violation(q, limits).nu));
}

ViolationReport violation_report(const Behavior& q, const Limits& limits) {
  ViolationReport r;
  MaxViolation mv = max_violation(q, limits);
  r.nu = mv.nu;
  r.witness = std::move(mv.witness);
  r.boundary = mv.boundary;
  r.pi = noise_robustness(q, limits);
  r.identity_residual = std::abs(r.nu - (2.0 / r.pi - 1.0));
  r.comm_bound_bits = std::max(0.0, std::log2(r.nu));
  return r;
}

Behavior complete_behavior(const Behavior& q) {
  const Scenario& s = q.scenario();
  const Scenario big = s.with_abstain();
  std::vector<double> out(big.size(), 0.0);
  for (int x = 0; x < s.inputs_a; ++x)
    for (int y = 0; y < s.inputs_b; ++y)
      for (int a = 0; a < s.outputs_a; ++a)
        for (int b = 0; b < s.outputs_b; ++b) out[big.index(x, y, a, b)] = q(x, y, a, b);
  if (q.is_complete()) return Behavior(big, std::move(out), Completeness::complete);

  // Party marginals alpha[x][a], beta[y][b].
  std::vector<double> alpha, beta;
  if (q.marginals_a() && q.marginals_b()) {
    alpha = *q.marginals_a();
    beta = *q.marginals_b();
  } else {
    alpha.assign(static_cast<std::size_t>(s.inputs_a) * s.outputs_a, 0.0);
    beta.assign(static_cast<std::size_t>(s.inputs_b) * s.outputs_b, 0.0);
    for (int x = 0; x < s.inputs_a; ++x)
      for (int y = 0; y < s.inputs_b; ++y) {
        for (int a = 0; a < s.outputs_a; ++a) {
          double row = 0.0;
          for (int b = 0; b < s.outputs_b; ++b) row += q(x, y, a, b);
          double& m = alpha[static_cast<std::size_t>(x) * s.outputs_a + a];
          m = std::max(m, row);
        }
        for (int b = 0; b < s.outputs_b; ++b) {
          double col = 0.0;
          for (int a = 0; a < s.outputs_a; ++a) col += q(x, y, a, b);
          double& m = beta[static_cast<std::size_t>(y) * s.outputs_b + b];
          m = std::max(m, col);
        }
      }
  }

  auto fail = [](int x, int y, const std::string& why) {
    throw InvalidObject("no nonnegative completion at (x=" + std::to_string(x) + ", y=" + std::to_string(y) + "): " + why);
  };
  auto settle = [&](double v, int x, int y, const char* what) {
    if (v < -kFeasibilityTol) fail(x, y, std::string(what) + " would be " + std::to_string(v));
    return std::max(v, 0.0);
  };
  for (int x = 0; x < s.inputs_a; ++x)
    for (int y = 0; y < s.inputs_b; ++y) {
      if (q.mass(x, y) > 1.0 + kFeasibilityTol) fail(x, y, "mass exceeds 1");
      double alpha_sum = 0.0, beta_sum = 0.0;
      for (int a = 0; a < s.outputs_a; ++a) {
        const double m = alpha[static_cast<std::size_t>(x) * s.outputs_a + a];
        alpha_sum += m;
        double row = 0.0;
        for (int b = 0; b < s.outputs_b; ++b) row += q(x, y, a, b);
        out[big.index(x, y, a, s.outputs_b)] = settle(m - row, x, y, "an Alice-only cell");
      }
      for (int b = 0; b < s.outputs_b; ++b) {
        const double m = beta[static_cast<std::size_t>(y) * s.outputs_b + b];
        beta_sum += m;
        double col = 0.0;
        for (int a = 0; a < s.outputs_a; ++a) col += q(x, y, a, b);
        out[big.index(x, y, s.outputs_a, b)] = settle(m - col, x, y, "a Bob-only cell");
      }
      out[big.index(x, y, s.outputs_a, s.outputs_b)] =
          settle(1.0 - alpha_sum - beta_sum + q.mass(x, y), x, y, "the double-abstain cell");
    }
  return Behavior(big, std::move(out), Completeness::complete);
}

QuantumModel complete_model(const QuantumModel& model) {
  QuantumModel out = model;
  out.completeness = Completeness::complete;
  auto extend = [](std::vector<std::vector<CMatrix>>& povms, int dim) {
    for (auto& povm : povms) {
      CMatrix rest = CMatrix::Identity(dim, dim);
      for (const auto& e : povm) rest -= e;
      povm.push_back(0.5 * (rest + rest.adjoint()));
    }
  };
  extend(out.alice_povms, model.dim_a);
  extend(out.bob_povms, model.dim_b);
  return out;
}

Eq4Result eq4_gap(const BellFunctional& t, SeesawConfig cfg, const Limits& limits) {
  cfg.mode = Completeness::incomplete;
  cfg.check();
  Eq4Result r;
  r.classical_value_incomplete = classical_value_incomplete(t, limits);
  if (r.classical_value_incomplete == 0.0) throw UndefinedQuantity("ratio undefined: incomplete classical value is 0");
  const SeesawResult found = seesaw(t, cfg);
  r.quantum_value = found.value;
  r.rhs = found.value / r.classical_value_incomplete;
  r.completed = complete_behavior(behavior_from_quantum(found.model));
  r.violation = max_violation(r.completed, limits);
  r.lhs_lower = r.violation.nu;
  return r;
}

DimensionWitnessReport dimension_witness_report(const BellFunctional& t, double observed, int max_dim,
                                                const SeesawConfig& cfg) {
  if (!(observed >= 0.0)) throw std::invalid_argument("observed value must be >= 0");
  if (max_dim < 1) throw std::invalid_argument("max_dim must be >= 1");
  DimensionWitnessReport rep;
  rep.observed = observed;
  rep.label =
      "HEURISTIC: see-saw values are lower bounds on the best d-dimensional quantum value, so an exceeded row is "
      "evidence of dimension > d, not a certificate";
  const Scenario& s = t.scenario();
  double hi = 0.0, lo = 0.0;
  for (int x = 0; x < s.inputs_a; ++x)
    for (int y = 0; y < s.inputs_b; ++y) {
      double bmax = -INFINITY, bmin = INFINITY;
      for (int a = 0; a < s.outputs_a; ++a)
        for (int b = 0; b < s.outputs_b; ++b) {
          bmax = std::max(bmax, t(x, y, a, b));
          bmin = std::min(bmin, t(x, y, a, b));
        }
      hi += bmax;
      lo += bmin;
    }
  rep.algebraic_bound = std::max(hi, -lo);

  SeesawConfig run = cfg;
  std::optional<QuantumModel> previous;
  bool all_exceeded = true;
  for (int d = 1; d <= max_dim; ++d) {
    run.dim = d;
    if (previous) run.warm_start = previous;
    const SeesawResult res = seesaw(t, run);
    previous = res.model;
    DimensionRow row{d, res.value, observed > res.value + kWitnessTolerance};
    all_exceeded = all_exceeded && row.exceeded;
    rep.rows.push_back(row);
  }
  if (observed > rep.algebraic_bound + kWitnessTolerance)
    rep.warnings.push_back("observed value exceeds the algebraic maximum over all behaviors; it is unphysical");
  else if (all_exceeded)
    rep.warnings.push_back("observed value exceeds every best-found value up to d=" + std::to_string(max_dim) +
                           "; it may be unphysical or need a larger dimension");
  return rep;
}

}  // namespace bell
