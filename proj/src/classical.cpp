#include "bell/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bell/lp.hpp"

namespace bell {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::local: return "local";
    case Verdict::nonlocal: return "nonlocal";
    case Verdict::undecided: return "undecided";
  }
  return "unknown";
}

namespace {

BellFunctional swap_parties(const BellFunctional& t) {
  const Scenario& s = t.scenario();
  BellFunctional out(Scenario(s.inputs_b, s.inputs_a, s.outputs_b, s.outputs_a));
  for (int x = 0; x < s.inputs_a; ++x)
    for (int y = 0; y < s.inputs_b; ++y)
      for (int a = 0; a < s.outputs_a; ++a)
        for (int b = 0; b < s.outputs_b; ++b) out(y, x, b, a) = t(x, y, a, b);
  return out;
}

void check_guard(std::uint64_t count, std::uint64_t limit, const char* what) {
  if (count > limit) {
    throw GuardExceeded(std::string(what) + " needs " + std::to_string(count) + " enumerated strategies, limit is " +
                        std::to_string(limit) + " (BELL_GUARD_LIMIT)");
  }
}

// Depth-first enumeration of one party's choices per input. `choices` is the
// number of options per input; `contribution(x, choice, y, b)` is the amount
// added to the other party's score table; `leaf(acc)` scores a complete
// assignment. Prefix sums are recomputed along each branch, so every leaf is
// summed in input order and results do not depend on visiting order.
template <typename Contribution, typename Leaf>
void enumerate(int inputs, int choices, int other_inputs, int other_outputs, Contribution contribution, Leaf leaf) {
  const std::size_t table = static_cast<std::size_t>(other_inputs) * other_outputs;
  std::vector<std::vector<double>> acc(inputs + 1, std::vector<double>(table, 0.0));
  std::vector<int> assignment(inputs, 0);
  int depth = 0;
  std::vector<int> next(inputs, 0);
  // Iterative DFS: next[depth] is the next choice to try at this depth.
  while (depth >= 0) {
    if (depth == inputs) {
      leaf(acc[inputs], assignment);
      --depth;
      continue;
    }
    if (next[depth] == choices) {
      next[depth] = 0;
      --depth;
      continue;
    }
    const int c = next[depth]++;
    assignment[depth] = c;
    auto& dst = acc[depth + 1];
    const auto& src = acc[depth];
    for (int y = 0; y < other_inputs; ++y)
      for (int b = 0; b < other_outputs; ++b) {
        const std::size_t k = static_cast<std::size_t>(y) * other_outputs + b;
        dst[k] = src[k] + contribution(depth, c, y, b);
      }
    ++depth;
  }
}

ClassicalOptimum optimum_enumerating_alice(const BellFunctional& t) {
  const Scenario& s = t.scenario();
  ClassicalOptimum best;
  best.max_value = -std::numeric_limits<double>::infinity();
  best.min_value = std::numeric_limits<double>::infinity();
  std::vector<int> bob_max(s.inputs_b), bob_min(s.inputs_b);
  enumerate(
      s.inputs_a, s.outputs_a, s.inputs_b, s.outputs_b,
      [&](int x, int a, int y, int b) { return t(x, y, a, b); },
      [&](const std::vector<double>& acc, const std::vector<int>& alice) {
        double hi = 0.0, lo = 0.0;
        for (int y = 0; y < s.inputs_b; ++y) {
          const double* row = &acc[static_cast<std::size_t>(y) * s.outputs_b];
          int arg_hi = 0, arg_lo = 0;
          for (int b = 1; b < s.outputs_b; ++b) {
            if (row[b] > row[arg_hi]) arg_hi = b;
            if (row[b] < row[arg_lo]) arg_lo = b;
          }
          hi += row[arg_hi];
          lo += row[arg_lo];
          bob_max[y] = arg_hi;
          bob_min[y] = arg_lo;
        }
        if (hi > best.max_value) {
          best.max_value = hi;
          best.argmax = {alice, bob_max};
        }
        if (lo < best.min_value) {
          best.min_value = lo;
          best.argmin = {alice, bob_min};
        }
      });
  best.value = std::max(std::abs(best.max_value), std::abs(best.min_value));
  return best;
}

}  // namespace

ClassicalOptimum classical_optimum(const BellFunctional& t, const Limits& limits) {
  const Scenario& s = t.scenario();
  const std::uint64_t na = strategy_count(s.inputs_a, s.outputs_a);
  const std::uint64_t nb = strategy_count(s.inputs_b, s.outputs_b);
  check_guard(std::min(na, nb), limits.enumeration, "classical value");
  if (nb < na) {
    ClassicalOptimum swapped = optimum_enumerating_alice(swap_parties(t));
    std::swap(swapped.argmax.alice, swapped.argmax.bob);
    std::swap(swapped.argmin.alice, swapped.argmin.bob);
    return swapped;
  }
  return optimum_enumerating_alice(t);
}

double classical_value(const BellFunctional& t, const Limits& limits) { return classical_optimum(t, limits).value; }

double classical_value_incomplete(const BellFunctional& t, const Limits& limits) {
  return classical_value(t.with_abstain(), limits);
}

double banach_norm(const BellFunctional& t_in, const Limits& limits) {
  const Scenario& s0 = t_in.scenario();
  const std::uint64_t na = strategy_count(s0.inputs_a, 2 * s0.outputs_a);
  const std::uint64_t nb = strategy_count(s0.inputs_b, 2 * s0.outputs_b);
  check_guard(std::min(na, nb), limits.enumeration, "banach norm");
  const BellFunctional t = nb < na ? swap_parties(t_in) : t_in;
  const Scenario& s = t.scenario();

  // Extreme points of the unit ball of l_inf^N(l_1^M): one signed unit vector
  // +-e_a per input. Choice c encodes output c / 2 and sign (-1)^(c % 2).
  double best = 0.0;
  enumerate(
      s.inputs_a, 2 * s.outputs_a, s.inputs_b, s.outputs_b,
      [&](int x, int c, int y, int b) { return (c % 2 == 0 ? 1.0 : -1.0) * t(x, y, c / 2, b); },
      [&](const std::vector<double>& acc, const std::vector<int>&) {
        double total = 0.0;
        for (int y = 0; y < s.inputs_b; ++y) {
          double m = 0.0;
          for (int b = 0; b < s.outputs_b; ++b) m = std::max(m, std::abs(acc[static_cast<std::size_t>(y) * s.outputs_b + b]));
          total += m;
        }
        best = std::max(best, total);
      });
  return best;
}

MembershipCertificate is_local(const Behavior& p, const Limits& limits) {
  if (!p.is_complete()) throw InvalidObject("is_local needs a complete behavior; call complete_behavior first");
  const Scenario& s = p.scenario();
  const std::uint64_t vertices = vertex_count(s);
  if (vertices > limits.lp_vertices) {
    throw GuardExceeded("membership LP needs " + std::to_string(vertices) + " vertices, limit is " +
                        std::to_string(limits.lp_vertices) + " (BELL_GUARD_LIMIT)");
  }
  MembershipCertificate cert;
  cert.separator = BellFunctional(s);
  if (!no_signaling_check(p).ok) cert.warnings.push_back("behavior is signaling, so it cannot be local");

  const int entries = static_cast<int>(s.size());
  const int v_count = static_cast<int>(vertices);
  LinearProgram lp;
  lp.direction = Direction::minimize;
  lp.objective = Eigen::VectorXd::Zero(v_count);
  lp.constraints = Eigen::MatrixXd::Zero(entries + 1, v_count);
  lp.rhs.resize(entries + 1);
  lp.senses.assign(entries + 1, RowSense::equal);
  for (int v = 0; v < v_count; ++v) {
    const DeterministicStrategy st = decode_vertex(s, static_cast<std::uint64_t>(v));
    for (int x = 0; x < s.inputs_a; ++x)
      for (int y = 0; y < s.inputs_b; ++y) lp.constraints(static_cast<Eigen::Index>(s.index(x, y, st.alice[x], st.bob[y])), v) = 1.0;
    lp.constraints(entries, v) = 1.0;
  }
  for (int e = 0; e < entries; ++e) lp.rhs[e] = p.probs()[e];
  lp.rhs[entries] = 1.0;

  const LpSolution sol = lp_solve(lp);
  if (sol.status == LpStatus::optimal) {
    std::vector<double> rebuilt(s.size(), 0.0);
    for (int v = 0; v < v_count; ++v) {
      const double w = sol.primal[v];
      if (w <= 0.0) continue;
      const DeterministicStrategy st = decode_vertex(s, static_cast<std::uint64_t>(v));
      cert.model.terms.push_back({w, st});
      for (int x = 0; x < s.inputs_a; ++x)
        for (int y = 0; y < s.inputs_b; ++y) rebuilt[s.index(x, y, st.alice[x], st.bob[y])] += w;
    }
    double err = 0.0;
    for (std::size_t e = 0; e < rebuilt.size(); ++e) err = std::max(err, std::abs(rebuilt[e] - p.probs()[e]));
    cert.reconstruction_error = err;
    cert.verdict = err <= 1e-8 ? Verdict::local : Verdict::undecided;
    if (cert.verdict == Verdict::undecided) cert.warnings.push_back("LP decomposition misses the behavior by more than 1e-8");
    return cert;
  }
  if (sol.status != LpStatus::infeasible) {
    cert.verdict = Verdict::undecided;
    cert.warnings.push_back(std::string("membership LP ended with status ") + to_string(sol.status));
    return cert;
  }

  // Farkas certificate (S, s0): <S,D> + s0 <= 0 on every vertex, <S,P> + s0 > 0.
  BellFunctional raw(s, std::vector<double>(sol.farkas.data(), sol.farkas.data() + entries));
  const ClassicalOptimum extremes = classical_optimum(raw, limits);
  const double spread = extremes.max_value - extremes.min_value;
  const double alpha = spread > 1e-12 ? 2.0 / spread : 1.0;
  // alpha (S - max J) + J, with <J,D> = 1 on every vertex: vertex values land in [-1, 1].
  const double per_block = 1.0 / (static_cast<double>(s.inputs_a) * s.inputs_b);
  std::vector<double> coeffs(s.size());
  for (std::size_t e = 0; e < coeffs.size(); ++e) coeffs[e] = alpha * (raw.coeffs()[e] - extremes.max_value * per_block) + per_block;
  cert.separator = BellFunctional(s, std::move(coeffs));
  cert.separator_value = pair(cert.separator, p);
  cert.max_vertex_value = classical_optimum(cert.separator, limits).max_value;
  cert.verdict = cert.separator_value >= cert.max_vertex_value + 1e-9 ? Verdict::nonlocal : Verdict::undecided;
  if (cert.verdict == Verdict::undecided) cert.warnings.push_back("behavior lies within 1e-9 of the local polytope boundary");
  return cert;
}

}  // namespace bell
