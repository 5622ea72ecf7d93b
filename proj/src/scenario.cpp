#include "bell/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "bell/linalg.hpp"

namespace bell {

Limits Limits::from_env() {
  Limits limits;
  if (const char* env = std::getenv("BELL_GUARD_LIMIT")) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) {
      limits.enumeration = value;
      limits.lp_vertices = value;
    }
  }
  return limits;
}

Scenario::Scenario(int na, int nb, int ma, int mb) : inputs_a(na), inputs_b(nb), outputs_a(ma), outputs_b(mb) {
  if (na < 1 || nb < 1 || ma < 1 || mb < 1) {
    throw InvalidObject("scenario counts must be >= 1, got " + to_string(*this));
  }
}

std::string to_string(const Scenario& s) {
  std::ostringstream out;
  out << "(inputs " << s.inputs_a << "x" << s.inputs_b << ", outputs " << s.outputs_a << "x" << s.outputs_b
      << ")";
  return out.str();
}

// --- BellFunctional --------------------------------------------------------

BellFunctional::BellFunctional(const Scenario& scenario) : scenario_(scenario), coeffs_(scenario.size(), 0.0) {}

BellFunctional::BellFunctional(const Scenario& scenario, std::vector<double> coeffs)
    : scenario_(scenario), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != scenario_.size()) {
    throw InvalidObject("functional has " + std::to_string(coeffs_.size()) + " coefficients, scenario " +
                        to_string(scenario_) + " needs " + std::to_string(scenario_.size()));
  }
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw InvalidObject("functional has a non-finite coefficient");
  }
}

BellFunctional BellFunctional::scaled(double factor) const {
  BellFunctional out = *this;
  for (double& c : out.coeffs_) c *= factor;
  return out;
}

BellFunctional BellFunctional::with_abstain() const {
  BellFunctional out(scenario_.with_abstain());
  const Scenario& s = scenario_;
  for (int x = 0; x < s.inputs_a; ++x)
    for (int y = 0; y < s.inputs_b; ++y)
      for (int a = 0; a < s.outputs_a; ++a)
        for (int b = 0; b < s.outputs_b; ++b) out(x, y, a, b) = (*this)(x, y, a, b);
  return out;
}

BellFunctional operator+(const BellFunctional& lhs, const BellFunctional& rhs) {
  if (!(lhs.scenario() == rhs.scenario())) throw ScenarioMismatch("cannot add functionals of different scenarios");
  BellFunctional out = lhs;
  for (std::size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] += rhs.coeffs_[i];
  return out;
}

// --- Behavior --------------------------------------------------------------

Behavior::Behavior(const Scenario& scenario, std::vector<double> probs, Completeness completeness)
    : scenario_(scenario), probs_(std::move(probs)), completeness_(completeness) {
  if (probs_.size() != scenario_.size()) {
    throw InvalidObject("behavior has " + std::to_string(probs_.size()) + " entries, scenario " +
                        to_string(scenario_) + " needs " + std::to_string(scenario_.size()));
  }
  for (double p : probs_) {
    if (!std::isfinite(p)) throw InvalidObject("behavior has a non-finite entry");
  }
}

double Behavior::mass(int x, int y) const {
  const std::size_t block = static_cast<std::size_t>(scenario_.outputs_a) * scenario_.outputs_b;
  const std::size_t start = scenario_.index(x, y, 0, 0);
  double total = 0.0;
  for (std::size_t i = 0; i < block; ++i) total += probs_[start + i];
  return total;
}

void Behavior::set_marginals(std::vector<double> alice, std::vector<double> bob) {
  const auto na = static_cast<std::size_t>(scenario_.inputs_a) * scenario_.outputs_a;
  const auto nb = static_cast<std::size_t>(scenario_.inputs_b) * scenario_.outputs_b;
  if (alice.size() != na || bob.size() != nb) throw InvalidObject("marginal table has the wrong shape");
  marginals_a_ = std::move(alice);
  marginals_b_ = std::move(bob);
}

Behavior Behavior::mixed_with(const Behavior& other, double weight) const {
  if (!(scenario_ == other.scenario_)) throw ScenarioMismatch("cannot mix behaviors of different scenarios");
  std::vector<double> mixed(probs_.size());
  for (std::size_t i = 0; i < mixed.size(); ++i) mixed[i] = weight * probs_[i] + (1.0 - weight) * other.probs_[i];
  const bool complete = is_complete() && other.is_complete();
  return Behavior(scenario_, std::move(mixed), complete ? Completeness::complete : Completeness::incomplete);
}

// --- models ----------------------------------------------------------------

double LocalModel::total_weight() const {
  double total = 0.0;
  for (const auto& term : terms) total += term.weight;
  return total;
}

Scenario QuantumModel::scenario() const {
  if (alice_povms.empty() || bob_povms.empty() || alice_povms[0].empty() || bob_povms[0].empty()) {
    throw InvalidObject("quantum model needs at least one input and outcome per party");
  }
  return Scenario(static_cast<int>(alice_povms.size()), static_cast<int>(bob_povms.size()),
                  static_cast<int>(alice_povms[0].size()), static_cast<int>(bob_povms[0].size()));
}

// --- strategies ------------------------------------------------------------

std::uint64_t strategy_count(int inputs, int outputs) {
  std::uint64_t count = 1;
  for (int i = 0; i < inputs; ++i) {
    if (count > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(outputs)) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    count *= static_cast<std::uint64_t>(outputs);
  }
  return count;
}

std::vector<int> decode_strategy(std::uint64_t index, int inputs, int outputs) {
  std::vector<int> s(inputs);
  for (int x = inputs - 1; x >= 0; --x) {
    s[x] = static_cast<int>(index % outputs);
    index /= outputs;
  }
  return s;
}

std::uint64_t vertex_count(const Scenario& s) {
  const std::uint64_t na = strategy_count(s.inputs_a, s.outputs_a);
  const std::uint64_t nb = strategy_count(s.inputs_b, s.outputs_b);
  if (na != 0 && nb > std::numeric_limits<std::uint64_t>::max() / na) return std::numeric_limits<std::uint64_t>::max();
  return na * nb;
}

DeterministicStrategy decode_vertex(const Scenario& s, std::uint64_t index) {
  const std::uint64_t nb = strategy_count(s.inputs_b, s.outputs_b);
  return {decode_strategy(index / nb, s.inputs_a, s.outputs_a), decode_strategy(index % nb, s.inputs_b, s.outputs_b)};
}

// --- operations ------------------------------------------------------------

double pair(const BellFunctional& t, const Behavior& p) {
  if (!(t.scenario() == p.scenario())) {
    throw ScenarioMismatch("functional scenario " + to_string(t.scenario()) + " differs from behavior scenario " +
                           to_string(p.scenario()));
  }
  const auto c = t.coeffs();
  const auto q = p.probs();
  double total = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) total += c[i] * q[i];
  return total;
}

namespace {

bool strategy_in_range(const DeterministicStrategy& st, const Scenario& s) {
  if (static_cast<int>(st.alice.size()) != s.inputs_a || static_cast<int>(st.bob.size()) != s.inputs_b) return false;
  for (int a : st.alice)
    if (a < 0 || a >= s.outputs_a) return false;
  for (int b : st.bob)
    if (b < 0 || b >= s.outputs_b) return false;
  return true;
}

}  // namespace

Behavior behavior_from_local(const LocalModel& model, const Scenario& s) {
  std::vector<double> probs(s.size(), 0.0);
  std::vector<double> marg_a(static_cast<std::size_t>(s.inputs_a) * s.outputs_a, 0.0);
  std::vector<double> marg_b(static_cast<std::size_t>(s.inputs_b) * s.outputs_b, 0.0);
  for (const auto& term : model.terms) {
    if (!strategy_in_range(term.strategy, s)) throw InvalidObject("local strategy does not fit scenario");
    if (!(term.weight >= 0.0)) throw InvalidObject("local model has a negative weight");
    for (int x = 0; x < s.inputs_a; ++x) {
      marg_a[static_cast<std::size_t>(x) * s.outputs_a + term.strategy.alice[x]] += term.weight;
      for (int y = 0; y < s.inputs_b; ++y) {
        probs[s.index(x, y, term.strategy.alice[x], term.strategy.bob[y])] += term.weight;
      }
    }
    for (int y = 0; y < s.inputs_b; ++y) marg_b[static_cast<std::size_t>(y) * s.outputs_b + term.strategy.bob[y]] += term.weight;
  }
  const double total = model.total_weight();
  if (total > 1.0 + kFeasibilityTol) throw InvalidObject("local model weights sum above 1");
  const bool complete = std::abs(total - 1.0) <= kFeasibilityTol;
  Behavior out(s, std::move(probs), complete ? Completeness::complete : Completeness::incomplete);
  if (!complete) out.set_marginals(std::move(marg_a), std::move(marg_b));
  return out;
}

Behavior behavior_from_quantum(const QuantumModel& model) {
  const ValidationReport report = validate(model);
  if (!report.empty()) throw InvalidObject("invalid quantum model: " + report.front().what);
  const Scenario s = model.scenario();
  const int da = model.dim_a;
  const int db = model.dim_b;
  std::vector<double> probs(s.size());
  for (int y = 0; y < s.inputs_b; ++y) {
    for (int b = 0; b < s.outputs_b; ++b) {
      const CMatrix reduced = partial_contract_b(model.state, model.bob_povms[y][b], da, db);
      for (int x = 0; x < s.inputs_a; ++x) {
        for (int a = 0; a < s.outputs_a; ++a) {
          const std::complex<double> value = (model.alice_povms[x][a].cwiseProduct(reduced.transpose())).sum();
          if (std::abs(value.imag()) > kFeasibilityTol * std::max(1.0, std::abs(value.real()))) {
            throw InvalidObject("probability has imaginary residue " + std::to_string(value.imag()));
          }
          probs[s.index(x, y, a, b)] = std::max(0.0, value.real());
        }
      }
    }
  }
  Behavior out(s, std::move(probs), model.completeness);
  if (model.completeness == Completeness::incomplete) {
    const CMatrix rho_a = partial_contract_b(model.state, CMatrix::Identity(db, db), da, db);
    const CMatrix rho_b = partial_contract_a(model.state, CMatrix::Identity(da, da), da, db);
    std::vector<double> marg_a, marg_b;
    for (int x = 0; x < s.inputs_a; ++x)
      for (int a = 0; a < s.outputs_a; ++a)
        marg_a.push_back(std::max(0.0, (model.alice_povms[x][a].cwiseProduct(rho_a.transpose())).sum().real()));
    for (int y = 0; y < s.inputs_b; ++y)
      for (int b = 0; b < s.outputs_b; ++b)
        marg_b.push_back(std::max(0.0, (model.bob_povms[y][b].cwiseProduct(rho_b.transpose())).sum().real()));
    out.set_marginals(std::move(marg_a), std::move(marg_b));
  }
  return out;
}

Behavior vertex_behavior(const Scenario& s, const DeterministicStrategy& strategy) {
  return behavior_from_local(LocalModel{{{1.0, strategy}}}, s);
}

Behavior uniform_behavior(const Scenario& s) {
  return Behavior(s, std::vector<double>(s.size(), 1.0 / (static_cast<double>(s.outputs_a) * s.outputs_b)));
}

// --- validation ------------------------------------------------------------

ValidationReport validate(const BellFunctional& t) {
  ValidationReport report;
  if (t.coeffs().size() != t.scenario().size()) report.push_back({"coefficient tensor shape mismatch", 0.0});
  for (std::size_t i = 0; i < t.coeffs().size(); ++i) {
    if (!std::isfinite(t.coeffs()[i])) report.push_back({"non-finite coefficient at offset " + std::to_string(i), 0.0});
  }
  return report;
}

ValidationReport validate(const Behavior& p) {
  ValidationReport report;
  const Scenario& s = p.scenario();
  for (int x = 0; x < s.inputs_a; ++x) {
    for (int y = 0; y < s.inputs_b; ++y) {
      for (int a = 0; a < s.outputs_a; ++a) {
        for (int b = 0; b < s.outputs_b; ++b) {
          const double v = p(x, y, a, b);
          if (v < -kFeasibilityTol) {
            std::ostringstream what;
            what << "negative probability at [" << x << "][" << y << "][" << a << "][" << b << "]";
            report.push_back({what.str(), -v});
          }
        }
      }
      const double mass = p.mass(x, y);
      std::ostringstream what;
      if (p.is_complete() && std::abs(mass - 1.0) > kFeasibilityTol) {
        what << "block (" << x << "," << y << ") has mass " << mass << ", expected 1";
        report.push_back({what.str(), std::abs(mass - 1.0)});
      } else if (!p.is_complete() && mass > 1.0 + kFeasibilityTol) {
        what << "block (" << x << "," << y << ") has mass " << mass << " above 1";
        report.push_back({what.str(), mass - 1.0});
      }
    }
  }
  return report;
}

ValidationReport validate(const LocalModel& model, const Scenario& s, Completeness completeness) {
  ValidationReport report;
  for (std::size_t i = 0; i < model.terms.size(); ++i) {
    const auto& term = model.terms[i];
    if (term.weight < 0.0) report.push_back({"negative weight in term " + std::to_string(i), -term.weight});
    if (!strategy_in_range(term.strategy, s)) report.push_back({"strategy out of range in term " + std::to_string(i), 0.0});
  }
  const double total = model.total_weight();
  if (completeness == Completeness::complete && std::abs(total - 1.0) > kFeasibilityTol) {
    report.push_back({"weights sum to " + std::to_string(total) + ", expected 1", std::abs(total - 1.0)});
  } else if (completeness == Completeness::incomplete && total > 1.0 + kFeasibilityTol) {
    report.push_back({"weights sum to " + std::to_string(total) + ", above 1", total - 1.0});
  }
  return report;
}

namespace {

void check_povms(const std::vector<std::vector<CMatrix>>& povms, int dim, Completeness completeness,
                 const std::string& party, ValidationReport& report) {
  if (povms.empty()) {
    report.push_back({party + " has no measurements", 0.0});
    return;
  }
  const std::size_t outcomes = povms[0].size();
  for (std::size_t x = 0; x < povms.size(); ++x) {
    const std::string where = party + " input " + std::to_string(x);
    if (povms[x].size() != outcomes || outcomes == 0) {
      report.push_back({where + " has a different outcome count", 0.0});
      continue;
    }
    CMatrix sum = CMatrix::Zero(dim, dim);
    bool shapes_ok = true;
    for (std::size_t a = 0; a < povms[x].size(); ++a) {
      const CMatrix& e = povms[x][a];
      if (e.rows() != dim || e.cols() != dim) {
        report.push_back({where + " outcome " + std::to_string(a) + " has wrong shape", 0.0});
        shapes_ok = false;
        continue;
      }
      const double herm = hermiticity_residual(e);
      if (herm > kFeasibilityTol * std::max(1.0, e.norm())) {
        report.push_back({where + " outcome " + std::to_string(a) + " is not Hermitian", herm});
        shapes_ok = false;
        continue;
      }
      const double lo = min_eigenvalue(e);
      if (lo < -kFeasibilityTol) report.push_back({where + " outcome " + std::to_string(a) + " is not PSD", -lo});
      sum += e;
    }
    if (!shapes_ok) continue;
    const CMatrix identity = CMatrix::Identity(dim, dim);
    if (completeness == Completeness::complete) {
      const double dev = (sum - identity).cwiseAbs().maxCoeff();
      if (dev > kFeasibilityTol) report.push_back({where + " outcomes do not sum to identity", dev});
    } else {
      const double lo = min_eigenvalue(hermitian_part(identity - sum));
      if (lo < -kFeasibilityTol) report.push_back({where + " outcomes sum above identity", -lo});
    }
  }
}

}  // namespace

ValidationReport validate(const QuantumModel& model) {
  ValidationReport report;
  if (model.dim_a < 1 || model.dim_b < 1) {
    report.push_back({"local dimensions must be >= 1", 0.0});
    return report;
  }
  const int n = model.dim_a * model.dim_b;
  if (model.state.rows() != n || model.state.cols() != n) {
    report.push_back({"state has wrong shape", 0.0});
  } else {
    const double herm = hermiticity_residual(model.state);
    if (herm > kFeasibilityTol * std::max(1.0, model.state.norm())) {
      report.push_back({"state is not Hermitian", herm});
    } else {
      const double lo = min_eigenvalue(model.state);
      if (lo < -kFeasibilityTol) report.push_back({"state is not PSD", -lo});
      const double tr = model.state.trace().real();
      if (std::abs(tr - 1.0) > kFeasibilityTol) report.push_back({"state trace is not 1", std::abs(tr - 1.0)});
    }
  }
  check_povms(model.alice_povms, model.dim_a, model.completeness, "alice", report);
  check_povms(model.bob_povms, model.dim_b, model.completeness, "bob", report);
  return report;
}

NoSignalingCheck no_signaling_check(const Behavior& p) {
  if (!p.is_complete()) throw InvalidObject("no-signaling check is undefined for incomplete behaviors");
  const Scenario& s = p.scenario();
  double worst = 0.0;
  // Alice's marginal p(a|x,y) must not depend on y.
  for (int x = 0; x < s.inputs_a; ++x) {
    for (int a = 0; a < s.outputs_a; ++a) {
      double ref = 0.0;
      for (int y = 0; y < s.inputs_b; ++y) {
        double m = 0.0;
        for (int b = 0; b < s.outputs_b; ++b) m += p(x, y, a, b);
        if (y == 0) ref = m;
        worst = std::max(worst, std::abs(m - ref));
      }
    }
  }
  for (int y = 0; y < s.inputs_b; ++y) {
    for (int b = 0; b < s.outputs_b; ++b) {
      double ref = 0.0;
      for (int x = 0; x < s.inputs_a; ++x) {
        double m = 0.0;
        for (int a = 0; a < s.outputs_a; ++a) m += p(x, y, a, b);
        if (x == 0) ref = m;
        worst = std::max(worst, std::abs(m - ref));
      }
    }
  }
  return {worst <= kNoSignalingTol, worst};
}

}  // namespace bell
