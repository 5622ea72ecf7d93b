#include "bell/seesaw.hpp"

#include <cmath>
#include <stdexcept>

#include "bell/classical.hpp"
#include "bell/linalg.hpp"
#include "bell/povm.hpp"

namespace bell {

void SeesawConfig::check() const {
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (seeds < 1) throw std::invalid_argument("seeds must be >= 1");
  if (max_sweeps < 1) throw std::invalid_argument("max_sweeps must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
}

namespace {

void check_shapes(const Scenario& s, const std::vector<std::vector<CMatrix>>& alice,
                  const std::vector<std::vector<CMatrix>>& bob) {
  auto ok = [](const std::vector<std::vector<CMatrix>>& povms, int inputs, int outputs) {
    if (static_cast<int>(povms.size()) != inputs) return false;
    for (const auto& p : povms)
      if (static_cast<int>(p.size()) != outputs) return false;
    return true;
  };
  if (!ok(alice, s.inputs_a, s.outputs_a) || !ok(bob, s.inputs_b, s.outputs_b))
    throw ScenarioMismatch("POVM counts do not match scenario " + to_string(s));
}

CMatrix gaussian_hermitian(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = {re, im};
    }
  return hermitian_part(g);
}

// Signed objective <t, behavior> of a model, without validation overhead.
double signed_value(const BellFunctional& t, const QuantumModel& m) {
  const CMatrix b = bell_operator(t, m.alice_povms, m.bob_povms);
  return (m.state * b).trace().real();
}

struct SignedRun {
  SeesawRun run;
  QuantumModel model;
};

SignedRun run_signed(const BellFunctional& t, QuantumModel model, const SeesawConfig& cfg) {
  SignedRun out;
  const int d = cfg.dim;
  double current = signed_value(t, model);
  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    const EigenDecomposition eig = eigh(bell_operator(t, model.alice_povms, model.bob_povms));
    const Eigen::Index top = eig.values.size() - 1;
    const CVector psi = eig.vectors.col(top);
    model.state = psi * psi.adjoint();
    out.run.trace.push_back(eig.values[top]);

    double v = 0.0;
    const auto ra = reduced_operators(t, model.state, model.bob_povms, Party::alice, d, d);
    for (std::size_t x = 0; x < ra.size(); ++x) {
      PovmUpdateResult r = povm_update(ra[x], cfg.mode, model.alice_povms[x]);
      model.alice_povms[x] = std::move(r.povm);
      v += r.objective;
    }
    out.run.trace.push_back(v);

    v = 0.0;
    const auto rb = reduced_operators(t, model.state, model.alice_povms, Party::bob, d, d);
    for (std::size_t y = 0; y < rb.size(); ++y) {
      PovmUpdateResult r = povm_update(rb[y], cfg.mode, model.bob_povms[y]);
      model.bob_povms[y] = std::move(r.povm);
      v += r.objective;
    }
    out.run.trace.push_back(v);

    const double gain = v - current;
    current = v;
    out.run.sweeps = sweep;
    if (gain < cfg.tol) {
      out.run.converged = true;
      break;
    }
  }
  out.model = std::move(model);
  return out;
}

}  // namespace

CMatrix bell_operator(const BellFunctional& t, const std::vector<std::vector<CMatrix>>& alice_povms,
                      const std::vector<std::vector<CMatrix>>& bob_povms) {
  const Scenario& s = t.scenario();
  check_shapes(s, alice_povms, bob_povms);
  const Eigen::Index da = alice_povms[0][0].rows();
  const Eigen::Index db = bob_povms[0][0].rows();
  CMatrix out = CMatrix::Zero(da * db, da * db);
  // B = sum_{x,a} E_a^x (x) G_a^x with G_a^x = sum_{y,b} T F_b^y.
  for (int x = 0; x < s.inputs_a; ++x)
    for (int a = 0; a < s.outputs_a; ++a) {
      CMatrix g = CMatrix::Zero(db, db);
      bool any = false;
      for (int y = 0; y < s.inputs_b; ++y)
        for (int b = 0; b < s.outputs_b; ++b) {
          const double c = t(x, y, a, b);
          if (c == 0.0) continue;
          g += c * bob_povms[y][b];
          any = true;
        }
      if (any) out += kron(alice_povms[x][a], g);
    }
  return hermitian_part(out);
}

std::vector<std::vector<CMatrix>> reduced_operators(const BellFunctional& t, const CMatrix& rho,
                                                    const std::vector<std::vector<CMatrix>>& other_povms,
                                                    Party party, int dim_a, int dim_b) {
  const Scenario& s = t.scenario();
  const bool alice = party == Party::alice;
  const int own_inputs = alice ? s.inputs_a : s.inputs_b;
  const int own_outputs = alice ? s.outputs_a : s.outputs_b;
  const int other_inputs = alice ? s.inputs_b : s.inputs_a;
  const int other_outputs = alice ? s.outputs_b : s.outputs_a;
  const int own_dim = alice ? dim_a : dim_b;
  if (static_cast<int>(other_povms.size()) != other_inputs) throw ScenarioMismatch("POVM counts do not match scenario");
  if (rho.rows() != static_cast<Eigen::Index>(dim_a) * dim_b) throw ScenarioMismatch("state dimension does not match");

  // Contract the state with each of the other party's effects once.
  std::vector<std::vector<CMatrix>> blocks(other_inputs);
  for (int j = 0; j < other_inputs; ++j) {
    if (static_cast<int>(other_povms[j].size()) != other_outputs) throw ScenarioMismatch("POVM counts do not match scenario");
    for (int k = 0; k < other_outputs; ++k)
      blocks[j].push_back(alice ? partial_contract_b(rho, other_povms[j][k], dim_a, dim_b)
                                : partial_contract_a(rho, other_povms[j][k], dim_a, dim_b));
  }

  std::vector<std::vector<CMatrix>> out(own_inputs, std::vector<CMatrix>(own_outputs, CMatrix::Zero(own_dim, own_dim)));
  for (int i = 0; i < own_inputs; ++i)
    for (int o = 0; o < own_outputs; ++o) {
      CMatrix& r = out[i][o];
      for (int j = 0; j < other_inputs; ++j)
        for (int k = 0; k < other_outputs; ++k) {
          const double c = alice ? t(i, j, o, k) : t(j, i, k, o);
          if (c != 0.0) r += c * blocks[j][k];
        }
      r = hermitian_part(r);
    }
  return out;
}

std::vector<CMatrix> random_povm(int dim, int outcomes, Completeness mode, std::mt19937_64& rng) {
  const int drawn = mode == Completeness::incomplete ? outcomes + 1 : outcomes;
  std::vector<CMatrix> e(drawn);
  CMatrix sum = CMatrix::Zero(dim, dim);
  for (auto& m : e) {
    m = psd_project(gaussian_hermitian(dim, rng));
    sum += m;
  }
  const CMatrix identity = CMatrix::Identity(dim, dim);
  const CMatrix w = inverse_sqrt_psd(sum + 1e-9 * identity, 0.0);
  CMatrix total = CMatrix::Zero(dim, dim);
  for (auto& m : e) {
    // W E W as B B^dagger with B = W E^{1/2}, so rounding cannot break PSD
    // even when S is nearly singular.
    const CMatrix half = w * sqrt_psd(m);
    m = hermitian_part(half * half.adjoint());
    total += m;
  }
  // The regularization leaves a small PSD deficit; give it to outcome 0.
  e[0] = hermitian_part(e[0] + identity - total);
  e.resize(outcomes);
  return e;
}

QuantumModel random_quantum_model(const Scenario& s, int dim, Completeness mode, std::mt19937_64& rng) {
  QuantumModel m;
  m.dim_a = m.dim_b = dim;
  m.completeness = mode;
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector psi(dim * dim);
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    psi[i] = {re, im};
  }
  psi.normalize();
  m.state = psi * psi.adjoint();
  for (int x = 0; x < s.inputs_a; ++x) m.alice_povms.push_back(random_povm(dim, s.outputs_a, mode, rng));
  for (int y = 0; y < s.inputs_b; ++y) m.bob_povms.push_back(random_povm(dim, s.outputs_b, mode, rng));
  return m;
}

QuantumModel pad_model(const QuantumModel& model, int dim_a, int dim_b) {
  if (dim_a < model.dim_a || dim_b < model.dim_b) throw std::invalid_argument("pad_model cannot shrink a model");
  QuantumModel out;
  out.dim_a = dim_a;
  out.dim_b = dim_b;
  out.completeness = model.completeness;
  out.state = CMatrix::Zero(dim_a * dim_b, dim_a * dim_b);
  for (int i = 0; i < model.dim_a; ++i)
    for (int k = 0; k < model.dim_b; ++k)
      for (int j = 0; j < model.dim_a; ++j)
        for (int l = 0; l < model.dim_b; ++l)
          out.state(i * dim_b + k, j * dim_b + l) = model.state(i * model.dim_b + k, j * model.dim_b + l);
  auto pad = [&](const std::vector<std::vector<CMatrix>>& povms, int old_dim, int new_dim) {
    std::vector<std::vector<CMatrix>> res;
    for (const auto& povm : povms) {
      std::vector<CMatrix> p;
      for (std::size_t a = 0; a < povm.size(); ++a) {
        CMatrix e = CMatrix::Zero(new_dim, new_dim);
        e.topLeftCorner(old_dim, old_dim) = povm[a];
        if (a == 0 && model.completeness == Completeness::complete)
          for (int i = old_dim; i < new_dim; ++i) e(i, i) = 1.0;
        p.push_back(std::move(e));
      }
      res.push_back(std::move(p));
    }
    return res;
  };
  out.alice_povms = pad(model.alice_povms, model.dim_a, dim_a);
  out.bob_povms = pad(model.bob_povms, model.dim_b, dim_b);
  return out;
}

SeesawResult seesaw(const BellFunctional& t, const SeesawConfig& cfg) {
  cfg.check();
  const Scenario& s = t.scenario();
  std::optional<QuantumModel> warm;
  if (cfg.warm_start) {
    const QuantumModel& w = *cfg.warm_start;
    if (w.scenario() != s) throw ScenarioMismatch("warm start model does not match the functional's scenario");
    if (w.completeness == Completeness::incomplete && cfg.mode == Completeness::complete)
      throw std::invalid_argument("an incomplete warm start cannot seed a complete-mode search");
    warm = pad_model(w, cfg.dim, cfg.dim);
    warm->completeness = cfg.mode;
  }
  const BellFunctional neg = t.scaled(-1.0);

  SeesawResult result;
  result.value = -1.0;
  for (int seed = 0; seed < cfg.seeds; ++seed) {
    std::mt19937_64 rng(cfg.rng_seed + static_cast<std::uint64_t>(seed));
    QuantumModel start_pos = random_quantum_model(s, cfg.dim, cfg.mode, rng);
    QuantumModel start_neg = random_quantum_model(s, cfg.dim, cfg.mode, rng);
    if (seed == 0 && warm) start_pos = start_neg = *warm;

    SignedRun pos = run_signed(t, std::move(start_pos), cfg);
    SignedRun negr = run_signed(neg, std::move(start_neg), cfg);
    const double vp = std::abs(pair(t, behavior_from_quantum(pos.model)));
    const double vn = std::abs(pair(t, behavior_from_quantum(negr.model)));

    SeesawRun run;
    run.sweeps = pos.run.sweeps + negr.run.sweeps;
    run.converged = pos.run.converged && negr.run.converged;
    run.trace = std::move(pos.run.trace);
    run.trace_negated = std::move(negr.run.trace);
    SignedRun& best = vn > vp ? negr : pos;
    run.value = std::max(vp, vn);
    result.per_seed_values.push_back(run.value);
    if (run.value > result.value) {
      result.value = run.value;
      result.model = best.model;
      result.sweeps_used = run.sweeps;
      result.converged = run.converged;
    }
    result.runs.push_back(std::move(run));
  }
  return result;
}

double quantum_ratio(const BellFunctional& t, const SeesawConfig& cfg, const Limits& limits) {
  const double denom =
      cfg.mode == Completeness::complete ? classical_value(t, limits) : classical_value_incomplete(t, limits);
  if (denom == 0.0) throw UndefinedQuantity("ratio undefined: classical value is 0");
  return seesaw(t, cfg).value / denom;
}

}  // namespace bell
