#include "bell/povm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "bell/linalg.hpp"

namespace bell {

double povm_objective(std::span<const CMatrix> reduced, std::span<const CMatrix> povm) {
  double total = 0.0;
  for (std::size_t a = 0; a < reduced.size(); ++a) total += (povm[a].cwiseProduct(reduced[a].transpose())).sum().real();
  return total;
}

namespace {

// Orthonormal real basis of d x d Hermitian matrices under Re tr(A^dagger B):
// diagonal units, then (E_ij + E_ji)/sqrt2 and i(E_ij - E_ji)/sqrt2 for i < j.
class HermitianBasis {
 public:
  explicit HermitianBasis(int d) : d_(d) {
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) pairs_.emplace_back(i, j);
  }
  int size() const { return d_ * d_; }

  // Coordinates of the Hermitian part of `a`.
  Eigen::VectorXd coords(const CMatrix& a) const {
    Eigen::VectorXd v(size());
    int k = 0;
    for (int i = 0; i < d_; ++i) v[k++] = a(i, i).real();
    for (auto [i, j] : pairs_) {
      v[k++] = (a(i, j).real() + a(j, i).real()) / std::sqrt(2.0);
      v[k++] = (a(i, j).imag() - a(j, i).imag()) / std::sqrt(2.0);
    }
    return v;
  }

  CMatrix matrix(const Eigen::VectorXd& v) const {
    CMatrix m = CMatrix::Zero(d_, d_);
    int k = 0;
    for (int i = 0; i < d_; ++i) m(i, i) = v[k++];
    const double r = 1.0 / std::sqrt(2.0);
    for (auto [i, j] : pairs_) {
      const double s = v[k++] * r;
      const double t = v[k++] * r;
      m(i, j) += std::complex<double>(s, t);
      m(j, i) += std::complex<double>(s, -t);
    }
    return m;
  }

  CMatrix element(int k) const {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(size());
    e[k] = 1.0;
    return matrix(e);
  }

 private:
  int d_;
  std::vector<std::pair<int, int>> pairs_;
};

// Largest alpha with M + alpha * D still positive definite (infinity if unbounded).
double max_step(const CMatrix& m, const CMatrix& d) {
  Eigen::LLT<CMatrix> llt(m);
  if (llt.info() != Eigen::Success) return 0.0;
  const CMatrix linv = llt.matrixL().solve(CMatrix::Identity(m.rows(), m.cols()));
  const CMatrix scaled = hermitian_part(linv * d * linv.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(scaled, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues()(0);
  return lo >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lo;
}

std::vector<CMatrix> normalize_povm(std::vector<CMatrix> povm) {
  const int d = static_cast<int>(povm[0].rows());
  CMatrix sum = CMatrix::Zero(d, d);
  for (auto& e : povm) {
    e = psd_project(hermitian_part(e));
    sum += e;
  }
  const CMatrix inv = inverse_sqrt_psd(hermitian_part(sum), 1e-300);
  // S^{-1/2} E S^{-1/2} as B B^dagger keeps every element PSD under rounding.
  for (auto& e : povm) {
    const CMatrix half = inv * sqrt_psd(e);
    e = hermitian_part(half * half.adjoint());
  }
  return povm;
}

// Accepts a POVM only if it is PSD and sums to the identity to working precision.
bool well_formed(const std::vector<CMatrix>& povm) {
  const auto d = povm[0].rows();
  CMatrix sum = CMatrix::Zero(d, d);
  for (const auto& e : povm) {
    if (!e.allFinite() || min_eigenvalue(e) < -1e-12) return false;
    sum += e;
  }
  return (sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-10;
}

struct Candidate {
  std::vector<CMatrix> povm;
  CMatrix dual;
  bool converged = false;
  int iterations = 0;
};

Candidate two_outcome(std::span<const CMatrix> r) {
  const int d = static_cast<int>(r[0].rows());
  const EigenDecomposition eig = eigh(hermitian_part(r[0] - r[1]));
  CMatrix proj = CMatrix::Zero(d, d);
  CMatrix positive = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    if (eig.values[i] > 0.0) {
      const CVector v = eig.vectors.col(i);
      proj += v * v.adjoint();
      positive += eig.values[i] * (v * v.adjoint());
    }
  }
  Candidate c;
  c.povm = {proj, CMatrix::Identity(d, d) - proj};
  c.dual = hermitian_part(r[1]) + positive;
  c.converged = true;
  return c;
}

// Primal-dual path following (HKM direction, Mehrotra predictor-corrector) for
//   max sum_a <R_a, X_a>  s.t. sum_a X_a = 1, X_a >= 0
//   min tr(Y)             s.t. Z_a = Y - R_a >= 0.
// The primal start X_a = 1/M is feasible and the Schur system keeps
// sum_a X_a = 1; the dual is feasible by construction of Z_a.
Candidate interior_point(std::span<const CMatrix> r, const PovmOptions& opt) {
  const int m = static_cast<int>(r.size());
  const int d = static_cast<int>(r[0].rows());
  const HermitianBasis basis(d);
  const int n = basis.size();
  const CMatrix identity = CMatrix::Identity(d, d);

  std::vector<CMatrix> rr(m);
  double top = -std::numeric_limits<double>::infinity();
  double scale = 1.0;
  for (int a = 0; a < m; ++a) {
    rr[a] = hermitian_part(r[a]);
    top = std::max(top, max_eigenvalue(rr[a]));
    scale = std::max(scale, rr[a].norm());
  }
  std::vector<CMatrix> x(m, identity / static_cast<double>(m));
  CMatrix y = (top + scale) * identity;
  std::vector<CMatrix> z(m), w(m);
  std::vector<CMatrix> basis_elems(n);
  for (int k = 0; k < n; ++k) basis_elems[k] = basis.element(k);

  Candidate out;
  auto objective = [&] {
    double total = 0.0;
    for (int a = 0; a < m; ++a) total += (x[a].cwiseProduct(rr[a].transpose())).sum().real();
    return total;
  };

  for (int iter = 0; iter < opt.ipm_max_iterations; ++iter) {
    out.iterations = iter + 1;
    double gap = 0.0;
    bool factor_ok = true;
    for (int a = 0; a < m; ++a) {
      z[a] = y - rr[a];
      Eigen::LLT<CMatrix> llt(z[a]);
      if (llt.info() != Eigen::Success) {
        factor_ok = false;
        break;
      }
      w[a] = hermitian_part(llt.solve(identity));
      gap += (x[a].cwiseProduct(z[a].transpose())).sum().real();
    }
    if (!factor_ok) break;
    const double mu = gap / (static_cast<double>(m) * d);
    if (gap <= opt.ipm_gap_tol * (1.0 + std::abs(objective()))) {
      out.converged = true;
      break;
    }

    // Schur complement S_kl = sum_a Re tr(B_k X_a B_l W_a).
    Eigen::MatrixXd schur(n, n);
    for (int l = 0; l < n; ++l) {
      CMatrix acc = CMatrix::Zero(d, d);
      for (int a = 0; a < m; ++a) acc += x[a] * basis_elems[l] * w[a];
      schur.col(l) = basis.coords(acc);
    }
    schur = 0.5 * (schur + schur.transpose()).eval();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(schur);
    if (ldlt.info() != Eigen::Success) break;

    CMatrix w_sum = CMatrix::Zero(d, d);
    for (int a = 0; a < m; ++a) w_sum += w[a];


    // sum_a sym(X_a dY W_a) = target W_sum - 1 - sum_a sym(C_a), which also
    // absorbs any drift in sum_a X_a = 1.
    auto solve_dir = [&](double target, const std::vector<CMatrix>& corr, std::vector<CMatrix>& dx, CMatrix& dy) {
      CMatrix rhs = target * w_sum - identity;
      for (int a = 0; a < m; ++a) rhs -= hermitian_part(corr[a]);
      dy = basis.matrix(ldlt.solve(basis.coords(rhs)));
      dx.resize(m);
      for (int a = 0; a < m; ++a) dx[a] = hermitian_part(target * w[a] - x[a] - x[a] * dy * w[a] - corr[a]);
    };

    const std::vector<CMatrix> no_corr(m, CMatrix::Zero(d, d));
    std::vector<CMatrix> dx_aff;
    CMatrix dy_aff;
    solve_dir(0.0, no_corr, dx_aff, dy_aff);

    auto step_lengths = [&](const std::vector<CMatrix>& dx, const CMatrix& dy) {
      double ap = std::numeric_limits<double>::infinity();
      double ad = std::numeric_limits<double>::infinity();
      for (int a = 0; a < m; ++a) {
        ap = std::min(ap, max_step(x[a], dx[a]));
        ad = std::min(ad, max_step(z[a], dy));
      }
      return std::pair{ap, ad};
    };
    auto [ap_aff, ad_aff] = step_lengths(dx_aff, dy_aff);
    ap_aff = std::min(1.0, ap_aff);
    ad_aff = std::min(1.0, ad_aff);
    double gap_aff = 0.0;
    for (int a = 0; a < m; ++a) {
      const CMatrix xa = x[a] + ap_aff * dx_aff[a];
      const CMatrix za = z[a] + ad_aff * dy_aff;
      gap_aff += (xa.cwiseProduct(za.transpose())).sum().real();
    }
    const double mu_aff = gap_aff / (static_cast<double>(m) * d);
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    std::vector<CMatrix> corr(m);
    for (int a = 0; a < m; ++a) corr[a] = dx_aff[a] * dy_aff * w[a];
    std::vector<CMatrix> dx;
    CMatrix dy;
    solve_dir(sigma * mu, corr, dx, dy);

    auto [ap, ad] = step_lengths(dx, dy);
    ap = std::min(1.0, 0.98 * ap);
    ad = std::min(1.0, 0.98 * ad);
    if (ap < 1e-12 && ad < 1e-12) break;
    for (int a = 0; a < m; ++a) x[a] = hermitian_part(x[a] + ap * dx[a]);
    y = hermitian_part(y + ad * dy);
  }

  out.povm = normalize_povm(x);
  out.dual = y;
  return out;
}

// Fixed-point refinement on R_a + c 1 >= 0:
//   E_a <- L^{-1} R_a E_a R_a L^{-1},  L = (sum_a R_a E_a R_a)^{1/2},
// which preserves sum_a E_a = 1. Only improving iterates are kept.
int refine(std::span<const CMatrix> r, std::vector<CMatrix>& povm, double& objective, const PovmOptions& opt,
           std::vector<double>& log) {
  const int m = static_cast<int>(r.size());
  const int d = static_cast<int>(r[0].rows());
  double lowest = 0.0;
  for (const auto& ra : r) lowest = std::min(lowest, min_eigenvalue(ra));
  const double shift = -lowest + 1e-9;
  std::vector<CMatrix> shifted(m);
  for (int a = 0; a < m; ++a) shifted[a] = hermitian_part(r[a]) + shift * CMatrix::Identity(d, d);

  int iterations = 0;
  for (; iterations < opt.max_iterations; ++iterations) {
    CMatrix lambda_sq = CMatrix::Zero(d, d);
    std::vector<CMatrix> sandwiched(m);
    for (int a = 0; a < m; ++a) {
      sandwiched[a] = shifted[a] * povm[a] * shifted[a];
      lambda_sq += sandwiched[a];
    }
    const CMatrix inv = inverse_sqrt_psd(hermitian_part(lambda_sq), 1e-300);
    std::vector<CMatrix> next(m);
    for (int a = 0; a < m; ++a) next[a] = hermitian_part(inv * sandwiched[a] * inv);
    next = normalize_povm(std::move(next));
    if (!well_formed(next)) break;
    const double value = povm_objective(r, next);
    if (!(value > objective + opt.gain_tol)) break;
    povm = std::move(next);
    objective = value;
    log.push_back(value);
  }
  return iterations;
}

PovmUpdateResult solve_complete(std::span<const CMatrix> r, std::span<const CMatrix> warm, const PovmOptions& opt) {
  const int m = static_cast<int>(r.size());
  const int d = static_cast<int>(r[0].rows());
  PovmUpdateResult result;

  Candidate cand;
  if (m == 1) {
    cand.povm = {CMatrix::Identity(d, d)};
    cand.dual = hermitian_part(r[0]);
    cand.converged = true;
  } else if (m == 2) {
    cand = two_outcome(r);
  } else {
    cand = interior_point(r, opt);
  }

  double objective = povm_objective(r, cand.povm);
  std::vector<CMatrix> best = cand.povm;
  bool have_warm = !warm.empty();
  double warm_objective = -std::numeric_limits<double>::infinity();
  if (have_warm) {
    warm_objective = povm_objective(r, warm);
    result.objective_log.push_back(warm_objective);
  }
  if (!have_warm || objective >= warm_objective) {
    result.objective_log.push_back(objective);
  } else {
    best.assign(warm.begin(), warm.end());
    objective = warm_objective;
  }
  int iterations = cand.iterations;
  if (m > 2) iterations += refine(r, best, objective, opt, result.objective_log);

  // Certified dual bound: lift Y until Y >= R_a for every a.
  CMatrix y = cand.dual;
  double lift = 0.0;
  for (int a = 0; a < m; ++a) lift = std::max(lift, -min_eigenvalue(hermitian_part(y - r[a])));
  y += lift * CMatrix::Identity(d, d);

  result.povm = std::move(best);
  result.objective = objective;
  result.dual = y;
  result.dual_bound = y.trace().real();
  result.converged = cand.converged;
  result.iterations = iterations;
  return result;
}

}  // namespace

PovmUpdateResult povm_update(std::span<const CMatrix> reduced, Completeness mode, std::span<const CMatrix> warm_start,
                             const PovmOptions& options) {
  if (reduced.empty()) throw std::invalid_argument("povm_update: no outcomes");
  const auto d = reduced[0].rows();
  for (const auto& r : reduced) {
    if (r.rows() != d || r.cols() != d) throw std::invalid_argument("povm_update: operators differ in shape");
    if (hermiticity_residual(r) > 1e-9 * std::max(1.0, r.norm())) {
      throw std::invalid_argument("povm_update: operator is not Hermitian");
    }
  }
  if (!warm_start.empty() && warm_start.size() != reduced.size()) {
    throw std::invalid_argument("povm_update: warm start has the wrong outcome count");
  }
  if (mode == Completeness::complete) return solve_complete(reduced, warm_start, options);

  std::vector<CMatrix> extended(reduced.begin(), reduced.end());
  extended.push_back(CMatrix::Zero(d, d));
  std::vector<CMatrix> warm;
  if (!warm_start.empty()) {
    warm.assign(warm_start.begin(), warm_start.end());
    CMatrix rest = CMatrix::Identity(d, d);
    for (const auto& e : warm_start) rest -= e;
    warm.push_back(psd_project(hermitian_part(rest)));
  }
  PovmUpdateResult result = solve_complete(extended, warm, options);
  result.povm.pop_back();
  return result;
}

}  // namespace bell
