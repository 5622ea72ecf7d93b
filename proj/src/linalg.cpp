#include "bell/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace bell {

double hermiticity_residual(const CMatrix& h) { return (h - h.adjoint()).norm(); }

EigenDecomposition eigh(const CMatrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("eigh: matrix is not square");
  const double scale = h.norm();
  if (hermiticity_residual(h) > 1e-9 * scale) throw std::invalid_argument("eigh: matrix is not Hermitian");
  if (h.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(h), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigh: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

CMatrix psd_project(const CMatrix& h) {
  const EigenDecomposition eig = eigh(h);
  const Eigen::VectorXd clipped = eig.values.cwiseMax(0.0);
  return eig.vectors * clipped.asDiagonal() * eig.vectors.adjoint();
}

double min_eigenvalue(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(h), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

double max_eigenvalue(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(h), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(h.rows() - 1);
}

CMatrix inverse_sqrt_psd(const CMatrix& s, double floor) {
  const EigenDecomposition eig = eigh(s);
  Eigen::VectorXd inv(eig.values.size());
  for (Eigen::Index i = 0; i < inv.size(); ++i) inv[i] = 1.0 / std::sqrt(std::max(eig.values[i], floor));
  return eig.vectors * inv.asDiagonal() * eig.vectors.adjoint();
}

CMatrix sqrt_psd(const CMatrix& s) {
  const EigenDecomposition eig = eigh(s);
  const Eigen::VectorXd root = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * root.asDiagonal() * eig.vectors.adjoint();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix partial_contract_b(const CMatrix& rho, const CMatrix& f, int dim_a, int dim_b) {
  // [Tr_B rho (1 (x) F)]_{ij} = sum_{k,l} rho_{(i,k),(j,l)} F_{lk}
  CMatrix out = CMatrix::Zero(dim_a, dim_a);
  for (int i = 0; i < dim_a; ++i)
    for (int j = 0; j < dim_a; ++j)
      out(i, j) = rho.block(i * dim_b, j * dim_b, dim_b, dim_b).cwiseProduct(f.transpose()).sum();
  return out;
}

CMatrix partial_contract_a(const CMatrix& rho, const CMatrix& e, int dim_a, int dim_b) {
  // [Tr_A rho (E (x) 1)]_{kl} = sum_{i,j} rho_{(i,k),(j,l)} E_{ji}
  CMatrix out = CMatrix::Zero(dim_b, dim_b);
  for (int i = 0; i < dim_a; ++i)
    for (int j = 0; j < dim_a; ++j) out += e(j, i) * rho.block(i * dim_b, j * dim_b, dim_b, dim_b);
  return out;
}

}  // namespace bell
