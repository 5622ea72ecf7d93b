#pragma once

#include <Eigen/Dense>

#include "bell/scenario.hpp"

namespace bell {

/// Eigenvalues ascending; eigenvectors as orthonormal columns.
struct EigenDecomposition {
  Eigen::VectorXd values;
  CMatrix vectors;
};

/// Frobenius norm of H - H^dagger.
double hermiticity_residual(const CMatrix& h);

/// Hermitian eigendecomposition. Input must satisfy
/// ||H - H^dagger||_F <= 1e-9 ||H||_F (it is symmetrized first), otherwise
/// std::invalid_argument.
EigenDecomposition eigh(const CMatrix& h);

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped to 0).
CMatrix psd_project(const CMatrix& h);

double min_eigenvalue(const CMatrix& h);
double max_eigenvalue(const CMatrix& h);

/// S^{-1/2} for Hermitian PSD S with eigenvalues floored at `floor`.
CMatrix inverse_sqrt_psd(const CMatrix& s, double floor = 1e-300);
CMatrix sqrt_psd(const CMatrix& s);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Tr_B[rho (1 (x) F)] for rho on C^da (x) C^db.
CMatrix partial_contract_b(const CMatrix& rho, const CMatrix& f, int dim_a, int dim_b);
/// Tr_A[rho (E (x) 1)] for rho on C^da (x) C^db.
CMatrix partial_contract_a(const CMatrix& rho, const CMatrix& e, int dim_a, int dim_b);

inline CMatrix hermitian_part(const CMatrix& h) { return 0.5 * (h + h.adjoint()); }

}  // namespace bell
