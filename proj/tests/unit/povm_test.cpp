#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bell/linalg.hpp"
#include "bell/povm.hpp"

using namespace bell;

namespace {

CMatrix projector(const CVector& v) { return v * v.adjoint() / v.squaredNorm(); }

CMatrix random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = {g(rng), g(rng)};
  return hermitian_part(m);
}

void expect_povm(const std::vector<CMatrix>& povm, Completeness mode, double tol) {
  const auto d = povm.front().rows();
  CMatrix total = CMatrix::Zero(d, d);
  for (const CMatrix& e : povm) {
    EXPECT_GE(min_eigenvalue(e), -tol);
    total += e;
  }
  if (mode == Completeness::complete) {
    EXPECT_LE((total - CMatrix::Identity(d, d)).norm(), tol);
  } else {
    EXPECT_GE(min_eigenvalue(CMatrix::Identity(d, d) - total), -tol);
  }
}

}  // namespace

TEST(PovmTest, TwoOutcomeHelstrom) {
  const double theta = 0.3;
  CVector a(2), b(2);
  a << 1, 0;
  b << std::cos(theta), std::sin(theta);
  const std::vector<CMatrix> r = {0.5 * projector(a), 0.5 * projector(b)};
  const PovmUpdateResult res = povm_update(r, Completeness::complete);
  const double overlap = std::cos(theta);
  EXPECT_NEAR(res.objective, 0.5 * (1 + std::sqrt(1 - overlap * overlap)), 1e-12);
  expect_povm(res.povm, Completeness::complete, 1e-12);
}

TEST(PovmTest, TrineAndTetrahedronDiscrimination) {
  std::vector<CMatrix> trine;
  for (int k = 0; k < 3; ++k) {
    CVector v(2);
    const double angle = 2 * std::numbers::pi * k / 3;
    v << std::cos(angle / 2), std::sin(angle / 2);
    trine.push_back(projector(v) / 3.0);
  }
  const PovmUpdateResult t = povm_update(trine, Completeness::complete);
  EXPECT_NEAR(t.objective, 2.0 / 3.0, 1e-7);
  expect_povm(t.povm, Completeness::complete, 1e-9);

  // Bloch vectors of a regular tetrahedron.
  const double s = 1.0 / std::sqrt(3.0);
  const double dirs[4][3] = {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
  std::vector<CMatrix> tetra;
  for (const auto& n : dirs) {
    CMatrix rho(2, 2);
    rho << 1 + n[2], std::complex<double>(n[0], -n[1]), std::complex<double>(n[0], n[1]), 1 - n[2];
    tetra.push_back(rho / 8.0);
  }
  const PovmUpdateResult q = povm_update(tetra, Completeness::complete);
  EXPECT_NEAR(q.objective, 0.5, 1e-7);
  expect_povm(q.povm, Completeness::complete, 1e-9);
}

TEST(PovmTest, IncompleteModeCanAbstain) {
  const std::vector<CMatrix> r = {-CMatrix::Identity(3, 3), -2.0 * CMatrix::Identity(3, 3)};
  const PovmUpdateResult res = povm_update(r, Completeness::incomplete);
  EXPECT_NEAR(res.objective, 0.0, 1e-9);
  ASSERT_EQ(res.povm.size(), 2u);
  expect_povm(res.povm, Completeness::incomplete, 1e-9);
  EXPECT_LE(res.povm[0].norm() + res.povm[1].norm(), 1e-6);
}

TEST(PovmTest, RandomInstancesCloseTheDualGap) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + trial % 4, m = 2 + (trial / 4) % 3;
    const Completeness mode = trial % 5 == 0 ? Completeness::incomplete : Completeness::complete;
    std::vector<CMatrix> r;
    for (int a = 0; a < m; ++a) r.push_back(random_hermitian(d, rng));
    const PovmUpdateResult res = povm_update(r, mode);
    ASSERT_EQ(static_cast<int>(res.povm.size()), m);
    expect_povm(res.povm, mode, 1e-9);
    EXPECT_NEAR(res.objective, povm_objective(r, res.povm), 1e-10);
    EXPECT_LE(res.dual_bound - res.objective, 1e-5) << trial;
    EXPECT_GE(res.dual_bound - res.objective, -1e-8) << trial;
    // The dual point must dominate every R_a (and 0 in incomplete mode).
    for (const CMatrix& ra : r) EXPECT_GE(min_eigenvalue(res.dual - ra), -1e-7);
    if (mode == Completeness::incomplete) {
      EXPECT_GE(min_eigenvalue(res.dual), -1e-7);
    }
    for (std::size_t k = 1; k < res.objective_log.size(); ++k)
      EXPECT_GE(res.objective_log[k], res.objective_log[k - 1] - 1e-12);
  }
}

TEST(PovmTest, WarmStartIsNeverWorse) {
  std::mt19937_64 rng(5);
  std::vector<CMatrix> r;
  for (int a = 0; a < 3; ++a) r.push_back(random_hermitian(3, rng));
  const PovmUpdateResult first = povm_update(r, Completeness::complete);
  const PovmUpdateResult again = povm_update(r, Completeness::complete, first.povm);
  EXPECT_GE(again.objective, first.objective - 1e-12);
}

TEST(PovmTest, RejectsBadInput) {
  EXPECT_THROW(povm_update({}, Completeness::complete), std::invalid_argument);
  const std::vector<CMatrix> mixed = {CMatrix::Identity(2, 2), CMatrix::Identity(3, 3)};
  EXPECT_THROW(povm_update(mixed, Completeness::complete), std::invalid_argument);
  CMatrix skew = CMatrix::Zero(2, 2);
  skew(0, 1) = 1.0;
  const std::vector<CMatrix> bad = {skew, CMatrix::Identity(2, 2)};
  EXPECT_THROW(povm_update(bad, Completeness::complete), std::invalid_argument);
  const std::vector<CMatrix> ok = {CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)};
  const std::vector<CMatrix> warm = {CMatrix::Identity(2, 2)};
  EXPECT_THROW(povm_update(ok, Completeness::complete, warm), std::invalid_argument);
}
