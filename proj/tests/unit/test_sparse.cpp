#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "llb/assembly.hpp"
#include "llb/sparse.hpp"

using namespace llb;

namespace {

SparseMatrix random_sparse(Index n, double density, std::mt19937& rng, double diag_shift = 0.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), p(0.0, 1.0);
  std::vector<Triplet> t;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j)
      if (p(rng) < density) t.push_back({i, j, u(rng)});
    if (diag_shift != 0.0) t.push_back({i, i, diag_shift});
  }
  return SparseMatrix::from_triplets(n, n, std::move(t));
}

Eigen::MatrixXd to_eigen(const SparseMatrix& a) {
  const std::vector<double> d = a.to_dense();
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(d.data(), a.rows(),
                                                                                                    a.cols());
}

double residual(const SparseMatrix& a, std::span<const double> x, std::span<const double> b) {
  std::vector<double> r = spmv(a, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return norm2(r) / norm2(b);
}

}  // namespace

TEST(Sparse, TripletsSumDuplicatesAndSortColumns) {
  const SparseMatrix a = SparseMatrix::from_triplets(2, 3, {{0, 2, 1.0}, {0, 0, 2.0}, {0, 2, 3.0}, {1, 1, -1.0}});
  EXPECT_EQ(a.nnz(), 3u);
  EXPECT_EQ(a.coeff(0, 2), 4.0);
  EXPECT_EQ(a.coeff(0, 1), 0.0);
  EXPECT_EQ(a.find(0, 1), -1);
  const auto cols = a.col_idx();
  EXPECT_LT(cols[0], cols[1]);
}

TEST(Sparse, ConstructorRejectsUnsortedColumns) {
  EXPECT_THROW(SparseMatrix(1, 3, {0, 2}, {2, 0}, {1.0, 1.0}), std::invalid_argument);
}

TEST(Sparse, IdentitySpmv) {
  const std::vector<double> x{1.0, -2.0, 3.5};
  EXPECT_EQ(spmv(SparseMatrix::identity(3), x), x);
}

TEST(Sparse, StiffnessAnnihilatesConstants) {
  const SparseMatrix s = assemble_stiffness(unit_square_mesh(2));
  const std::vector<double> ones(static_cast<std::size_t>(s.rows()), 1.0);
  for (double v : spmv(s, ones)) EXPECT_NEAR(v, 0.0, 1e-13);
}

TEST(Sparse, SpmvMatchesDense) {
  std::mt19937 rng(3);
  const SparseMatrix a = random_sparse(10, 0.4, rng);
  std::vector<double> x(10);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& v : x) v = u(rng);
  const Eigen::VectorXd ref = to_eigen(a) * Eigen::Map<const Eigen::VectorXd>(x.data(), 10);
  const std::vector<double> y = spmv(a, x);
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(y[i], ref[i], 1e-14);
}

TEST(Sparse, SpmvDimensionMismatch) {
  const std::vector<double> x(4, 1.0);
  EXPECT_THROW(spmv(SparseMatrix::identity(3), x), std::invalid_argument);
}

TEST(Sparse, AddTransposeBlockdiag) {
  std::mt19937 rng(5);
  const SparseMatrix a = random_sparse(6, 0.3, rng), b = random_sparse(6, 0.3, rng);
  EXPECT_TRUE(((to_eigen(add(2.0, a, -0.5, b)) - (2.0 * to_eigen(a) - 0.5 * to_eigen(b))).cwiseAbs().maxCoeff()) <
              1e-15);
  EXPECT_EQ(to_eigen(a.transpose()), to_eigen(a).transpose());

  const SparseMatrix big = expand_blockdiag3(a);
  ASSERT_EQ(big.rows(), 18);
  std::vector<double> x(18);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::cos(1.0 + i);
  std::vector<double> y1 = spmv(big, x), y2(18);
  spmv_blockdiag3(a, x, y2);
  for (int i = 0; i < 18; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-15);
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 6; ++j)
      for (int c = 0; c < 3; ++c) EXPECT_EQ(big.coeff(3 * i + c, 3 * j + c), a.coeff(i, j));
}

TEST(Sparse, DenseLuBasics) {
  DenseMatrix one(1, 1);
  one(0, 0) = 2.0;
  EXPECT_EQ(dense_lu_solve(one, {4.0}), std::vector<double>{2.0});

  DenseMatrix sing(2, 2);
  sing(0, 0) = 1.0;
  sing(0, 1) = 2.0;
  sing(1, 0) = 2.0;
  sing(1, 1) = 4.0;
  EXPECT_THROW(dense_lu_solve(sing, {1.0, 1.0}), SingularMatrixError);
}

TEST(Sparse, DenseLuRandomResidual) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseMatrix a(5, 5);
  std::vector<double> b(5);
  for (double& v : a.data) v = u(rng);
  for (double& v : b) v = u(rng);
  const std::vector<double> x = dense_lu_solve(a, b);
  double r = 0.0, bn = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    double s = -b[i];
    for (std::size_t j = 0; j < 5; ++j) s += a(i, j) * x[j];
    r += s * s;
    bn += b[i] * b[i];
  }
  EXPECT_LE(std::sqrt(r / bn), 1e-12);
}

TEST(Sparse, DenseLuHilbert) {
  // H^{-1} of the 4x4 Hilbert matrix has integer entries; solve H x = e_j column by column.
  const double inverse[4][4] = {
      {16, -120, 240, -140}, {-120, 1200, -2700, 1680}, {240, -2700, 6480, -4200}, {-140, 1680, -4200, 2800}};
  DenseMatrix h(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) h(i, j) = 1.0 / static_cast<double>(i + j + 1);
  for (std::size_t j = 0; j < 4; ++j) {
    std::vector<double> e(4, 0.0);
    e[j] = 1.0;
    const std::vector<double> col = dense_lu_solve(h, e);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(col[i], inverse[i][j], 1e-9 * std::abs(inverse[i][j]));
  }
}

class SolveWith : public ::testing::TestWithParam<Preconditioner> {};

TEST_P(SolveWith, MassMatrixMatchesDenseLu) {
  const SparseMatrix m = assemble_mass(unit_square_mesh(6));  // 49 unknowns
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> b(static_cast<std::size_t>(m.rows())), x(b.size(), 0.0);
  for (double& v : b) v = u(rng);
  SolverOptions opt;
  opt.preconditioner = GetParam();
  const SolveReport rep = solve(m, b, x, opt);
  EXPECT_TRUE(rep.converged);
  EXPECT_LE(rep.relative_residual, opt.tol);
  EXPECT_LE(residual(m, x, b), opt.tol);
  const Eigen::VectorXd ref = to_eigen(m).partialPivLu().solve(Eigen::Map<const Eigen::VectorXd>(b.data(), b.size()));
  // forward error bounded by cond(M) times the residual tolerance
  const double scale = ref.cwiseAbs().maxCoeff();
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_NEAR(x[i], ref[static_cast<Eigen::Index>(i)], 1e-9 * scale);
}

TEST_P(SolveWith, NonsymmetricBlockSystem) {
  std::mt19937 rng(9);
  const SparseMatrix a = random_sparse(60, 0.08, rng, 4.0);  // 3x3-blockable size
  std::vector<double> b(60), x(60, 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::sin(0.3 * i);
  SolverOptions opt;
  opt.preconditioner = GetParam();
  const SolveReport rep = solve(a, b, x, opt);
  EXPECT_TRUE(rep.converged);
  EXPECT_LE(residual(a, x, b), opt.tol);
}

INSTANTIATE_TEST_SUITE_P(Preconditioners, SolveWith,
                         ::testing::Values(Preconditioner::jacobi, Preconditioner::block_ilu0,
                                           Preconditioner::sparse_lu, Preconditioner::automatic));

TEST(Solve, ZeroRightHandSide) {
  const SparseMatrix m = assemble_mass(unit_square_mesh(2));
  std::vector<double> b(9, 0.0), x(9, 1.0);
  const SolveReport rep = solve(m, b, x);
  EXPECT_TRUE(rep.converged);
  for (double v : x) EXPECT_EQ(v, 0.0);
}

TEST(Solve, ExhaustedBudgetThrows) {
  std::mt19937 rng(4);
  const SparseMatrix a = random_sparse(40, 0.3, rng);
  std::vector<double> b(40, 1.0), x(40, 0.0);
  SolverOptions opt;
  opt.preconditioner = Preconditioner::jacobi;
  opt.max_iter = 2;
  opt.restart = 2;
  try {
    solve(a, b, x, opt);
    FAIL() << "expected SolveError";
  } catch (const SolveError& e) {
    EXPECT_FALSE(e.report().converged);
    EXPECT_GT(e.report().relative_residual, opt.tol);
  }
}

TEST(Solve, Deterministic) {
  std::mt19937 rng(8);
  const SparseMatrix a = random_sparse(30, 0.2, rng, 3.0);
  std::vector<double> b(30, 1.0), x1(30, 0.0), x2(30, 0.0);
  solve(a, b, x1);
  solve(a, b, x2);
  EXPECT_EQ(x1, x2);
}

TEST(Solve, FactorCacheReusedAcrossNearbyMatrices) {
  std::mt19937 rng(21);
  SparseMatrix a = random_sparse(90, 0.05, rng, 5.0);
  FactorCache cache;
  EXPECT_TRUE(cache.empty());
  std::vector<double> b(90, 1.0), x(90, 0.0);
  solve(a, b, x, {}, &cache);
  EXPECT_EQ(cache.factorizations(), 1);
  // a small perturbation is handled by the lagged factors
  for (double& v : a.values()) v *= 1.0 + 1e-4;
  std::fill(x.begin(), x.end(), 0.0);
  const SolveReport rep = solve(a, b, x, {}, &cache);
  EXPECT_TRUE(rep.converged);
  EXPECT_EQ(cache.factorizations(), 1);
  EXPECT_LE(residual(a, x, b), 1e-10);
  cache.clear();
  EXPECT_TRUE(cache.empty());
}
