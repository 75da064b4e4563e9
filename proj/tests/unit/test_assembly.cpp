#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "llb/assembly.hpp"
#include "llb/quadrature.hpp"

using namespace llb;

namespace {

Eigen::MatrixXd dense(const SparseMatrix& a) {
  const std::vector<double> d = a.to_dense();
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(d.data(), a.rows(),
                                                                                                    a.cols());
}

double sum_entries(const SparseMatrix& a) {
  double s = 0.0;
  for (double v : a.values()) s += v;
  return s;
}

NodalField random_field(const Mesh& m, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  NodalField f(m.num_vertices());
  for (double& v : f.flat()) v = u(rng);
  return f;
}

// P1 gradients of cell c from the vertex matrix [1 x y z], solved with Eigen.
std::vector<Eigen::VectorXd> cell_gradients(const Mesh& m, Index c) {
  const int n = m.vertices_per_cell(), d = m.dim();
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, 0) = 1.0;
    for (int k = 0; k < d; ++k) a(i, k + 1) = m.vertex(m.cell(c)[i])[k];
  }
  const Eigen::MatrixXd coef = a.inverse();  // column i: coefficients of basis function i
  std::vector<Eigen::VectorXd> g;
  for (int i = 0; i < n; ++i) g.push_back(coef.col(i).tail(d));
  return g;
}

const DomainTag tags[] = {DomainTag::interval, DomainTag::unit_square, DomainTag::unit_cube, DomainTag::l_shape,
                          DomainTag::fichera};

}  // namespace

TEST(Mass, PartitionOfUnity) {
  EXPECT_NEAR(sum_entries(assemble_mass(unit_square_mesh(1))), 1.0, 1e-14);
  EXPECT_NEAR(sum_entries(assemble_mass(l_shape_mesh(2))), 3.0, 1e-13);
  EXPECT_NEAR(sum_entries(assemble_mass(fichera_mesh(1))), 7.0, 1e-13);
}

TEST(Mass, SymmetricPositiveDefiniteWithRowSumsEqualToBasisIntegrals) {
  for (DomainTag tag : tags) {
    const Mesh m = make_mesh(tag, 2);
    const Eigen::MatrixXd md = dense(assemble_mass(m));
    EXPECT_LT((md - md.transpose()).cwiseAbs().maxCoeff(), 1e-16);
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(md).eigenvalues().minCoeff(), 0.0);
    std::vector<double> basis_integral(static_cast<std::size_t>(m.num_vertices()), 0.0);
    for (Index c = 0; c < m.num_cells(); ++c)
      for (Index v : m.cell(c)) basis_integral[v] += cell_measure(m, c) / m.vertices_per_cell();
    for (Index v = 0; v < m.num_vertices(); ++v) EXPECT_NEAR(md.row(v).sum(), basis_integral[v], 1e-15);
  }
}

TEST(Stiffness, ConstantsInKernel) {
  for (DomainTag tag : tags) {
    const SparseMatrix s = assemble_stiffness(make_mesh(tag, 3));
    const std::vector<double> ones(static_cast<std::size_t>(s.rows()), 1.0);
    for (double v : spmv(s, ones)) EXPECT_NEAR(v, 0.0, 1e-13) << to_string(tag);
  }
}

TEST(Stiffness, DirichletEnergyOfLinears) {
  {
    const Mesh m = unit_square_mesh(1);
    std::vector<double> u;
    for (const Vec3& v : m.vertices()) u.push_back(v[0]);
    EXPECT_NEAR(dot(u, spmv(assemble_stiffness(m), u)), 1.0, 1e-14);
  }
  {
    const Mesh m = unit_cube_mesh(1);
    std::vector<double> u;
    for (const Vec3& v : m.vertices()) u.push_back(v[0] + 2 * v[1] + 3 * v[2]);
    EXPECT_NEAR(dot(u, spmv(assemble_stiffness(m), u)), 14.0, 1e-13);
  }
}

TEST(Stiffness, PositiveSemidefiniteWithOneDimensionalKernel) {
  for (DomainTag tag : {DomainTag::unit_square, DomainTag::l_shape, DomainTag::unit_cube}) {
    const Eigen::MatrixXd sd = dense(assemble_stiffness(make_mesh(tag, 2)));
    EXPECT_LT((sd - sd.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sd).eigenvalues();
    EXPECT_NEAR(ev[0], 0.0, 1e-12);
    EXPECT_GT(ev[1], 1e-6);
  }
}

TEST(Stiffness, GalerkinConsistencyAgainstDirectGradients) {
  std::mt19937 rng(1);
  for (DomainTag tag : {DomainTag::unit_square, DomainTag::fichera}) {
    const Mesh m = make_mesh(tag, 2);
    const NodalField u = random_field(m, rng), v = random_field(m, rng);
    std::vector<double> su(u.size());
    spmv_blockdiag3(assemble_stiffness(m), u.flat(), su);
    const double matrix_value = dot(su, v.flat());
    double direct = 0.0;
    for (Index c = 0; c < m.num_cells(); ++c) {
      const auto g = cell_gradients(m, c);
      for (int comp = 0; comp < 3; ++comp) {
        Eigen::VectorXd gu = Eigen::VectorXd::Zero(m.dim()), gv = gu;
        for (int i = 0; i < m.vertices_per_cell(); ++i) {
          gu += u.at(m.cell(c)[i])[comp] * g[i];
          gv += v.at(m.cell(c)[i])[comp] * g[i];
        }
        direct += cell_measure(m, c) * gu.dot(gv);
      }
    }
    EXPECT_NEAR(matrix_value, direct, 1e-12 * std::max(1.0, std::abs(direct)));
  }
}

TEST(Cross, SignConvention) {
  // w = e3, u = x e1, v = x e2: v^T C u = int (e3 x e1) . e2 |d_x x|^2 = 1
  const Mesh m = unit_square_mesh(1);
  const SparseMatrix c = assemble_cross(m, NodalField::constant(m, {0, 0, 1}));
  NodalField u(m.num_vertices()), v(m.num_vertices());
  for (Index i = 0; i < m.num_vertices(); ++i) {
    u.set(i, {m.vertex(i)[0], 0, 0});
    v.set(i, {0, m.vertex(i)[0], 0});
  }
  EXPECT_NEAR(dot(v.flat(), spmv(c, u.flat())), 1.0, 1e-14);
}

TEST(Cross, SkewSymmetricAndLinearInW) {
  std::mt19937 rng(17);
  for (const Mesh& m : {unit_square_mesh(4), unit_cube_mesh(2), l_shape_mesh(2)}) {
    const NodalField w1 = random_field(m, rng), w2 = random_field(m, rng), u = random_field(m, rng);
    const SparseMatrix c1 = assemble_cross(m, w1), c2 = assemble_cross(m, w2);
    const double scale = c1.max_abs();
    EXPECT_LE(add(1.0, c1, 1.0, c1.transpose()).max_abs(), 1e-13 * scale);
    EXPECT_NEAR(dot(u.flat(), spmv(c1, u.flat())), 0.0, 1e-13 * scale * dot(u.flat(), u.flat()));
    const SparseMatrix combo = assemble_cross(m, 2.0 * w1 + (-0.5) * w2);
    EXPECT_LE(add(1.0, combo, -1.0, add(2.0, c1, -0.5, c2)).max_abs(), 1e-13 * scale);
  }
}

TEST(Cross, BlockStructureMatchesCellAverageFormula) {
  std::mt19937 rng(23);
  const Mesh m = unit_square_mesh(2);
  const NodalField w = random_field(m, rng);
  const Index nv = m.num_vertices();
  Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(3 * nv, 3 * nv);
  for (Index c = 0; c < m.num_cells(); ++c) {
    const auto g = cell_gradients(m, c);
    Eigen::Vector3d wbar = Eigen::Vector3d::Zero();
    for (Index v : m.cell(c)) wbar += Eigen::Vector3d(w.at(v)[0], w.at(v)[1], w.at(v)[2]) / 3.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const double s = cell_measure(m, c) * g[a].dot(g[b]);
        for (int q = 0; q < 3; ++q) {
          const Eigen::Vector3d col = wbar.cross(Eigen::Vector3d::Unit(q));
          for (int p = 0; p < 3; ++p) ref(3 * m.cell(c)[a] + p, 3 * m.cell(c)[b] + q) += s * col[p];
        }
      }
  }
  EXPECT_LT((dense(assemble_cross(m, w)) - ref).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(WeightedMass, ConstantWeight) {
  const Mesh m = unit_cube_mesh(2);
  const Eigen::MatrixXd w = dense(assemble_weighted_mass(m, NodalField::constant(m, {1, 1, 1})));
  EXPECT_LT((w - 3.0 * dense(assemble_mass(m))).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(WeightedMass, LinearWeightIntegral) {
  const Mesh m = unit_square_mesh(1);
  const NodalField w = NodalField::interpolate(m, [](const Vec3& x) { return Vec3{x[0], 0, 0}; });
  EXPECT_NEAR(sum_entries(assemble_weighted_mass(m, w)), 1.0 / 3.0, 1e-13);
}

TEST(WeightedMass, SymmetricPositiveSemidefinite) {
  std::mt19937 rng(31);
  const Mesh m = l_shape_mesh(2);
  const Eigen::MatrixXd w = dense(assemble_weighted_mass(m, random_field(m, rng)));
  EXPECT_LT((w - w.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(w).eigenvalues().minCoeff(), -1e-14);
}

TEST(WeightedMass, FieldSizeMismatchThrows) {
  const Mesh m = unit_square_mesh(2);
  EXPECT_THROW(assemble_weighted_mass(m, NodalField(3)), std::invalid_argument);
  EXPECT_THROW(assemble_cross(m, NodalField(3)), std::invalid_argument);
}

TEST(L2Project, ReproducesConstantsAndLinears) {
  const Mesh m = unit_square_mesh(4);
  const NodalField c = l2_project(m, [](const Vec3&) { return Vec3{0.3, -1.0, 2.0}; });
  for (Index v = 0; v < m.num_vertices(); ++v) {
    EXPECT_NEAR(c.at(v)[0], 0.3, 1e-11);
    EXPECT_NEAR(c.at(v)[1], -1.0, 1e-11);
    EXPECT_NEAR(c.at(v)[2], 2.0, 1e-11);
  }
  auto f = [](const Vec3& x) { return Vec3{x[0], 2 * x[1], 0}; };
  const NodalField p = l2_project(m, f);
  for (Index v = 0; v < m.num_vertices(); ++v)
    for (int d = 0; d < 3; ++d) EXPECT_NEAR(p.at(v)[d], f(m.vertex(v))[d], 1e-10);
}

TEST(L2Project, GalerkinOrthogonality) {
  const Mesh m = unit_cube_mesh(2);
  auto f = [](const Vec3& x) { return Vec3{std::sin(3 * x[0]), x[1] * x[1], std::exp(x[2])}; };
  const OperatorAssembler as(m);
  const SparseMatrix mass = as.mass();
  const NodalField p = l2_project(as, mass, f);
  std::vector<double> mp(p.size());
  spmv_blockdiag3(mass, p.flat(), mp);
  const std::vector<double> b = as.load(f);
  double worst = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) worst = std::max(worst, std::abs(mp[i] - b[i]));
  EXPECT_LE(worst, 1e-10 * norm2(b));
}

TEST(Compose, SymmetricPartExcludesCross) {
  std::mt19937 rng(41);
  const Mesh m = unit_square_mesh(3);
  const OperatorAssembler as(m);
  const NodalField w = random_field(m, rng);
  const SchemeParams p{5, 2, 50, 1, 1e-3};
  const double k = 2.5e-3;
  const ComposedSystem sys = compose_system(as.mass(), as.stiffness(), as.cross(w), as.weighted_mass(w), p, k);
  const Eigen::MatrixXd a = dense(sys.matrix);
  const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  const Eigen::MatrixXd cross_free =
      dense(expand_blockdiag3(add(1.0, add(1.0, as.mass(), p.epsilon + k * p.kappa1, as.stiffness()), k * p.kappa2,
                                  add(1.0, as.mass(), p.mu, as.weighted_mass(w)))));
  EXPECT_LT((sym - cross_free).cwiseAbs().maxCoeff(), 1e-13);
  const Eigen::MatrixXd skew = 0.5 * (a - a.transpose());
  EXPECT_LT((skew - p.gamma * k * dense(as.cross(w))).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Compose, RejectsMismatchedOperators) {
  const OperatorAssembler a2(unit_square_mesh(2)), a3(unit_square_mesh(3));
  const NodalField w = NodalField::zeros(a2.mesh());
  EXPECT_THROW(compose_system(a2.mass(), a3.stiffness(), a2.cross(w), a2.weighted_mass(w), SchemeParams{}, 0.1),
               std::invalid_argument);
}
