#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "llb/mesh.hpp"

using namespace llb;

namespace {

double total_measure(const Mesh& m) {
  double s = 0.0;
  for (Index c = 0; c < m.num_cells(); ++c) s += signed_cell_measure(m, c);
  return s;
}

const DomainTag all_tags[] = {DomainTag::interval, DomainTag::unit_square, DomainTag::unit_cube, DomainTag::l_shape,
                              DomainTag::fichera};

}  // namespace

TEST(Mesh, UnitSquareCounts) {
  for (int n : {1, 2, 4}) {
    const Mesh m = unit_square_mesh(n);
    EXPECT_EQ(m.num_vertices(), (n + 1) * (n + 1));
    EXPECT_EQ(m.num_cells(), 2 * n * n);
  }
}

TEST(Mesh, UnitSquareEqualAreas) {
  const Mesh m = unit_square_mesh(4);
  for (Index c = 0; c < m.num_cells(); ++c) {
    // shoelace formula, independent of signed_cell_measure
    const auto cell = m.cell(c);
    const Vec3 &a = m.vertex(cell[0]), &b = m.vertex(cell[1]), &p = m.vertex(cell[2]);
    const double area = 0.5 * ((b[0] - a[0]) * (p[1] - a[1]) - (p[0] - a[0]) * (b[1] - a[1]));
    EXPECT_NEAR(area, 1.0 / 32.0, 1e-15);
  }
}

TEST(Mesh, UnitCubeCountsAndVolumes) {
  EXPECT_EQ(unit_cube_mesh(1).num_vertices(), 8);
  EXPECT_EQ(unit_cube_mesh(1).num_cells(), 6);
  const Mesh m = unit_cube_mesh(2);
  EXPECT_EQ(m.num_vertices(), 27);
  EXPECT_EQ(m.num_cells(), 48);
  EXPECT_NEAR(total_measure(m), 1.0, 1e-14);
  for (Index c = 0; c < m.num_cells(); ++c) EXPECT_NEAR(signed_cell_measure(m, c), 1.0 / 48.0, 1e-15);
}

TEST(Mesh, LShapeCounts) {
  EXPECT_EQ(l_shape_mesh(1).num_vertices(), 8);
  EXPECT_EQ(l_shape_mesh(1).num_cells(), 6);
  const Mesh m = l_shape_mesh(2);
  EXPECT_EQ(m.num_vertices(), 21);
  EXPECT_EQ(m.num_cells(), 24);
  EXPECT_NEAR(total_measure(m), 3.0, 1e-14);
}

TEST(Mesh, LShapeKeepsReentrantCornerOnce) {
  const Mesh m = l_shape_mesh(3);
  int hits = 0;
  for (const Vec3& v : m.vertices()) hits += (std::abs(v[0]) < 1e-15 && std::abs(v[1]) < 1e-15);
  EXPECT_EQ(hits, 1);
}

TEST(Mesh, FicheraCounts) {
  const Mesh m = fichera_mesh(1);
  EXPECT_EQ(m.num_cells(), 42);
  EXPECT_EQ(m.num_vertices(), 26);
  EXPECT_NEAR(total_measure(m), 7.0, 1e-13);
  EXPECT_EQ(fichera_mesh(2).num_cells(), 42 * 8);
}

TEST(Mesh, ZeroSubdivisionsRejected) {
  EXPECT_THROW(unit_square_mesh(0), std::invalid_argument);
  EXPECT_THROW(unit_cube_mesh(0), std::invalid_argument);
  EXPECT_THROW(l_shape_mesh(0), std::invalid_argument);
  EXPECT_THROW(fichera_mesh(0), std::invalid_argument);
  EXPECT_THROW(interval_mesh(0), std::invalid_argument);
}

TEST(Mesh, MeasureSumsForAllGenerators) {
  for (DomainTag tag : all_tags) {
    const int max_n = domain_dimension(tag) == 3 ? 6 : 8;
    for (int n = 1; n <= max_n; ++n) {
      const Mesh m = make_mesh(tag, n);
      EXPECT_NEAR(total_measure(m), domain_measure(tag), 1e-12) << to_string(tag) << " n=" << n;
    }
  }
}

TEST(Mesh, PositiveOrientationAndContainment) {
  for (DomainTag tag : all_tags) {
    const Mesh m = make_mesh(tag, 3);
    for (Index c = 0; c < m.num_cells(); ++c) EXPECT_GT(signed_cell_measure(m, c), 0.0);
    for (const Vec3& v : m.vertices()) EXPECT_TRUE(domain_contains(tag, v));
  }
}

TEST(Mesh, Conformity) {
  for (DomainTag tag : all_tags) {
    const Mesh m = make_mesh(tag, 3);
    const FacetIncidence inc = facet_incidence(m);
    int boundary = 0;
    for (std::size_t f = 0; f < inc.facets.size(); ++f) {
      ASSERT_TRUE(inc.counts[f] == 1 || inc.counts[f] == 2) << to_string(tag);
      if (inc.counts[f] == 2) continue;
      ++boundary;
      // a facet with a single neighbour must lie on the boundary
      Vec3 centroid{0, 0, 0};
      const int nv = m.dim();
      for (int i = 0; i < nv; ++i)
        for (int d = 0; d < 3; ++d) centroid[d] += m.vertex(inc.facets[f][i])[d] / nv;
      EXPECT_TRUE(on_domain_boundary(tag, centroid)) << to_string(tag);
    }
    if (tag == DomainTag::unit_square) {
      EXPECT_EQ(boundary, 4 * 3);
    }
    if (tag == DomainTag::unit_cube) {
      EXPECT_EQ(boundary, 6 * 2 * 9);
    }
  }
}

TEST(Mesh, MeshSize) {
  EXPECT_NEAR(mesh_size(unit_square_mesh(4)), std::sqrt(2.0) / 4, 1e-15);
  EXPECT_NEAR(mesh_size(unit_cube_mesh(2)), std::sqrt(3.0) / 2, 1e-15);
  EXPECT_NEAR(mesh_size(l_shape_mesh(2)), std::sqrt(2.0) / 2, 1e-14);
}

TEST(Mesh, RegularityIndex) {
  EXPECT_DOUBLE_EQ(regularity_index(DomainTag::unit_square), 1.0);
  EXPECT_NEAR(regularity_index(DomainTag::l_shape), 2.0 / 3.0, 1e-15);
}

TEST(Refine, SquareCombinatorics) {
  const auto [fine, p] = refine_uniform(unit_square_mesh(1));
  EXPECT_EQ(fine.num_vertices(), 9);
  EXPECT_EQ(fine.num_cells(), 8);
  EXPECT_EQ(fine.level(), 1);
  EXPECT_EQ(p.coarse_vertices, 4);
  EXPECT_EQ(p.parents.size(), 9u);
}

TEST(Refine, CubeVolume) {
  const auto [fine, p] = refine_uniform(unit_cube_mesh(1));
  EXPECT_EQ(fine.num_cells(), 48);
  EXPECT_NEAR(total_measure(fine), 1.0, 1e-14);
}

TEST(Refine, ChildCountsAndMeasure) {
  for (DomainTag tag : all_tags) {
    const Mesh m = make_mesh(tag, 2);
    const auto [fine, p] = refine_uniform(m);
    const int factor = 1 << m.dim();
    EXPECT_EQ(fine.num_cells(), factor * m.num_cells());
    EXPECT_NEAR(total_measure(fine), domain_measure(tag), 1e-12);
    for (Index c = 0; c < fine.num_cells(); ++c) EXPECT_GT(signed_cell_measure(fine, c), 0.0);
  }
}

TEST(Refine, ProlongationReproducesLinearFields) {
  for (DomainTag tag : all_tags) {
    const Mesh coarse = make_mesh(tag, 2);
    const auto [fine, p] = refine_uniform(coarse);
    auto f = [](const Vec3& x) { return Vec3{x[0], x[1], x[0] + x[1] - 2 * x[2]}; };
    std::vector<double> c;
    for (const Vec3& v : coarse.vertices())
      for (double x : f(v)) c.push_back(x);
    const std::vector<double> pf = p.apply(c);
    double worst = 0.0;
    for (Index v = 0; v < fine.num_vertices(); ++v) {
      const Vec3 exact = f(fine.vertex(v));
      for (int d = 0; d < 3; ++d) worst = std::max(worst, std::abs(pf[3 * v + d] - exact[d]));
    }
    EXPECT_EQ(worst, 0.0) << to_string(tag);
  }
}

TEST(Refine, ChainMatchesRepeatedApply) {
  const Mesh m0 = l_shape_mesh(1);
  auto [m1, p1] = refine_uniform(m0);
  auto [m2, p2] = refine_uniform(m1);
  std::vector<double> c(m0.num_vertices());
  for (Index v = 0; v < m0.num_vertices(); ++v) c[v] = std::sin(1.0 + v);
  const std::vector<Prolongation> chain{p1, p2};
  EXPECT_EQ(Prolongation::apply_chain(chain, c, 1), p2.apply(p1.apply(c, 1), 1));
  EXPECT_THROW(p2.apply(c, 1), std::invalid_argument);
}

TEST(Refine, QualityRatioIsLevelIndependent) {
  for (DomainTag tag : {DomainTag::unit_square, DomainTag::l_shape, DomainTag::unit_cube, DomainTag::fichera}) {
    Mesh m = make_mesh(tag, 1);
    const double q0 = quality_ratio(m);
    for (int level = 0; level < 2; ++level) {
      m = refine_uniform(m).first;
      EXPECT_NEAR(quality_ratio(m), q0, 1e-9 * q0) << to_string(tag);
    }
  }
}

TEST(Refine, SquareRefinementMatchesGenerator) {
  const Mesh fine = refine_uniform(unit_square_mesh(2)).first;
  const Mesh direct = unit_square_mesh(4);
  std::set<std::pair<long, long>> a, b;
  for (const Vec3& v : fine.vertices()) a.emplace(std::lround(v[0] * 4), std::lround(v[1] * 4));
  for (const Vec3& v : direct.vertices()) b.emplace(std::lround(v[0] * 4), std::lround(v[1] * 4));
  EXPECT_EQ(a, b);
  EXPECT_NEAR(mesh_size(fine), mesh_size(direct), 1e-15);
}

TEST(Domain, Tags) {
  for (DomainTag tag : all_tags) EXPECT_EQ(parse_domain_tag(to_string(tag)), tag);
  EXPECT_FALSE(parse_domain_tag("disc").has_value());
}
