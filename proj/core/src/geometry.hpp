#pragma once

#include <array>
#include <cmath>

#include "llb/mesh.hpp"

namespace llb::detail {

inline double dist2(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

inline Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline double simplex_signed_measure(int dim, const std::array<Vec3, 4>& p) {
  const Vec3 e1 = sub(p[1], p[0]);
  if (dim == 1) return e1[0];
  const Vec3 e2 = sub(p[2], p[0]);
  if (dim == 2) return 0.5 * (e1[0] * e2[1] - e1[1] * e2[0]);
  const Vec3 e3 = sub(p[3], p[0]);
  return dot(e1, cross(e2, e3)) / 6.0;
}

// Measure of a (dim-1)-simplex embedded in R^dim.
inline double facet_measure(int dim, const std::array<Vec3, 4>& f) {
  if (dim == 1) return 1.0;
  if (dim == 2) return std::sqrt(dist2(f[0], f[1]));
  const Vec3 n = cross(sub(f[1], f[0]), sub(f[2], f[0]));
  return 0.5 * std::sqrt(dot(n, n));
}

/// Affine P1 data of one cell: measure and constant gradients of the barycentric
/// basis functions (third component zero in 2D, last two in 1D).
struct CellGeometry {
  double measure = 0.0;
  std::array<Vec3, 4> grad{};
};

inline CellGeometry cell_geometry(const Mesh& mesh, Index c) {
  const int dim = mesh.dim();
  const auto cv = mesh.cell(c);
  std::array<Vec3, 4> p{};
  for (int i = 0; i <= dim; ++i) p[i] = mesh.vertex(cv[static_cast<std::size_t>(i)]);
  CellGeometry g;
  const double sm = simplex_signed_measure(dim, p);
  g.measure = std::abs(sm);
  if (dim == 1) {
    const double len = p[1][0] - p[0][0];
    g.grad[0] = {-1.0 / len, 0.0, 0.0};
    g.grad[1] = {1.0 / len, 0.0, 0.0};
    return g;
  }
  if (dim == 2) {
    // grad lambda_i = rot90(edge opposite i) / (2 * signed area)
    const double inv = 1.0 / (2.0 * sm);
    for (int i = 0; i < 3; ++i) {
      const Vec3& a = p[(i + 1) % 3];
      const Vec3& b = p[(i + 2) % 3];
      g.grad[i] = {(a[1] - b[1]) * inv, (b[0] - a[0]) * inv, 0.0};
    }
    return g;
  }
  // Rows of J^{-1} with J = [p1-p0, p2-p0, p3-p0]: grad lambda_i = (e_j x e_k) / det.
  const Vec3 e1 = sub(p[1], p[0]), e2 = sub(p[2], p[0]), e3 = sub(p[3], p[0]);
  const double det = dot(e1, cross(e2, e3));
  const Vec3 g1 = cross(e2, e3), g2 = cross(e3, e1), g3 = cross(e1, e2);
  for (int d = 0; d < 3; ++d) {
    g.grad[1][d] = g1[d] / det;
    g.grad[2][d] = g2[d] / det;
    g.grad[3][d] = g3[d] / det;
    g.grad[0][d] = -(g.grad[1][d] + g.grad[2][d] + g.grad[3][d]);
  }
  return g;
}

}  // namespace llb::detail
