#include "llb/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "geometry.hpp"
#include "llb/quadrature.hpp"

namespace llb {

namespace {

double quadratic_form3(const SparseMatrix& scalar, const NodalField& u) {
  if (3 * static_cast<std::size_t>(scalar.rows()) != u.size())
    throw std::invalid_argument("norm: field does not match operator");
  std::vector<double> y(u.size());
  spmv_blockdiag3(scalar, u.flat(), y);
  return std::max(0.0, dot(u.flat(), y));
}

// Value of a P1 field at barycentric point `lam` of cell `cv`.
Vec3 eval(const NodalField& u, std::span<const Index> cv, const std::array<double, 4>& lam) {
  Vec3 x{0.0, 0.0, 0.0};
  for (std::size_t a = 0; a < cv.size(); ++a) {
    const Vec3 ua = u.at(cv[a]);
    for (int d = 0; d < 3; ++d) x[d] += lam[a] * ua[d];
  }
  return x;
}

template <class F>
double integrate_field(const Mesh& mesh, int degree, F&& integrand) {
  const QuadRule& rule = simplex_rule(mesh.dim(), degree);
  const double ref = reference_measure(mesh.dim());
  double total = 0.0;
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto cv = mesh.cell(c);
    double s = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * integrand(cv, rule.points[q]);
    total += s * cell_measure(mesh, c) / ref;
  }
  return total;
}

}  // namespace

double norm_l2(const SparseMatrix& mass, const NodalField& u) { return std::sqrt(quadratic_form3(mass, u)); }

double seminorm_h1(const SparseMatrix& stiffness, const NodalField& u) {
  return std::sqrt(quadratic_form3(stiffness, u));
}

double norm_h1(const SparseMatrix& mass, const SparseMatrix& stiffness, const NodalField& u) {
  return std::sqrt(quadratic_form3(mass, u) + quadratic_form3(stiffness, u));
}

double norm_linf(const NodalField& u) {
  double m = 0.0;
  for (Index v = 0; v < u.num_vertices(); ++v) {
    const Vec3 x = u.at(v);
    m = std::max(m, std::sqrt(detail::dot(x, x)));
  }
  return m;
}

double norm_l4(const Mesh& mesh, const NodalField& u) {
  if (!u.matches(mesh)) throw std::invalid_argument("norm_l4: field does not live on mesh");
  const double i4 = integrate_field(mesh, 4, [&](std::span<const Index> cv, const std::array<double, 4>& lam) {
    const Vec3 x = eval(u, cv, lam);
    const double s = detail::dot(x, x);
    return s * s;
  });
  return std::pow(std::max(0.0, i4), 0.25);
}

double norm_l2_quadrature(const Mesh& mesh, const NodalField& u) {
  if (!u.matches(mesh)) throw std::invalid_argument("norm_l2_quadrature: field does not live on mesh");
  const double i2 = integrate_field(mesh, 2, [&](std::span<const Index> cv, const std::array<double, 4>& lam) {
    const Vec3 x = eval(u, cv, lam);
    return detail::dot(x, x);
  });
  return std::sqrt(std::max(0.0, i2));
}

double seminorm_h1_quadrature(const Mesh& mesh, const NodalField& u) {
  if (!u.matches(mesh)) throw std::invalid_argument("seminorm_h1_quadrature: field does not live on mesh");
  double total = 0.0;
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto g = detail::cell_geometry(mesh, c);
    const auto cv = mesh.cell(c);
    // Gradient of component d is constant on the cell.
    for (int d = 0; d < 3; ++d) {
      Vec3 grad{0.0, 0.0, 0.0};
      for (std::size_t a = 0; a < cv.size(); ++a) {
        const double ua = u.at(cv[a])[d];
        for (int i = 0; i < 3; ++i) grad[i] += ua * g.grad[a][i];
      }
      total += g.measure * detail::dot(grad, grad);
    }
  }
  return std::sqrt(total);
}

double product_l2_squared(const Mesh& mesh, const NodalField& a, const NodalField& b) {
  if (!a.matches(mesh) || !b.matches(mesh)) throw std::invalid_argument("product_l2_squared: field does not live on mesh");
  return integrate_field(mesh, 4, [&](std::span<const Index> cv, const std::array<double, 4>& lam) {
    const Vec3 x = eval(a, cv, lam);
    const Vec3 y = eval(b, cv, lam);
    return detail::dot(x, x) * detail::dot(y, y);
  });
}

NormSample sample_norms(const Mesh& mesh, const SparseMatrix& mass, const SparseMatrix& stiffness,
                        const NodalField& u, double t) {
  NormSample s;
  s.t = t;
  const double l2sq = quadratic_form3(mass, u);
  const double h1sq = quadratic_form3(stiffness, u);
  s.l2 = std::sqrt(l2sq);
  s.h1_semi = std::sqrt(h1sq);
  s.h1 = std::sqrt(l2sq + h1sq);
  s.linf = norm_linf(u);
  s.l4 = norm_l4(mesh, u);
  return s;
}

}  // namespace llb
