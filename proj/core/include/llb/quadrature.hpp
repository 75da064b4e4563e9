#pragma once

#include <array>
#include <functional>
#include <vector>

#include "llb/mesh.hpp"

namespace llb {

/// Quadrature rule on the reference simplex. Points are barycentric (dim+1 entries used);
/// weights sum to the reference measure 1/dim!. All rules shipped here have positive weights.
struct QuadRule {
  int dim = 0;
  int degree = 0;  // every polynomial of total degree <= degree is integrated exactly
  std::vector<std::array<double, 4>> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

double reference_measure(int dim);

/// Rule of at least the requested exactness for dim in {1,2,3}, degree in {1,2,4,6}.
/// Degree 1 is the vertex rule. Returned references stay valid for the program lifetime.
/// Throws std::invalid_argument for other combinations.
const QuadRule& simplex_rule(int dim, int degree);

using ScalarFunction = std::function<double(const Vec3&)>;

/// Affine-mapped quadrature of `integrand` over cell `c`.
double integrate_on_cell(const Mesh& mesh, Index c, const QuadRule& rule,
                         const ScalarFunction& integrand);

/// Physical coordinates of a barycentric point on cell `c`.
Vec3 map_to_cell(const Mesh& mesh, Index c, const std::array<double, 4>& bary);

}  // namespace llb
