#include "llb/quadrature.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace llb {

namespace {

void add_point(QuadRule& r, std::array<double, 4> bary, double w) {
  r.points.push_back(bary);
  r.weights.push_back(w);
}

// All distinct permutations of the first n entries of `b`.
void add_orbit(QuadRule& r, std::array<double, 4> b, int n, double w) {
  std::sort(b.begin(), b.begin() + n);
  do {
    add_point(r, b, w);
  } while (std::next_permutation(b.begin(), b.begin() + n));
}

QuadRule vertex_rule(int dim) {
  QuadRule r{dim, 1, {}, {}};
  const double w = reference_measure(dim) / (dim + 1);
  for (int i = 0; i <= dim; ++i) {
    std::array<double, 4> b{};
    b[static_cast<std::size_t>(i)] = 1.0;
    add_point(r, b, w);
  }
  return r;
}

// Gauss-Legendre on [0,1] in barycentric form (lambda0 = 1 - x, lambda1 = x).
QuadRule gauss_interval(int npts) {
  QuadRule r{1, 2 * npts - 1, {}, {}};
  std::vector<std::pair<double, double>> xw;
  switch (npts) {
    case 2: {
      const double a = 0.57735026918962576451;
      xw = {{-a, 1.0}, {a, 1.0}};
      break;
    }
    case 3: {
      const double a = 0.77459666924148337704;
      xw = {{-a, 5.0 / 9.0}, {0.0, 8.0 / 9.0}, {a, 5.0 / 9.0}};
      break;
    }
    case 4: {
      const double a = 0.33998104358485626480, b = 0.86113631159405257522;
      const double wa = 0.65214515486254614263, wb = 0.34785484513745385737;
      xw = {{-b, wb}, {-a, wa}, {a, wa}, {b, wb}};
      break;
    }
    default: throw std::invalid_argument("gauss_interval: unsupported point count");
  }
  for (auto [x, w] : xw) {
    const double t = 0.5 * (x + 1.0);
    add_point(r, {1.0 - t, t, 0.0, 0.0}, 0.5 * w);
  }
  return r;
}

QuadRule triangle_rule(int degree) {
  QuadRule r{2, degree, {}, {}};
  switch (degree) {
    case 2:
      // edge midpoints
      add_orbit(r, {0.5, 0.5, 0.0, 0.0}, 3, 1.0 / 6.0);
      break;
    case 4: {
      // Dunavant, 6 points
      const double a1 = 0.44594849091596488632, w1 = 0.11169079483900573285;
      const double a2 = 0.091576213509770743460, w2 = 0.054975871827660933819;
      add_orbit(r, {a1, a1, 1.0 - 2.0 * a1, 0.0}, 3, w1);
      add_orbit(r, {a2, a2, 1.0 - 2.0 * a2, 0.0}, 3, w2);
      break;
    }
    case 6: {
      // Dunavant, 12 points
      const double a1 = 0.24928674517091042129, w1 = 0.058393137863189683013;
      const double a2 = 0.063089014491502228340, w2 = 0.025422453185103408460;
      const double b1 = 0.053145049844816947353, b2 = 0.31035245103378440542;
      const double w3 = 0.041425537809186787597;
      add_orbit(r, {a1, a1, 1.0 - 2.0 * a1, 0.0}, 3, w1);
      add_orbit(r, {a2, a2, 1.0 - 2.0 * a2, 0.0}, 3, w2);
      add_orbit(r, {b1, b2, 1.0 - b1 - b2, 0.0}, 3, w3);
      break;
    }
    default: throw std::invalid_argument("triangle_rule: unsupported degree");
  }
  return r;
}

QuadRule tetrahedron_rule(int degree) {
  switch (degree) {
    case 2: {
      QuadRule r{3, 2, {}, {}};
      const double a = 0.13819660112501051518;
      add_orbit(r, {a, a, a, 1.0 - 3.0 * a}, 4, 1.0 / 24.0);
      return r;
    }
    case 4: {
      // 14-point rule of degree 5; all weights positive.
      QuadRule r{3, 5, {}, {}};
      const double a = 0.045503704125649649492, wa = 0.0070910034628469110730;
      const double b = 0.092735250310891226402, wb = 0.012248840519393658257;
      const double c = 0.31088591926330060980, wc = 0.018781320953002641800;
      add_orbit(r, {a, a, 0.5 - a, 0.5 - a}, 4, wa);
      add_orbit(r, {b, b, b, 1.0 - 3.0 * b}, 4, wb);
      add_orbit(r, {c, c, c, 1.0 - 3.0 * c}, 4, wc);
      return r;
    }
    case 6: {
      // Keast, 24 points, degree 6
      QuadRule r{3, 6, {}, {}};
      const double a1 = 0.21460287125915202929, w1 = 0.0066537917096945820166;
      const double a2 = 0.040673958534611353116, w2 = 0.0016795351758867738247;
      const double a3 = 0.32233789014227551034, w3 = 0.0092261969239424536825;
      const double b = 0.063661001875017525299, c = 0.26967233145831580803;
      const double w4 = 0.0080357142857142857143;
      add_orbit(r, {a1, a1, a1, 1.0 - 3.0 * a1}, 4, w1);
      add_orbit(r, {a2, a2, a2, 1.0 - 3.0 * a2}, 4, w2);
      add_orbit(r, {a3, a3, a3, 1.0 - 3.0 * a3}, 4, w3);
      add_orbit(r, {b, b, c, 1.0 - 2.0 * b - c}, 4, w4);
      return r;
    }
    default: throw std::invalid_argument("tetrahedron_rule: unsupported degree");
  }
}

QuadRule make_rule(int dim, int degree) {
  if (degree == 1) return vertex_rule(dim);
  switch (dim) {
    case 1: return gauss_interval(degree == 2 ? 2 : (degree == 4 ? 3 : 4));
    case 2: return triangle_rule(degree);
    case 3: return tetrahedron_rule(degree);
    default: break;
  }
  throw std::invalid_argument("simplex_rule: unsupported dimension");
}

}  // namespace

double reference_measure(int dim) {
  switch (dim) {
    case 1: return 1.0;
    case 2: return 0.5;
    case 3: return 1.0 / 6.0;
    default: throw std::invalid_argument("reference_measure: dim must be 1, 2 or 3");
  }
}

const QuadRule& simplex_rule(int dim, int degree) {
  if (dim < 1 || dim > 3 || (degree != 1 && degree != 2 && degree != 4 && degree != 6)) {
    throw std::invalid_argument("simplex_rule: unsupported (dim, degree) = (" +
                                std::to_string(dim) + ", " + std::to_string(degree) + ")");
  }
  // Function-local statics: initialised once, thread-safe.
  static const std::array<std::array<QuadRule, 4>, 3> rules = [] {
    std::array<std::array<QuadRule, 4>, 3> out;
    constexpr std::array<int, 4> degrees{1, 2, 4, 6};
    for (int d = 1; d <= 3; ++d)
      for (std::size_t i = 0; i < 4; ++i) out[static_cast<std::size_t>(d - 1)][i] = make_rule(d, degrees[i]);
    return out;
  }();
  const std::size_t slot = degree == 1 ? 0 : degree == 2 ? 1 : degree == 4 ? 2 : 3;
  return rules[static_cast<std::size_t>(dim - 1)][slot];
}

Vec3 map_to_cell(const Mesh& mesh, Index c, const std::array<double, 4>& bary) {
  const auto cv = mesh.cell(c);
  Vec3 x{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < cv.size(); ++i) {
    const Vec3& p = mesh.vertex(cv[i]);
    for (int d = 0; d < 3; ++d) x[d] += bary[i] * p[d];
  }
  return x;
}

double integrate_on_cell(const Mesh& mesh, Index c, const QuadRule& rule,
                         const ScalarFunction& integrand) {
  if (rule.dim != mesh.dim()) throw std::invalid_argument("integrate_on_cell: rule dimension mismatch");
  const double scale = cell_measure(mesh, c) / reference_measure(rule.dim);
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) sum += rule.weights[q] * integrand(map_to_cell(mesh, c, rule.points[q]));
  return scale * sum;
}

}  // namespace llb
