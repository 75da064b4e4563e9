#include "llb/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "geometry.hpp"

namespace llb {

std::string_view to_string(DomainTag tag) {
  switch (tag) {
    case DomainTag::interval: return "interval";
    case DomainTag::unit_square: return "unit_square";
    case DomainTag::unit_cube: return "unit_cube";
    case DomainTag::l_shape: return "l_shape";
    case DomainTag::fichera: return "fichera";
  }
  return "unknown";
}

std::optional<DomainTag> parse_domain_tag(std::string_view name) {
  for (auto tag : {DomainTag::interval, DomainTag::unit_square, DomainTag::unit_cube,
                   DomainTag::l_shape, DomainTag::fichera}) {
    if (to_string(tag) == name) return tag;
  }
  return std::nullopt;
}

int domain_dimension(DomainTag tag) {
  switch (tag) {
    case DomainTag::interval: return 1;
    case DomainTag::unit_square:
    case DomainTag::l_shape: return 2;
    case DomainTag::unit_cube:
    case DomainTag::fichera: return 3;
  }
  return 0;
}

double domain_measure(DomainTag tag) {
  switch (tag) {
    case DomainTag::interval:
    case DomainTag::unit_square:
    case DomainTag::unit_cube: return 1.0;
    case DomainTag::l_shape: return 3.0;
    case DomainTag::fichera: return 7.0;
  }
  return 0.0;
}

double regularity_index(DomainTag tag) {
  // omega = 3pi/2 at the L-shape corner. The Fichera corner is not a 2D corner; the
  // value reported is the one of its re-entrant edges (also 3pi/2).
  switch (tag) {
    case DomainTag::l_shape:
    case DomainTag::fichera: return 2.0 / 3.0;
    default: return 1.0;
  }
}

namespace {

bool in_range(double v, double lo, double hi, double tol) { return v >= lo - tol && v <= hi + tol; }

}  // namespace

bool domain_contains(DomainTag tag, const Vec3& p, double tol) {
  switch (tag) {
    case DomainTag::interval: return in_range(p[0], 0, 1, tol);
    case DomainTag::unit_square: return in_range(p[0], 0, 1, tol) && in_range(p[1], 0, 1, tol);
    case DomainTag::unit_cube:
      return in_range(p[0], 0, 1, tol) && in_range(p[1], 0, 1, tol) && in_range(p[2], 0, 1, tol);
    case DomainTag::l_shape:
      return in_range(p[0], -1, 1, tol) && in_range(p[1], -1, 1, tol) &&
             !(p[0] > tol && p[1] > tol);
    case DomainTag::fichera:
      return in_range(p[0], -1, 1, tol) && in_range(p[1], -1, 1, tol) &&
             in_range(p[2], -1, 1, tol) && !(p[0] > tol && p[1] > tol && p[2] > tol);
  }
  return false;
}

bool on_domain_boundary(DomainTag tag, const Vec3& p, double tol) {
  if (!domain_contains(tag, p, tol)) return false;
  auto at = [tol](double v, double c) { return std::abs(v - c) <= tol; };
  switch (tag) {
    case DomainTag::interval: return at(p[0], 0) || at(p[0], 1);
    case DomainTag::unit_square:
      return at(p[0], 0) || at(p[0], 1) || at(p[1], 0) || at(p[1], 1);
    case DomainTag::unit_cube:
      return at(p[0], 0) || at(p[0], 1) || at(p[1], 0) || at(p[1], 1) || at(p[2], 0) ||
             at(p[2], 1);
    case DomainTag::l_shape:
      return at(p[0], -1) || at(p[0], 1) || at(p[1], -1) || at(p[1], 1) ||
             (at(p[0], 0) && p[1] >= -tol) || (at(p[1], 0) && p[0] >= -tol);
    case DomainTag::fichera: {
      for (int i = 0; i < 3; ++i) {
        if (at(p[i], -1) || at(p[i], 1)) return true;
        // faces of the removed octant
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        if (at(p[i], 0) && p[j] >= -tol && p[k] >= -tol) return true;
      }
      return false;
    }
  }
  return false;
}

Mesh::Mesh(int dim, DomainTag tag, int level, std::vector<Vec3> vertices,
           std::vector<Index> cells)
    : dim_(dim), tag_(tag), level_(level), vertices_(std::move(vertices)), cells_(std::move(cells)) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("Mesh: dim must be 1, 2 or 3");
  if (domain_dimension(tag) != dim)
    throw std::invalid_argument("Mesh: dimension does not match domain " +
                                std::string(to_string(tag)));
  const auto n = static_cast<std::size_t>(dim + 1);
  if (cells_.size() % n != 0) throw std::invalid_argument("Mesh: ragged cell array");
  for (Index v : cells_) {
    if (v < 0 || v >= num_vertices()) throw std::invalid_argument("Mesh: cell vertex out of range");
  }
  for (const auto& p : vertices_) {
    if (!domain_contains(tag, p, 1e-12))
      throw std::invalid_argument("Mesh: vertex outside domain " + std::string(to_string(tag)));
  }
  for (Index c = 0; c < num_cells(); ++c) {
    if (!(signed_cell_measure(*this, c) > 0.0))
      throw std::invalid_argument("Mesh: cell " + std::to_string(c) +
                                  " has non-positive orientation");
  }
}

std::vector<double> Prolongation::apply(std::span<const double> coarse, int components) const {
  const auto nc = static_cast<std::size_t>(components);
  if (coarse.size() != static_cast<std::size_t>(coarse_vertices) * nc)
    throw std::invalid_argument("Prolongation::apply: size mismatch");
  std::vector<double> fine(parents.size() * nc);
  for (std::size_t i = 0; i < parents.size(); ++i) {
    const auto a = static_cast<std::size_t>(parents[i][0]);
    const auto b = static_cast<std::size_t>(parents[i][1]);
    for (std::size_t c = 0; c < nc; ++c) {
      fine[i * nc + c] = a == b ? coarse[a * nc + c] : 0.5 * (coarse[a * nc + c] + coarse[b * nc + c]);
    }
  }
  return fine;
}

std::vector<double> Prolongation::apply_chain(std::span<const Prolongation> chain,
                                              std::span<const double> coarse, int components) {
  std::vector<double> data(coarse.begin(), coarse.end());
  for (const auto& p : chain) data = p.apply(data, components);
  return data;
}

namespace {

void check_subdivisions(int n, const char* who) {
  if (n < 1) throw std::invalid_argument(std::string(who) + ": n must be >= 1");
}

// Keeps cell orientation positive by swapping the last two vertices when needed.
void push_oriented(const std::vector<Vec3>& verts, std::vector<Index>& cells,
                   std::span<const Index> cell) {
  const int dim = static_cast<int>(cell.size()) - 1;
  std::array<Index, 4> c{};
  std::copy(cell.begin(), cell.end(), c.begin());
  std::array<Vec3, 4> p{};
  for (int i = 0; i <= dim; ++i) p[i] = verts[static_cast<std::size_t>(c[i])];
  if (detail::simplex_signed_measure(dim, p) < 0.0) {
    if (dim == 1)
      std::swap(c[0], c[1]);
    else
      std::swap(c[dim - 1], c[dim]);
  }
  cells.insert(cells.end(), c.begin(), c.begin() + dim + 1);
}

// Two triangles per grid square, split along the lower-left to upper-right diagonal.
void push_square(const std::vector<Vec3>& verts, std::vector<Index>& cells, Index v00, Index v10,
                 Index v01, Index v11) {
  const std::array<Index, 3> t0{v00, v10, v11};
  const std::array<Index, 3> t1{v00, v11, v01};
  push_oriented(verts, cells, t0);
  push_oriented(verts, cells, t1);
}

// Kuhn/Freudenthal split: six tetrahedra sharing the main diagonal v000 -> v111.
void push_cube(const std::vector<Vec3>& verts, std::vector<Index>& cells,
               const std::array<Index, 8>& corner) {
  // corner[bx + 2*by + 4*bz]
  static constexpr std::array<std::array<int, 3>, 6> perms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  for (const auto& p : perms) {
    int bits = 0;
    std::array<Index, 4> tet{};
    tet[0] = corner[0];
    for (int s = 0; s < 3; ++s) {
      bits |= 1 << p[s];
      tet[s + 1] = corner[bits];
    }
    push_oriented(verts, cells, tet);
  }
}

}  // namespace

Mesh interval_mesh(int n) {
  check_subdivisions(n, "interval_mesh");
  std::vector<Vec3> verts;
  for (int i = 0; i <= n; ++i) verts.push_back({static_cast<double>(i) / n, 0.0, 0.0});
  std::vector<Index> cells;
  for (Index i = 0; i < n; ++i) {
    cells.push_back(i);
    cells.push_back(i + 1);
  }
  return Mesh(1, DomainTag::interval, 0, std::move(verts), std::move(cells));
}

Mesh unit_square_mesh(int n) {
  check_subdivisions(n, "unit_square_mesh");
  std::vector<Vec3> verts;
  verts.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      verts.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n, 0.0});
  auto id = [n](int i, int j) { return static_cast<Index>(j * (n + 1) + i); };
  std::vector<Index> cells;
  cells.reserve(static_cast<std::size_t>(6 * n * n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      push_square(verts, cells, id(i, j), id(i + 1, j), id(i, j + 1), id(i + 1, j + 1));
  return Mesh(2, DomainTag::unit_square, 0, std::move(verts), std::move(cells));
}

Mesh l_shape_mesh(int n) {
  check_subdivisions(n, "l_shape_mesh");
  const int m = 2 * n;
  std::vector<Index> id(static_cast<std::size_t>((m + 1) * (m + 1)), -1);
  std::vector<Vec3> verts;
  for (int j = 0; j <= m; ++j) {
    for (int i = 0; i <= m; ++i) {
      if (i > n && j > n) continue;
      id[static_cast<std::size_t>(j * (m + 1) + i)] = static_cast<Index>(verts.size());
      verts.push_back({-1.0 + static_cast<double>(i) / n, -1.0 + static_cast<double>(j) / n, 0.0});
    }
  }
  auto at = [&](int i, int j) { return id[static_cast<std::size_t>(j * (m + 1) + i)]; };
  std::vector<Index> cells;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      if (i >= n && j >= n) continue;
      push_square(verts, cells, at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1));
    }
  return Mesh(2, DomainTag::l_shape, 0, std::move(verts), std::move(cells));
}

namespace {

// Cube grid [lo, lo + m/n]^3 with step 1/n; `skip_vertex`/`skip_cube` carve out holes.
template <class SkipVertex, class SkipCube>
Mesh cube_grid(DomainTag tag, int n, int m, double lo, SkipVertex skip_vertex, SkipCube skip_cube) {
  const auto side = static_cast<std::size_t>(m + 1);
  std::vector<Index> id(side * side * side, -1);
  std::vector<Vec3> verts;
  for (int k = 0; k <= m; ++k)
    for (int j = 0; j <= m; ++j)
      for (int i = 0; i <= m; ++i) {
        if (skip_vertex(i, j, k)) continue;
        id[(static_cast<std::size_t>(k) * side + static_cast<std::size_t>(j)) * side +
           static_cast<std::size_t>(i)] = static_cast<Index>(verts.size());
        verts.push_back({lo + static_cast<double>(i) / n, lo + static_cast<double>(j) / n,
                         lo + static_cast<double>(k) / n});
      }
  auto at = [&](int i, int j, int k) {
    return id[(static_cast<std::size_t>(k) * side + static_cast<std::size_t>(j)) * side +
              static_cast<std::size_t>(i)];
  };
  std::vector<Index> cells;
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) {
        if (skip_cube(i, j, k)) continue;
        std::array<Index, 8> corner{};
        for (int b = 0; b < 8; ++b) corner[b] = at(i + (b & 1), j + ((b >> 1) & 1), k + ((b >> 2) & 1));
        push_cube(verts, cells, corner);
      }
  return Mesh(3, tag, 0, std::move(verts), std::move(cells));
}

}  // namespace

Mesh unit_cube_mesh(int n) {
  check_subdivisions(n, "unit_cube_mesh");
  return cube_grid(
      DomainTag::unit_cube, n, n, 0.0, [](int, int, int) { return false; },
      [](int, int, int) { return false; });
}

Mesh fichera_mesh(int n) {
  check_subdivisions(n, "fichera_mesh");
  return cube_grid(
      DomainTag::fichera, n, 2 * n, -1.0,
      [n](int i, int j, int k) { return i > n && j > n && k > n; },
      [n](int i, int j, int k) { return i >= n && j >= n && k >= n; });
}

Mesh make_mesh(DomainTag tag, int n) {
  switch (tag) {
    case DomainTag::interval: return interval_mesh(n);
    case DomainTag::unit_square: return unit_square_mesh(n);
    case DomainTag::unit_cube: return unit_cube_mesh(n);
    case DomainTag::l_shape: return l_shape_mesh(n);
    case DomainTag::fichera: return fichera_mesh(n);
  }
  throw std::invalid_argument("make_mesh: unknown domain");
}

std::pair<Mesh, Prolongation> refine_uniform(const Mesh& mesh) {
  const int dim = mesh.dim();
  std::vector<Vec3> verts(mesh.vertices().begin(), mesh.vertices().end());
  Prolongation prol;
  prol.coarse_level = mesh.level();
  prol.fine_level = mesh.level() + 1;
  prol.coarse_vertices = mesh.num_vertices();
  prol.parents.reserve(verts.size() * 2);
  for (Index v = 0; v < mesh.num_vertices(); ++v) prol.parents.push_back({v, v});

  std::unordered_map<std::uint64_t, Index> edge_mid;
  auto midpoint = [&](Index a, Index b) {
    if (a > b) std::swap(a, b);
    const auto key = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
    auto [it, inserted] = edge_mid.try_emplace(key, static_cast<Index>(verts.size()));
    if (inserted) {
      const Vec3& pa = verts[static_cast<std::size_t>(a)];
      const Vec3& pb = verts[static_cast<std::size_t>(b)];
      verts.push_back({0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1]), 0.5 * (pa[2] + pb[2])});
      prol.parents.push_back({a, b});
    }
    return it->second;
  };

  std::vector<Index> cells;
  cells.reserve(mesh.cells().size() * (dim == 3 ? 8 : (dim == 2 ? 4 : 2)));
  auto push = [&](std::initializer_list<Index> c) {
    push_oriented(verts, cells, std::span<const Index>(c.begin(), c.size()));
  };

  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto cv = mesh.cell(c);
    if (dim == 1) {
      const Index m = midpoint(cv[0], cv[1]);
      push({cv[0], m});
      push({m, cv[1]});
    } else if (dim == 2) {
      const Index a = cv[0], b = cv[1], d = cv[2];
      const Index ab = midpoint(a, b), bd = midpoint(b, d), da = midpoint(d, a);
      push({a, ab, da});
      push({ab, b, bd});
      push({da, bd, d});
      push({ab, bd, da});
    } else {
      const Index x0 = cv[0], x1 = cv[1], x2 = cv[2], x3 = cv[3];
      const Index m01 = midpoint(x0, x1), m02 = midpoint(x0, x2), m03 = midpoint(x0, x3);
      const Index m12 = midpoint(x1, x2), m13 = midpoint(x1, x3), m23 = midpoint(x2, x3);
      push({x0, m01, m02, m03});
      push({m01, x1, m12, m13});
      push({m02, m12, x2, m23});
      push({m03, m13, m23, x3});
      // Octahedron diagonals in tie-break order; each entry is (p, q, a1, a2, b1, b2) where
      // (a1, a2) and (b1, b2) are the two remaining opposite pairs.
      const std::array<std::array<Index, 6>, 3> diag{{{m02, m13, m01, m23, m03, m12},
                                                      {m03, m12, m01, m23, m02, m13},
                                                      {m01, m23, m02, m13, m03, m12}}};
      auto dist2 = [&](Index p, Index q) {
        const Vec3& a = verts[static_cast<std::size_t>(p)];
        const Vec3& b = verts[static_cast<std::size_t>(q)];
        return (a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
               (a[2] - b[2]) * (a[2] - b[2]);
      };
      // Worst diameter/inradius ratio of the four children around a diagonal.
      auto worst_child = [&](const std::array<Index, 6>& d) {
        const std::array<std::array<Index, 4>, 4> kids{
            {{d[0], d[1], d[2], d[4]}, {d[0], d[1], d[4], d[3]}, {d[0], d[1], d[3], d[5]}, {d[0], d[1], d[5], d[2]}}};
        double worst = 0.0;
        for (const auto& kid : kids) {
          std::array<Vec3, 4> pts{};
          double diam2 = 0.0;
          for (int i = 0; i < 4; ++i) {
            pts[i] = verts[static_cast<std::size_t>(kid[i])];
            for (int j = 0; j < i; ++j) diam2 = std::max(diam2, dist2(kid[i], kid[j]));
          }
          double facets = 0.0;
          for (int skip = 0; skip < 4; ++skip) {
            std::array<Vec3, 4> f{};
            int k = 0;
            for (int i = 0; i < 4; ++i)
              if (i != skip) f[k++] = pts[i];
            facets += detail::facet_measure(3, f);
          }
          const double inradius = 3.0 * std::abs(detail::simplex_signed_measure(3, pts)) / facets;
          worst = std::max(worst, std::sqrt(diam2) / inradius);
        }
        return worst;
      };
      // Shortest diagonal; among equal lengths the one with the best-shaped children, and the
      // listed order after that. On Kuhn cells this keeps the children similar to the parent.
      std::size_t best = 0;
      double best_len = dist2(diag[0][0], diag[0][1]);
      double best_quality = worst_child(diag[0]);
      for (std::size_t i = 1; i < 3; ++i) {
        const double len = dist2(diag[i][0], diag[i][1]);
        if (len > best_len * (1.0 + 1e-12)) continue;
        const double quality = worst_child(diag[i]);
        if (len < best_len * (1.0 - 1e-12) || quality < best_quality * (1.0 - 1e-12)) {
          best = i;
          best_len = len;
          best_quality = quality;
        }
      }
      const auto& d = diag[best];
      const Index p = d[0], q = d[1], a1 = d[2], a2 = d[3], b1 = d[4], b2 = d[5];
      push({p, q, a1, b1});
      push({p, q, b1, a2});
      push({p, q, a2, b2});
      push({p, q, b2, a1});
    }
  }
  Mesh fine(dim, mesh.domain(), mesh.level() + 1, std::move(verts), std::move(cells));
  return {std::move(fine), std::move(prol)};
}

namespace {

std::array<Vec3, 4> cell_points(const Mesh& mesh, Index c) {
  std::array<Vec3, 4> p{};
  const auto cv = mesh.cell(c);
  for (std::size_t i = 0; i < cv.size(); ++i) p[i] = mesh.vertex(cv[i]);
  return p;
}

}  // namespace

double signed_cell_measure(const Mesh& mesh, Index c) {
  return detail::simplex_signed_measure(mesh.dim(), cell_points(mesh, c));
}

double cell_measure(const Mesh& mesh, Index c) { return std::abs(signed_cell_measure(mesh, c)); }

double cell_diameter(const Mesh& mesh, Index c) {
  const auto cv = mesh.cell(c);
  double d2 = 0.0;
  for (std::size_t i = 0; i < cv.size(); ++i)
    for (std::size_t j = i + 1; j < cv.size(); ++j)
      d2 = std::max(d2, detail::dist2(mesh.vertex(cv[i]), mesh.vertex(cv[j])));
  return std::sqrt(d2);
}

double cell_inradius(const Mesh& mesh, Index c) {
  const int dim = mesh.dim();
  const auto p = cell_points(mesh, c);
  const double vol = std::abs(detail::simplex_signed_measure(dim, p));
  if (dim == 1) return 0.5 * vol;
  // r = d |K| / (sum of facet measures)
  double facets = 0.0;
  for (int skip = 0; skip <= dim; ++skip) {
    std::array<Vec3, 4> f{};
    int k = 0;
    for (int i = 0; i <= dim; ++i)
      if (i != skip) f[k++] = p[i];
    facets += detail::facet_measure(dim, f);
  }
  return dim * vol / facets;
}

double mesh_size(const Mesh& mesh) {
  double h = 0.0;
  for (Index c = 0; c < mesh.num_cells(); ++c) h = std::max(h, cell_diameter(mesh, c));
  return h;
}

double quality_ratio(const Mesh& mesh) {
  double max_diam = 0.0;
  double min_in = std::numeric_limits<double>::infinity();
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    max_diam = std::max(max_diam, cell_diameter(mesh, c));
    min_in = std::min(min_in, 2.0 * cell_inradius(mesh, c));
  }
  return max_diam / min_in;
}

FacetIncidence facet_incidence(const Mesh& mesh) {
  const int nv = mesh.dim();  // vertices per facet
  std::vector<std::array<Index, 3>> all;
  all.reserve(static_cast<std::size_t>(mesh.num_cells()) * static_cast<std::size_t>(nv + 1));
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto cv = mesh.cell(c);
    for (int skip = 0; skip <= nv; ++skip) {
      std::array<Index, 3> f{-1, -1, -1};
      int k = 0;
      for (int i = 0; i <= nv; ++i)
        if (i != skip) f[static_cast<std::size_t>(k++)] = cv[static_cast<std::size_t>(i)];
      std::sort(f.begin(), f.begin() + nv);
      all.push_back(f);
    }
  }
  std::sort(all.begin(), all.end());
  FacetIncidence out;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j] == all[i]) ++j;
    out.facets.push_back(all[i]);
    out.counts.push_back(static_cast<int>(j - i));
    i = j;
  }
  return out;
}

}  // namespace llb
