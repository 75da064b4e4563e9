#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace llb {

using Index = std::int32_t;
using Vec3 = std::array<double, 3>;

/// Domains the generators know how to triangulate.
///
/// - interval:    [0,1]
/// - unit_square: [0,1]^2
/// - unit_cube:   [0,1]^3
/// - l_shape:     [-1,1]^2 minus the quadrant (0,1]^2 (re-entrant corner at the origin)
/// - fichera:     [-1,1]^3 minus the octant (0,1]^3
enum class DomainTag { interval, unit_square, unit_cube, l_shape, fichera };

std::string_view to_string(DomainTag tag);
std::optional<DomainTag> parse_domain_tag(std::string_view name);

int domain_dimension(DomainTag tag);
double domain_measure(DomainTag tag);

/// Elliptic regularity index pi/omega of the domain's re-entrant corner; 1 for convex domains.
double regularity_index(DomainTag tag);

/// True if `p` lies in the closed domain (within `tol`).
bool domain_contains(DomainTag tag, const Vec3& p, double tol = 1e-12);

/// True if `p` lies on the boundary of the domain (within `tol`).
bool on_domain_boundary(DomainTag tag, const Vec3& p, double tol = 1e-12);

/// Conforming simplicial mesh. Vertices always carry three coordinates; unused ones are zero.
/// Cells are stored as (dim+1)-tuples with positive orientation. Immutable after construction.
class Mesh {
 public:
  Mesh(int dim, DomainTag tag, int level, std::vector<Vec3> vertices, std::vector<Index> cells);

  int dim() const { return dim_; }
  DomainTag domain() const { return tag_; }
  int level() const { return level_; }
  int vertices_per_cell() const { return dim_ + 1; }

  Index num_vertices() const { return static_cast<Index>(vertices_.size()); }
  Index num_cells() const { return static_cast<Index>(cells_.size() / (dim_ + 1)); }

  const Vec3& vertex(Index v) const { return vertices_[static_cast<std::size_t>(v)]; }
  std::span<const Vec3> vertices() const { return vertices_; }

  std::span<const Index> cell(Index c) const {
    const auto n = static_cast<std::size_t>(dim_ + 1);
    return std::span<const Index>(cells_).subspan(static_cast<std::size_t>(c) * n, n);
  }
  std::span<const Index> cells() const { return cells_; }

 private:
  int dim_;
  DomainTag tag_;
  int level_;
  std::vector<Vec3> vertices_;
  std::vector<Index> cells_;
};

/// Coarse-to-fine map of a uniform refinement. Fine vertex i is the midpoint of coarse
/// vertices parents[i][0] and parents[i][1]; both entries are equal for inherited vertices.
struct Prolongation {
  int coarse_level = 0;
  int fine_level = 0;
  Index coarse_vertices = 0;
  std::vector<std::array<Index, 2>> parents;

  /// Prolongs vertex-major nodal data with `components` values per vertex.
  std::vector<double> apply(std::span<const double> coarse, int components = 3) const;

  /// Applies a sequence of level-to-level maps in order (coarsest first).
  static std::vector<double> apply_chain(std::span<const Prolongation> chain,
                                         std::span<const double> coarse, int components = 3);
};

Mesh interval_mesh(int n);
Mesh unit_square_mesh(int n);
Mesh unit_cube_mesh(int n);
Mesh l_shape_mesh(int n);
Mesh fichera_mesh(int n);

/// Dispatches to the generator for `tag`; `n` is the number of subdivisions per unit length.
Mesh make_mesh(DomainTag tag, int n);

/// Red refinement: triangles split into 4 via edge midpoints, tetrahedra into 8 with the
/// interior octahedron cut along its shortest diagonal. Equal-length diagonals are ranked by
/// the worst diameter/inradius ratio of the resulting children, then by the order
/// (m02,m13), (m03,m12), (m01,m23), where mij is the midpoint of local edge ij.
std::pair<Mesh, Prolongation> refine_uniform(const Mesh& mesh);

double signed_cell_measure(const Mesh& mesh, Index c);
double cell_measure(const Mesh& mesh, Index c);
double cell_diameter(const Mesh& mesh, Index c);
double cell_inradius(const Mesh& mesh, Index c);

/// Maximal cell diameter.
double mesh_size(const Mesh& mesh);

/// (max cell diameter) / (min inscribed-ball diameter).
double quality_ratio(const Mesh& mesh);

/// Number of cells incident to each facet, keyed by the sorted facet vertex tuple.
struct FacetIncidence {
  std::vector<std::array<Index, 3>> facets;  // unused trailing entries are -1
  std::vector<int> counts;
};
FacetIncidence facet_incidence(const Mesh& mesh);

}  // namespace llb
