#include "llb/assembly.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "geometry.hpp"
#include "llb/quadrature.hpp"

namespace llb {

OperatorAssembler::OperatorAssembler(const Mesh& mesh) : mesh_(&mesh), nloc_(mesh.dim() + 1) {
  const auto nv = static_cast<std::size_t>(mesh.num_vertices());
  const auto nl = static_cast<std::size_t>(nloc_);

  // Vertex graph: neighbours of each vertex (including itself), sorted and unique.
  std::vector<std::vector<Index>> adj(nv);
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto cv = mesh.cell(c);
    for (Index a : cv)
      for (Index b : cv) adj[static_cast<std::size_t>(a)].push_back(b);
  }
  row_ptr_.assign(nv + 1, 0);
  for (std::size_t v = 0; v < nv; ++v) {
    auto& row = adj[v];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    row_ptr_[v + 1] = row_ptr_[v] + static_cast<Index>(row.size());
  }
  col_idx_.reserve(static_cast<std::size_t>(row_ptr_.back()));
  for (const auto& row : adj) col_idx_.insert(col_idx_.end(), row.begin(), row.end());

  cell_pos_.resize(static_cast<std::size_t>(mesh.num_cells()) * nl * nl);
  cells_.resize(static_cast<std::size_t>(mesh.num_cells()));
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto cv = mesh.cell(c);
    for (std::size_t a = 0; a < nl; ++a) {
      const auto row = static_cast<std::size_t>(cv[a]);
      const auto b0 = col_idx_.begin() + row_ptr_[row];
      const auto e0 = col_idx_.begin() + row_ptr_[row + 1];
      for (std::size_t b = 0; b < nl; ++b) {
        const auto it = std::lower_bound(b0, e0, cv[b]);
        cell_pos_[(static_cast<std::size_t>(c) * nl + a) * nl + b] = static_cast<Index>(it - col_idx_.begin());
      }
    }
    const auto g = detail::cell_geometry(mesh, c);
    cells_[static_cast<std::size_t>(c)] = {g.measure, g.grad};
  }
}

SparseMatrix OperatorAssembler::scalar_pattern() const {
  const auto nv = mesh_->num_vertices();
  return SparseMatrix(nv, nv, row_ptr_, col_idx_, std::vector<double>(col_idx_.size(), 0.0));
}

void OperatorAssembler::check_field(const NodalField& w, const char* who) const {
  if (!w.matches(*mesh_)) throw std::invalid_argument(std::string(who) + ": field does not live on this mesh");
}

SparseMatrix OperatorAssembler::mass() const {
  SparseMatrix m = scalar_pattern();
  auto vals = m.values();
  const auto nl = static_cast<std::size_t>(nloc_);
  const double denom = static_cast<double>((nloc_) * (nloc_ + 1));
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const double off = cells_[c].measure / denom;
    for (std::size_t a = 0; a < nl; ++a)
      for (std::size_t b = 0; b < nl; ++b)
        vals[static_cast<std::size_t>(cell_pos_[(c * nl + a) * nl + b])] += a == b ? 2.0 * off : off;
  }
  return m;
}

SparseMatrix OperatorAssembler::stiffness() const {
  SparseMatrix s = scalar_pattern();
  auto vals = s.values();
  const auto nl = static_cast<std::size_t>(nloc_);
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const auto& cd = cells_[c];
    for (std::size_t a = 0; a < nl; ++a)
      for (std::size_t b = 0; b < nl; ++b)
        vals[static_cast<std::size_t>(cell_pos_[(c * nl + a) * nl + b])] +=
            cd.measure * detail::dot(cd.grad[a], cd.grad[b]);
  }
  return s;
}

SparseMatrix OperatorAssembler::cross(const NodalField& w) const {
  check_field(w, "assemble_cross");
  const auto nv = static_cast<std::size_t>(mesh_->num_vertices());
  const auto nl = static_cast<std::size_t>(nloc_);

  // Block pattern: row 3a+i lists, for each neighbour b of a, the columns 3b, 3b+1, 3b+2.
  std::vector<Index> row_ptr(3 * nv + 1, 0);
  std::vector<Index> cols(9 * col_idx_.size());
  for (std::size_t a = 0; a < nv; ++a) {
    const auto len = static_cast<std::size_t>(row_ptr_[a + 1] - row_ptr_[a]);
    for (std::size_t i = 0; i < 3; ++i) {
      const std::size_t base = 9 * static_cast<std::size_t>(row_ptr_[a]) + 3 * i * len;
      row_ptr[3 * a + i + 1] = static_cast<Index>(base + 3 * len);
      for (std::size_t k = 0; k < len; ++k)
        for (std::size_t j = 0; j < 3; ++j)
          cols[base + 3 * k + j] = 3 * col_idx_[static_cast<std::size_t>(row_ptr_[a]) + k] + static_cast<Index>(j);
    }
  }
  std::vector<double> vals(cols.size(), 0.0);

  for (Index c = 0; c < mesh_->num_cells(); ++c) {
    const auto cv = mesh_->cell(c);
    const auto& cd = cells_[static_cast<std::size_t>(c)];
    Vec3 wbar{0.0, 0.0, 0.0};
    for (Index v : cv) {
      const Vec3 wv = w.at(v);
      for (int d = 0; d < 3; ++d) wbar[d] += wv[d];
    }
    for (double& x : wbar) x /= static_cast<double>(nl);
    // [wbar]_x, so that [wbar]_x u = wbar x u.
    const double skew[3][3] = {{0.0, -wbar[2], wbar[1]}, {wbar[2], 0.0, -wbar[0]}, {-wbar[1], wbar[0], 0.0}};
    for (std::size_t a = 0; a < nl; ++a) {
      const auto va = static_cast<std::size_t>(cv[a]);
      const auto len = static_cast<std::size_t>(row_ptr_[va + 1] - row_ptr_[va]);
      for (std::size_t b = 0; b < nl; ++b) {
        const double s = cd.measure * detail::dot(cd.grad[a], cd.grad[b]);
        const auto k = static_cast<std::size_t>(cell_pos_[(static_cast<std::size_t>(c) * nl + a) * nl + b] - row_ptr_[va]);
        for (std::size_t i = 0; i < 3; ++i) {
          const std::size_t base = 9 * static_cast<std::size_t>(row_ptr_[va]) + 3 * i * len + 3 * k;
          for (std::size_t j = 0; j < 3; ++j) vals[base + j] += s * skew[i][j];
        }
      }
    }
  }
  const auto n3 = static_cast<Index>(3 * nv);
  return SparseMatrix(n3, n3, std::move(row_ptr), std::move(cols), std::move(vals));
}

SparseMatrix OperatorAssembler::weighted_mass(const NodalField& w) const {
  check_field(w, "assemble_weighted_mass");
  SparseMatrix m = scalar_pattern();
  auto vals = m.values();
  const auto nl = static_cast<std::size_t>(nloc_);
  const QuadRule& rule = simplex_rule(mesh_->dim(), 4);
  const double ref = reference_measure(mesh_->dim());
  for (Index c = 0; c < mesh_->num_cells(); ++c) {
    const auto cv = mesh_->cell(c);
    const double scale = cells_[static_cast<std::size_t>(c)].measure / ref;
    std::array<Vec3, 4> wv{};
    for (std::size_t a = 0; a < nl; ++a) wv[a] = w.at(cv[a]);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& lam = rule.points[q];
      Vec3 wq{0.0, 0.0, 0.0};
      for (std::size_t a = 0; a < nl; ++a)
        for (int d = 0; d < 3; ++d) wq[d] += lam[a] * wv[a][d];
      const double f = scale * rule.weights[q] * detail::dot(wq, wq);
      for (std::size_t a = 0; a < nl; ++a)
        for (std::size_t b = 0; b < nl; ++b)
          vals[static_cast<std::size_t>(cell_pos_[(static_cast<std::size_t>(c) * nl + a) * nl + b])] += f * lam[a] * lam[b];
    }
  }
  return m;
}

std::vector<double> OperatorAssembler::load(const VectorFunction& f) const {
  std::vector<double> b(3 * static_cast<std::size_t>(mesh_->num_vertices()), 0.0);
  const QuadRule& rule = simplex_rule(mesh_->dim(), 6);
  const double ref = reference_measure(mesh_->dim());
  const auto nl = static_cast<std::size_t>(nloc_);
  for (Index c = 0; c < mesh_->num_cells(); ++c) {
    const auto cv = mesh_->cell(c);
    const double scale = cells_[static_cast<std::size_t>(c)].measure / ref;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec3 fx = f(map_to_cell(*mesh_, c, rule.points[q]));
      for (std::size_t a = 0; a < nl; ++a) {
        const double wphi = scale * rule.weights[q] * rule.points[q][a];
        const auto r = 3 * static_cast<std::size_t>(cv[a]);
        for (std::size_t d = 0; d < 3; ++d) b[r + d] += wphi * fx[d];
      }
    }
  }
  return b;
}

SparseMatrix assemble_mass(const Mesh& mesh) { return OperatorAssembler(mesh).mass(); }
SparseMatrix assemble_stiffness(const Mesh& mesh) { return OperatorAssembler(mesh).stiffness(); }
SparseMatrix assemble_cross(const Mesh& mesh, const NodalField& w) { return OperatorAssembler(mesh).cross(w); }
SparseMatrix assemble_weighted_mass(const Mesh& mesh, const NodalField& w) {
  return OperatorAssembler(mesh).weighted_mass(w);
}

NodalField l2_project(const OperatorAssembler& assembler, const SparseMatrix& mass,
                      const VectorFunction& f, const SolverOptions& options) {
  const auto nv = static_cast<std::size_t>(assembler.mesh().num_vertices());
  if (mass.rows() != static_cast<Index>(nv)) throw std::invalid_argument("l2_project: mass matrix does not match mesh");
  const std::vector<double> b = assembler.load(f);
  NodalField u(static_cast<Index>(nv));
  SolverOptions scalar_options = options;
  scalar_options.preconditioner = Preconditioner::jacobi;
  std::vector<double> bc(nv), xc(nv);
  for (std::size_t comp = 0; comp < 3; ++comp) {
    for (std::size_t v = 0; v < nv; ++v) bc[v] = b[3 * v + comp];
    std::fill(xc.begin(), xc.end(), 0.0);
    solve(mass, bc, xc, scalar_options);
    auto flat = u.flat();
    for (std::size_t v = 0; v < nv; ++v) flat[3 * v + comp] = xc[v];
  }
  return u;
}

NodalField l2_project(const Mesh& mesh, const VectorFunction& f, const SolverOptions& options) {
  OperatorAssembler assembler(mesh);
  return l2_project(assembler, assembler.mass(), f, options);
}

std::vector<double> ComposedSystem::rhs(std::span<const double> u_prev) const {
  std::vector<double> b(u_prev.size());
  spmv_blockdiag3(rhs_scalar, u_prev, b);
  return b;
}

ComposedSystem compose_system(const SparseMatrix& mass, const SparseMatrix& stiffness,
                              const SparseMatrix& cross, const SparseMatrix& weighted,
                              const SchemeParams& params, double k) {
  const Index n = mass.rows();
  for (const SparseMatrix* m : {&mass, &stiffness, &weighted}) {
    if (m->rows() != n || m->cols() != n) throw std::invalid_argument("compose_system: scalar operator dimension mismatch");
  }
  if (cross.rows() != 3 * n || cross.cols() != 3 * n)
    throw std::invalid_argument("compose_system: cross operator must be 3V x 3V");
  if (!(k > 0.0)) throw std::invalid_argument("compose_system: k must be > 0");

  SparseMatrix rhs_scalar = add(1.0, mass, params.epsilon, stiffness);
  SparseMatrix scalar = add(1.0 + k * params.kappa2, mass, params.epsilon + k * params.kappa1, stiffness);
  scalar = add(1.0, scalar, k * params.kappa2 * params.mu, weighted);
  SparseMatrix a = add(1.0, expand_blockdiag3(scalar), params.gamma * k, cross);
  return {std::move(a), std::move(rhs_scalar)};
}

}  // namespace llb
