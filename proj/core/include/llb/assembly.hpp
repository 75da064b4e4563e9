#pragma once

#include <span>
#include <vector>

#include "llb/field.hpp"
#include "llb/mesh.hpp"
#include "llb/params.hpp"
#include "llb/sparse.hpp"

namespace llb {

/// Assembles the P1 operators of one mesh. Holds the vertex-graph sparsity pattern, the
/// position of every cell-local entry in it, and the affine data (measure, basis gradients)
/// of every cell, so repeated assemblies are a single pass over the cells.
///
/// Scalar operators (mass, stiffness, weighted mass) are V x V on the vertex graph.
/// The cross operator is 3V x 3V, vertex-major, with a dense 3x3 block per graph edge.
class OperatorAssembler {
 public:
  explicit OperatorAssembler(const Mesh& mesh);

  const Mesh& mesh() const { return *mesh_; }

  /// M_ab = int phi_a phi_b (closed form per cell).
  SparseMatrix mass() const;
  /// S_ab = int grad phi_a . grad phi_b.
  SparseMatrix stiffness() const;
  /// v^T C(w) u = sum_i int (w x d_i u) . d_i v. Exactly skew-symmetric.
  SparseMatrix cross(const NodalField& w) const;
  /// W(w)_ab = int |w|^2 phi_a phi_b with the degree-4 rule (exact for P1 w).
  SparseMatrix weighted_mass(const NodalField& w) const;
  /// b_(3a+c) = int f_c phi_a with the degree-6 rule.
  std::vector<double> load(const VectorFunction& f) const;

  /// Zero-valued matrix with the scalar vertex-graph pattern.
  SparseMatrix scalar_pattern() const;

 private:
  struct CellData {
    double measure;
    std::array<Vec3, 4> grad;
  };

  void check_field(const NodalField& w, const char* who) const;

  const Mesh* mesh_;
  int nloc_;
  std::vector<Index> row_ptr_;
  std::vector<Index> col_idx_;
  std::vector<Index> cell_pos_;  // nloc_^2 entries per cell, row-major local (a, b)
  std::vector<CellData> cells_;
};

SparseMatrix assemble_mass(const Mesh& mesh);
SparseMatrix assemble_stiffness(const Mesh& mesh);
SparseMatrix assemble_cross(const Mesh& mesh, const NodalField& w);
SparseMatrix assemble_weighted_mass(const Mesh& mesh, const NodalField& w);

/// L2 projection onto the P1 space: solves M u_c = b_c per component, b by the degree-6 rule.
NodalField l2_project(const Mesh& mesh, const VectorFunction& f, const SolverOptions& options = {});
NodalField l2_project(const OperatorAssembler& assembler, const SparseMatrix& mass,
                      const VectorFunction& f, const SolverOptions& options = {});

/// One step of the linear scheme, A u^j = B u^{j-1}:
///   A = blockdiag3(M + eps S + k k1 S + k k2 M + k k2 mu W) + gamma k C
///   B = blockdiag3(M + eps S)
struct ComposedSystem {
  SparseMatrix matrix;
  SparseMatrix rhs_scalar;  // M + eps S

  std::vector<double> rhs(std::span<const double> u_prev) const;
};

/// Throws std::invalid_argument on inconsistent dimensions.
ComposedSystem compose_system(const SparseMatrix& mass, const SparseMatrix& stiffness,
                              const SparseMatrix& cross, const SparseMatrix& weighted,
                              const SchemeParams& params, double k);

}  // namespace llb
