#pragma once

#include "llb/field.hpp"
#include "llb/mesh.hpp"
#include "llb/sparse.hpp"

namespace llb {

/// Norms of one field at one time.
struct NormSample {
  double t = 0.0;
  double l2 = 0.0;
  double h1_semi = 0.0;
  double h1 = 0.0;  // sqrt(l2^2 + h1_semi^2)
  double linf = 0.0;
  double l4 = 0.0;
};

/// sqrt(u^T blockdiag3(M) u).
double norm_l2(const SparseMatrix& mass, const NodalField& u);
/// sqrt(u^T blockdiag3(S) u).
double seminorm_h1(const SparseMatrix& stiffness, const NodalField& u);
double norm_h1(const SparseMatrix& mass, const SparseMatrix& stiffness, const NodalField& u);

/// Maximum over vertices of the Euclidean length |u(vertex)|. For P1 vector fields the
/// magnitude inside a cell can exceed the vertex values slightly; vertex sampling is used.
double norm_linf(const NodalField& u);

/// (int |u|^4)^(1/4) with the degree-4 rule (exact for P1 data).
double norm_l4(const Mesh& mesh, const NodalField& u);

/// Quadrature evaluations that do not touch the assembled matrices.
double norm_l2_quadrature(const Mesh& mesh, const NodalField& u);
double seminorm_h1_quadrature(const Mesh& mesh, const NodalField& u);

/// int |a|^2 |b|^2 with the degree-4 rule.
double product_l2_squared(const Mesh& mesh, const NodalField& a, const NodalField& b);

NormSample sample_norms(const Mesh& mesh, const SparseMatrix& mass, const SparseMatrix& stiffness,
                        const NodalField& u, double t);

}  // namespace llb
