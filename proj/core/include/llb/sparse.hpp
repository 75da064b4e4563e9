#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "llb/mesh.hpp"

namespace llb {

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Compressed sparse row matrix with sorted, duplicate-free column indices per row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(Index rows, Index cols, std::vector<Index> row_ptr, std::vector<Index> col_idx,
               std::vector<double> values);

  /// Duplicates are summed.
  static SparseMatrix from_triplets(Index rows, Index cols, std::vector<Triplet> triplets);
  static SparseMatrix identity(Index n);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const Index> row_ptr() const { return row_ptr_; }
  std::span<const Index> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Entry (r, c); zero when not stored.
  double coeff(Index r, Index c) const;
  /// Position of (r, c) in values(), or -1.
  std::ptrdiff_t find(Index r, Index c) const;

  bool same_pattern(const SparseMatrix& other) const;
  SparseMatrix transpose() const;
  double max_abs() const;
  std::vector<double> diagonal() const;
  /// Row-major dense copy.
  std::vector<double> to_dense() const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

/// y = A x. Throws std::invalid_argument on dimension mismatch.
void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y);
std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x);

/// alpha A + beta B over the union pattern.
SparseMatrix add(double alpha, const SparseMatrix& a, double beta, const SparseMatrix& b);

/// Scalar V x V matrix acting identically on each of the three components of a
/// vertex-major 3V vector.
SparseMatrix expand_blockdiag3(const SparseMatrix& scalar);
void spmv_blockdiag3(const SparseMatrix& scalar, std::span<const double> x, std::span<double> y);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

enum class Preconditioner {
  jacobi,      // scalar diagonal
  block_ilu0,  // ILU(0) on 3x3 vertex blocks of a 3V x 3V system; jacobi for other sizes
  sparse_lu,   // complete sparse LU; GMRES then acts as a checked refinement loop
  automatic,   // see solve()
};

/// GMRES iterations allowed to the cheap or lagged preconditioner under Preconditioner::automatic.
inline constexpr int automatic_trial_iterations = 20;

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 10000;
  int restart = 60;
  Preconditioner preconditioner = Preconditioner::automatic;
};

class SolveError : public std::runtime_error {
 public:
  SolveError(const std::string& what, SolveReport report)
      : std::runtime_error(what), report_(report) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

/// Sparse LU factors kept between the solves of one time-stepping run, whose matrices change
/// slowly from step to step. Move-only.
class FactorCache {
 public:
  FactorCache();
  ~FactorCache();
  FactorCache(FactorCache&&) noexcept;
  FactorCache& operator=(FactorCache&&) noexcept;

  bool empty() const;
  void clear();
  int factorizations() const;

  struct Impl;

 private:
  friend SolveReport solve(const SparseMatrix&, std::span<const double>, std::span<double>, const SolverOptions&,
                           FactorCache*);
  std::unique_ptr<Impl> impl_;
};

/// Restarted GMRES with right preconditioning. `x` holds the initial guess on entry.
/// Convergence is declared on the recomputed true residual ||b - Ax|| / ||b|| <= tol.
/// Throws SolveError (carrying the report) when max_iter is exhausted.
///
/// Preconditioner::automatic with a cache: the cached LU factors of an earlier matrix
/// precondition a short trial, and the current matrix is refactored (and cached) only if the
/// trial does not converge. Without a cache: block ILU(0) for the trial, then a fresh LU.
SolveReport solve(const SparseMatrix& a, std::span<const double> b, std::span<double> x,
                  const SolverOptions& options = {});
SolveReport solve(const SparseMatrix& a, std::span<const double> b, std::span<double> x,
                  const SolverOptions& options, FactorCache* cache);

/// Dense row-major matrix used by the verification oracles.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// LU with partial pivoting. Throws SingularMatrixError on an exactly (or numerically) zero pivot.
std::vector<double> dense_lu_solve(DenseMatrix a, std::vector<double> b);

}  // namespace llb
