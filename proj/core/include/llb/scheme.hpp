#pragma once

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "llb/assembly.hpp"
#include "llb/field.hpp"
#include "llb/mesh.hpp"
#include "llb/norms.hpp"
#include "llb/params.hpp"
#include "llb/sparse.hpp"

namespace llb {

/// Mesh plus the operators that do not change between steps. Immutable and shareable.
class Discretization {
 public:
  explicit Discretization(std::shared_ptr<const Mesh> mesh);

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  const OperatorAssembler& assembler() const { return assembler_; }
  const SparseMatrix& mass() const { return mass_; }
  const SparseMatrix& stiffness() const { return stiffness_; }

 private:
  std::shared_ptr<const Mesh> mesh_;
  OperatorAssembler assembler_;
  SparseMatrix mass_;
  SparseMatrix stiffness_;
};

struct SimState {
  std::shared_ptr<const Discretization> disc;
  int step = 0;
  NodalField u;
  SolveReport last_solve;  // report of the solve that produced u (empty for step 0)
  /// LU factors reused across the steps of this run; shared by copies of the state, so
  /// independent runs should each start from their own init_state. May be null.
  std::shared_ptr<FactorCache> factors;
};

class StepError : public std::runtime_error {
 public:
  StepError(const std::string& what, int step_index, SolveReport report)
      : std::runtime_error(what), step_index_(step_index), report_(report) {}
  int step_index() const { return step_index_; }
  const SolveReport& report() const { return report_; }

 private:
  int step_index_;
  SolveReport report_;
};

/// u^(0) = P_h u0.
SimState init_state(std::shared_ptr<const Discretization> disc, const VectorFunction& u0,
                    const SchemeParams& params, const SolverOptions& solver = {});
SimState init_state(std::shared_ptr<const Mesh> mesh, const VectorFunction& u0,
                    const SchemeParams& params, const SolverOptions& solver = {});

/// One step: C(u^{j-1}) and W(u^{j-1}) are reassembled, then a single linear solve.
/// Throws StepError carrying the step index on solver failure.
SimState step(const SimState& state, const SchemeParams& params, double k,
              const SolverOptions& solver = {});

/// As step, with k <f(t_j), phi> added to the right-hand side (t_j = (j+1) k of the new state).
SimState step_with_forcing(const SimState& state, const SchemeParams& params, double k,
                           const SpaceTimeFunction& forcing, const SolverOptions& solver = {});

/// ell_h: 1 (d=1), |log h|^(1/2) (d=2), h^(-1/2) (d=3).
double inverse_estimate_factor(int dim, double h);

/// Message when k * ell_h > 1 (the error estimates assume k ell_h is bounded).
std::optional<std::string> time_step_warning(const Mesh& mesh, double k);

class StepObserver {
 public:
  virtual ~StepObserver() = default;
  virtual void on_start(const SimState& /*initial*/, double /*t*/) {}
  virtual void on_step(const SimState& prev, const SimState& cur, double t) = 0;
};

struct RunOptions {
  int snapshot_stride = 0;  // 0: keep only the initial and final state
  bool keep_all_states = false;
  SolverOptions solver;
};

struct Snapshot {
  int step = 0;
  double t = 0.0;
  NodalField u;
};

struct Trajectory {
  TimeGrid grid;
  SchemeParams params;
  std::vector<NormSample> norms;  // one per time node, t_0 .. t_N
  std::vector<Snapshot> snapshots;
  long total_solver_iterations = 0;
  std::vector<std::string> warnings;

  double step() const { return grid.step(); }
};

/// Runs N steps from P_h u0, recording norms at every time node.
Trajectory run(std::shared_ptr<const Mesh> mesh, const SchemeParams& params, const TimeGrid& grid,
               const VectorFunction& u0, std::span<StepObserver* const> observers = {},
               const RunOptions& options = {});

}  // namespace llb
