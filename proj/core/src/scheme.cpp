#include "llb/scheme.hpp"

#include <cmath>
#include <spdlog/spdlog.h>
#include <sstream>

namespace llb {

Discretization::Discretization(std::shared_ptr<const Mesh> mesh)
    : mesh_(std::move(mesh)),
      assembler_(*mesh_),
      mass_(assembler_.mass()),
      stiffness_(assembler_.stiffness()) {}

SimState init_state(std::shared_ptr<const Discretization> disc, const VectorFunction& u0,
                    const SchemeParams& params, const SolverOptions& solver) {
  params.validate();
  SimState s;
  s.u = l2_project(disc->assembler(), disc->mass(), u0, solver);
  s.disc = std::move(disc);
  s.step = 0;
  s.factors = std::make_shared<FactorCache>();
  return s;
}

SimState init_state(std::shared_ptr<const Mesh> mesh, const VectorFunction& u0,
                    const SchemeParams& params, const SolverOptions& solver) {
  return init_state(std::make_shared<const Discretization>(std::move(mesh)), u0, params, solver);
}

namespace {

SimState advance(const SimState& state, const SchemeParams& params, double k,
                 const SpaceTimeFunction* forcing, const SolverOptions& solver) {
  const Discretization& d = *state.disc;
  const OperatorAssembler& asmb = d.assembler();
  const ComposedSystem sys = compose_system(d.mass(), d.stiffness(), asmb.cross(state.u),
                                            asmb.weighted_mass(state.u), params, k);
  std::vector<double> b = sys.rhs(state.u.flat());
  const double t_new = k * (state.step + 1);
  if (forcing != nullptr) {
    const auto& f = *forcing;
    const std::vector<double> load = asmb.load([&](const Vec3& x) { return f(x, t_new); });
    for (std::size_t i = 0; i < b.size(); ++i) b[i] += k * load[i];
  }
  SimState next;
  next.disc = state.disc;
  next.step = state.step + 1;
  next.u = state.u;  // initial guess
  next.factors = state.factors;
  try {
    next.last_solve = solve(sys.matrix, b, next.u.flat(), solver, state.factors.get());
  } catch (const SolveError& e) {
    throw StepError("step " + std::to_string(next.step) + ": " + e.what(), next.step, e.report());
  }
  return next;
}

}  // namespace

SimState step(const SimState& state, const SchemeParams& params, double k, const SolverOptions& solver) {
  return advance(state, params, k, nullptr, solver);
}

SimState step_with_forcing(const SimState& state, const SchemeParams& params, double k,
                           const SpaceTimeFunction& forcing, const SolverOptions& solver) {
  return advance(state, params, k, &forcing, solver);
}

double inverse_estimate_factor(int dim, double h) {
  switch (dim) {
    case 1: return 1.0;
    case 2: return std::sqrt(std::abs(std::log(h)));
    case 3: return 1.0 / std::sqrt(h);
    default: throw std::invalid_argument("inverse_estimate_factor: dim must be 1, 2 or 3");
  }
}

std::optional<std::string> time_step_warning(const Mesh& mesh, double k) {
  const double h = mesh_size(mesh);
  const double kl = k * inverse_estimate_factor(mesh.dim(), h);
  if (kl <= 1.0) return std::nullopt;
  std::ostringstream os;
  os << "k * ell_h = " << kl << " > 1 (k = " << k << ", h = " << h
     << "); the error estimates assume k * ell_h stays bounded";
  return os.str();
}

Trajectory run(std::shared_ptr<const Mesh> mesh, const SchemeParams& params, const TimeGrid& grid,
               const VectorFunction& u0, std::span<StepObserver* const> observers,
               const RunOptions& options) {
  params.validate();
  grid.validate();
  const double k = grid.step();

  Trajectory traj;
  traj.grid = grid;
  traj.params = params;
  if (auto w = time_step_warning(*mesh, k)) {
    spdlog::warn("{}", *w);
    traj.warnings.push_back(*w);
  }

  auto disc = std::make_shared<const Discretization>(std::move(mesh));
  SimState cur = init_state(disc, u0, params, options.solver);
  const int stride = options.keep_all_states ? 1 : options.snapshot_stride;
  auto keep = [&](int j) { return j == 0 || j == grid.N || (stride > 0 && j % stride == 0); };

  traj.norms.reserve(static_cast<std::size_t>(grid.N) + 1);
  traj.norms.push_back(sample_norms(disc->mesh(), disc->mass(), disc->stiffness(), cur.u, 0.0));
  if (keep(0)) traj.snapshots.push_back({0, 0.0, cur.u});
  for (StepObserver* o : observers) o->on_start(cur, 0.0);

  for (int j = 1; j <= grid.N; ++j) {
    SimState next = step(cur, params, k, options.solver);
    const double t = grid.time(j);
    traj.total_solver_iterations += next.last_solve.iterations;
    traj.norms.push_back(sample_norms(disc->mesh(), disc->mass(), disc->stiffness(), next.u, t));
    if (keep(j)) traj.snapshots.push_back({j, t, next.u});
    for (StepObserver* o : observers) o->on_step(cur, next, t);
    cur = std::move(next);
  }
  return traj;
}

}  // namespace llb
