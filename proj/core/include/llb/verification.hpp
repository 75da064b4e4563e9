#pragma once

#include <array>
#include <string>
#include <vector>

#include "llb/field.hpp"
#include "llb/mesh.hpp"
#include "llb/params.hpp"
#include "llb/sparse.hpp"

namespace llb {

struct OracleReport {
  std::string name;
  double max_abs_discrepancy = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

OracleReport make_report(std::string name, double discrepancy, double threshold, std::string detail = {});

/// Upper bound on the mesh size accepted by dense_oracle_step.
inline constexpr Index dense_oracle_max_vertices = 200;

/// Reference next state, built without the production assembly: every weak-form term is
/// integrated entry by entry with the degree-6 rule into a dense 3V x 3V matrix, with
/// barycentric gradients from inverting each cell's vertex matrix, then solved by dense LU.
NodalField dense_oracle_step(const Mesh& mesh, const SchemeParams& params, double k, const NodalField& u_prev);

/// c_j = c_{j-1} / (1 + k k2 (1 + mu |c_{j-1}|^2)), j = 0..N (N + 1 entries).
std::vector<Vec3> constant_field_trajectory(const Vec3& c0, const SchemeParams& params, double k, int N);

/// One separable term amp * exp(-decay t) * prod_d cos(wave[d] pi x_d) of a solution component.
struct CosineMode {
  double amp = 1.0;
  double decay = 0.0;
  std::array<int, 3> wave{0, 0, 0};
};

/// Exact solution built from cosine modes (zero normal derivative on axis-aligned boundaries)
/// and the forcing that makes it solve the equation with the given coefficients.
class ManufacturedSolution {
 public:
  ManufacturedSolution(std::string name, SchemeParams params, std::array<std::vector<CosineMode>, 3> modes);

  const std::string& name() const { return name_; }
  const SchemeParams& params() const { return params_; }

  Vec3 value(const Vec3& x, double t) const;
  /// Row d is the gradient of component d.
  std::array<Vec3, 3> gradient(const Vec3& x, double t) const;
  Vec3 laplacian(const Vec3& x, double t) const;
  Vec3 time_derivative(const Vec3& x, double t) const;
  /// f = u_t - eps Lap u_t - k1 Lap u - gamma u x Lap u + k2 (1 + mu |u|^2) u.
  Vec3 forcing(const Vec3& x, double t) const;

 private:
  std::string name_;
  SchemeParams params_;
  std::array<std::vector<CosineMode>, 3> modes_;
};

/// u = (exp(-t) cos(pi x), 0, 0) with gamma = mu = epsilon = 0.
ManufacturedSolution linear_manufactured_solution();
/// u = (exp(-t) cos(pi x) cos(pi y), exp(-2t) cos(2 pi x), 0) with every coefficient active.
ManufacturedSolution full_manufactured_solution();

/// L2 and full H1 error of a P1 field against the exact solution at time t (degree-6 rule).
struct ExactError {
  double l2 = 0.0;
  double h1 = 0.0;
};
ExactError error_against(const Mesh& mesh, const NodalField& u, const ManufacturedSolution& ms, double t);

struct MmsConfig {
  std::vector<int> levels{8, 16, 32};  // unit-square subdivisions
  double T = 0.1;
  double steps_per_h2 = 1.0;  // N = ceil(steps_per_h2 * n^2), so k tracks h^2
  double rate_window = 0.2;
  SolverOptions solver;
};

struct MmsRun {
  std::string name;
  std::vector<int> levels;
  std::vector<ExactError> errors;  // at T
  double l2_rate = 0.0;            // mean of the last two log2 ratios
  double h1_rate = 0.0;
};

MmsRun run_manufactured(const ManufacturedSolution& ms, const MmsConfig& config);

/// Linear and full-coefficient cases; each yields an L2 (target 2) and an H1 (target 1) report.
std::vector<OracleReport> manufactured_suite(const MmsConfig& config = {});

/// Dense-oracle agreement, constant-field recurrence and cross-operator skew-symmetry checks
/// on small meshes with a fixed seed.
std::vector<OracleReport> oracle_suite(unsigned seed = 20240607);

}  // namespace llb
