#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "llb/field.hpp"
#include "llb/mesh.hpp"
#include "llb/params.hpp"
#include "llb/sparse.hpp"

namespace llb {

enum class StudyAxis { h, k, eps };

std::string to_string(StudyAxis axis);
StudyAxis parse_study_axis(const std::string& s);

/// Max-over-time norms of the difference between the run at `parameter` and the next level.
struct ErrorLevel {
  double parameter = 0.0;
  double l2 = 0.0;
  double h1 = 0.0;
  double linf = 0.0;
};

struct ErrorTable {
  StudyAxis axis = StudyAxis::h;
  std::vector<ErrorLevel> levels;  // decreasing parameter
};

/// log2(e_i / e_{i+1}) for consecutive levels; a ratio is empty when either error is zero.
/// The summary is the median (here: mean) of the last two ratios, present only if both are.
struct RateSequence {
  std::vector<std::optional<double>> ratios;
  std::optional<double> summary;
};

struct RateReport {
  RateSequence l2;
  RateSequence h1;
  RateSequence linf;
};

/// Ratios of a strictly positive error sequence. Throws std::invalid_argument on an entry <= 0
/// (or non-finite) and on fewer than two entries.
RateSequence compute_rate(std::span<const double> errors);

/// Rates of every column of a table, tolerating zero errors.
RateReport compute_rates(const ErrorTable& table);

struct StudyResult {
  ErrorTable table;
  RateReport rates;
  std::vector<std::string> warnings;
};

/// Runs the scheme on `levels` nested meshes (base, then uniform refinements) with one TimeGrid,
/// prolongs each solution to the next-finer mesh and records the max over time nodes of the
/// difference there. levels >= 3.
StudyResult h_study(const Mesh& base, int levels, const SchemeParams& params, const TimeGrid& grid,
                    const VectorFunction& u0, const SolverOptions& solver = {});

/// Runs the scheme with each N on one mesh (N doubling) and compares consecutive runs at the
/// time nodes of the coarser one.
StudyResult k_study(const Mesh& mesh, const SchemeParams& params, double T, std::span<const int> n_sequence,
                    const VectorFunction& u0, const SolverOptions& solver = {});

/// Compares runs with each epsilon (halving) against the epsilon = 0 run on one mesh and grid.
StudyResult eps_study(const Mesh& mesh, const SchemeParams& params, const TimeGrid& grid, const VectorFunction& u0,
                      std::span<const double> eps_sequence, const SolverOptions& solver = {});

/// Coarse nodal field represented on the finer mesh of `p`.
NodalField prolong(const Prolongation& p, const NodalField& coarse);

}  // namespace llb
