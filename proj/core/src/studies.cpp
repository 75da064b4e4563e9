#include "llb/studies.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <spdlog/spdlog.h>
#include <stdexcept>

#include "llb/norms.hpp"
#include "llb/scheme.hpp"

namespace llb {

std::string to_string(StudyAxis axis) {
  switch (axis) {
    case StudyAxis::h: return "h";
    case StudyAxis::k: return "k";
    case StudyAxis::eps: return "eps";
  }
  return "?";
}

StudyAxis parse_study_axis(const std::string& s) {
  if (s == "h") return StudyAxis::h;
  if (s == "k") return StudyAxis::k;
  if (s == "eps") return StudyAxis::eps;
  throw std::invalid_argument("unknown study axis '" + s + "' (expected h, k or eps)");
}

namespace {

std::optional<double> ratio(double coarse, double fine) {
  if (!(coarse > 0.0) || !(fine > 0.0)) return std::nullopt;
  return std::log2(coarse / fine);
}

RateSequence rates_of(const std::vector<double>& e) {
  RateSequence r;
  for (std::size_t i = 0; i + 1 < e.size(); ++i) r.ratios.push_back(ratio(e[i], e[i + 1]));
  const std::size_t m = r.ratios.size();
  if (m >= 2 && r.ratios[m - 1] && r.ratios[m - 2]) r.summary = 0.5 * (*r.ratios[m - 1] + *r.ratios[m - 2]);
  return r;
}

// Running max over time of the difference norms, evaluated with the finer level's operators.
struct DifferenceTracker {
  double l2 = 0.0;
  double h1 = 0.0;
  double linf = 0.0;

  void update(const Discretization& fine, const NodalField& diff) {
    const NormSample s = sample_norms(fine.mesh(), fine.mass(), fine.stiffness(), diff, 0.0);
    l2 = std::max(l2, s.l2);
    h1 = std::max(h1, s.h1);
    linf = std::max(linf, s.linf);
  }
};

void warn(std::vector<std::string>& warnings, const Mesh& mesh, double k) {
  if (auto w = time_step_warning(mesh, k)) {
    spdlog::warn("{}", *w);
    warnings.push_back(*w);
  }
}

StudyResult finish(StudyAxis axis, const std::vector<double>& parameters, const std::vector<DifferenceTracker>& diffs,
                   std::vector<std::string> warnings) {
  StudyResult result;
  result.table.axis = axis;
  for (std::size_t i = 0; i < diffs.size(); ++i)
    result.table.levels.push_back({parameters[i], diffs[i].l2, diffs[i].h1, diffs[i].linf});
  result.rates = compute_rates(result.table);
  result.warnings = std::move(warnings);
  return result;
}

}  // namespace

RateSequence compute_rate(std::span<const double> errors) {
  if (errors.size() < 2) throw std::invalid_argument("compute_rate: need at least two errors");
  for (double e : errors)
    if (!(e > 0.0) || !std::isfinite(e))
      throw std::invalid_argument("compute_rate: errors must be positive and finite");
  return rates_of({errors.begin(), errors.end()});
}

RateReport compute_rates(const ErrorTable& table) {
  std::vector<double> l2, h1, linf;
  for (const auto& lv : table.levels) {
    l2.push_back(lv.l2);
    h1.push_back(lv.h1);
    linf.push_back(lv.linf);
  }
  return {rates_of(l2), rates_of(h1), rates_of(linf)};
}

NodalField prolong(const Prolongation& p, const NodalField& coarse) {
  if (coarse.num_vertices() != p.coarse_vertices) throw std::invalid_argument("prolong: field does not match coarse mesh");
  return NodalField(p.apply(coarse.flat()));
}

StudyResult h_study(const Mesh& base, int levels, const SchemeParams& params, const TimeGrid& grid,
                    const VectorFunction& u0, const SolverOptions& solver) {
  if (levels < 3) throw std::invalid_argument("h_study: need at least 3 levels");
  params.validate();
  grid.validate();
  const double k = grid.step();

  std::vector<std::shared_ptr<const Discretization>> disc;
  std::vector<Prolongation> maps;
  std::vector<double> h;
  std::vector<std::string> warnings;
  {
    auto mesh = std::make_shared<const Mesh>(base);
    for (int l = 0; l < levels; ++l) {
      h.push_back(mesh_size(*mesh));
      warn(warnings, *mesh, k);
      disc.push_back(std::make_shared<const Discretization>(mesh));
      if (l + 1 < levels) {
        auto [fine, map] = refine_uniform(*mesh);
        maps.push_back(std::move(map));
        mesh = std::make_shared<const Mesh>(std::move(fine));
      }
    }
  }

  std::vector<SimState> states;
  for (const auto& d : disc) states.push_back(init_state(d, u0, params, solver));
  std::vector<DifferenceTracker> diffs(static_cast<std::size_t>(levels - 1));
  auto compare = [&] {
    for (std::size_t l = 0; l + 1 < states.size(); ++l) {
      NodalField d = prolong(maps[l], states[l].u);
      d -= states[l + 1].u;
      diffs[l].update(*disc[l + 1], d);
    }
  };
  compare();
  for (int j = 1; j <= grid.N; ++j) {
    for (auto& s : states) s = step(s, params, k, solver);
    compare();
  }
  h.pop_back();
  return finish(StudyAxis::h, h, diffs, std::move(warnings));
}

StudyResult k_study(const Mesh& mesh, const SchemeParams& params, double T, std::span<const int> n_sequence,
                    const VectorFunction& u0, const SolverOptions& solver) {
  if (n_sequence.size() < 3) throw std::invalid_argument("k_study: need at least 3 step counts");
  params.validate();
  for (std::size_t i = 0; i < n_sequence.size(); ++i) {
    TimeGrid{T, n_sequence[i]}.validate();
    if (i > 0 && n_sequence[i] != 2 * n_sequence[i - 1])
      throw std::invalid_argument("k_study: step counts must double");
  }
  const int n_max = n_sequence.back();

  std::vector<std::string> warnings;
  warn(warnings, mesh, T / n_sequence.front());

  auto disc = std::make_shared<const Discretization>(std::make_shared<const Mesh>(mesh));
  std::vector<SimState> states;
  for (std::size_t i = 0; i < n_sequence.size(); ++i) states.push_back(init_state(disc, u0, params, solver));
  std::vector<DifferenceTracker> diffs(n_sequence.size() - 1);
  std::vector<double> ks;
  for (int n : n_sequence) ks.push_back(T / n);

  for (int j = 1; j <= n_max; ++j) {
    // Fine index j is a time node of run i when j is a multiple of n_max / N_i.
    for (std::size_t i = 0; i < states.size(); ++i)
      if (j % (n_max / n_sequence[i]) == 0) states[i] = step(states[i], params, ks[i], solver);
    for (std::size_t i = 0; i + 1 < states.size(); ++i) {
      if (j % (n_max / n_sequence[i]) != 0) continue;
      NodalField d = states[i].u;
      d -= states[i + 1].u;
      diffs[i].update(*disc, d);
    }
  }
  ks.pop_back();
  return finish(StudyAxis::k, ks, diffs, std::move(warnings));
}

StudyResult eps_study(const Mesh& mesh, const SchemeParams& params, const TimeGrid& grid, const VectorFunction& u0,
                      std::span<const double> eps_sequence, const SolverOptions& solver) {
  if (eps_sequence.size() < 3) throw std::invalid_argument("eps_study: need at least 3 epsilon values");
  for (std::size_t i = 0; i < eps_sequence.size(); ++i) {
    if (!(eps_sequence[i] > 0.0)) throw std::invalid_argument("eps_study: epsilon values must be positive");
    if (i > 0 && std::abs(eps_sequence[i - 1] - 2.0 * eps_sequence[i]) > 1e-12 * eps_sequence[i - 1])
      throw std::invalid_argument("eps_study: epsilon values must halve");
  }
  grid.validate();
  const double k = grid.step();

  std::vector<std::string> warnings;
  warn(warnings, mesh, k);

  auto disc = std::make_shared<const Discretization>(std::make_shared<const Mesh>(mesh));
  SchemeParams ref_params = params;
  ref_params.epsilon = 0.0;
  std::vector<SchemeParams> run_params;
  for (double e : eps_sequence) {
    SchemeParams p = params;
    p.epsilon = e;
    p.validate();
    run_params.push_back(p);
  }
  ref_params.validate();

  SimState ref = init_state(disc, u0, ref_params, solver);
  std::vector<SimState> states;
  for (const SchemeParams& p : run_params) states.push_back(init_state(disc, u0, p, solver));
  std::vector<DifferenceTracker> diffs(eps_sequence.size());
  for (int j = 1; j <= grid.N; ++j) {
    ref = step(ref, ref_params, k, solver);
    for (std::size_t i = 0; i < states.size(); ++i) {
      states[i] = step(states[i], run_params[i], k, solver);
      NodalField d = states[i].u;
      d -= ref.u;
      diffs[i].update(*disc, d);
    }
  }
  return finish(StudyAxis::eps, {eps_sequence.begin(), eps_sequence.end()}, diffs,
                std::move(warnings));
}

}  // namespace llb
