#pragma once

#include <vector>

#include "llb/norms.hpp"
#include "llb/params.hpp"
#include "llb/scheme.hpp"

namespace llb {

/// Both sides of the per-step energy balance obtained by testing the scheme with u^j:
///   1/2|u^j|^2 + 1/2|u^j-u^{j-1}|^2 + eps/2 |grad u^j|^2 + eps/2 |grad(u^j-u^{j-1})|^2
///   + k k1 |grad u^j|^2 + k k2 |u^j|^2 + k k2 mu | |u^{j-1}| |u^j| |^2
///   = 1/2|u^{j-1}|^2 + eps/2 |grad u^{j-1}|^2
/// All norms are L2 over the domain, evaluated with the consistent matrices and the
/// degree-4 rule for the quartic term.
struct EnergyBalance {
  double lhs = 0.0;
  double rhs = 0.0;

  double residual() const { return lhs - rhs; }
  /// |lhs - rhs| / max(|lhs|, |rhs|); zero when both sides vanish.
  double relative() const;
};

EnergyBalance energy_balance(const SimState& prev, const SimState& cur, const SchemeParams& params, double k);

/// Signed lhs - rhs of the balance above.
double energy_residual(const SimState& prev, const SimState& cur, const SchemeParams& params, double k);

/// lambda = 2 k2 / (1 + 2 k2 k).
double decay_rate(const SchemeParams& params, double k);

struct DecayMargin {
  int step = 0;
  double t = 0.0;
  double energy = 0.0;    // |u^n|^2 + eps |grad u^n|^2
  double envelope = 0.0;  // energy(0) * exp(-lambda t_n)
  double margin = 0.0;    // envelope - energy
};

/// Per-step margins of |u^n|^2 + eps |grad u^n|^2 against the exponential envelope.
std::vector<DecayMargin> decay_report(const Trajectory& traj, const SchemeParams& params, double k);

struct LinfSample {
  double t = 0.0;
  double linf = 0.0;
  double scaled = 0.0;  // linf * exp(k2 t); bounded by |u^0|_inf if the continuous decay carries over
};

/// Monitored only; the continuous L^p decay has no discrete counterpart proven for L-infinity.
std::vector<LinfSample> linf_decay_monitor(const Trajectory& traj, const SchemeParams& params);

/// Observer checking the energy balance at every step and the telescoped stability bound
///   a_n + 2 k k1 sum_j |grad u^j|^2 + sum_j |u^j - u^{j-1}|^2 <= a_0,
/// where a_n = |u^n|^2 + eps |grad u^n|^2.
class EnergyMonitor : public StepObserver {
 public:
  EnergyMonitor(SchemeParams params, double k) : params_(params), k_(k) {}

  void on_start(const SimState& initial, double t) override;
  void on_step(const SimState& prev, const SimState& cur, double t) override;

  const std::vector<double>& relative_residuals() const { return relative_; }
  double max_relative_residual() const;
  /// a_0 minus the left side of the telescoped bound, after each step.
  const std::vector<double>& stability_margins() const { return stability_; }

 private:
  SchemeParams params_;
  double k_;
  double a0_ = 0.0;
  double dissipated_ = 0.0;
  std::vector<double> relative_;
  std::vector<double> stability_;
};

}  // namespace llb
