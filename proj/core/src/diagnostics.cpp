#include "llb/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace llb {

namespace {

double sq_l2(const Discretization& d, const NodalField& u) {
  const double n = norm_l2(d.mass(), u);
  return n * n;
}

double sq_grad(const Discretization& d, const NodalField& u) {
  const double n = seminorm_h1(d.stiffness(), u);
  return n * n;
}

}  // namespace

double EnergyBalance::relative() const {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
}

EnergyBalance energy_balance(const SimState& prev, const SimState& cur, const SchemeParams& params, double k) {
  if (prev.disc != cur.disc) throw std::invalid_argument("energy_balance: states live on different discretisations");
  const Discretization& d = *cur.disc;
  const NodalField diff = cur.u - prev.u;
  const double eps = params.epsilon;
  EnergyBalance e;
  e.lhs = 0.5 * sq_l2(d, cur.u) + 0.5 * sq_l2(d, diff) + 0.5 * eps * sq_grad(d, cur.u) +
          0.5 * eps * sq_grad(d, diff) + k * params.kappa1 * sq_grad(d, cur.u) +
          k * params.kappa2 * sq_l2(d, cur.u) +
          k * params.kappa2 * params.mu * product_l2_squared(d.mesh(), prev.u, cur.u);
  e.rhs = 0.5 * sq_l2(d, prev.u) + 0.5 * eps * sq_grad(d, prev.u);
  return e;
}

double energy_residual(const SimState& prev, const SimState& cur, const SchemeParams& params, double k) {
  return energy_balance(prev, cur, params, k).residual();
}

double decay_rate(const SchemeParams& params, double k) {
  return 2.0 * params.kappa2 / (1.0 + 2.0 * params.kappa2 * k);
}

std::vector<DecayMargin> decay_report(const Trajectory& traj, const SchemeParams& params, double k) {
  params.validate();
  std::vector<DecayMargin> out;
  if (traj.norms.empty()) return out;
  const double lambda = decay_rate(params, k);
  auto energy = [&](const NormSample& s) { return s.l2 * s.l2 + params.epsilon * s.h1_semi * s.h1_semi; };
  const double a0 = energy(traj.norms.front());
  out.reserve(traj.norms.size());
  for (std::size_t n = 0; n < traj.norms.size(); ++n) {
    DecayMargin m;
    m.step = static_cast<int>(n);
    m.t = traj.norms[n].t;
    m.energy = energy(traj.norms[n]);
    m.envelope = a0 * std::exp(-lambda * m.t);
    m.margin = m.envelope - m.energy;
    out.push_back(m);
  }
  return out;
}

std::vector<LinfSample> linf_decay_monitor(const Trajectory& traj, const SchemeParams& params) {
  std::vector<LinfSample> out;
  out.reserve(traj.norms.size());
  for (const auto& s : traj.norms) out.push_back({s.t, s.linf, s.linf * std::exp(params.kappa2 * s.t)});
  return out;
}

void EnergyMonitor::on_start(const SimState& initial, double) {
  const Discretization& d = *initial.disc;
  a0_ = sq_l2(d, initial.u) + params_.epsilon * sq_grad(d, initial.u);
  dissipated_ = 0.0;
  relative_.clear();
  stability_.clear();
}

void EnergyMonitor::on_step(const SimState& prev, const SimState& cur, double) {
  relative_.push_back(energy_balance(prev, cur, params_, k_).relative());
  const Discretization& d = *cur.disc;
  dissipated_ += 2.0 * k_ * params_.kappa1 * sq_grad(d, cur.u) + sq_l2(d, cur.u - prev.u);
  const double an = sq_l2(d, cur.u) + params_.epsilon * sq_grad(d, cur.u);
  stability_.push_back(a0_ - (an + dissipated_));
}

double EnergyMonitor::max_relative_residual() const {
  return relative_.empty() ? 0.0 : *std::max_element(relative_.begin(), relative_.end());
}

}  // namespace llb
