#pragma once

namespace llb {

/// Coefficients of the (regularised) LLB equation
///   u_t - eps Lap u_t = k1 Lap u + gamma u x Lap u - k2 (1 + mu |u|^2) u.
/// epsilon = 0 selects the unregularised scheme.
struct SchemeParams {
  double kappa1 = 1.0;   // exchange damping, 1/time
  double kappa2 = 1.0;   // longitudinal damping, 1/time
  double gamma = 0.0;    // gyromagnetic ratio, 1/time (any sign)
  double mu = 0.0;       // dimensionless, >= 0
  double epsilon = 0.0;  // regularisation, length^2, >= 0

  /// Throws std::invalid_argument naming the violated constraint.
  void validate() const;

  friend bool operator==(const SchemeParams&, const SchemeParams&) = default;
};

/// Uniform grid on [0, T] with N steps of size k = T / N.
struct TimeGrid {
  double T = 1.0;
  int N = 1;

  double step() const { return T / N; }
  double time(int n) const { return step() * n; }
  void validate() const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

}  // namespace llb
