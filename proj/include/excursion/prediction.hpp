#pragma once

namespace excursion {

/// Leading-order term prefactor * u^u_power * (log u)^log_power, optionally
/// multiplied by the normal survival function Psi(u).
struct AsymptoticPrediction {
  double prefactor = 0.0;
  double u_power = 0.0;
  int log_power = 0;
  bool uses_psi = true;

  /// Finite and positive for u > 1.
  double evaluate(double u) const;
};

}  // namespace excursion
