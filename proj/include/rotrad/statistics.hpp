#pragma once

namespace rotrad::stats {

/// Temperatures of the body and its environment and the body's angular
/// velocity about z.
struct ThermalState {
  double T = 0.0;      // K, body
  double T0 = 0.0;     // K, environment
  double Omega = 0.0;  // rad/s

  bool zero_temperature() const { return T == 0.0 && T0 == 0.0; }
};

/// n_T(w) = 1 / (exp(hbar w / k_B T) - 1) for signed w.
/// At T = 0: 0 for w > 0, -1 for w < 0. Throws DomainError at w = 0
/// (pole for T > 0, undefined step for T = 0).
double bose_occupation(double omega, double T);

/// a_T(w) = 2 hbar (n_T(w) + 1/2); odd in w.
double source_weight(double omega, double T);

/// n_T(w - Omega m) - n_T0(w) for w > 0.
/// Both temperatures zero: -1 for w < Omega m, 0 otherwise (including the
/// window edge). With T > 0 at w == Omega m the value is +infinity; the
/// quadrature never samples that point.
double occupation_difference(double omega, int m, const ThermalState& state);

}  // namespace rotrad::stats
