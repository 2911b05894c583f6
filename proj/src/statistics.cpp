#include "rotrad/statistics.hpp"

#include <cmath>
#include <limits>

#include "rotrad/constants.hpp"
#include "rotrad/error.hpp"

namespace rotrad::stats {

namespace {

constexpr double kMaxExponent = 700.0;

// n_T(w) with the T = 0 step taken as 0 at w = 0.
double occupation_or_step(double omega, double T) {
  if (T == 0.0) return omega < 0.0 ? -1.0 : 0.0;
  if (omega == 0.0) return std::numeric_limits<double>::infinity();
  return bose_occupation(omega, T);
}

}  // namespace

double bose_occupation(double omega, double T) {
  if (!(T >= 0.0)) throw DomainError("temperature must be >= 0");
  if (omega == 0.0) throw DomainError("Bose occupation has a pole at omega = 0");
  if (T == 0.0) return omega > 0.0 ? 0.0 : -1.0;
  const double x = constants::hbar * omega / (constants::k_B * T);
  if (x > kMaxExponent) return 0.0;
  if (x < -kMaxExponent) return -1.0;
  return 1.0 / std::expm1(x);
}

double source_weight(double omega, double T) {
  return 2.0 * constants::hbar * (bose_occupation(omega, T) + 0.5);
}

double occupation_difference(double omega, int m, const ThermalState& state) {
  if (!(omega > 0.0)) throw DomainError("occupation_difference: omega must be > 0");
  if (!(state.T >= 0.0) || !(state.T0 >= 0.0))
    throw DomainError("temperatures must be >= 0");
  const double shifted = omega - state.Omega * m;
  if (state.zero_temperature()) return shifted < 0.0 ? -1.0 : 0.0;
  return occupation_or_step(shifted, state.T) - occupation_or_step(omega, state.T0);
}

}  // namespace rotrad::stats
