#include "rotrad/interactions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rotrad/constants.hpp"
#include "rotrad/error.hpp"
#include "rotrad/special_waves.hpp"

namespace rotrad::interactions {

using constants::c;
using constants::hbar;
using constants::pi;

namespace {

constexpr double kSeparationFactor = 10.0;

// |S|^2 - 1 to first order in T; the |T|^2 remainder is beyond the
// accuracy of the leading-order T and would leave a spurious torque on a
// lossless test object.
double gain_from_T(cplx T) { return 4.0 * T.real(); }

void check_geometry(const Rotator& rot, const TestObject& test, double d,
                    const RegimeOptions& regime) {
  if (!(d > 0.0)) throw DomainError("separation d must be > 0");
  if (!(rot.Omega >= 0.0)) throw DomainError("angular velocity must be >= 0");
  if (regime.override_guard) return;
  const double largest = std::max(rot.radius, test.radius);
  if (!(d > kSeparationFactor * largest)) {
    std::ostringstream os;
    os << "regime guard violated: separation d = " << d << " m is not > "
       << kSeparationFactor << " x largest radius (" << largest << " m)";
    throw RegimeError(os.str());
  }
}

}  // namespace

Rotator sphere_rotator(DielectricModel model, double radius, double Omega,
                       RegimeOptions regime) {
  Rotator r;
  r.radius = radius;
  r.Omega = Omega;
  r.T_11E = [model = std::move(model), radius, Omega, regime](double w) {
    return scattering::sphere_T_11E(model, radius, Omega, w, regime);
  };
  return r;
}

TranslationCoefficients translation_coefficients(double omega, double d) {
  if (!(omega > 0.0) || !(d > 0.0))
    throw DomainError("translation coefficients need omega > 0 and d > 0");
  const double x = omega * d / c;
  const cplx h0 = waves::spherical_hankel1(0, x);
  return {h0, std::sqrt(2.0) * x / 4.0 * h0};
}

cplx test_T_11E(const TestObject& test, double omega, const RegimeOptions& regime) {
  if (!(omega > 0.0)) throw DomainError("test object S-matrix requires omega > 0");
  return scattering::sphere_T_general(test.model, test.radius, 0.0, omega, 1, 1, regime);
}

cplx test_S_11E(const TestObject& test, double omega, const RegimeOptions& regime) {
  return 1.0 + 2.0 * test_T_11E(test, omega, regime);
}

double stress_element(double omega) {
  if (!(omega > 0.0)) throw DomainError("stress element requires omega > 0");
  return -pi * c / (2.0 * std::sqrt(2.0) * omega);
}

double torque_on_test(const Rotator& rotator, const TestObject& test, double d,
                      const QuadratureConfig& cfg, const RegimeOptions& regime,
                      double* error) {
  check_geometry(rotator, test, d, regime);
  auto f = [&](double w) {
    const double gain = gain_from_T(rotator.T_11E(w));
    const double loss = -gain_from_T(test_T_11E(test, w, regime));
    return gain * loss / (w * w);
  };
  // The integral carries no d; the 1/d^2 law is exact.
  const auto r = quad::integrate(f, 0.0, rotator.Omega, cfg);
  const double pref = hbar * c * c / (8.0 * pi * d * d);
  if (error) *error = pref * r.error;
  return pref * r.value;
}

double shear_force_integrand([[maybe_unused]] double omega, double d, cplx S_rotator, cplx S_test_11E,
                             cplx S_test_10M) {
  const double gain = std::norm(S_rotator) - 1.0;
  return hbar / (32.0 * pi * d) * gain * (1.0 - std::real(std::conj(S_test_10M) * S_test_11E));
}

double shear_force_integrand_unsimplified(double omega, double d, cplx S_rotator,
                                          cplx S_test_11E, cplx S_test_10M) {
  const auto U = translation_coefficients(omega, d);
  const double k = omega / c;
  const double gain = std::norm(S_rotator) - 1.0;
  const double overlap = std::real(U.U_ME * std::conj(U.U_EE));
  return hbar / 2.0 / (2.0 * pi) * k * k * gain * overlap * stress_element(omega) *
         std::real(-1.0 + std::conj(S_test_10M) * S_test_11E);
}

double shear_force_on_test(const Rotator& rotator, const TestObject& test, double d,
                           const QuadratureConfig& cfg, const ForceOptions& opts,
                           double* error) {
  check_geometry(rotator, test, d, opts.regime);
  auto f = [&](double w) {
    const double gain = gain_from_T(rotator.T_11E(w));
    const cplx t = test_T_11E(test, w, opts.regime);
    // 1 - Re[conj(S10M)(1 + 2t)], split so that S10M = 1 leaves -2 Re t exactly.
    const cplx s10 = std::conj(opts.S_10M);
    return gain * ((1.0 - s10.real()) - 2.0 * std::real(s10 * t));
  };
  // The integral carries no d; the 1/d law is exact.
  const auto r = quad::integrate(f, 0.0, rotator.Omega, cfg);
  const double pref = hbar / (32.0 * pi * d);
  if (error) *error = pref * r.error;
  return pref * r.value;
}

InteractionResult interaction(const Rotator& rotator, const TestObject& test, double d,
                              const QuadratureConfig& cfg, const ForceOptions& opts) {
  InteractionResult out;
  out.torque_M = torque_on_test(rotator, test, d, cfg, opts.regime, &out.torque_error);
  out.force_Fy = shear_force_on_test(rotator, test, d, cfg, opts, &out.force_error);
  return out;
}

}  // namespace rotrad::interactions
