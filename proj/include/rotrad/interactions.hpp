#pragma once

#include <complex>
#include <functional>

#include "rotrad/materials.hpp"
#include "rotrad/quadrature.hpp"
#include "rotrad/scattering.hpp"

// Torque and tangential force exerted by the rotator's radiation on a small
// static test object, from a single reflection off the test object.
//
// Only the radiative part of the field correlations is used. The remaining
// (zero-point) part produces the ordinary Casimir attraction along the line
// of centers, which exerts neither torque nor tangential force on a sphere,
// so it is not computed here.
namespace rotrad::interactions {

using cplx = std::complex<double>;
using materials::DielectricModel;
using quad::QuadratureConfig;
using scattering::RegimeOptions;

/// Rotating source seen through its lowest (l = m = 1, E) channel.
struct Rotator {
  // T of the channel vs lab omega; S = 1 + 2T. Kept as T because |S|^2 - 1
  // is far below rounding of 1 for small bodies.
  std::function<cplx(double)> T_11E;
  double radius = 0.0;                 // m
  double Omega = 0.0;                  // rad/s
};

Rotator sphere_rotator(DielectricModel model, double radius, double Omega,
                       RegimeOptions regime = {});

/// Small static sphere of polarizability beta(w) = r^3 (eps-1)/(eps+2)
/// (or the linear-loss toy), located at separation d on the x axis.
struct TestObject {
  DielectricModel model;
  double radius = 0.0;  // m
};

struct TranslationCoefficients {
  cplx U_EE;  // U_{11E,11E} = h_0(wd/c)
  cplx U_ME;  // U_{10M,11E} = (sqrt2 wd / 4c) h_0(wd/c)
};

TranslationCoefficients translation_coefficients(double omega, double d);

/// S_11E of the static test object: 1 + i (4/3)(w/c)^3 beta(w).
cplx test_S_11E(const TestObject& test, double omega, const RegimeOptions& regime = {});

/// T_11E of the static test object, (S - 1)/2.
cplx test_T_11E(const TestObject& test, double omega, const RegimeOptions& regime = {});

/// Stress-tensor element between the 10M and 11E partial waves:
/// -pi c / (2 sqrt2 w).
double stress_element(double omega);

struct ForceOptions {
  // S of the test object's (1,0,M) channel; 1 for non-magnetic objects.
  cplx S_10M = 1.0;
  RegimeOptions regime;
};

struct InteractionResult {
  double torque_M = 0.0;  // N m about z
  double force_Fy = 0.0;  // N along y
  double torque_error = 0.0;
  double force_error = 0.0;
};

/// M = (hbar c^2 / 8 pi d^2) int_0^Omega dw w^-2 (|S_11E|^2 - 1)(1 - |S'_11E|^2)
/// with both factors taken to first order in T.
double torque_on_test(const Rotator& rotator, const TestObject& test, double d,
                      const QuadratureConfig& cfg, const RegimeOptions& regime = {},
                      double* error = nullptr);

/// F_y = (hbar / 32 pi d) int_0^Omega dw (|S_11E|^2 - 1)(1 - Re[conj(S'_10M) S'_11E])
double shear_force_on_test(const Rotator& rotator, const TestObject& test, double d,
                           const QuadratureConfig& cfg, const ForceOptions& opts = {},
                           double* error = nullptr);

InteractionResult interaction(const Rotator& rotator, const TestObject& test, double d,
                              const QuadratureConfig& cfg, const ForceOptions& opts = {});

/// Integrand of the force before the partial-wave factors are collapsed:
///   (hbar/2)(1/2pi)(w/c)^2 (|S_11E|^2 - 1) U_ME conj(U_EE) T_{10M,11E}
///     Re(-1 + conj(S'_10M) S'_11E)
double shear_force_integrand_unsimplified(double omega, double d, cplx S_rotator,
                                          cplx S_test_11E, cplx S_test_10M = 1.0);

/// The collapsed integrand, including the 1/(32 pi d) prefactor.
double shear_force_integrand(double omega, double d, cplx S_rotator, cplx S_test_11E,
                             cplx S_test_10M = 1.0);

}  // namespace rotrad::interactions
