#include <doctest.h>

#include <cmath>
#include <complex>

#include "rotrad/constants.hpp"
#include "rotrad/error.hpp"
#include "rotrad/interactions.hpp"

using namespace rotrad;
using namespace rotrad::interactions;
using constants::c;
using constants::hbar;
using constants::pi;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const materials::Drude gold{1.37e16, 4.05e13};

// Toy rotator Im alpha = A R^3 w', toy test object Im beta = B r^3 w.
struct Toy {
  double A = 3e-18, B = 2e-18, R = 1e-9, r = 2e-9, Omega = 3e14, d = 1e-6;
  Rotator rot() const { return sphere_rotator(materials::LinearLossToy{A}, R, Omega); }
  TestObject test() const { return {materials::LinearLossToy{B}, r}; }
  double a() const { return A * R * R * R; }
  double b() const { return B * r * r * r; }
};

quad::QuadratureConfig tight() {
  quad::QuadratureConfig q;
  q.rel_tol = 1e-12;
  return q;
}

}  // namespace

TEST_CASE("translation coefficients") {
  for (double x : {0.1, 1.0, 7.3}) {
    const double d = 1e-6, w = x * c / d;
    const auto U = translation_coefficients(w, d);
    const std::complex<double> h0 = -std::complex<double>(0.0, 1.0) * std::exp(std::complex<double>(0.0, x)) / x;
    CHECK(std::abs(U.U_EE - h0) < 1e-14 * std::abs(h0));
    CHECK(rel(std::abs(U.U_EE), c / (w * d)) < 1e-14);
    const auto ratio = U.U_ME / U.U_EE;
    CHECK(rel(ratio.real(), std::sqrt(2.0) * w * d / (4.0 * c)) < 1e-14);
    CHECK(std::abs(ratio.imag()) < 1e-14);
  }
  CHECK_THROWS_AS(translation_coefficients(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(translation_coefficients(1.0, -1.0), DomainError);
}

TEST_CASE("stress element") {
  for (double w : {1e12, 3e14}) {
    CHECK(rel(stress_element(w), -pi * c / (2.0 * std::sqrt(2.0) * w)) < 1e-15);
    CHECK(rel(stress_element(2.0 * w), stress_element(w) / 2.0) < 1e-15);
  }
  CHECK_THROWS_AS(stress_element(0.0), DomainError);
}

TEST_CASE("test-object S matrix") {
  const TestObject empty{materials::vacuum(), 5e-9};
  CHECK(test_S_11E(empty, 1e14) == std::complex<double>(1.0, 0.0));

  const TestObject lossy{gold, 5e-9};
  for (double w : {1e13, 1e14, 1e15}) {
    const auto t = test_T_11E(lossy, w);
    CHECK(1.0L - std::norm(1.0L + 2.0L * std::complex<long double>(t)) > 0.0L);
    CHECK(-4.0 * t.real() - 4.0 * std::norm(t) > 0.0);
    // S = 1 + i (4/3) k^3 beta
    const double k = w / c;
    const auto beta = materials::sphere_polarizability(gold, 5e-9, w);
    const auto S = 1.0 + std::complex<double>(0.0, 4.0 / 3.0) * k * k * k * beta;
    CHECK(std::abs(test_S_11E(lossy, w) - S) < 1e-15);
  }

  const TestObject lossless{materials::ConstantLoss{3.0, 0.0}, 5e-9};
  const auto t = test_T_11E(lossless, 1e15);
  CHECK(t.real() == 0.0);
  CHECK(std::abs(std::norm(1.0 + 2.0 * t) - 1.0) <= 4.0 * std::norm(t) + 1e-16);

  CHECK_THROWS_AS(test_S_11E(TestObject{gold, 1e-7}, 1e15), RegimeError);
}

TEST_CASE("toy torque matches 4 A B hbar Omega^7 / (189 pi d^2 c^4)") {
  const Toy toy;
  const double M = torque_on_test(toy.rot(), toy.test(), toy.d, tight());
  const double oracle = 4.0 * toy.a() * toy.b() * hbar * std::pow(toy.Omega, 7) /
                        (189.0 * pi * toy.d * toy.d * std::pow(c, 4));
  CHECK(rel(M, oracle) < 1e-9);
}

TEST_CASE("toy force matches A B hbar Omega^9 / (648 pi d c^6)") {
  const Toy toy;
  const double F = shear_force_on_test(toy.rot(), toy.test(), toy.d, tight());
  const double oracle =
      toy.a() * toy.b() * hbar * std::pow(toy.Omega, 9) / (648.0 * pi * toy.d * std::pow(c, 6));
  CHECK(rel(F, oracle) < 1e-9);
}

TEST_CASE("exact separation scaling") {
  const auto rot = sphere_rotator(gold, 5e-9, 1e15);
  const TestObject test{gold, 5e-9};
  const auto q = tight();
  const auto base = interaction(rot, test, 1e-6, q);
  for (double d : {2e-6, 5e-6, 1e-4}) {
    const auto r = interaction(rot, test, d, q);
    CHECK(rel(r.torque_M * d * d, base.torque_M * 1e-12) < 1e-12);
    CHECK(rel(r.force_Fy * d, base.force_Fy * 1e-6) < 1e-12);
  }
}

TEST_CASE("positivity for passive lossy bodies") {
  const auto rot = sphere_rotator(gold, 5e-9, 1e15);
  for (const TestObject& test : {TestObject{gold, 5e-9}, TestObject{materials::ConstantLoss{4.0, 0.5}, 3e-9}}) {
    const auto r = interaction(rot, test, 1e-6, {});
    CHECK(r.torque_M > 0.0);
    CHECK(r.force_Fy > 0.0);
    CHECK(r.torque_error >= 0.0);
  }
}

TEST_CASE("lossless test object feels no torque") {
  const auto rot = sphere_rotator(gold, 5e-9, 1e15);
  const TestObject lossless{materials::ConstantLoss{3.0, 0.0}, 5e-9};
  CHECK(torque_on_test(rot, lossless, 1e-6, {}) == 0.0);
}

TEST_CASE("non-rotating source exerts nothing") {
  const auto rot = sphere_rotator(gold, 5e-9, 0.0);
  const TestObject test{gold, 5e-9};
  const auto r = interaction(rot, test, 1e-6, {});
  CHECK(r.force_Fy == 0.0);
  CHECK(r.torque_M == 0.0);
}

TEST_CASE("torque integrand vanishes at small frequency") {
  const Toy toy;
  const auto rot = toy.rot();
  const auto test = toy.test();
  double prev = INFINITY;
  for (double w : {1e-2 * toy.Omega, 1e-3 * toy.Omega, 1e-4 * toy.Omega, 1e-5 * toy.Omega}) {
    const double g = 4.0 * rot.T_11E(w).real();
    const double l = -4.0 * test_T_11E(test, w).real();
    const double f = g * l / (w * w);
    CHECK(std::isfinite(f));
    CHECK(f < prev);
    prev = f;
  }
  CHECK(prev < 1e-6 * (4.0 * rot.T_11E(0.5 * toy.Omega).real()) *
                   (-4.0 * test_T_11E(test, 0.5 * toy.Omega).real()) / std::pow(0.5 * toy.Omega, 2));
}

TEST_CASE("pre-simplified force chain differs from the final integrand by pi") {
  const double d = 1e-6;
  for (double w : {1e13, 1e14, 7e14}) {
    const std::complex<double> S(1.0000001, 2e-7), Sp(0.9999995, 3e-7);
    const double chain = shear_force_integrand_unsimplified(w, d, S, Sp);
    const double fin = shear_force_integrand(w, d, S, Sp);
    CHECK(rel(chain / fin, pi) < 1e-12);
  }
}

TEST_CASE("S_10M option enters the force") {
  const Toy toy;
  ForceOptions opts;
  opts.S_10M = std::polar(1.0, 1e-3);
  const double F1 = shear_force_on_test(toy.rot(), toy.test(), toy.d, tight());
  const double F2 = shear_force_on_test(toy.rot(), toy.test(), toy.d, tight(), opts);
  CHECK(F1 != F2);
  // Final integrand with S_10M = 1 reduces to gain (1 - Re S').
  const std::complex<double> S(1.0 + 1e-6, 0.0), Sp(1.0 - 2e-6, 1e-6);
  CHECK(rel(shear_force_integrand(1e14, 1e-6, S, Sp),
            hbar / (32.0 * pi * 1e-6) * (std::norm(S) - 1.0) * 2e-6) < 1e-9);
}

TEST_CASE("separation guard") {
  const auto rot = sphere_rotator(gold, 5e-9, 1e15);
  const TestObject test{gold, 5e-9};
  CHECK_THROWS_AS(torque_on_test(rot, test, 4e-8, {}), RegimeError);
  CHECK_NOTHROW(torque_on_test(rot, test, 4e-8, {}, RegimeOptions{0.3, true}));
  CHECK_THROWS_AS(torque_on_test(rot, test, 0.0, {}), DomainError);
  CHECK_THROWS_AS(shear_force_on_test(rot, test, 4e-8, {}), RegimeError);
}
