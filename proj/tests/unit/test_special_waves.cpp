#include <doctest.h>

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "rotrad/constants.hpp"
#include "rotrad/error.hpp"
#include "rotrad/special_waves.hpp"

using namespace rotrad;
using namespace rotrad::waves;
using rotrad::constants::c;

namespace {

// j_l(x) = x^l sum_k (-x^2/2)^k / (k! (2l+2k+1)!!), summed in long double.
double series_j(int l, double x) {
  long double dfact = 1.0L;
  for (int n = 1; n <= 2 * l + 1; n += 2) dfact *= n;
  long double term = std::pow(static_cast<long double>(x), l) / dfact;
  long double sum = term;
  for (int k = 1; k < 40; ++k) {
    term *= -(static_cast<long double>(x) * x / 2.0L) / (k * (2.0L * l + 2.0L * k + 1.0L));
    sum += term;
  }
  return static_cast<double>(sum);
}

// Upward recurrence from the trigonometric l = 0, 1 forms, in long double.
// Stable for y_l everywhere and for j_l when x > l.
std::pair<double, double> recurrence_jy(int l, double x) {
  const long double X = x, s = std::sin(X), c = std::cos(X);
  long double j0 = s / X, j1 = s / (X * X) - c / X;
  long double y0 = -c / X, y1 = -c / (X * X) - s / X;
  if (l == 0) return {double(j0), double(y0)};
  for (int n = 1; n < l; ++n) {
    const long double j2 = (2.0L * n + 1.0L) / X * j1 - j0;
    const long double y2 = (2.0L * n + 1.0L) / X * y1 - y0;
    j0 = j1;
    j1 = j2;
    y0 = y1;
    y1 = y2;
  }
  return {double(j1), double(y1)};
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

std::vector<WaveIndex> all_waves() {
  std::vector<WaveIndex> out;
  for (int l = 1; l <= kMaxWaveOrder; ++l)
    for (int m = -l; m <= l; ++m)
      for (auto p : {Polarization::M, Polarization::E}) out.push_back({l, m, p});
  return out;
}

double norm3(const CVec3& v) {
  return std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
}

CVec3 fd_curl(const WaveIndex& idx, double omega, const Vec3& p, double h) {
  auto E = [&](int axis, double s) {
    Vec3 q = p;
    q[axis] += s;
    return outgoing_wave(idx, omega, q).E;
  };
  auto d = [&](int comp, int axis) { return (E(axis, h)[comp] - E(axis, -h)[comp]) / (2.0 * h); };
  return {d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1)};
}

}  // namespace

TEST_CASE("j_0 is sin(x)/x and j_l vanishes at the origin for l >= 1") {
  for (double x : {0.01, 0.5, 1.0, 3.7, 12.0, 40.0})
    CHECK(rel(spherical_bessel_j(0, x), std::sin(x) / x) < 1e-14);
  CHECK(spherical_bessel_j(0, 0.0) == 1.0);
  for (int l = 1; l <= kMaxBesselOrder; ++l) CHECK(spherical_bessel_j(l, 0.0) == 0.0);
}

TEST_CASE("j_2(1.5) matches the ascending series") {
  CHECK(rel(spherical_bessel_j(2, 1.5), series_j(2, 1.5)) < 1e-12);
}

TEST_CASE("j_l agrees with the ascending series at small x and the recurrence at large x") {
  for (int l = 0; l <= kMaxBesselOrder; ++l) {
    for (double x : {0.05, 0.3, 1.0, 2.5, 4.0, 6.0})
      CHECK(rel(spherical_bessel_j(l, x), series_j(l, x)) < 1e-11);
    for (double x : {10.0, 17.3, 33.0, 49.0})
      CHECK(std::abs(spherical_bessel_j(l, x) - recurrence_jy(l, x).first) < 1e-13);
  }
  CHECK(rel(spherical_bessel_j(3, -2.0), -series_j(3, 2.0)) < 1e-12);
  CHECK(rel(spherical_bessel_j(2, -2.0), series_j(2, 2.0)) < 1e-12);
}

TEST_CASE("j_l and y_l agree with the standard library") {
  for (int l = 0; l <= kMaxBesselOrder; ++l)
    for (double x : {0.1, 0.7, 2.0, 9.0, 31.0}) {
      CHECK(std::abs(spherical_bessel_j(l, x) - std::sph_bessel(l, x)) < 1e-13);
      CHECK(rel(spherical_bessel_y(l, x), std::sph_neumann(l, x)) < 1e-11);
    }
}

TEST_CASE("y_l agrees with the upward recurrence") {
  for (int l = 0; l <= kMaxBesselOrder; ++l)
    for (double x : {0.1, 0.7, 2.0, 9.0, 31.0})
      CHECK(rel(spherical_bessel_y(l, x), recurrence_jy(l, x).second) < 1e-11);
}

TEST_CASE("h_0 and h_1 closed forms") {
  const cplx i(0.0, 1.0);
  for (double x : {0.2, 1.0, 2.0, 7.5}) {
    const cplx e = std::exp(i * x);
    CHECK(rel(spherical_hankel1(0, x), -i * e / x) < 1e-14);
    CHECK(rel(spherical_hankel1(1, x), -(1.0 + i / x) * e / x) < 1e-14);
  }
}

TEST_CASE("h_2(2.0) matches upward recurrence from the l = 0, 1 closed forms") {
  const cplx i(0.0, 1.0);
  const double x = 2.0;
  const cplx e = std::exp(i * x);
  const cplx h0 = -i * e / x;
  const cplx h1 = -(1.0 + i / x) * e / x;
  const cplx h2 = 3.0 / x * h1 - h0;
  CHECK(rel(spherical_hankel1(2, x), h2) < 1e-12);
}

TEST_CASE("Wronskian j_l y_l' - j_l' y_l = 1/x^2") {
  auto dj = [](int l, double x) {
    return l == 0 ? -spherical_bessel_j(1, x)
                  : spherical_bessel_j(l - 1, x) - (l + 1) / x * spherical_bessel_j(l, x);
  };
  auto dy = [](int l, double x) {
    return l == 0 ? -spherical_bessel_y(1, x)
                  : spherical_bessel_y(l - 1, x) - (l + 1) / x * spherical_bessel_y(l, x);
  };
  double worst = 0.0;
  for (int l = 0; l <= kMaxBesselOrder; ++l)
    for (int i = 0; i <= 60; ++i) {
      const double x = 0.1 * std::pow(500.0, i / 60.0);  // 0.1 .. 50
      const double w = spherical_bessel_j(l, x) * dy(l, x) - dj(l, x) * spherical_bessel_y(l, x);
      worst = std::max(worst, rel(w, 1.0 / (x * x)));
    }
  CHECK(worst < 1e-10);
}

TEST_CASE("Bessel domain errors") {
  CHECK_THROWS_AS(spherical_bessel_j(kMaxBesselOrder + 1, 1.0), DomainError);
  CHECK_THROWS_AS(spherical_bessel_j(-1, 1.0), DomainError);
  CHECK_THROWS_AS(spherical_bessel_y(1, 0.0), DomainError);
  CHECK_THROWS_AS(spherical_hankel1(0, 0.0), DomainError);
  CHECK_THROWS_AS(spherical_hankel1(1, -2.0), DomainError);
}

TEST_CASE("curl E matches a central finite-difference curl") {
  const double omega = 3.0 * c;  // k = 3 / m
  const std::vector<Vec3> points{{0.3, -0.4, 0.5}, {1.1, 0.2, -0.7}, {-0.2, 0.9, 0.1}, {0.05, 0.04, 1.3}};
  for (const auto& idx : all_waves()) {
    for (const auto& p : points) {
      const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
      const auto s = outgoing_wave(idx, omega, p);
      const auto fd = fd_curl(idx, omega, p, 1e-6 * r);
      CVec3 diff{s.curlE[0] - fd[0], s.curlE[1] - fd[1], s.curlE[2] - fd[2]};
      INFO("l=" << idx.l << " m=" << idx.m << " P=" << (idx.P == Polarization::M ? "M" : "E"));
      CHECK(norm3(diff) / norm3(s.curlE) < 1e-6);
    }
  }
}

TEST_CASE("E waves carry the curl of M waves and vice versa") {
  // curl E_M = k E_E up to the normalizations: E_E = -i/k curl E_M.
  const double omega = 2.0 * c;
  const double k = 2.0;
  const Vec3 p{0.4, -0.3, 0.8};
  for (int l = 1; l <= 2; ++l)
    for (int m = -l; m <= l; ++m) {
      const auto M = outgoing_wave({l, m, Polarization::M}, omega, p);
      const auto E = outgoing_wave({l, m, Polarization::E}, omega, p);
      for (int j = 0; j < 3; ++j)
        CHECK(std::abs(E.E[j] - cplx(0.0, -1.0 / k) * M.curlE[j]) <= 1e-13 * norm3(E.E));
    }
}

TEST_CASE("(1,0,M) is azimuthal") {
  const double omega = 1.5 * c;
  for (const Vec3& p : {Vec3{0.3, 0.1, 0.9}, Vec3{-1.0, 0.5, -0.2}, Vec3{0.0, 0.7, 0.7}}) {
    const auto s = outgoing_wave({1, 0, Polarization::M}, omega, p);
    const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    const cplx radial = (s.E[0] * p[0] + s.E[1] * p[1] + s.E[2] * p[2]) / r;
    CHECK(std::abs(s.E[2]) <= 1e-15 * norm3(s.E));
    CHECK(std::abs(radial) <= 1e-15 * norm3(s.E));
  }
}

TEST_CASE("rotation about z multiplies co-rotated components by exp(i m phi0)") {
  const double omega = 2.5 * c;
  const double phi0 = 0.7;
  const double cs = std::cos(phi0), sn = std::sin(phi0);
  const Vec3 p{0.6, -0.2, 0.45};
  const Vec3 q{cs * p[0] - sn * p[1], sn * p[0] + cs * p[1], p[2]};
  for (const auto& idx : all_waves()) {
    const auto a = outgoing_wave(idx, omega, p);
    const auto b = outgoing_wave(idx, omega, q);
    // Components of b in the rotated basis.
    const CVec3 back{cs * b.E[0] + sn * b.E[1], -sn * b.E[0] + cs * b.E[1], b.E[2]};
    const cplx phase = std::polar(1.0, idx.m * phi0);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(back[j] - phase * a.E[j]) <= 1e-13 * norm3(a.E));
  }
}

TEST_CASE("outgoing_wave domain errors") {
  CHECK_THROWS_AS(outgoing_wave({1, 0, Polarization::E}, c, {0.0, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(outgoing_wave({3, 0, Polarization::E}, c, {1.0, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(outgoing_wave({1, 2, Polarization::M}, c, {1.0, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(outgoing_wave({1, 0, Polarization::M}, 0.0, {1.0, 0.0, 0.0}), DomainError);
}

TEST_CASE("flux bracket of (1,1,E) with itself and with (1,0,M)") {
  const double omega = 1e15;
  for (double kr : {1.0, 2.0, 5.0}) {
    const double r = kr * c / omega;
    CHECK(std::abs(flux_bracket({1, 1, Polarization::E}, {1, 1, Polarization::E}, omega, r) - 1.0) < 1e-8);
    CHECK(std::abs(flux_bracket({1, 1, Polarization::E}, {1, 0, Polarization::M}, omega, r)) < 1e-8);
  }
}

TEST_CASE("flux bracket is delta_ab for all l <= 2 pairs, independent of r") {
  const double omega = 1e15;
  const auto waves = all_waves();
  double worst = 0.0;
  for (double kr : {1.0, 2.0, 5.0}) {
    const double r = kr * c / omega;
    for (std::size_t a = 0; a < waves.size(); ++a)
      for (std::size_t b = 0; b < waves.size(); ++b) {
        const cplx v = flux_bracket(waves[a], waves[b], omega, r);
        worst = std::max(worst, std::abs(v - (a == b ? 1.0 : 0.0)));
      }
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("doubling the surface quadrature orders changes the bracket by < 1e-10") {
  const double omega = 1e15;
  const double r = 2.0 * c / omega;
  const auto waves = all_waves();
  double worst = 0.0;
  for (const auto& a : waves)
    for (const auto& b : waves) {
      const cplx lo = flux_bracket(a, b, omega, r, 16, 16);
      const cplx hi = flux_bracket(a, b, omega, r, 32, 32);
      worst = std::max(worst, std::abs(lo - hi));
    }
  CHECK(worst < 1e-10);
}

TEST_CASE("flux bracket rejects coarse quadrature") {
  CHECK_THROWS_AS(flux_bracket({1, 0, Polarization::E}, {1, 0, Polarization::E}, 1e15, 1e-6, 8, 32),
                  DomainError);
}
