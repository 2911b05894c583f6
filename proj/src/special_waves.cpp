#include "rotrad/special_waves.hpp"

#include <cmath>
#include <string>

#include "rotrad/constants.hpp"
#include "rotrad/error.hpp"
#include "rotrad/quadrature.hpp"

namespace rotrad::waves {

namespace {

void check_order(int l, int lmax, const char* what) {
  if (l < 0 || l > lmax)
    throw DomainError(std::string(what) + ": order l = " + std::to_string(l) +
                      " outside supported range [0, " + std::to_string(lmax) + "]");
}

// Upward recurrence loses j_l for x < l; the ascending series is used there.
// j_l(x) = x^l / (2l+1)!! * sum_k (-x^2/2)^k / (k! (2l+3)(2l+5)...(2l+2k+1))
double bessel_j_series(int l, double x) {
  double prefactor = 1.0;
  for (int i = 1; i <= l; ++i) prefactor *= x / (2.0 * i + 1.0);
  const double q = -0.5 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= q / (k * (2.0 * l + 2.0 * k + 1.0));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return prefactor * sum;
}

// Solid harmonic r^l Y_lm(theta, phi) as a polynomial in x, y, z, and its
// gradient. Condon-Shortley phase.
struct SolidHarmonic {
  cplx value;
  CVec3 grad;
};

SolidHarmonic solid_harmonic(int l, int m, const Vec3& p) {
  using constants::pi;
  const double x = p[0], y = p[1], z = p[2];
  const cplx I(0.0, 1.0);
  const cplx xp(x, y);   // x + i y
  const cplx xm(x, -y);  // x - i y
  if (l == 1) {
    const double c0 = std::sqrt(3.0 / (4.0 * pi));
    const double c1 = std::sqrt(3.0 / (8.0 * pi));
    switch (m) {
      case 0: return {c0 * z, {0.0, 0.0, c0}};
      case 1: return {-c1 * xp, {-c1, -c1 * I, 0.0}};
      case -1: return {c1 * xm, {c1, -c1 * I, 0.0}};
    }
  } else if (l == 2) {
    const double c0 = std::sqrt(5.0 / (16.0 * pi));
    const double c1 = std::sqrt(15.0 / (8.0 * pi));
    const double c2 = std::sqrt(15.0 / (32.0 * pi));
    switch (m) {
      case 0:
        return {c0 * (2.0 * z * z - x * x - y * y),
                {-2.0 * c0 * x, -2.0 * c0 * y, 4.0 * c0 * z}};
      case 1: return {-c1 * z * xp, {-c1 * z, -c1 * I * z, -c1 * xp}};
      case -1: return {c1 * z * xm, {c1 * z, -c1 * I * z, c1 * xm}};
      case 2: return {c2 * xp * xp, {2.0 * c2 * xp, 2.0 * c2 * I * xp, 0.0}};
      case -2: return {c2 * xm * xm, {2.0 * c2 * xm, -2.0 * c2 * I * xm, 0.0}};
    }
  }
  throw DomainError("solid harmonic (l = " + std::to_string(l) + ", m = " +
                    std::to_string(m) + ") not available");
}

CVec3 cross(const CVec3& a, const CVec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

CVec3 conj(const CVec3& a) { return {std::conj(a[0]), std::conj(a[1]), std::conj(a[2])}; }

}  // namespace

double spherical_bessel_j(int l, double x) {
  check_order(l, kMaxBesselOrder, "spherical_bessel_j");
  if (!std::isfinite(x)) throw DomainError("spherical_bessel_j: non-finite argument");
  if (x < 0.0) return (l % 2 == 0 ? 1.0 : -1.0) * spherical_bessel_j(l, -x);
  if (x < l + 1.0) return bessel_j_series(l, x);
  double j0 = std::sin(x) / x;
  if (l == 0) return j0;
  double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
  for (int n = 1; n < l; ++n) {
    const double j2 = (2.0 * n + 1.0) / x * j1 - j0;
    j0 = j1;
    j1 = j2;
  }
  return j1;
}

double spherical_bessel_y(int l, double x) {
  check_order(l, kMaxBesselOrder, "spherical_bessel_y");
  if (!(x > 0.0) || !std::isfinite(x))
    throw DomainError("spherical_bessel_y: argument must be finite and > 0");
  double y0 = -std::cos(x) / x;
  if (l == 0) return y0;
  double y1 = -std::cos(x) / (x * x) - std::sin(x) / x;
  for (int n = 1; n < l; ++n) {
    const double y2 = (2.0 * n + 1.0) / x * y1 - y0;
    y0 = y1;
    y1 = y2;
  }
  return y1;
}

cplx spherical_hankel1(int l, double x) {
  if (!(x > 0.0)) throw DomainError("spherical_hankel1: argument must be > 0");
  return {spherical_bessel_j(l, x), spherical_bessel_y(l, x)};
}

FieldSample outgoing_wave(const WaveIndex& idx, double omega, const Vec3& position) {
  const int l = idx.l;
  if (l < 1 || l > kMaxWaveOrder)
    throw DomainError("outgoing_wave: l = " + std::to_string(l) + " outside [1, 2]");
  if (std::abs(idx.m) > l) throw DomainError("outgoing_wave: |m| > l");
  if (!(omega > 0.0)) throw DomainError("outgoing_wave: omega must be > 0");
  const double r = std::hypot(position[0], position[1], position[2]);
  if (!(r > 0.0)) throw DomainError("outgoing_wave: r = 0 is singular");

  const double k = omega / constants::c;
  const double kr = k * r;
  // h_l and its first two derivatives with respect to the argument.
  const cplx h = spherical_hankel1(l, kr);
  const cplx dh = spherical_hankel1(l - 1, kr) - (l + 1.0) / kr * h;
  const cplx d2h = -(2.0 / kr) * dh - (1.0 - l * (l + 1.0) / (kr * kr)) * h;

  // psi = g(r) P(x) with P the solid harmonic and g = h_l(kr) / r^l.
  const double rl = std::pow(r, l);
  const cplx g = h / rl;
  const cplx dg = k * dh / rl - double(l) * h / (rl * r);
  const cplx d2g = k * k * d2h / rl - 2.0 * l * k * dh / (rl * r) +
                   double(l * (l + 1)) * h / (rl * r * r);

  const SolidHarmonic P = solid_harmonic(l, idx.m, position);
  const CVec3 pos{position[0], position[1], position[2]};
  CVec3 rhat{pos[0] / r, pos[1] / r, pos[2] / r};

  // V = curl(psi r) = g grad(P) x r
  CVec3 V = cross(P.grad, pos);
  for (auto& v : V) v *= g;
  // W = curl V = [(l+2) g' + r g'' + k^2 r g] P r_hat + [(l+1) g + r g'] grad P
  const cplx radial = ((l + 2.0) * dg + r * d2g + k * k * r * g) * P.value;
  const cplx tangential = (l + 1.0) * g + r * dg;
  CVec3 W;
  for (int i = 0; i < 3; ++i) W[i] = radial * rhat[i] + tangential * P.grad[i];

  const double lnorm = std::sqrt(l * (l + 1.0));
  FieldSample out;
  out.position = position;
  if (idx.P == Polarization::M) {
    const double n = std::sqrt(k) / lnorm;
    for (int i = 0; i < 3; ++i) {
      out.E[i] = n * V[i];
      out.curlE[i] = n * W[i];
    }
  } else {
    // curl W = curl curl V = k^2 V since V is a divergence-free Helmholtz solution.
    const cplx n = cplx(0.0, -1.0) / (std::sqrt(k) * lnorm);
    for (int i = 0; i < 3; ++i) {
      out.E[i] = n * W[i];
      out.curlE[i] = n * k * k * V[i];
    }
  }
  return out;
}

cplx flux_bracket(const WaveIndex& a, const WaveIndex& b, double omega, double r,
                  int n_theta, int n_phi) {
  if (n_theta < 16 || n_phi < 16)
    throw DomainError("flux_bracket: quadrature orders must be >= 16");
  if (!(r > 0.0)) throw DomainError("flux_bracket: radius must be > 0");
  const auto rule = quad::gauss_legendre(n_theta);
  const double dphi = 2.0 * constants::pi / n_phi;
  cplx sum = 0.0;
  for (int it = 0; it < n_theta; ++it) {
    const double ct = rule.nodes[it];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int ip = 0; ip < n_phi; ++ip) {
      const double phi = ip * dphi;
      const Vec3 rhat{st * std::cos(phi), st * std::sin(phi), ct};
      const Vec3 pos{r * rhat[0], r * rhat[1], r * rhat[2]};
      const FieldSample fa = outgoing_wave(a, omega, pos);
      const FieldSample fb = outgoing_wave(b, omega, pos);
      const CVec3 t1 = cross(fa.curlE, conj(fb.E));
      const CVec3 t2 = cross(fa.E, conj(fb.curlE));
      cplx flux = 0.0;
      for (int i = 0; i < 3; ++i) flux += rhat[i] * (t1[i] + t2[i]);
      sum += rule.weights[it] * dphi * flux;
    }
  }
  return cplx(0.0, 0.5) * r * r * sum;
}

}  // namespace rotrad::waves
