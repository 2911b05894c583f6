#pragma once

#include <array>
#include <complex>

namespace rotrad::waves {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;
using CVec3 = std::array<cplx, 3>;

enum class Polarization { M, E };

/// Vector partial wave label: total angular momentum l >= 1, axial index
/// |m| <= l, magnetic (M) or electric (E) polarization.
struct WaveIndex {
  int l = 1;
  int m = 0;
  Polarization P = Polarization::E;

  friend bool operator==(const WaveIndex&, const WaveIndex&) = default;
};

/// Field value and its curl at a point, Cartesian components.
struct FieldSample {
  Vec3 position{};
  CVec3 E{};
  CVec3 curlE{};
};

inline constexpr int kMaxBesselOrder = 8;
inline constexpr int kMaxWaveOrder = 2;

/// Spherical Bessel function j_l(x), 0 <= l <= 8, any finite x.
/// Ascending series below x = l + 1, upward recurrence above.
double spherical_bessel_j(int l, double x);

/// Spherical Neumann function y_l(x), x > 0, by upward recurrence.
double spherical_bessel_y(int l, double x);

/// h_l^(1)(x) = j_l(x) + i y_l(x), x > 0.
cplx spherical_hankel1(int l, double x);

/// Outgoing vector wave of frequency omega (rad/s) and its curl:
///   M: sqrt(k)/sqrt(l(l+1))      curl[ h_l(kr) Y_lm r ]
///   E: -i/(sqrt(k) sqrt(l(l+1))) curl curl[ h_l(kr) Y_lm r ]
/// with k = omega/c and Condon-Shortley Y_lm. Supports l <= 2.
FieldSample outgoing_wave(const WaveIndex& idx, double omega, const Vec3& position);

/// (i/2) times the closed-surface integral over the sphere of radius r of
///   r_hat . [ (curl E_a) x conj(E_b) + E_a x conj(curl E_b) ]
/// for outgoing waves a, b. Gauss-Legendre in cos(theta), trapezoid in phi.
/// Normalization makes this delta_ab for every r.
cplx flux_bracket(const WaveIndex& a, const WaveIndex& b, double omega, double r,
                  int n_theta = 32, int n_phi = 32);

}  // namespace rotrad::waves
