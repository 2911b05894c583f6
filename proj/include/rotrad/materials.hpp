#pragma once

#include <complex>
#include <filesystem>
#include <variant>
#include <vector>

namespace rotrad::materials {

using cplx = std::complex<double>;

/// eps(w) = 1 - wp^2 / (w (w + i gamma)).  A zero plasma frequency is vacuum.
struct Drude {
  double plasma_frequency = 0.0;  // rad/s
  double damping = 1.0;           // rad/s
};

/// eps(w) = 1 + f w0^2 / (w0^2 - w^2 - i gamma w)
struct Lorentz {
  double strength = 0.0;
  double resonance = 0.0;  // rad/s
  double damping = 0.0;    // rad/s
};

/// eps(w) = eps_real + i sign(w) eps_imag
struct ConstantLoss {
  double eps_real = 1.0;
  double eps_imag = 0.0;
};

/// Non-physical toy that fixes the response factors rather than eps:
/// alpha(w) / R^3 = i A w and (eps-1)/(eps+1) = i A w. Exists so that the
/// frequency integrals have closed forms; meaningless at large A w.
struct LinearLossToy {
  double A = 0.0;  // s
};

/// Measured eps on a strictly increasing positive grid. Negative
/// frequencies follow from eps(-w) = conj(eps(w)); no extrapolation.
class Tabulated {
 public:
  Tabulated(std::vector<double> omega, std::vector<cplx> eps);

  /// CSV with header `omega_rad_s,eps_re,eps_im`.
  static Tabulated load_csv(const std::filesystem::path& path);

  cplx at(double omega) const;
  const std::vector<double>& omega() const { return omega_; }
  const std::vector<cplx>& eps() const { return eps_; }

 private:
  std::vector<double> omega_;
  std::vector<cplx> eps_;
};

using DielectricModel = std::variant<Drude, Lorentz, ConstantLoss, LinearLossToy, Tabulated>;

inline DielectricModel vacuum() { return Drude{0.0, 1.0}; }

bool is_toy(const DielectricModel& model);

/// eps(omega) for signed omega; eps(-w) = conj(eps(w)) for every model.
/// Throws DomainError for the toy model and for Drude at omega = 0,
/// RangeError for tabulated data outside its grid.
cplx epsilon(const DielectricModel& model, double omega);

enum class ResponseKind { SphereAlphaOverR3, CylinderSurface };

struct ResponseFactor {
  ResponseKind kind;
  cplx value;
};

/// (eps-1)/(eps+2) or (eps-1)/(eps+1). Raises SingularityError within 1e-9
/// of the surface-mode pole.
ResponseFactor response_factor(ResponseKind kind, const DielectricModel& model, double omega);

/// alpha(w) = R^3 (eps(w)-1)/(eps(w)+2), in m^3.
cplx sphere_polarizability(const DielectricModel& model, double radius, double omega);

/// (eps(w)-1)/(eps(w)+1)
cplx cylinder_surface_factor(const DielectricModel& model, double omega);

}  // namespace rotrad::materials
