#include "rotrad/materials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "rotrad/error.hpp"

namespace rotrad::materials {

namespace {

constexpr double kPoleTolerance = 1e-9;

double sign(double x) { return (x > 0.0) - (x < 0.0); }

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Tabulated::Tabulated(std::vector<double> omega, std::vector<cplx> eps)
    : omega_(std::move(omega)), eps_(std::move(eps)) {
  if (omega_.size() != eps_.size())
    throw DomainError("tabulated eps: grid and value lengths differ");
  if (omega_.size() < 2) throw DomainError("tabulated eps: need at least two samples");
  for (std::size_t i = 0; i < omega_.size(); ++i) {
    if (!(omega_[i] > 0.0)) throw DomainError("tabulated eps: frequencies must be > 0");
    if (i > 0 && !(omega_[i] > omega_[i - 1]))
      throw DomainError("tabulated eps: frequencies must be strictly increasing");
  }
}

Tabulated Tabulated::load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file", 1);
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "omega_rad_s,eps_re,eps_im")
    throw ParseError(path.string() + ": expected header 'omega_rad_s,eps_re,eps_im'", lineno);
  std::vector<double> omega;
  std::vector<cplx> eps;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    double vals[3];
    int n = 0;
    while (std::getline(ss, field, ',')) {
      if (n == 3) throw ParseError(path.string() + ": too many columns", lineno);
      try {
        std::size_t used = 0;
        vals[n] = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw ParseError(path.string() + ": bad number '" + field + "'", lineno);
      }
      ++n;
    }
    if (n != 3) throw ParseError(path.string() + ": expected 3 columns", lineno);
    if (!(vals[0] > 0.0)) throw ParseError(path.string() + ": omega must be > 0", lineno);
    if (!omega.empty() && !(vals[0] > omega.back()))
      throw ParseError(path.string() + ": omega must be strictly increasing", lineno);
    omega.push_back(vals[0]);
    eps.emplace_back(vals[1], vals[2]);
  }
  if (omega.size() < 2) throw ParseError(path.string() + ": need at least two rows", lineno);
  return Tabulated(std::move(omega), std::move(eps));
}

cplx Tabulated::at(double omega) const {
  const double w = std::abs(omega);
  if (w < omega_.front() || w > omega_.back()) {
    throw RangeError("tabulated eps queried at |omega| = " + std::to_string(w) +
                     " outside grid [" + std::to_string(omega_.front()) + ", " +
                     std::to_string(omega_.back()) + "]");
  }
  auto it = std::upper_bound(omega_.begin(), omega_.end(), w);
  std::size_t hi = std::min<std::size_t>(it - omega_.begin(), omega_.size() - 1);
  std::size_t lo = hi - 1;
  const double t = (w - omega_[lo]) / (omega_[hi] - omega_[lo]);
  const cplx e{(1.0 - t) * eps_[lo].real() + t * eps_[hi].real(),
               (1.0 - t) * eps_[lo].imag() + t * eps_[hi].imag()};
  return omega < 0.0 ? std::conj(e) : e;
}

bool is_toy(const DielectricModel& model) {
  return std::holds_alternative<LinearLossToy>(model);
}

cplx epsilon(const DielectricModel& model, double omega) {
  return std::visit(
      overloaded{
          [&](const Drude& d) -> cplx {
            if (d.plasma_frequency == 0.0) return 1.0;
            if (omega == 0.0) throw DomainError("Drude eps has a pole at omega = 0");
            const double wp2 = d.plasma_frequency * d.plasma_frequency;
            return 1.0 - wp2 / (omega * cplx(omega, d.damping));
          },
          [&](const Lorentz& m) -> cplx {
            const double w02 = m.resonance * m.resonance;
            return 1.0 + m.strength * w02 / cplx(w02 - omega * omega, -m.damping * omega);
          },
          [&](const ConstantLoss& m) -> cplx {
            return {m.eps_real, sign(omega) * m.eps_imag};
          },
          [&](const LinearLossToy&) -> cplx {
            throw DomainError("linear-loss toy model defines response factors, not eps");
          },
          [&](const Tabulated& t) -> cplx { return t.at(omega); },
      },
      model);
}

ResponseFactor response_factor(ResponseKind kind, const DielectricModel& model,
                               double omega) {
  if (const auto* toy = std::get_if<LinearLossToy>(&model))
    return {kind, cplx(0.0, toy->A * omega)};
  const cplx eps = epsilon(model, omega);
  if (!std::isfinite(eps.real()) || !std::isfinite(eps.imag()))
    throw DomainError("eps is not finite at omega = " + std::to_string(omega));
  if (kind == ResponseKind::SphereAlphaOverR3) {
    if (std::abs(eps + 2.0) < kPoleTolerance)
      throw SingularityError("sphere surface-mode pole: eps = -2 at omega = " +
                             std::to_string(omega));
    return {kind, (eps - 1.0) / (eps + 2.0)};
  }
  if (std::abs(eps + 1.0) < kPoleTolerance)
    throw SingularityError("cylinder surface-mode pole: eps = -1 at omega = " +
                           std::to_string(omega));
  return {kind, (eps - 1.0) / (eps + 1.0)};
}

cplx sphere_polarizability(const DielectricModel& model, double radius, double omega) {
  if (!(radius > 0.0)) throw DomainError("sphere radius must be > 0");
  return radius * radius * radius *
         response_factor(ResponseKind::SphereAlphaOverR3, model, omega).value;
}

cplx cylinder_surface_factor(const DielectricModel& model, double omega) {
  return response_factor(ResponseKind::CylinderSurface, model, omega).value;
}

}  // namespace rotrad::materials
