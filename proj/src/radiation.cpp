#include "rotrad/radiation.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "rotrad/constants.hpp"
#include "rotrad/error.hpp"

namespace rotrad::radiation {

using constants::c;
using constants::hbar;
using constants::k_B;
using constants::pi;
using scattering::PolContent;

namespace {

// Boltzmann tail cut: exp(-40) is below double precision relevance.
constexpr double kThermalCutoff = 40.0;

double window_edge(const ChannelId& ch, double Omega) { return Omega * ch.m; }

double thermal_span(const ThermalState& s) {
  return kThermalCutoff * k_B * std::max(s.T, s.T0) / hbar;
}

struct ChannelIntegral {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
};

ChannelIntegral integrate_channel(const ChannelProvider& provider, const ChannelId& ch,
                                  const ThermalState& state, const QuadratureConfig& cfg) {
  const double edge = window_edge(ch, state.Omega);
  double upper = std::max(edge, 0.0);
  if (!state.zero_temperature()) upper += thermal_span(state);
  const auto [band_lo, band_hi] = provider.band(ch);
  const double lo = std::max(0.0, band_lo);
  const double hi = std::min(upper, band_hi);
  if (!(hi > lo)) return {};

  std::vector<double> breaks = provider.breakpoints(ch);
  if (edge > 0.0) breaks.push_back(edge);
  auto f = [&](double w) { return trace_integrand(provider, ch, state, w); };
  const auto r = quad::integrate(f, lo, hi, cfg, breaks);
  return {r.value, r.error, r.panels};
}

std::vector<std::vector<ChannelId>> levels_by_abs_m(std::vector<ChannelId> chans) {
  std::sort(chans.begin(), chans.end());
  std::map<int, std::vector<ChannelId>> by_level;
  for (const auto& ch : chans) by_level[std::abs(ch.m)].push_back(ch);
  std::vector<std::vector<ChannelId>> out;
  for (auto& [level, list] : by_level) out.push_back(std::move(list));
  return out;
}

std::vector<ChannelIntegral> run_level(const ChannelProvider& provider,
                                       const std::vector<ChannelId>& level,
                                       const ThermalState& state, const QuadratureConfig& cfg,
                                       int threads) {
  std::vector<ChannelIntegral> out(level.size());
  if (threads <= 1 || level.size() <= 1) {
    for (std::size_t i = 0; i < level.size(); ++i)
      out[i] = integrate_channel(provider, level[i], state, cfg);
    return out;
  }
  for (std::size_t start = 0; start < level.size(); start += threads) {
    const std::size_t stop = std::min(level.size(), start + static_cast<std::size_t>(threads));
    std::vector<std::future<ChannelIntegral>> jobs;
    for (std::size_t i = start; i < stop; ++i)
      jobs.push_back(std::async(std::launch::async, integrate_channel, std::cref(provider),
                                std::cref(level[i]), std::cref(state), std::cref(cfg)));
    for (std::size_t i = start; i < stop; ++i) out[i] = jobs[i - start].get();
  }
  return out;
}

double relative_difference(double a, double reference) {
  if (reference == 0.0) return a == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(a - reference) / std::abs(reference);
}

// -Im g(w - Omega) on (0, Omega); passivity makes it non-negative.
double loss_in_window(const std::complex<double>& g, double omega) {
  const double v = -g.imag();
  if (v < 0.0) {
    std::ostringstream os;
    os << "response factor has Im > 0 at negative co-rotating frequency (lab omega = " << omega
       << "); the material model is not passive";
    throw ConsistencyError(os.str());
  }
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Providers

SphereChannels::SphereChannels(DielectricModel model, double radius, double Omega,
                               RegimeOptions regime, DeficiencyMode mode)
    : model_(std::move(model)), radius_(radius), Omega_(Omega), regime_(regime), mode_(mode) {
  if (!(radius > 0.0)) throw DomainError("sphere radius must be > 0");
  if (!(Omega >= 0.0)) throw DomainError("angular velocity must be >= 0");
}

std::vector<ChannelId> SphereChannels::channels() const {
  std::vector<ChannelId> out;
  for (int m = -1; m <= 1; ++m) out.push_back(ChannelId{m, 1, PolContent::E, std::nullopt});
  return out;
}

double SphereChannels::deficiency_trace(const ChannelId& ch, double omega) const {
  if (!ch.l || ch.pols != PolContent::E)
    throw UnsupportedError("sphere provider has no channel " + ch.label());
  const scattering::cplx T = scattering::sphere_T_general(model_, radius_, Omega_, omega, *ch.l, ch.m, regime_);
  const double linear = -4.0 * T.real();
  return mode_ == DeficiencyMode::LinearInT ? linear : linear - 4.0 * std::norm(T);
}

CylinderChannels::CylinderChannels(DielectricModel model, double radius, double length,
                                   double Omega, RegimeOptions regime, DeficiencyMode mode,
                                   int kz_nodes)
    : model_(std::move(model)),
      radius_(radius),
      length_(length),
      Omega_(Omega),
      mode_(mode),
      regime_(regime),
      rule_(quad::gauss_legendre(kz_nodes)) {
  if (!(radius > 0.0) || !(length > 0.0))
    throw DomainError("cylinder radius and length must be > 0");
  if (!(Omega >= 0.0)) throw DomainError("angular velocity must be >= 0");
}

std::vector<ChannelId> CylinderChannels::channels() const {
  return {ChannelId{1, std::nullopt, PolContent::ME, std::nullopt}};
}

double CylinderChannels::deficiency_trace(const ChannelId& ch, double omega) const {
  if (ch.m != 1 || ch.pols != PolContent::ME || ch.kz)
    throw UnsupportedError("cylinder provider has no channel " + ch.label());
  const double k = omega / c;
  double sum = 0.0;
  for (std::size_t j = 0; j < rule_.nodes.size(); ++j) {
    const double kz = k * rule_.nodes[j];
    const Eigen::Matrix2cd T =
        scattering::cylinder_T_block(model_, radius_, Omega_, omega, kz, 1, regime_);
    double d;
    if (mode_ == DeficiencyMode::LinearInT) {
      d = -4.0 * (T(0, 0).real() + T(1, 1).real());
    } else {
      d = scattering::deficiency_from_T(T).trace().real();
    }
    sum += rule_.weights[j] * d;
  }
  // dkz = k dx over [-1, 1]; mode density L / 2pi.
  return length_ / (2.0 * pi) * k * sum;
}

TabulatedChannels::TabulatedChannels(scattering::TabulatedChannelSet set) : set_(std::move(set)) {}

std::vector<ChannelId> TabulatedChannels::channels() const {
  std::vector<ChannelId> out;
  for (const auto& ch : set_.channels()) out.push_back(ch.id);
  return out;
}

double TabulatedChannels::deficiency_trace(const ChannelId& id, double omega) const {
  const auto& ch = set_.find(id);
  if (omega < ch.omega_min() || omega > ch.omega_max()) return 0.0;
  return scattering::deficiency(ch.at(omega)).trace().real();
}

std::vector<double> TabulatedChannels::breakpoints(const ChannelId& id) const {
  return set_.find(id).omega;
}

std::pair<double, double> TabulatedChannels::band(const ChannelId& id) const {
  const auto& ch = set_.find(id);
  return {ch.omega_min(), ch.omega_max()};
}

// ---------------------------------------------------------------------------
// Trace engine

double trace_integrand(const ChannelProvider& provider, const ChannelId& ch,
                       const ThermalState& state, double omega) {
  const double occ = stats::occupation_difference(omega, ch.m, state);
  if (occ == 0.0) return 0.0;
  const double d = provider.deficiency_trace(ch, omega);
  return hbar * omega / (2.0 * pi) * occ * d;
}

RadiationResult trace_power(const ChannelProvider& provider, const ThermalState& state,
                            const QuadratureConfig& cfg, const EngineOptions& engine) {
  if (!(state.T >= 0.0) || !(state.T0 >= 0.0)) throw DomainError("temperatures must be >= 0");
  if (!(state.Omega >= 0.0)) throw DomainError("angular velocity must be >= 0");

  RadiationResult result;
  if (const auto* cyl = dynamic_cast<const CylinderChannels*>(&provider))
    result.truncation.kz_nodes = cyl->kz_nodes();

  double running = 0.0;
  int negligible_streak = 0;
  const auto levels = levels_by_abs_m(provider.channels());
  for (std::size_t li = 0; li < levels.size(); ++li) {
    const auto& level = levels[li];
    const auto integrals = run_level(provider, level, state, cfg, engine.threads);
    double level_sum = 0.0;
    for (std::size_t i = 0; i < level.size(); ++i) {
      result.per_channel[level[i]] = integrals[i].value;
      result.truncation.panels[level[i]] = integrals[i].panels;
      result.quadrature_error += integrals[i].error;
      level_sum += integrals[i].value;
    }
    ++result.truncation.levels_evaluated;
    result.truncation.highest_m = std::abs(level.front().m);
    if (running != 0.0 && std::abs(level_sum) <= cfg.rel_tol * std::abs(running)) {
      if (++negligible_streak >= 2) {
        result.truncation.truncated = li + 1 < levels.size();
        running += level_sum;
        break;
      }
    } else {
      negligible_streak = 0;
    }
    running += level_sum;
  }
  // Reduce in channel order so the total is independent of scheduling.
  for (const auto& [ch, p] : result.per_channel) result.total_power += p;
  if (engine.spectrum_samples > 0)
    result.spectrum = sample_spectrum(provider, state, engine.spectrum_samples);
  return result;
}

double photon_spectrum(const ChannelProvider& provider, const ChannelId& ch, double Omega,
                       double omega) {
  if (!(omega > 0.0)) throw DomainError("photon_spectrum: omega must be > 0");
  if (!(omega < Omega * ch.m)) return 0.0;
  return -provider.deficiency_trace(ch, omega);
}

std::vector<SpectrumSample> sample_spectrum(const ChannelProvider& provider,
                                            const ThermalState& state, int samples) {
  if (samples < 1) throw DomainError("spectrum needs at least one sample");
  auto chans = provider.channels();
  std::sort(chans.begin(), chans.end());
  double top = 0.0;
  for (const auto& ch : chans) top = std::max(top, state.Omega * ch.m);
  double hi = state.zero_temperature() ? 2.0 * top : top + thermal_span(state);
  if (!(hi > 0.0)) return {};

  std::vector<SpectrumSample> out;
  out.reserve(chans.size() * samples);
  for (const auto& ch : chans) {
    const auto [band_lo, band_hi] = provider.band(ch);
    for (int i = 0; i < samples; ++i) {
      const double w = hi * (i + 0.5) / samples;
      SpectrumSample s;
      s.omega = w;
      s.channel = ch;
      if (w >= band_lo && w <= band_hi) {
        const double occ = stats::occupation_difference(w, ch.m, state);
        if (occ != 0.0 && std::isfinite(occ)) {
          s.dN_domega = occ * provider.deficiency_trace(ch, w);
          s.dP_domega = hbar * w / (2.0 * pi) * s.dN_domega;
        }
      }
      out.push_back(s);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bodies

quad::QuadratureResult sphere_closed_form(const DielectricModel& model, double radius,
                                          double Omega, const QuadratureConfig& cfg) {
  if (!(radius > 0.0)) throw DomainError("sphere radius must be > 0");
  auto f = [&](double w) {
    const auto g = materials::response_factor(materials::ResponseKind::SphereAlphaOverR3,
                                              model, w - Omega).value;
    return std::pow(w, 4) * loss_in_window(g, w);
  };
  auto r = quad::integrate(f, 0.0, Omega, cfg);
  const double pref = 4.0 * hbar * radius * radius * radius / (3.0 * pi * c * c * c);
  r.value *= pref;
  r.error *= pref;
  return r;
}

RadiationResult power_sphere(const DielectricModel& model, double radius,
                             const ThermalState& state, const QuadratureConfig& cfg,
                             const SphereOptions& opts) {
  SphereChannels provider(model, radius, state.Omega, opts.regime, opts.mode);
  RadiationResult result = trace_power(provider, state, cfg, opts.engine);
  if (state.zero_temperature()) {
    const auto closed = sphere_closed_form(model, radius, state.Omega, cfg);
    result.closed_form_power = closed.value;
    result.path_relative_difference = relative_difference(result.total_power, closed.value);
    if (opts.mode == DeficiencyMode::LinearInT &&
        *result.path_relative_difference > opts.consistency_tol) {
      std::ostringstream os;
      os.precision(12);
      os << "sphere power: trace path " << result.total_power << " W and closed form "
         << closed.value << " W differ by " << *result.path_relative_difference
         << " (relative) > " << opts.consistency_tol;
      throw ConsistencyError(os.str());
    }
  }
  return result;
}

quad::QuadratureResult cylinder_closed_form(const DielectricModel& model, double radius,
                                            double length, double Omega,
                                            const QuadratureConfig& cfg) {
  if (!(radius > 0.0) || !(length > 0.0))
    throw DomainError("cylinder radius and length must be > 0");
  auto f = [&](double w) {
    const auto g = materials::cylinder_surface_factor(model, w - Omega);
    return std::pow(w, 4) * loss_in_window(g, w);
  };
  auto r = quad::integrate(f, 0.0, Omega, cfg);
  const double pref = 2.0 * hbar * length * radius * radius / (3.0 * pi * c * c * c);
  r.value *= pref;
  r.error *= pref;
  return r;
}

RadiationResult power_cylinder(const DielectricModel& model, double radius, double length,
                               double Omega, const QuadratureConfig& cfg,
                               const CylinderOptions& opts) {
  CylinderChannels provider(model, radius, length, Omega, opts.regime, opts.mode, opts.kz_nodes);
  const ThermalState state{0.0, 0.0, Omega};
  RadiationResult result = trace_power(provider, state, cfg, opts.engine);
  const auto closed = cylinder_closed_form(model, radius, length, Omega, cfg);
  result.closed_form_power = closed.value;
  result.path_relative_difference = relative_difference(result.total_power, closed.value);
  if (opts.mode == DeficiencyMode::LinearInT &&
      *result.path_relative_difference > opts.consistency_tol) {
    std::ostringstream os;
    os.precision(12);
    os << "cylinder power: kz-integrated linear-in-T path " << result.total_power
       << " W and closed form " << closed.value << " W differ by "
       << *result.path_relative_difference << " (relative) > " << opts.consistency_tol;
    throw ConsistencyError(os.str());
  }
  return result;
}

RadiationResult static_radiation(const ChannelProvider& provider, const ThermalState& state,
                                 const QuadratureConfig& cfg, const EngineOptions& engine) {
  if (state.Omega != 0.0) throw DomainError("static_radiation requires Omega = 0");
  return trace_power(provider, state, cfg, engine);
}

RadiationResult static_radiation(const DielectricModel& model, double radius,
                                 const ThermalState& state, const QuadratureConfig& cfg,
                                 const SphereOptions& opts) {
  if (state.Omega != 0.0) throw DomainError("static_radiation requires Omega = 0");
  SphereChannels provider(model, radius, 0.0, opts.regime, opts.mode);
  return trace_power(provider, state, cfg, opts.engine);
}

}  // namespace rotrad::radiation
