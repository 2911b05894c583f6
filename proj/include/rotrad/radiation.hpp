#pragma once

#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "rotrad/materials.hpp"
#include "rotrad/quadrature.hpp"
#include "rotrad/scattering.hpp"
#include "rotrad/statistics.hpp"

namespace rotrad::radiation {

using materials::DielectricModel;
using quad::QuadratureConfig;
using scattering::ChannelId;
using scattering::RegimeOptions;
using stats::ThermalState;

/// Source of scattering data for the trace formula. Implementations must be
/// safe to call concurrently.
class ChannelProvider {
 public:
  virtual ~ChannelProvider() = default;

  virtual std::vector<ChannelId> channels() const = 0;

  /// Tr[I - S^dagger S] summed over the blocks of `channel` at lab frequency
  /// omega > 0. Continuum channels fold in their mode density.
  virtual double deficiency_trace(const ChannelId& channel, double omega) const = 0;

  /// Extra frequencies where the channel's data has kinks.
  virtual std::vector<double> breakpoints(const ChannelId&) const { return {}; }

  /// Frequency band outside which the channel does not scatter.
  virtual std::pair<double, double> band(const ChannelId&) const {
    return {0.0, std::numeric_limits<double>::infinity()};
  }
};

/// How Tr[I - S^dagger S] is formed from T (S = I + 2T). LinearInT keeps
/// -2 Tr(T + T^dagger) only, consistent with the leading-order T of a small
/// body; FullS adds -4 Tr(T^dagger T).
enum class DeficiencyMode { LinearInT, FullS };

/// Leading-order l = 1 electric channels (m = -1, 0, 1) of a small sphere.
class SphereChannels final : public ChannelProvider {
 public:
  SphereChannels(DielectricModel model, double radius, double Omega, RegimeOptions regime = {},
                 DeficiencyMode mode = DeficiencyMode::LinearInT);

  std::vector<ChannelId> channels() const override;
  double deficiency_trace(const ChannelId& channel, double omega) const override;

  double radius() const { return radius_; }

 private:
  DielectricModel model_;
  double radius_;
  double Omega_;
  RegimeOptions regime_;
  DeficiencyMode mode_;
};

/// m = 1 channel of a thin rotating cylinder of length L. The propagating
/// band |kz| <= omega/c is integrated with Gauss-Legendre, weight L dkz / 2pi.
class CylinderChannels final : public ChannelProvider {
 public:
  CylinderChannels(DielectricModel model, double radius, double length, double Omega,
                   RegimeOptions regime = {}, DeficiencyMode mode = DeficiencyMode::LinearInT,
                   int kz_nodes = 32);

  std::vector<ChannelId> channels() const override;
  double deficiency_trace(const ChannelId& channel, double omega) const override;

  int kz_nodes() const { return static_cast<int>(rule_.nodes.size()); }

 private:
  DielectricModel model_;
  double radius_;
  double length_;
  double Omega_;
  DeficiencyMode mode_;
  RegimeOptions regime_;
  quad::GaussLegendreRule rule_;
};

/// Externally tabulated blocks. Each channel scatters only inside its
/// tabulated band.
class TabulatedChannels final : public ChannelProvider {
 public:
  explicit TabulatedChannels(scattering::TabulatedChannelSet set);

  std::vector<ChannelId> channels() const override;
  double deficiency_trace(const ChannelId& channel, double omega) const override;
  std::vector<double> breakpoints(const ChannelId& channel) const override;
  std::pair<double, double> band(const ChannelId& channel) const override;

 private:
  scattering::TabulatedChannelSet set_;
};

struct SpectrumSample {
  double omega = 0.0;      // rad/s
  double dP_domega = 0.0;  // W per rad/s
  double dN_domega = 0.0;
  ChannelId channel;
};

struct TruncationReport {
  int highest_m = 0;  // largest |m| retained
  int levels_evaluated = 0;
  bool truncated = false;
  std::map<ChannelId, int> panels;
  int kz_nodes = 0;
};

struct RadiationResult {
  double total_power = 0.0;  // W
  std::map<ChannelId, double> per_channel;
  std::vector<SpectrumSample> spectrum;
  double quadrature_error = 0.0;
  TruncationReport truncation;
  // Closed-form leading-order benchmark, where one exists.
  std::optional<double> closed_form_power;
  std::optional<double> path_relative_difference;
};

struct EngineOptions {
  int threads = 1;
  int spectrum_samples = 0;
};

/// hbar w / 2pi * (n_T(w - Omega m) - n_T0(w)) * Tr[I - S^dagger S]
double trace_integrand(const ChannelProvider& provider, const ChannelId& channel,
                       const ThermalState& state, double omega);

/// P = int_0^inf dw/2pi hbar w sum_blocks Tr[(n_T(w - Omega m) - n_T0(w)) (I - S^dagger S)].
///
/// Channels are processed in levels of increasing |m|; once the running
/// total is non-zero, two consecutive levels each below rel_tol of it stop
/// the sum. Each channel is integrated up to max(Omega m, 0) + 40 k_B T / hbar
/// (only (0, Omega m) at zero temperature) with every window edge as a
/// breakpoint. Channel integrals run on up to `threads` threads and are
/// reduced in channel order, so results do not depend on the thread count.
RadiationResult trace_power(const ChannelProvider& provider, const ThermalState& state,
                            const QuadratureConfig& cfg, const EngineOptions& engine = {});

/// Zero-temperature photon spectrum of one channel:
/// Theta(Omega m - w) Tr[S^dagger S - I].
double photon_spectrum(const ChannelProvider& provider, const ChannelId& channel,
                       double Omega, double omega);

/// Spectrum rows for every channel on a shared midpoint grid over
/// (0, w_hi), w_hi = 2 max(Omega m) at zero temperature and
/// max(Omega m) + 40 k_B T / hbar otherwise. Ordered by channel, then omega.
std::vector<SpectrumSample> sample_spectrum(const ChannelProvider& provider,
                                            const ThermalState& state, int samples);

struct SphereOptions {
  RegimeOptions regime;
  DeficiencyMode mode = DeficiencyMode::LinearInT;
  double consistency_tol = 1e-6;
  EngineOptions engine;
};

/// (4 hbar R^3 / 3 pi c^3) int_0^Omega dw w^4 |Im (eps(w-Omega)-1)/(eps(w-Omega)+2)|
quad::QuadratureResult sphere_closed_form(const DielectricModel& model, double radius,
                                          double Omega, const QuadratureConfig& cfg);

/// Rotating sphere. Runs the trace formula over the sphere channels; at zero
/// temperature also evaluates the closed form and, in LinearInT mode, raises
/// ConsistencyError when the two disagree by more than consistency_tol
/// (relative).
RadiationResult power_sphere(const DielectricModel& model, double radius,
                             const ThermalState& state, const QuadratureConfig& cfg,
                             const SphereOptions& opts = {});

struct CylinderOptions {
  RegimeOptions regime;
  DeficiencyMode mode = DeficiencyMode::LinearInT;
  double consistency_tol = 1e-8;
  int kz_nodes = 32;
  EngineOptions engine;
};

/// (2 hbar L R^2 / 3 pi c^3) int_0^Omega dw w^4 |Im (eps(w-Omega)-1)/(eps(w-Omega)+1)|
quad::QuadratureResult cylinder_closed_form(const DielectricModel& model, double radius,
                                            double length, double Omega,
                                            const QuadratureConfig& cfg);

/// Rotating cylinder at zero temperature. In LinearInT mode the kz-resolved
/// trace must match the closed form within consistency_tol.
RadiationResult power_cylinder(const DielectricModel& model, double radius, double length,
                               double Omega, const QuadratureConfig& cfg,
                               const CylinderOptions& opts = {});

/// Thermal emission of a static body (Omega must be 0).
RadiationResult static_radiation(const ChannelProvider& provider, const ThermalState& state,
                                 const QuadratureConfig& cfg, const EngineOptions& engine = {});

RadiationResult static_radiation(const DielectricModel& model, double radius,
                                 const ThermalState& state, const QuadratureConfig& cfg,
                                 const SphereOptions& opts = {});

}  // namespace rotrad::radiation
