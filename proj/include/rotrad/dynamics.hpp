#pragma once

#include <functional>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "rotrad/materials.hpp"
#include "rotrad/quadrature.hpp"
#include "rotrad/scattering.hpp"

// Spin-down of a rotating body driven by its radiated energy:
//   I Omega dOmega/dt = -P(Omega).
namespace rotrad::dynamics {

using materials::DielectricModel;

struct SphereBody {
  double radius = 0.0;  // m
};

struct CylinderBody {
  double radius = 0.0;  // m
  double length = 0.0;  // m
};

using BodySpec = std::variant<SphereBody, CylinderBody>;

struct SpinDownScenario {
  BodySpec body;
  double moment_of_inertia = 0.0;  // kg m^2
  DielectricModel model;
  double Omega0 = 0.0;  // rad/s
  // Integration end. Infinity means "stop once Omega has fallen to Omega0/10".
  double t_end = 0.0;   // s
};

/// tau = (I / hbar) c^3 / (L R^2 Omega^3), prefactor 1. Cylinders only.
double spin_down_timescale(const SpinDownScenario& scenario);
double spin_down_timescale(double moment_of_inertia, double length, double radius,
                           double Omega);

using PowerFunction = std::function<double(double Omega)>;

/// Lazily tabulates P on the log grid Omega_k = Omega_top 10^(-k / points_per_decade),
/// k >= 0, and interpolates with a 4-node cubic in log Omega. Where the four
/// nodes are all positive the cubic is built for log P, so power laws are
/// reproduced exactly.
class MemoizedPower {
 public:
  MemoizedPower(PowerFunction exact, double Omega_top, int points_per_decade = 40);

  double operator()(double Omega);

  std::size_t evaluations() const { return table_.size(); }

 private:
  double node(int k) const;
  double value(int k);

  PowerFunction exact_;
  double Omega_top_;
  double step_;  // ln spacing between nodes
  std::map<int, double> table_;
};

struct SpinDownConfig {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;  // rad/s; 0 selects rel_tol * Omega0 * 1e-3
  // Upper bound on |dOmega|/Omega per accepted step. Keeps the trapezoid
  // energy bookkeeping accurate along the trajectory.
  double max_relative_change = 2.5e-4;
  long max_steps = 5'000'000;
  int memo_points_per_decade = 40;
  bool memoize = true;
  quad::QuadratureConfig quadrature{};
  scattering::RegimeOptions regime{};
};

struct TrajectoryPoint {
  double t = 0.0;      // s
  double Omega = 0.0;  // rad/s
  double P = 0.0;      // W
};

struct SpinDownResult {
  std::vector<TrajectoryPoint> trajectory;
  std::optional<double> t10;  // time at which Omega = Omega0 / 10
  long accepted_steps = 0;
  long rejected_steps = 0;
  std::size_t power_evaluations = 0;
};

/// P(Omega) of the scenario's body at zero temperature.
PowerFunction radiated_power(const SpinDownScenario& scenario, const SpinDownConfig& cfg);

/// Dormand-Prince 5(4) integration of I Omega dOmega/dt = -P(Omega).
SpinDownResult integrate_spin_down(const SpinDownScenario& scenario,
                                   const SpinDownConfig& cfg = {});

SpinDownResult integrate_spin_down(const PowerFunction& power, double moment_of_inertia,
                                   double Omega0, double t_end,
                                   const SpinDownConfig& cfg = {});

/// trapezoid integral of P over the trajectory
double radiated_energy(const std::vector<TrajectoryPoint>& trajectory);

}  // namespace rotrad::dynamics
