#include "rotrad/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "rotrad/constants.hpp"
#include "rotrad/error.hpp"
#include "rotrad/radiation.hpp"

namespace rotrad::dynamics {

using constants::c;
using constants::hbar;

double spin_down_timescale(double moment_of_inertia, double length, double radius,
                           double Omega) {
  if (!(moment_of_inertia > 0.0)) throw DomainError("moment of inertia must be > 0");
  if (!(length > 0.0) || !(radius > 0.0)) throw DomainError("cylinder dimensions must be > 0");
  if (!(Omega > 0.0)) throw DomainError("angular velocity must be > 0");
  return moment_of_inertia / hbar * c * c * c / (length * radius * radius * Omega * Omega * Omega);
}

double spin_down_timescale(const SpinDownScenario& s) {
  const auto* cyl = std::get_if<CylinderBody>(&s.body);
  if (!cyl) throw UnsupportedError("spin-down timescale estimate is defined for cylinders only");
  return spin_down_timescale(s.moment_of_inertia, cyl->length, cyl->radius, s.Omega0);
}

// ---------------------------------------------------------------- memo

MemoizedPower::MemoizedPower(PowerFunction exact, double Omega_top, int points_per_decade)
    : exact_(std::move(exact)), Omega_top_(Omega_top) {
  if (!(Omega_top > 0.0)) throw DomainError("memoized power needs Omega_top > 0");
  if (points_per_decade < 2) throw DomainError("points_per_decade must be >= 2");
  step_ = std::log(10.0) / points_per_decade;
}

double MemoizedPower::node(int k) const { return Omega_top_ * std::exp(-step_ * k); }

double MemoizedPower::value(int k) {
  auto it = table_.find(k);
  if (it != table_.end()) return it->second;
  const double p = exact_(node(k));
  table_.emplace(k, p);
  return p;
}

double MemoizedPower::operator()(double Omega) {
  if (!(Omega > 0.0)) return exact_(Omega);
  // Position in grid units; nodes sit at integer s, s grows as Omega falls.
  const double s = std::log(Omega_top_ / Omega) / step_;
  const int k0 = std::max(0, static_cast<int>(std::floor(s)) - 1);
  std::array<double, 4> x{}, y{};
  bool all_positive = true;
  for (int j = 0; j < 4; ++j) {
    x[j] = static_cast<double>(k0 + j);
    y[j] = value(k0 + j);
    if (!(y[j] > 0.0)) all_positive = false;
  }
  if (all_positive)
    for (auto& v : y) v = std::log(v);
  double r = 0.0;
  for (int j = 0; j < 4; ++j) {
    double w = 1.0;
    for (int i = 0; i < 4; ++i)
      if (i != j) w *= (s - x[i]) / (x[j] - x[i]);
    r += w * y[j];
  }
  return all_positive ? std::exp(r) : r;
}

// ---------------------------------------------------------------- power

PowerFunction radiated_power(const SpinDownScenario& scenario, const SpinDownConfig& cfg) {
  if (const auto* cyl = std::get_if<CylinderBody>(&scenario.body)) {
    radiation::CylinderOptions opts;
    opts.regime = cfg.regime;
    return [model = scenario.model, body = *cyl, qc = cfg.quadrature, opts](double Omega) {
      if (Omega <= 0.0) return 0.0;
      return radiation::power_cylinder(model, body.radius, body.length, Omega, qc, opts)
          .total_power;
    };
  }
  const auto sph = std::get<SphereBody>(scenario.body);
  radiation::SphereOptions opts;
  opts.regime = cfg.regime;
  return [model = scenario.model, body = sph, qc = cfg.quadrature, opts](double Omega) {
    if (Omega <= 0.0) return 0.0;
    return radiation::power_sphere(model, body.radius, stats::ThermalState{0.0, 0.0, Omega},
                                   qc, opts)
        .total_power;
  };
}

// ---------------------------------------------------------------- integrator

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

struct StepResult {
  double y;
  double f_end;  // derivative at the new point (FSAL)
  double err;
};

template <class F>
StepResult dopri_step(F& f, double y, double k1, double h) {
  const double k2 = f(y + h * a21 * k1);
  const double k3 = f(y + h * (a31 * k1 + a32 * k2));
  const double k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
  const double k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  const double k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  const double yn = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const double k7 = f(yn);
  const double err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  return {yn, k7, err};
}

double hermite(double y0, double f0, double y1, double f1, double h, double theta) {
  const double t2 = theta * theta, t3 = t2 * theta;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + theta) * h * f0 +
         (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * f1;
}

}  // namespace

SpinDownResult integrate_spin_down(const PowerFunction& power, double I, double Omega0,
                                   double t_end, const SpinDownConfig& cfg) {
  if (!(I > 0.0)) throw DomainError("moment of inertia must be > 0");
  if (!(Omega0 > 0.0)) throw DomainError("initial angular velocity must be > 0");
  if (!(t_end > 0.0)) throw DomainError("t_end must be > 0");
  if (!(cfg.rel_tol > 0.0) || !(cfg.max_relative_change > 0.0))
    throw DomainError("spin-down tolerances must be > 0");

  std::optional<MemoizedPower> memo;
  if (cfg.memoize) memo.emplace(power, Omega0, cfg.memo_points_per_decade);
  auto P = [&](double W) { return memo ? (*memo)(W) : power(W); };
  auto rhs = [&](double W) { return W > 0.0 ? -P(W) / (I * W) : 0.0; };

  const bool until_t10 = std::isinf(t_end);
  const double target = Omega0 / 10.0;
  const double atol = cfg.abs_tol > 0.0 ? cfg.abs_tol : cfg.rel_tol * Omega0 * 1e-3;

  SpinDownResult out;
  double t = 0.0, W = Omega0;
  double k1 = rhs(W);
  out.trajectory.push_back({t, W, -k1 * I * W});
  if (until_t10 && !(k1 < 0.0))
    throw DomainError("body does not lose energy; Omega never reaches Omega0/10");

  auto cap = [&](double W_, double f_) {
    return std::abs(f_) > 0.0 ? cfg.max_relative_change * W_ / std::abs(f_)
                              : std::numeric_limits<double>::infinity();
  };
  double h = std::min(cap(W, k1), until_t10 ? std::numeric_limits<double>::infinity() : t_end);
  if (std::isinf(h)) h = t_end;

  while (until_t10 ? !out.t10.has_value() : t < t_end) {
    if (out.accepted_steps + out.rejected_steps >= cfg.max_steps)
      throw StiffnessError("spin-down integration exceeded the step budget");
    h = std::min(h, cap(W, k1));
    if (!until_t10) h = std::min(h, t_end - t);
    if (h <= 1e-14 * std::max(t, 1e-300)) {
      std::ostringstream os;
      os << "step size underflow at t = " << t << " s (h = " << h << " s)";
      throw StiffnessError(os.str());
    }
    const auto st = dopri_step(rhs, W, k1, h);
    const double scale = atol + cfg.rel_tol * std::max(std::abs(W), std::abs(st.y));
    const double ratio = std::abs(st.err) / scale;
    const bool changed_too_much = std::abs(st.y - W) > 1.5 * cfg.max_relative_change * W;
    if (ratio > 1.0 || changed_too_much || !std::isfinite(st.y)) {
      ++out.rejected_steps;
      h *= std::isfinite(ratio) ? std::clamp(0.9 * std::pow(ratio, -0.2), 0.1, 0.5) : 0.1;
      continue;
    }
    ++out.accepted_steps;

    if (!out.t10 && W > target && st.y <= target) {
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        (hermite(W, k1, st.y, st.f_end, h, mid) > target ? lo : hi) = mid;
      }
      out.t10 = t + 0.5 * (lo + hi) * h;
      if (until_t10) {
        // Land exactly on t10 with a regular step.
        const double hs = *out.t10 - t;
        const auto fin = hs > 0.0 ? dopri_step(rhs, W, k1, hs) : StepResult{W, k1, 0.0};
        out.trajectory.push_back({*out.t10, fin.y, -fin.f_end * I * fin.y});
        break;
      }
    }

    t += h;
    W = st.y;
    k1 = st.f_end;
    out.trajectory.push_back({t, W, -k1 * I * W});

    const double grow = ratio > 0.0 ? std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0) : 5.0;
    h *= grow;
  }
  out.power_evaluations = memo ? memo->evaluations() : 0;
  return out;
}

SpinDownResult integrate_spin_down(const SpinDownScenario& scenario, const SpinDownConfig& cfg) {
  return integrate_spin_down(radiated_power(scenario, cfg), scenario.moment_of_inertia,
                             scenario.Omega0, scenario.t_end, cfg);
}

double radiated_energy(const std::vector<TrajectoryPoint>& tr) {
  double e = 0.0;
  for (std::size_t i = 1; i < tr.size(); ++i)
    e += 0.5 * (tr[i].P + tr[i - 1].P) * (tr[i].t - tr[i - 1].t);
  return e;
}

}  // namespace rotrad::dynamics
