#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "rotrad/constants.hpp"
#include "rotrad/error.hpp"
#include "rotrad/radiation.hpp"

using namespace rotrad;
using namespace rotrad::radiation;
using constants::c;
using constants::hbar;
using constants::k_B;
using constants::pi;
using scattering::ChannelId;
using scattering::PolContent;
using stats::ThermalState;

namespace {

const materials::Drude gold{1.37e16, 4.05e13};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Provider with user-defined 1x1 channels: deficiency(m, w).
class ScalarChannels final : public ChannelProvider {
 public:
  ScalarChannels(std::vector<int> ms, std::function<double(int, double)> d,
                 std::vector<double> kinks = {})
      : ms_(std::move(ms)), d_(std::move(d)), kinks_(std::move(kinks)) {}

  std::vector<ChannelId> channels() const override {
    std::vector<ChannelId> out;
    for (int m : ms_) out.push_back(ChannelId{m, std::nullopt, PolContent::E, std::nullopt});
    return out;
  }
  double deficiency_trace(const ChannelId& ch, double w) const override { return d_(ch.m, w); }
  std::vector<double> breakpoints(const ChannelId&) const override { return kinks_; }

 private:
  std::vector<int> ms_;
  std::function<double(int, double)> d_;
  std::vector<double> kinks_;
};

// Independent composite Gauss-Legendre oracle on [a, b].
double gl_oracle(const std::function<double(double)>& f, double a, double b, int pieces = 2000) {
  static const double x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                              0.5384693101056831, 0.9061798459386640};
  static const double w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                              0.4786286704993665, 0.2369268850561891};
  double s = 0.0;
  const double h = (b - a) / pieces;
  for (int p = 0; p < pieces; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int i = 0; i < 5; ++i) s += w[i] * f(mid + 0.5 * h * x[i]);
  }
  return 0.5 * h * s;
}

}  // namespace

TEST_CASE("identity S gives zero power") {
  ScalarChannels none({-2, -1, 0, 1, 2}, [](int, double) { return 0.0; });
  const auto r = trace_power(none, ThermalState{300.0, 10.0, 1e14}, {});
  CHECK(r.total_power == 0.0);
}

TEST_CASE("equilibrium of a static body radiates nothing") {
  const auto r = static_radiation(gold, 5e-9, ThermalState{300.0, 300.0, 0.0}, {});
  CHECK(r.total_power == 0.0);
  SphereChannels sc(gold, 5e-9, 0.0);
  CHECK(trace_power(sc, ThermalState{0.0, 0.0, 0.0}, {}).total_power == 0.0);
}

TEST_CASE("single channel with |S|^2 - 1 = kappa w^3 (Omega - w)/c^3 matches the antiderivative") {
  const double Omega = 2e15, kappa = 1e-5;
  auto g = [&](double w) { return kappa * w * w * w * (Omega - w) / (c * c * c); };
  ScalarChannels one({1}, [&](int, double w) { return -g(w); });
  const auto r = trace_power(one, ThermalState{0.0, 0.0, Omega}, {});
  const double oracle = hbar * kappa * std::pow(Omega, 6) / (60.0 * pi * c * c * c);
  CHECK(rel(r.total_power, oracle) < 1e-9);

  const ChannelId ch{1, std::nullopt, PolContent::E, std::nullopt};
  for (double w : {0.1 * Omega, 0.5 * Omega, 0.99 * Omega}) CHECK(rel(photon_spectrum(one, ch, Omega, w), g(w)) < 1e-15);
  CHECK(photon_spectrum(one, ch, Omega, 1.01 * Omega) == 0.0);
  const double from_spectrum =
      gl_oracle([&](double w) { return hbar * w / (2.0 * pi) * photon_spectrum(one, ch, Omega, w); }, 0.0, Omega);
  CHECK(rel(from_spectrum, r.per_channel.at(ch)) < 1e-12);
}

TEST_CASE("sphere toy: power matches 2 hbar A R^3 Omega^6 / (45 pi c^3)") {
  const double A = 1e-18, R = 1e-9, Omega = 1e15;
  const materials::LinearLossToy toy{A};
  const auto r = power_sphere(toy, R, ThermalState{0.0, 0.0, Omega}, {});
  const double oracle = 2.0 * hbar * A * R * R * R * std::pow(Omega, 6) / (45.0 * pi * c * c * c);
  CHECK(rel(r.total_power, oracle) < 1e-9);
  REQUIRE(r.closed_form_power.has_value());
  CHECK(rel(*r.closed_form_power, oracle) < 1e-9);
  CHECK(*r.path_relative_difference < 1e-6);
}

TEST_CASE("sphere: vacuum, R^3 scaling and additivity") {
  const ThermalState s{0.0, 0.0, 1e15};
  CHECK(power_sphere(materials::vacuum(), 5e-9, s, {}).total_power == 0.0);
  const double p1 = power_sphere(gold, 4e-9, s, {}).total_power;
  const double p2 = power_sphere(gold, 2e-9, s, {}).total_power;
  CHECK(rel(p1, 8.0 * p2) < 1e-12);

  const auto r = power_sphere(gold, 4e-9, s, {});
  double sum = 0.0;
  for (const auto& [ch, p] : r.per_channel) sum += p;
  CHECK(rel(sum, r.total_power) < 1e-12);
}

TEST_CASE("sphere path consistency over three decades of Omega") {
  for (double Omega : {1e12, 1e13, 1e14, 1e15}) {
    const auto r = power_sphere(gold, 5e-9, ThermalState{0.0, 0.0, Omega}, {});
    REQUIRE(r.path_relative_difference.has_value());
    CHECK(*r.path_relative_difference < 1e-6);
    CHECK(r.total_power > 0.0);
  }
}

TEST_CASE("cylinder toy: power matches hbar L R^2 A Omega^6 / (45 pi c^3)") {
  const double A = 1e-18, R = 1e-9, L = 1e-6, Omega = 3e15;
  const materials::LinearLossToy toy{A};
  const auto r = power_cylinder(toy, R, L, Omega, {});
  const double oracle = hbar * L * R * R * A * std::pow(Omega, 6) / (45.0 * pi * c * c * c);
  CHECK(rel(r.total_power, oracle) < 1e-9);
  CHECK(rel(*r.closed_form_power, oracle) < 1e-9);
  CHECK(r.truncation.kz_nodes == 32);
  const auto r2 = power_cylinder(toy, R, 2.0 * L, Omega, {});
  CHECK(rel(r2.total_power, 2.0 * r.total_power) < 1e-12);
}

TEST_CASE("cylinder: kz-integrated linear path equals the closed form for a metal") {
  const auto r = power_cylinder(gold, 3e-9, 1e-6, 1e15, {});
  CHECK(*r.path_relative_difference < 1e-8);
}

TEST_CASE("cylinder: full-S minus linear-in-T shrinks as R^2") {
  const double A = 2e-17, L = 1e-6, Omega = 3e15;
  const materials::LinearLossToy toy{A};
  CylinderOptions full;
  full.mode = DeficiencyMode::FullS;
  auto gap = [&](double R) {
    const double lin = power_cylinder(toy, R, L, Omega, {}).total_power;
    const double fs = power_cylinder(toy, R, L, Omega, {}, full).total_power;
    return std::abs(fs - lin) / lin;
  };
  const double g1 = gap(4e-9), g2 = gap(2e-9);
  CHECK(g1 > 0.0);
  CHECK(std::abs(g1 / g2 - 4.0) < 1e-4);
}

TEST_CASE("window: zero spectrum rows above Omega m at T = 0") {
  const double Omega = 1e15;
  SphereChannels sc(gold, 5e-9, Omega);
  const auto rows = sample_spectrum(sc, ThermalState{0.0, 0.0, Omega}, 1000);
  REQUIRE(rows.size() == 3000);
  for (const auto& s : rows) {
    if (s.omega > Omega * s.channel.m) {
      CHECK(s.dN_domega == 0.0);
      CHECK(s.dP_domega == 0.0);
    } else {
      CHECK(s.dN_domega > 0.0);
    }
  }
}

TEST_CASE("static body hotter than its environment radiates") {
  const auto r = static_radiation(gold, 5e-9, ThermalState{600.0, 300.0, 0.0}, {});
  CHECK(r.total_power > 0.0);
  const auto cold = static_radiation(gold, 5e-9, ThermalState{300.0, 600.0, 0.0}, {});
  CHECK(cold.total_power < 0.0);
  CHECK_THROWS_AS(static_radiation(gold, 5e-9, ThermalState{600.0, 300.0, 1.0}, {}), DomainError);
}

TEST_CASE("static band emitter matches an independent quadrature") {
  const double T = 800.0, T0 = 300.0, eta = 0.3;
  const double w1 = 0.5 * k_B * T / hbar, w2 = 4.0 * k_B * T / hbar;
  ScalarChannels band({0}, [&](int, double w) { return (w > w1 && w < w2) ? eta : 0.0; }, {w1, w2});
  const auto r = static_radiation(band, ThermalState{T, T0, 0.0}, {});
  auto n = [](double w, double temp) { return 1.0 / std::expm1(hbar * w / (k_B * temp)); };
  const double oracle =
      hbar * eta / (2.0 * pi) * gl_oracle([&](double w) { return w * (n(w, T) - n(w, T0)); }, w1, w2);
  CHECK(rel(r.total_power, oracle) < 1e-9);
}

TEST_CASE("removable singularity at w = Omega m for T > 0") {
  const double Omega = 1e14;
  const ThermalState s{300.0, 300.0, Omega};
  const ChannelId ch{1, 1, PolContent::E, std::nullopt};
  for (const materials::DielectricModel& m : {materials::DielectricModel(gold),
                                              materials::DielectricModel(materials::LinearLossToy{1e-16})}) {
    SphereChannels sc(m, 5e-9, Omega);
    const double C = 10.0 * std::abs(trace_integrand(sc, ch, s, Omega * (1.0 + std::ldexp(1.0, -4))));
    for (int k = 4; k <= 20; ++k)
      for (double sign : {-1.0, 1.0}) {
        const double v = trace_integrand(sc, ch, s, Omega * (1.0 + sign * std::ldexp(1.0, -k)));
        CHECK(std::isfinite(v));
        CHECK(std::abs(v) <= C);
      }
  }
}

TEST_CASE("m truncation stops after two negligible levels") {
  // Level |m| contributes ~ 10^-(3|m|); levels 5 and 6 are below 1e-10 of the total.
  std::vector<int> ms;
  for (int m = 1; m <= 12; ++m) ms.push_back(m);
  const double Omega = 1e14;
  ScalarChannels decaying(ms, [&](int m, double) { return -std::pow(10.0, -3.0 * m); });
  const auto r = trace_power(decaying, ThermalState{0.0, 0.0, Omega}, {});
  CHECK(r.truncation.truncated);
  CHECK(r.truncation.highest_m == 6);
  CHECK(r.truncation.levels_evaluated == 6);

  // No truncation while the running total is still zero.
  ScalarChannels late(ms, [&](int m, double) { return m >= 9 ? -1.0 : 0.0; });
  const auto r2 = trace_power(late, ThermalState{0.0, 0.0, Omega}, {});
  CHECK(r2.total_power > 0.0);
  CHECK(r2.per_channel.count(ChannelId{9, std::nullopt, PolContent::E, std::nullopt}) == 1);
}

TEST_CASE("results do not depend on the thread count") {
  std::vector<int> ms{-3, -2, -1, 0, 1, 2, 3};
  const double Omega = 5e13;
  ScalarChannels many(ms, [&](int m, double w) {
    return (w - m * Omega) / Omega * (1.5 + std::sin(w / Omega + m)) * std::exp(-w / (3 * Omega));
  });
  const ThermalState s{400.0, 100.0, Omega};
  const auto a = trace_power(many, s, {}, EngineOptions{1, 0});
  const auto b = trace_power(many, s, {}, EngineOptions{4, 0});
  CHECK(a.total_power == b.total_power);
  CHECK(a.per_channel == b.per_channel);
  const auto ps1 = power_sphere(gold, 5e-9, ThermalState{0.0, 0.0, 1e15}, {}, SphereOptions{{}, {}, 1e-6, {1, 0}});
  const auto ps8 = power_sphere(gold, 5e-9, ThermalState{0.0, 0.0, 1e15}, {}, SphereOptions{{}, {}, 1e-6, {8, 0}});
  CHECK(ps1.total_power == ps8.total_power);
}

TEST_CASE("tabulated channels scatter only inside their band") {
  const double w1 = 2e14, w2 = 6e14, Omega = 1e15;
  const scattering::cplx s(1.02, 0.01);
  scattering::TabulatedChannel tc;
  tc.id = ChannelId{1, 1, PolContent::E, std::nullopt};
  tc.omega = {w1, 4e14, w2};
  tc.S.assign(3, Eigen::MatrixXcd::Constant(1, 1, s));
  TabulatedChannels tab(scattering::TabulatedChannelSet({tc}));
  CHECK(tab.deficiency_trace(tc.id, 1e14) == 0.0);
  CHECK(tab.deficiency_trace(tc.id, 7e14) == 0.0);
  const auto r = trace_power(tab, ThermalState{0.0, 0.0, Omega}, {});
  const double oracle = hbar / (2.0 * pi) * (std::norm(s) - 1.0) * (w2 * w2 - w1 * w1) / 2.0;
  CHECK(rel(r.total_power, oracle) < 1e-12);
}

TEST_CASE("quadrature failure surfaces as AccuracyError") {
  quad::QuadratureConfig q;
  q.max_panels = 1;
  q.rel_tol = 1e-15;
  CHECK_THROWS_AS(power_sphere(gold, 5e-9, ThermalState{300.0, 0.0, 1e15}, q), AccuracyError);
}

TEST_CASE("regime violations propagate") {
  CHECK_THROWS_AS(power_sphere(gold, 5e-8, ThermalState{0.0, 0.0, 1e15}, {}), RegimeError);
  SphereOptions ov;
  ov.regime.override_guard = true;
  CHECK_NOTHROW(power_sphere(gold, 5e-8, ThermalState{0.0, 0.0, 1e15}, {}, ov));
}
