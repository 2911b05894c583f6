#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "rotrad/cli.hpp"
#include "rotrad/constants.hpp"
#include "rotrad/dynamics.hpp"
#include "rotrad/error.hpp"
#include "rotrad/interactions.hpp"
#include "rotrad/radiation.hpp"
#include "rotrad/special_waves.hpp"
#include "rotrad/statistics.hpp"

namespace rotrad::cli {

using nlohmann::json;
namespace rad = radiation;

namespace {

// Exit statuses.
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kPhysics = 2;
constexpr int kVerifyFailed = 3;

class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error("io", msg) {}
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw IoError("failed writing " + path.string());
}

/// Sends the artifact to --out when given, to stdout otherwise.
void emit(const ScenarioConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output_path) write_file(*cfg.output_path, text);
  else out << text;
}

scattering::RegimeOptions regime(const ScenarioConfig& cfg) {
  scattering::RegimeOptions r;
  r.override_guard = cfg.override_regime_guard;
  return r;
}

rad::DeficiencyMode mode(const ScenarioConfig& cfg) {
  return cfg.full_s ? rad::DeficiencyMode::FullS : rad::DeficiencyMode::LinearInT;
}

stats::ThermalState thermal(const ScenarioConfig& cfg) {
  return {cfg.T_body_K, cfg.T_env_K, cfg.omega_rad_s};
}

std::unique_ptr<rad::ChannelProvider> make_provider(const ScenarioConfig& cfg) {
  switch (cfg.shape) {
    case Shape::Sphere:
      return std::make_unique<rad::SphereChannels>(cfg.material, cfg.radius_m, cfg.omega_rad_s,
                                                   regime(cfg), mode(cfg));
    case Shape::Cylinder:
      return std::make_unique<rad::CylinderChannels>(
          cfg.material, cfg.radius_m, cfg.length_m, cfg.omega_rad_s,
          regime(cfg), mode(cfg));
    case Shape::Tabulated:
      return std::make_unique<rad::TabulatedChannels>(
          scattering::load_tabulated_channels(cfg.channels_path));
  }
  throw UnsupportedError("unknown body shape");
}

rad::RadiationResult compute_power(const ScenarioConfig& cfg, int spectrum_samples) {
  rad::EngineOptions engine{cfg.threads, spectrum_samples};
  const auto state = thermal(cfg);
  if (cfg.shape == Shape::Sphere) {
    rad::SphereOptions opts;
    opts.regime = regime(cfg);
    opts.mode = mode(cfg);
    opts.engine = engine;
    return rad::power_sphere(cfg.material, cfg.radius_m, state, cfg.quadrature, opts);
  }
  if (cfg.shape == Shape::Cylinder && state.zero_temperature()) {
    rad::CylinderOptions opts;
    opts.regime = regime(cfg);
    opts.mode = mode(cfg);
    opts.engine = engine;
    return rad::power_cylinder(cfg.material, cfg.radius_m, cfg.length_m, cfg.omega_rad_s,
                               cfg.quadrature, opts);
  }
  const auto provider = make_provider(cfg);
  return rad::trace_power(*provider, state, cfg.quadrature, engine);
}

std::string spectrum_csv(const std::vector<rad::SpectrumSample>& rows) {
  std::string s = "omega_rad_s,dP_domega_W_per_rad_s,dN_domega_per_s_per_rad_s,channel_m,channel_P\n";
  for (const auto& r : rows)
    s += fmt::format("{},{},{},{},{}\n", r.omega, r.dP_domega, r.dN_domega, r.channel.m,
                     scattering::to_string(r.channel.pols));
  return s;
}

json spectrum_json(const std::vector<rad::SpectrumSample>& rows) {
  json arr = json::array();
  for (const auto& r : rows)
    arr.push_back({{"omega_rad_s", r.omega},
                   {"dP_domega_W_per_rad_s", r.dP_domega},
                   {"dN_domega_per_s_per_rad_s", r.dN_domega},
                   {"channel_m", r.channel.m},
                   {"channel_P", scattering::to_string(r.channel.pols)}});
  return arr;
}

json channel_json(const scattering::ChannelId& id) {
  json j{{"m", id.m}, {"polarizations", scattering::to_string(id.pols)}};
  j["l"] = id.l ? json(*id.l) : json(nullptr);
  j["kz"] = id.kz ? json(*id.kz) : json(nullptr);
  return j;
}

// ------------------------------------------------------------------ power

int cmd_power(const ScenarioConfig& cfg, std::ostream& out) {
  const int samples = cfg.spectrum_path ? cfg.spectrum_samples : 0;
  const auto res = compute_power(cfg, samples);
  if (cfg.spectrum_path) write_file(*cfg.spectrum_path, spectrum_csv(res.spectrum));

  std::string text;
  if (cfg.format == "json") {
    json j;
    j["omega_rad_s"] = cfg.omega_rad_s;
    j["total_power_W"] = res.total_power;
    j["quadrature_error_W"] = res.quadrature_error;
    if (res.closed_form_power) j["closed_form_power_W"] = *res.closed_form_power;
    if (res.path_relative_difference) j["path_relative_difference"] = *res.path_relative_difference;
    json chans = json::array();
    for (const auto& [id, p] : res.per_channel) {
      auto c = channel_json(id);
      c["P_W"] = p;
      chans.push_back(c);
    }
    j["channels"] = chans;
    j["truncation"] = {{"highest_m", res.truncation.highest_m},
                       {"levels_evaluated", res.truncation.levels_evaluated},
                       {"truncated", res.truncation.truncated},
                       {"kz_nodes", res.truncation.kz_nodes}};
    text = j.dump(2) + "\n";
  } else {
    text = "quantity,value\n";
    text += fmt::format("omega_rad_s,{}\n", cfg.omega_rad_s);
    text += fmt::format("total_power_W,{}\n", res.total_power);
    text += fmt::format("quadrature_error_W,{}\n", res.quadrature_error);
    if (res.closed_form_power) text += fmt::format("closed_form_power_W,{}\n", *res.closed_form_power);
    if (res.path_relative_difference)
      text += fmt::format("path_relative_difference,{}\n", *res.path_relative_difference);
    text += fmt::format("highest_m,{}\n", res.truncation.highest_m);
    for (const auto& [id, p] : res.per_channel)
      text += fmt::format("P_W[{}],{}\n", id.label(), p);
  }
  emit(cfg, text, out);
  if (cfg.output_path) out << fmt::format("P = {} W\n", res.total_power);
  return kOk;
}

// ------------------------------------------------------------------ spectrum

int cmd_spectrum(const ScenarioConfig& cfg, std::ostream& out) {
  const auto provider = make_provider(cfg);
  const auto rows = rad::sample_spectrum(*provider, thermal(cfg), cfg.spectrum_samples);
  const std::string text =
      cfg.format == "json" ? spectrum_json(rows).dump(2) + "\n" : spectrum_csv(rows);
  emit(cfg, text, out);
  if (cfg.spectrum_path && !cfg.output_path) write_file(*cfg.spectrum_path, spectrum_csv(rows));
  return kOk;
}

// ------------------------------------------------------------------ torque

struct SweepRow {
  double d = 0.0;
  double Omega = 0.0;
  interactions::InteractionResult r;
};

int cmd_torque(const ScenarioConfig& cfg, std::ostream& out) {
  if (cfg.shape != Shape::Sphere)
    throw UnsupportedError("torque needs a sphere rotator (its l = 1, m = 1 electric channel)");
  if (!cfg.test_object) throw ParseError("config: key 'torque.test_object': missing");
  if (cfg.separations_m.empty()) throw ParseError("config: key 'torque.separations_m': missing");
  if (cfg.T_body_K != 0.0 || cfg.T_env_K != 0.0)
    throw UnsupportedError("torque and force are computed at zero temperature only");

  std::vector<double> omegas = cfg.torque_omegas_rad_s;
  if (omegas.empty()) omegas.push_back(cfg.omega_rad_s);

  std::vector<SweepRow> rows;
  for (double d : cfg.separations_m)
    for (double W : omegas) rows.push_back({d, W, {}});
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.d, a.Omega) < std::tie(b.d, b.Omega);
  });

  const interactions::TestObject test{cfg.test_object->material, cfg.test_object->radius_m};
  interactions::ForceOptions fopts;
  fopts.regime = regime(cfg);
  auto work = [&](std::size_t i) {
    auto& row = rows[i];
    const auto rot = interactions::sphere_rotator(cfg.material, cfg.radius_m, row.Omega, fopts.regime);
    row.r = interactions::interaction(rot, test, row.d, cfg.quadrature, fopts);
  };
  const std::size_t n = rows.size();
  const std::size_t workers = std::min<std::size_t>(std::max(cfg.threads, 1), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
  } else {
    std::vector<std::future<void>> futs;
    for (std::size_t w = 0; w < workers; ++w)
      futs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < n; i += workers) work(i);
      }));
    for (auto& f : futs) f.get();
  }

  std::string text;
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"d_m", r.d}, {"Omega_rad_s", r.Omega}, {"M_Nm", r.r.torque_M}, {"Fy_N", r.r.force_Fy}});
    text = json{{"rows", arr}}.dump(2) + "\n";
  } else {
    text = "d_m,Omega_rad_s,M_Nm,Fy_N\n";
    for (const auto& r : rows)
      text += fmt::format("{},{},{},{}\n", r.d, r.Omega, r.r.torque_M, r.r.force_Fy);
  }
  emit(cfg, text, out);
  return kOk;
}

// ------------------------------------------------------------------ spindown

int cmd_spindown(const ScenarioConfig& cfg, std::ostream& out) {
  if (cfg.moment_of_inertia_kg_m2 <= 0.0)
    throw ParseError("config: key 'spindown.moment_of_inertia_kg_m2': missing");
  dynamics::SpinDownScenario sc;
  if (cfg.shape == Shape::Sphere) sc.body = dynamics::SphereBody{cfg.radius_m};
  else if (cfg.shape == Shape::Cylinder) sc.body = dynamics::CylinderBody{cfg.radius_m, cfg.length_m};
  else throw UnsupportedError("spin-down needs a sphere or cylinder body");
  sc.moment_of_inertia = cfg.moment_of_inertia_kg_m2;
  sc.model = cfg.material;
  sc.Omega0 = cfg.omega_rad_s;
  sc.t_end = cfg.t_end_s.value_or(std::numeric_limits<double>::infinity());

  dynamics::SpinDownConfig dc;
  dc.quadrature = cfg.quadrature;
  dc.regime = regime(cfg);
  const auto res = dynamics::integrate_spin_down(sc, dc);
  std::optional<double> tau;
  if (cfg.shape == Shape::Cylinder) tau = dynamics::spin_down_timescale(sc);

  std::string text;
  if (cfg.format == "json") {
    json j;
    j["t10_s"] = res.t10 ? json(*res.t10) : json(nullptr);
    j["timescale_s"] = tau ? json(*tau) : json(nullptr);
    json arr = json::array();
    for (const auto& p : res.trajectory)
      arr.push_back({{"t_s", p.t}, {"Omega_rad_s", p.Omega}, {"P_W", p.P}});
    j["trajectory"] = arr;
    text = j.dump(2) + "\n";
  } else {
    text = "t_s,Omega_rad_s,P_W\n";
    for (const auto& p : res.trajectory) text += fmt::format("{},{},{}\n", p.t, p.Omega, p.P);
  }
  emit(cfg, text, out);
  if (cfg.output_path) {
    if (res.t10) out << fmt::format("t10 = {} s\n", *res.t10);
    if (tau) out << fmt::format("tau estimate = {} s\n", *tau);
  }
  return kOk;
}

// ------------------------------------------------------------------ verify

struct Check {
  std::string suite;
  bool passed = false;
  std::string detail;
};

Check check_flux(const ScenarioConfig& cfg) {
  const double w = cfg.omega_rad_s > 0.0 ? cfg.omega_rad_s : 1e15;
  std::vector<waves::WaveIndex> idx;
  for (int l = 1; l <= waves::kMaxWaveOrder; ++l)
    for (int m = -l; m <= l; ++m)
      for (auto p : {waves::Polarization::M, waves::Polarization::E}) idx.push_back({l, m, p});
  double worst = 0.0;
  int pairs = 0;
  for (double kr : {1.0, 2.0, 5.0}) {
    const double r = kr * constants::c / w;
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b) {
        const auto v = waves::flux_bracket(idx[a], idx[b], w, r);
        worst = std::max(worst, std::abs(v - (a == b ? 1.0 : 0.0)));
        ++pairs;
      }
  }
  return {"flux-identity", worst < 1e-8,
          fmt::format("max |bracket - delta| = {:.3e} over {} pairs at r = 1, 2, 5 c/omega", worst, pairs)};
}

double im_response(const materials::DielectricModel& m, double w) {
  if (materials::is_toy(m))
    return materials::response_factor(materials::ResponseKind::SphereAlphaOverR3, m, w).value.imag();
  return materials::epsilon(m, w).imag();
}

Check check_oddness(const ScenarioConfig& cfg) {
  double lo = 0.0, hi = cfg.omega_rad_s > 0.0 ? 2.0 * cfg.omega_rad_s : 1e15;
  if (const auto* tab = std::get_if<materials::Tabulated>(&cfg.material)) {
    lo = tab->omega().front();
    hi = tab->omega().back();
  }
  constexpr int n = 200;
  double worst = 0.0;
  auto odd = [&](double f_pos, double f_neg) {
    const double scale = std::max(1.0, std::abs(f_pos));
    worst = std::max(worst, std::abs(f_pos + f_neg) / scale);
  };
  for (int k = 1; k <= n; ++k) {
    const double w = lo + (hi - lo) * k / n;
    odd(im_response(cfg.material, w), im_response(cfg.material, -w));
    odd(materials::sphere_polarizability(cfg.material, 1.0, w).imag(),
        materials::sphere_polarizability(cfg.material, 1.0, -w).imag());
  }
  const double T = cfg.T_body_K > 0.0 ? cfg.T_body_K : 300.0;
  const double w_T = constants::k_B * T / constants::hbar;
  for (int k = 1; k <= n; ++k) {
    const double w = w_T * 20.0 * k / n;
    odd(stats::source_weight(w, T) / constants::hbar, stats::source_weight(-w, T) / constants::hbar);
    const double np = stats::bose_occupation(w, T);
    const double nm = stats::bose_occupation(-w, T);
    worst = std::max(worst, std::abs(nm + 1.0 + np) / std::max(1.0, std::abs(np)));
  }
  return {"oddness", worst < 1e-12,
          fmt::format("max relative violation = {:.3e} (Im eps, Im alpha, a_T, n_T(-w) = -1 - n_T(w))", worst)};
}

bool lossy_in_window(const ScenarioConfig& cfg) {
  const double w = -0.5 * cfg.omega_rad_s;
  if (cfg.shape == Shape::Cylinder)
    return materials::cylinder_surface_factor(cfg.material, w).imag() != 0.0;
  return materials::sphere_polarizability(cfg.material, 1.0, w).imag() != 0.0;
}

Check check_window(const ScenarioConfig& cfg) {
  const double W = cfg.omega_rad_s;
  if (W <= 0.0) return {"window", true, "skipped: body does not rotate"};
  const auto provider = make_provider(cfg);
  const bool lossy = cfg.shape != Shape::Tabulated && lossy_in_window(cfg);
  int above = 0, below = 0, bad_above = 0, bad_below = 0;
  for (const auto& ch : provider->channels()) {
    const double edge = W * ch.m;
    const double top = 2.0 * W * std::max(1, std::abs(ch.m));
    constexpr int n = 1000;
    for (int k = 0; k < n; ++k) {
      const double w = top * (k + 0.5) / n;
      const double dN = rad::photon_spectrum(*provider, ch, W, w);
      if (w > edge) {
        ++above;
        if (dN != 0.0) ++bad_above;
      } else if (w < edge) {
        ++below;
        if (dN < 0.0 || (lossy && !(dN > 0.0))) ++bad_below;
      }
    }
  }
  return {"window", bad_above == 0 && bad_below == 0,
          fmt::format("{} of {} points above omega = Omega m emit; {} of {} points inside the window "
                      "fail |S|^2 {} 1",
                      bad_above, above, bad_below, below, lossy ? ">" : ">=")};
}

Check check_paths(const ScenarioConfig& cfg) {
  if (cfg.shape == Shape::Tabulated) return {"path-consistency", true, "skipped: no closed form for tabulated channels"};
  ScenarioConfig zero = cfg;
  zero.T_body_K = zero.T_env_K = 0.0;
  zero.full_s = false;
  try {
    const auto res = compute_power(zero, 0);
    const double diff = res.path_relative_difference.value_or(0.0);
    return {"path-consistency", true,
            fmt::format("trace vs closed form relative difference = {:.3e}", diff)};
  } catch (const ConsistencyError& e) {
    return {"path-consistency", false, e.what()};
  }
}

int cmd_verify(const ScenarioConfig& cfg, std::ostream& out) {
  const std::vector<Check> checks{check_flux(cfg), check_oddness(cfg), check_window(cfg),
                                  check_paths(cfg)};
  const bool ok = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  std::string text;
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& c : checks) arr.push_back({{"suite", c.suite}, {"passed", c.passed}, {"detail", c.detail}});
    text = json{{"passed", ok}, {"checks", arr}}.dump(2) + "\n";
  } else {
    for (const auto& c : checks) text += fmt::format("{} {}: {}\n", c.passed ? "PASS" : "FAIL", c.suite, c.detail);
  }
  emit(cfg, text, out);
  return ok ? kOk : kVerifyFailed;
}

void print_constants(std::ostream& out) {
  out << fmt::format("hbar_J_s,{}\nc_m_per_s,{}\nk_B_J_per_K,{}\n", constants::hbar, constants::c,
                     constants::k_B);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radiation, torque and spin-down of slowly rotating bodies", "rotrad"};
  std::string config_path, out_path, format;
  bool override_guard = false, show_constants = false;
  int threads = 0;
  app.add_option("--config", config_path, "scenario JSON file")->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "write the artifact here instead of stdout");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--override-regime-guard", override_guard, "compute outside the small-body regime");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--constants", show_constants, "print the compiled-in physical constants");

  struct Sub {
    const char* name;
    const char* help;
    int (*fn)(const ScenarioConfig&, std::ostream&);
  };
  const Sub subs[] = {
      {"power", "radiated power and per-channel breakdown", cmd_power},
      {"spectrum", "radiated power and photon spectra", cmd_spectrum},
      {"torque", "torque and shear force on a static test sphere", cmd_torque},
      {"spindown", "spin-down trajectory Omega(t)", cmd_spindown},
      {"verify", "self-verification suites", cmd_verify},
  };
  for (const auto& s : subs) app.add_subcommand(s.name, s.help)->fallthrough();
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  if (show_constants) {
    print_constants(out);
    return kOk;
  }
  if (app.get_subcommands().empty()) {
    err << app.help();
    return kUsage;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (config_path.empty()) throw ParseError("--config is required for '" + name + "'");
    ScenarioConfig cfg = load_config(config_path);
    if (!out_path.empty()) cfg.output_path = out_path;
    if (!format.empty()) cfg.format = format;
    if (override_guard) cfg.override_regime_guard = true;
    if (threads > 0) cfg.threads = threads;
    for (const auto& s : subs)
      if (name == s.name) return s.fn(cfg, out);
    return kUsage;
  } catch (const ParseError& e) {
    err << "error [" << e.code() << "]: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error [" << e.code() << "]: " << e.what() << "\n";
    return kPhysics;
  } catch (const std::exception& e) {
    err << "error [internal]: " << e.what() << "\n";
    return kPhysics;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("rotrad");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace rotrad::cli
