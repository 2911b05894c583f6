#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rotrad/cli.hpp"
#include "rotrad/error.hpp"

namespace rotrad::cli {

using nlohmann::json;

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ParseError(source_ + ": key '" + key + "': " + what);
  }

  void only(const json& obj, const std::string& where, std::initializer_list<const char*> keys) const {
    if (!obj.is_object()) fail(where, "expected an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : obj.items())
      if (!allowed.count(k)) fail(join(where, k), "unknown key");
  }

  static std::string join(const std::string& where, const std::string& k) {
    return where.empty() ? k : where + "." + k;
  }

  double number(const json& obj, const std::string& where, const char* key) const {
    const auto& v = obj.at(key);
    if (!v.is_number()) fail(join(where, key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(join(where, key), "must be finite");
    return x;
  }

  double number_or(const json& obj, const std::string& where, const char* key, double dflt) const {
    return obj.contains(key) ? number(obj, where, key) : dflt;
  }

  double required(const json& obj, const std::string& where, const char* key) const {
    if (!obj.contains(key)) fail(join(where, key), "missing");
    return number(obj, where, key);
  }

  std::string string(const json& obj, const std::string& where, const char* key) const {
    if (!obj.contains(key)) fail(join(where, key), "missing");
    const auto& v = obj.at(key);
    if (!v.is_string()) fail(join(where, key), "expected a string");
    return v.get<std::string>();
  }

  bool boolean(const json& obj, const std::string& where, const char* key, bool dflt) const {
    if (!obj.contains(key)) return dflt;
    const auto& v = obj.at(key);
    if (!v.is_boolean()) fail(join(where, key), "expected true or false");
    return v.get<bool>();
  }

  int integer(const json& obj, const std::string& where, const char* key, int dflt) const {
    if (!obj.contains(key)) return dflt;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) fail(join(where, key), "expected an integer");
    return v.get<int>();
  }

  std::vector<double> numbers(const json& obj, const std::string& where, const char* key) const {
    std::vector<double> out;
    if (!obj.contains(key)) return out;
    const auto& v = obj.at(key);
    if (!v.is_array()) fail(join(where, key), "expected an array of numbers");
    for (const auto& x : v) {
      if (!x.is_number()) fail(join(where, key), "expected an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

materials::DielectricModel parse_material(const Reader& rd, const json& m, const std::string& where,
                                          const std::filesystem::path& base) {
  if (!m.is_object()) rd.fail(where, "expected an object");
  const std::string model = rd.string(m, where, "model");
  if (model == "vacuum") {
    rd.only(m, where, {"model"});
    return materials::vacuum();
  }
  if (model == "drude") {
    rd.only(m, where, {"model", "plasma_frequency_rad_s", "damping_rad_s"});
    const double wp = rd.required(m, where, "plasma_frequency_rad_s");
    const double g = rd.required(m, where, "damping_rad_s");
    if (wp < 0.0) rd.fail(where + ".plasma_frequency_rad_s", "must be >= 0");
    if (g < 0.0) rd.fail(where + ".damping_rad_s", "must be >= 0");
    return materials::Drude{wp, g};
  }
  if (model == "lorentz") {
    rd.only(m, where, {"model", "strength", "resonance_rad_s", "damping_rad_s"});
    const double f = rd.required(m, where, "strength");
    const double w0 = rd.required(m, where, "resonance_rad_s");
    const double g = rd.required(m, where, "damping_rad_s");
    if (f < 0.0) rd.fail(where + ".strength", "must be >= 0");
    if (w0 <= 0.0) rd.fail(where + ".resonance_rad_s", "must be > 0");
    if (g < 0.0) rd.fail(where + ".damping_rad_s", "must be >= 0");
    return materials::Lorentz{f, w0, g};
  }
  if (model == "constant_loss") {
    rd.only(m, where, {"model", "eps_real", "eps_imag"});
    const double er = rd.required(m, where, "eps_real");
    const double ei = rd.required(m, where, "eps_imag");
    if (ei < 0.0) rd.fail(where + ".eps_imag", "must be >= 0 (passive material)");
    return materials::ConstantLoss{er, ei};
  }
  if (model == "linear_loss_toy") {
    rd.only(m, where, {"model", "A_s"});
    const double A = rd.required(m, where, "A_s");
    if (A < 0.0) rd.fail(where + ".A_s", "must be >= 0 (passive material)");
    return materials::LinearLossToy{A};
  }
  if (model == "tabulated") {
    rd.only(m, where, {"model", "path"});
    return materials::Tabulated::load_csv(resolve(base, rd.string(m, where, "path")));
  }
  rd.fail(where + ".model", "unknown material model '" + model +
                                "' (vacuum, drude, lorentz, constant_loss, linear_loss_toy, tabulated)");
}

int line_of(std::string_view text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace

ScenarioConfig parse_config(std::string_view text, const std::string& source,
                            const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": invalid JSON: " + e.what(),
                     line_of(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  const Reader rd(source);
  rd.only(doc, "", {"body", "material", "omega_rad_s", "thermal", "quadrature", "deficiency_mode",
                    "spectrum", "torque", "spindown", "output", "threads",
                    "override_regime_guard"});
  ScenarioConfig cfg;

  if (!doc.contains("body")) rd.fail("body", "missing");
  const auto& body = doc.at("body");
  rd.only(body, "body", {"shape", "radius_m", "length_m", "channels_path"});
  const std::string shape = rd.string(body, "body", "shape");
  if (shape == "sphere") {
    cfg.shape = Shape::Sphere;
    cfg.radius_m = rd.required(body, "body", "radius_m");
  } else if (shape == "cylinder") {
    cfg.shape = Shape::Cylinder;
    cfg.radius_m = rd.required(body, "body", "radius_m");
    cfg.length_m = rd.required(body, "body", "length_m");
    if (cfg.length_m <= 0.0) rd.fail("body.length_m", "must be > 0");
  } else if (shape == "tabulated") {
    cfg.shape = Shape::Tabulated;
    cfg.radius_m = rd.number_or(body, "body", "radius_m", 0.0);
    cfg.channels_path = resolve(base_dir, rd.string(body, "body", "channels_path"));
  } else {
    rd.fail("body.shape", "unknown shape '" + shape + "' (sphere, cylinder, tabulated)");
  }
  if (cfg.shape != Shape::Tabulated && cfg.radius_m <= 0.0) rd.fail("body.radius_m", "must be > 0");

  if (doc.contains("material")) cfg.material = parse_material(rd, doc.at("material"), "material", base_dir);

  cfg.omega_rad_s = rd.number_or(doc, "", "omega_rad_s", 0.0);
  if (cfg.omega_rad_s < 0.0) rd.fail("omega_rad_s", "must be >= 0");

  if (doc.contains("thermal")) {
    const auto& th = doc.at("thermal");
    rd.only(th, "thermal", {"T_body_K", "T_env_K"});
    cfg.T_body_K = rd.number_or(th, "thermal", "T_body_K", 0.0);
    cfg.T_env_K = rd.number_or(th, "thermal", "T_env_K", 0.0);
    if (cfg.T_body_K < 0.0) rd.fail("thermal.T_body_K", "must be >= 0");
    if (cfg.T_env_K < 0.0) rd.fail("thermal.T_env_K", "must be >= 0");
  }

  if (doc.contains("quadrature")) {
    const auto& q = doc.at("quadrature");
    rd.only(q, "quadrature", {"rel_tol", "abs_floor", "max_panels"});
    cfg.quadrature.rel_tol = rd.number_or(q, "quadrature", "rel_tol", cfg.quadrature.rel_tol);
    cfg.quadrature.abs_floor = rd.number_or(q, "quadrature", "abs_floor", cfg.quadrature.abs_floor);
    cfg.quadrature.max_panels = rd.integer(q, "quadrature", "max_panels", cfg.quadrature.max_panels);
    if (cfg.quadrature.rel_tol <= 0.0) rd.fail("quadrature.rel_tol", "must be > 0");
    if (cfg.quadrature.max_panels < 1) rd.fail("quadrature.max_panels", "must be >= 1");
  }

  if (doc.contains("deficiency_mode")) {
    const std::string mode = rd.string(doc, "", "deficiency_mode");
    if (mode == "linear_in_T") cfg.full_s = false;
    else if (mode == "full_S") cfg.full_s = true;
    else rd.fail("deficiency_mode", "expected 'linear_in_T' or 'full_S'");
  }

  if (doc.contains("spectrum")) {
    const auto& s = doc.at("spectrum");
    rd.only(s, "spectrum", {"samples", "path"});
    cfg.spectrum_samples = rd.integer(s, "spectrum", "samples", cfg.spectrum_samples);
    if (cfg.spectrum_samples < 1) rd.fail("spectrum.samples", "must be >= 1");
    if (s.contains("path")) cfg.spectrum_path = resolve(base_dir, rd.string(s, "spectrum", "path"));
  }

  if (doc.contains("torque")) {
    const auto& t = doc.at("torque");
    rd.only(t, "torque", {"test_object", "separations_m", "omega_rad_s"});
    if (t.contains("test_object")) {
      const auto& to = t.at("test_object");
      rd.only(to, "torque.test_object", {"radius_m", "material"});
      TestObjectSpec spec;
      spec.radius_m = rd.required(to, "torque.test_object", "radius_m");
      if (spec.radius_m <= 0.0) rd.fail("torque.test_object.radius_m", "must be > 0");
      if (!to.contains("material")) rd.fail("torque.test_object.material", "missing");
      spec.material = parse_material(rd, to.at("material"), "torque.test_object.material", base_dir);
      cfg.test_object = std::move(spec);
    }
    cfg.separations_m = rd.numbers(t, "torque", "separations_m");
    for (double d : cfg.separations_m)
      if (!(d > 0.0)) rd.fail("torque.separations_m", "entries must be > 0");
    cfg.torque_omegas_rad_s = rd.numbers(t, "torque", "omega_rad_s");
    for (double w : cfg.torque_omegas_rad_s)
      if (!(w >= 0.0)) rd.fail("torque.omega_rad_s", "entries must be >= 0");
  }

  if (doc.contains("spindown")) {
    const auto& s = doc.at("spindown");
    rd.only(s, "spindown", {"moment_of_inertia_kg_m2", "t_end_s"});
    cfg.moment_of_inertia_kg_m2 = rd.required(s, "spindown", "moment_of_inertia_kg_m2");
    if (cfg.moment_of_inertia_kg_m2 <= 0.0) rd.fail("spindown.moment_of_inertia_kg_m2", "must be > 0");
    if (s.contains("t_end_s")) {
      cfg.t_end_s = rd.number(s, "spindown", "t_end_s");
      if (*cfg.t_end_s <= 0.0) rd.fail("spindown.t_end_s", "must be > 0");
    }
  }

  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    rd.only(o, "output", {"path", "format"});
    if (o.contains("path")) cfg.output_path = resolve(base_dir, rd.string(o, "output", "path"));
    if (o.contains("format")) {
      cfg.format = rd.string(o, "output", "format");
      if (cfg.format != "csv" && cfg.format != "json") rd.fail("output.format", "expected 'csv' or 'json'");
    }
  }

  cfg.threads = rd.integer(doc, "", "threads", cfg.threads);
  if (cfg.threads < 1) rd.fail("threads", "must be >= 1");
  cfg.override_regime_guard = rd.boolean(doc, "", "override_regime_guard", false);
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string(), path.parent_path());
}

}  // namespace rotrad::cli
