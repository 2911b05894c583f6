#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rotrad/materials.hpp"
#include "rotrad/quadrature.hpp"

namespace rotrad::cli {

enum class Shape { Sphere, Cylinder, Tabulated };

struct TestObjectSpec {
  double radius_m = 0.0;
  materials::DielectricModel material = materials::vacuum();
};

/// One scenario, as read from the JSON config. Every physical key carries
/// its SI unit in its name.
struct ScenarioConfig {
  Shape shape = Shape::Sphere;
  double radius_m = 0.0;
  double length_m = 0.0;
  std::filesystem::path channels_path;  // Shape::Tabulated
  materials::DielectricModel material = materials::vacuum();

  double omega_rad_s = 0.0;
  double T_body_K = 0.0;
  double T_env_K = 0.0;

  quad::QuadratureConfig quadrature{};
  bool full_s = false;

  int spectrum_samples = 200;
  std::optional<std::filesystem::path> spectrum_path;

  std::optional<TestObjectSpec> test_object;
  std::vector<double> separations_m;
  std::vector<double> torque_omegas_rad_s;  // empty: use omega_rad_s

  double moment_of_inertia_kg_m2 = 0.0;
  std::optional<double> t_end_s;  // absent: integrate until Omega0/10

  std::optional<std::filesystem::path> output_path;
  std::string format = "csv";
  int threads = 1;
  bool override_regime_guard = false;
};

/// Relative paths inside the document resolve against `base_dir`.
/// Throws ParseError naming the offending key or line.
ScenarioConfig parse_config(std::string_view text, const std::string& source,
                            const std::filesystem::path& base_dir);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Entry point of the `rotrad` executable. Returns the process exit code:
/// 0 ok, 1 usage, 2 physics/regime/accuracy, 3 verification failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rotrad::cli
