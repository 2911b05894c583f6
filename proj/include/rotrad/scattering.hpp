#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rotrad/materials.hpp"

namespace rotrad::scattering {

using cplx = std::complex<double>;
using materials::DielectricModel;

enum class PolContent { M, E, ME };

std::string to_string(PolContent p);

/// Scattering channel label. One axial index m per block: the rotation
/// axis is a symmetry axis, so S never couples different m.
struct ChannelId {
  int m = 0;
  std::optional<int> l;       // spherical channels
  PolContent pols = PolContent::E;
  std::optional<double> kz;   // discrete cylinder channel, rad/m

  int dimension() const { return pols == PolContent::ME ? 2 : 1; }
  std::string label() const;

  friend bool operator==(const ChannelId&, const ChannelId&) = default;
  friend bool operator<(const ChannelId& a, const ChannelId& b) {
    return std::tie(a.m, a.l, a.pols, a.kz) < std::tie(b.m, b.l, b.pols, b.kz);
  }
};

struct SMatrixBlock {
  ChannelId channel;
  double omega = 0.0;
  Eigen::MatrixXcd S;
};

/// Small-object validity guard: omega R / c and |sqrt(eps(Omega))| Omega R / c
/// must both stay below `threshold` unless overridden.
struct RegimeOptions {
  double threshold = 0.3;
  bool override_guard = false;
};

/// S = 1 + 2T, T = i (2/3)(w/c)^3 alpha(w - Omega m), for the l = 1 electric
/// channels (m = -1, 0, 1) of a small rotating sphere.
cplx sphere_T_general(const DielectricModel& model, double radius, double Omega,
                      double omega, int l, int m, const RegimeOptions& regime = {});

cplx sphere_S_general(const DielectricModel& model, double radius, double Omega,
                      double omega, int l, int m, const RegimeOptions& regime = {});

cplx sphere_T_11E(const DielectricModel& model, double radius, double Omega, double omega,
                  const RegimeOptions& regime = {});

cplx sphere_S_11E(const DielectricModel& model, double radius, double Omega, double omega,
                  const RegimeOptions& regime = {});

/// 2x2 T-block of a thin rotating cylinder in the m = 1 channel, basis
/// (M, E):  T = (i pi / 4) f R^2 [[k^2, k kz], [k kz, kz^2]],  k = w/c,
/// f = (eps(w - Omega) - 1)/(eps(w - Omega) + 1).
Eigen::Matrix2cd cylinder_T_block(const DielectricModel& model, double radius,
                                  double Omega, double omega, double kz, int m = 1,
                                  const RegimeOptions& regime = {});

/// identity + 2 T; unitarity is not imposed.
Eigen::Matrix2cd cylinder_S_block(const DielectricModel& model, double radius,
                                  double Omega, double omega, double kz, int m = 1,
                                  const RegimeOptions& regime = {});

/// I - S^dagger S, symmetrized to be exactly Hermitian.
Eigen::MatrixXcd deficiency(const SMatrixBlock& block);
Eigen::MatrixXcd deficiency(const Eigen::MatrixXcd& S);

/// I - S^dagger S = -2 (T + T^dagger) - 4 T^dagger T with S = I + 2T. Use
/// this form when T is small: forming S first loses T to rounding.
Eigen::MatrixXcd deficiency_from_T(const Eigen::MatrixXcd& T);

struct TabulatedChannel {
  ChannelId id;
  std::vector<double> omega;
  std::vector<Eigen::MatrixXcd> S;

  /// Linear interpolation of Re and Im entries; RangeError outside the grid.
  Eigen::MatrixXcd at(double w) const;
  double omega_min() const { return omega.front(); }
  double omega_max() const { return omega.back(); }
};

/// S-matrix samples supplied from an external solver.
///
/// File format (JSON):
///   {"channels":[{"m":1,"l":1|null,"polarizations":["E"]|["M","E"],
///                 "kz":null|number,"omega":[...],
///                 "S_re":[[[row-major]]...],"S_im":[...]}]}
class TabulatedChannelSet {
 public:
  explicit TabulatedChannelSet(std::vector<TabulatedChannel> channels);

  const std::vector<TabulatedChannel>& channels() const { return channels_; }
  const TabulatedChannel& find(const ChannelId& id) const;

 private:
  std::vector<TabulatedChannel> channels_;
};

TabulatedChannelSet parse_tabulated_channels(std::string_view text,
                                             const std::string& source = "<string>");
TabulatedChannelSet load_tabulated_channels(const std::filesystem::path& path);
std::string serialize_tabulated_channels(const TabulatedChannelSet& set);
void write_tabulated_channels(const TabulatedChannelSet& set,
                              const std::filesystem::path& path);

}  // namespace rotrad::scattering
