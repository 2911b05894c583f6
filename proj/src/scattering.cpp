#include "rotrad/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rotrad/constants.hpp"
#include "rotrad/error.hpp"

namespace rotrad::scattering {

using constants::c;
using constants::pi;
using json = nlohmann::json;

std::string to_string(PolContent p) {
  switch (p) {
    case PolContent::M: return "M";
    case PolContent::E: return "E";
    case PolContent::ME: return "ME";
  }
  return "?";
}

std::string ChannelId::label() const {
  std::ostringstream os;
  os << "m=" << m;
  if (l) os << " l=" << *l;
  os << " P=" << to_string(pols);
  if (kz) os << " kz=" << *kz;
  return os.str();
}

namespace {

cplx guard_epsilon(const DielectricModel& model, double Omega) {
  if (const auto* tab = std::get_if<materials::Tabulated>(&model)) {
    const double w = std::clamp(Omega, tab->omega().front(), tab->omega().back());
    return tab->at(w);
  }
  return materials::epsilon(model, Omega);
}

void check_regime(const DielectricModel& model, double radius, double Omega, double omega,
                  const RegimeOptions& regime, const char* who) {
  if (regime.override_guard) return;
  const double size = omega * radius / c;
  if (!(size < regime.threshold)) {
    std::ostringstream os;
    os << who << ": regime guard violated, omega R / c = " << size
       << " >= " << regime.threshold << " (small-object expansion invalid)";
    throw RegimeError(os.str());
  }
  if (Omega > 0.0 && !materials::is_toy(model)) {
    const double speed = std::sqrt(std::abs(guard_epsilon(model, Omega))) * Omega * radius / c;
    if (!(speed < regime.threshold)) {
      std::ostringstream os;
      os << who << ": regime guard violated, |sqrt(eps)| Omega R / c = " << speed
         << " >= " << regime.threshold << " (velocity corrections not negligible)";
      throw RegimeError(os.str());
    }
  }
}

}  // namespace

cplx sphere_T_general(const DielectricModel& model, double radius, double Omega,
                      double omega, int l, int m, const RegimeOptions& regime) {
  if (l != 1)
    throw UnsupportedError("sphere channel l = " + std::to_string(l) +
                           " unsupported; only the leading l = 1 order is implemented");
  if (std::abs(m) > l) throw DomainError("sphere channel requires |m| <= l");
  if (!(omega > 0.0)) throw DomainError("sphere S-matrix requires omega > 0");
  if (!(radius > 0.0)) throw DomainError("sphere radius must be > 0");
  check_regime(model, radius, Omega, omega, regime, "sphere_S");
  const double k = omega / c;
  const cplx alpha = materials::sphere_polarizability(model, radius, omega - Omega * m);
  return cplx(0.0, 2.0 / 3.0) * k * k * k * alpha;
}

cplx sphere_S_general(const DielectricModel& model, double radius, double Omega,
                      double omega, int l, int m, const RegimeOptions& regime) {
  return 1.0 + 2.0 * sphere_T_general(model, radius, Omega, omega, l, m, regime);
}

cplx sphere_T_11E(const DielectricModel& model, double radius, double Omega, double omega,
                  const RegimeOptions& regime) {
  return sphere_T_general(model, radius, Omega, omega, 1, 1, regime);
}

cplx sphere_S_11E(const DielectricModel& model, double radius, double Omega, double omega,
                  const RegimeOptions& regime) {
  return sphere_S_general(model, radius, Omega, omega, 1, 1, regime);
}

Eigen::Matrix2cd cylinder_T_block(const DielectricModel& model, double radius,
                                  double Omega, double omega, double kz, int m,
                                  const RegimeOptions& regime) {
  if (m != 1)
    throw UnsupportedError("cylinder channel m = " + std::to_string(m) +
                           " unsupported; only m = 1 is implemented");
  if (!(radius > 0.0)) throw DomainError("cylinder radius must be > 0");
  check_regime(model, radius, Omega, omega, regime, "cylinder_T");
  const double k = omega / c;
  const cplx f = materials::cylinder_surface_factor(model, omega - Omega * m);
  const cplx pref = cplx(0.0, pi / 4.0) * f * radius * radius;
  Eigen::Matrix2cd T;
  T(0, 0) = pref * (k * k);
  T(0, 1) = pref * (k * kz);
  T(1, 0) = T(0, 1);
  T(1, 1) = pref * (kz * kz);
  return T;
}

Eigen::Matrix2cd cylinder_S_block(const DielectricModel& model, double radius,
                                  double Omega, double omega, double kz, int m,
                                  const RegimeOptions& regime) {
  return Eigen::Matrix2cd::Identity() +
         2.0 * cylinder_T_block(model, radius, Omega, omega, kz, m, regime);
}

Eigen::MatrixXcd deficiency(const Eigen::MatrixXcd& S) {
  if (S.rows() != S.cols()) throw DomainError("S-matrix block must be square");
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Identity(S.rows(), S.cols()) - S.adjoint() * S;
  Eigen::MatrixXcd H = 0.5 * (D + D.adjoint());
  return H;
}

Eigen::MatrixXcd deficiency_from_T(const Eigen::MatrixXcd& T) {
  if (T.rows() != T.cols()) throw DomainError("T-matrix block must be square");
  Eigen::MatrixXcd D = -2.0 * (T + T.adjoint()) - 4.0 * T.adjoint() * T;
  Eigen::MatrixXcd H = 0.5 * (D + D.adjoint());
  return H;
}

Eigen::MatrixXcd deficiency(const SMatrixBlock& block) {
  if (block.S.rows() != block.channel.dimension())
    throw DomainError("S-matrix block dimension does not match channel " +
                      block.channel.label());
  return deficiency(block.S);
}

Eigen::MatrixXcd TabulatedChannel::at(double w) const {
  if (w < omega.front() || w > omega.back())
    throw RangeError("tabulated S-matrix for channel " + id.label() +
                     " queried outside its frequency grid");
  auto it = std::upper_bound(omega.begin(), omega.end(), w);
  std::size_t hi = std::min<std::size_t>(it - omega.begin(), omega.size() - 1);
  if (hi == 0) hi = 1;
  const std::size_t lo = hi - 1;
  const double t = (w - omega[lo]) / (omega[hi] - omega[lo]);
  Eigen::MatrixXcd out(S[lo].rows(), S[lo].cols());
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      const cplx a = S[lo](i, j), b = S[hi](i, j);
      out(i, j) = cplx((1.0 - t) * a.real() + t * b.real(), (1.0 - t) * a.imag() + t * b.imag());
    }
  return out;
}

TabulatedChannelSet::TabulatedChannelSet(std::vector<TabulatedChannel> channels)
    : channels_(std::move(channels)) {
  if (channels_.empty()) throw ParseError("tabulated S-matrix set has no channels", 0);
  std::sort(channels_.begin(), channels_.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < channels_.size(); ++i)
    if (channels_[i].id == channels_[i - 1].id)
      throw ParseError("duplicate channel " + channels_[i].id.label(), 0);
}

const TabulatedChannel& TabulatedChannelSet::find(const ChannelId& id) const {
  for (const auto& ch : channels_)
    if (ch.id == id) return ch;
  throw DomainError("no tabulated channel " + id.label());
}

namespace {

// Line on which the i-th object of the top-level "channels" array starts.
std::vector<int> channel_start_lines(std::string_view text) {
  std::vector<int> lines;
  int line = 1;
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (char ch : text) {
    if (ch == '\n') ++line;
    if (in_string) {
      if (escaped) escaped = false;
      else if (ch == '\\') escaped = true;
      else if (ch == '"') in_string = false;
      continue;
    }
    switch (ch) {
      case '"': in_string = true; break;
      case '{':
        if (depth == 2) lines.push_back(line);
        ++depth;
        break;
      case '[': ++depth; break;
      case '}':
      case ']': --depth; break;
      default: break;
    }
  }
  return lines;
}

int line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + offset, '\n'));
}

}  // namespace

TabulatedChannelSet parse_tabulated_channels(std::string_view text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": malformed JSON: " + e.what(),
                     line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  if (!doc.is_object() || !doc.contains("channels") || !doc["channels"].is_array())
    throw ParseError(source + ": missing top-level \"channels\" array", 1);
  const auto& arr = doc["channels"];
  if (arr.empty()) throw ParseError(source + ": empty channel list", line_of_offset(text, text.size()));
  const std::vector<int> starts = channel_start_lines(text);

  std::vector<TabulatedChannel> out;
  for (std::size_t ci = 0; ci < arr.size(); ++ci) {
    const int line = ci < starts.size() ? starts[ci] : 0;
    auto fail = [&](const std::string& what) -> void {
      throw ParseError(source + ": channel " + std::to_string(ci) + ": " + what, line);
    };
    const json& ch = arr[ci];
    if (!ch.is_object()) fail("not an object");
    for (const char* key : {"m", "polarizations", "omega", "S_re", "S_im"})
      if (!ch.contains(key)) fail(std::string("missing key \"") + key + "\"");

    TabulatedChannel tc;
    if (!ch["m"].is_number_integer()) fail("\"m\" must be an integer");
    tc.id.m = ch["m"].get<int>();
    if (ch.contains("l") && !ch["l"].is_null()) {
      if (!ch["l"].is_number_integer()) fail("\"l\" must be an integer or null");
      tc.id.l = ch["l"].get<int>();
      if (*tc.id.l < std::abs(tc.id.m) || *tc.id.l < 1) fail("require l >= max(1, |m|)");
    }
    if (ch.contains("kz") && !ch["kz"].is_null()) {
      if (!ch["kz"].is_number()) fail("\"kz\" must be a number or null");
      tc.id.kz = ch["kz"].get<double>();
    }
    const json& pols = ch["polarizations"];
    if (!pols.is_array()) fail("\"polarizations\" must be an array");
    std::vector<std::string> p;
    for (const auto& x : pols) {
      if (!x.is_string()) fail("polarization entries must be strings");
      p.push_back(x.get<std::string>());
    }
    if (p == std::vector<std::string>{"E"}) tc.id.pols = PolContent::E;
    else if (p == std::vector<std::string>{"M"}) tc.id.pols = PolContent::M;
    else if (p == std::vector<std::string>{"M", "E"}) tc.id.pols = PolContent::ME;
    else fail("polarizations must be [\"E\"], [\"M\"] or [\"M\",\"E\"]");
    const int dim = tc.id.dimension();

    const json& om = ch["omega"];
    if (!om.is_array() || om.size() < 2) fail("\"omega\" needs at least two samples");
    for (const auto& w : om) {
      if (!w.is_number()) fail("\"omega\" entries must be numbers");
      const double v = w.get<double>();
      if (!(v > 0.0)) fail("frequencies must be > 0");
      if (!tc.omega.empty() && !(v > tc.omega.back())) fail("frequency grid is not strictly increasing");
      tc.omega.push_back(v);
    }
    const json& re = ch["S_re"];
    const json& im = ch["S_im"];
    if (!re.is_array() || !im.is_array() || re.size() != tc.omega.size() ||
        im.size() != tc.omega.size())
      fail("S_re / S_im must hold one matrix per frequency sample");
    for (std::size_t s = 0; s < tc.omega.size(); ++s) {
      Eigen::MatrixXcd S(dim, dim);
      for (const json* part : {&re[s], &im[s]}) {
        if (!part->is_array() || static_cast<int>(part->size()) != dim)
          fail("S matrix dimension mismatch at sample " + std::to_string(s) + " (expected " +
               std::to_string(dim) + "x" + std::to_string(dim) + ")");
        for (int i = 0; i < dim; ++i) {
          const json& row = (*part)[i];
          if (!row.is_array() || static_cast<int>(row.size()) != dim)
            fail("S matrix dimension mismatch at sample " + std::to_string(s));
          for (const auto& v : row)
            if (!v.is_number()) fail("S matrix entries must be numbers");
        }
      }
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          S(i, j) = cplx(re[s][i][j].get<double>(), im[s][i][j].get<double>());
      tc.S.push_back(std::move(S));
    }
    out.push_back(std::move(tc));
  }
  try {
    return TabulatedChannelSet(std::move(out));
  } catch (const ParseError& e) {
    throw ParseError(source + ": " + e.what(), 0);
  }
}

TabulatedChannelSet load_tabulated_channels(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_tabulated_channels(ss.str(), path.string());
}

std::string serialize_tabulated_channels(const TabulatedChannelSet& set) {
  json doc;
  doc["channels"] = json::array();
  for (const auto& ch : set.channels()) {
    json j;
    j["m"] = ch.id.m;
    j["l"] = ch.id.l ? json(*ch.id.l) : json(nullptr);
    switch (ch.id.pols) {
      case PolContent::E: j["polarizations"] = {"E"}; break;
      case PolContent::M: j["polarizations"] = {"M"}; break;
      case PolContent::ME: j["polarizations"] = {"M", "E"}; break;
    }
    j["kz"] = ch.id.kz ? json(*ch.id.kz) : json(nullptr);
    j["omega"] = ch.omega;
    json re = json::array(), im = json::array();
    for (const auto& S : ch.S) {
      json r = json::array(), i = json::array();
      for (Eigen::Index a = 0; a < S.rows(); ++a) {
        json rr = json::array(), ii = json::array();
        for (Eigen::Index b = 0; b < S.cols(); ++b) {
          rr.push_back(S(a, b).real());
          ii.push_back(S(a, b).imag());
        }
        r.push_back(rr);
        i.push_back(ii);
      }
      re.push_back(r);
      im.push_back(i);
    }
    j["S_re"] = re;
    j["S_im"] = im;
    doc["channels"].push_back(j);
  }
  return doc.dump(1) + "\n";
}

void write_tabulated_channels(const TabulatedChannelSet& set, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string(), 0);
  out << serialize_tabulated_channels(set);
}

}  // namespace rotrad::scattering
