#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "telecloning/error.hpp"
#include "telecloning/jones.hpp"
#include "telecloning/mode.hpp"
#include "telecloning/transform.hpp"

namespace telecloning {

/// Power reflectance of a beamsplitter; r = sqrt(R), t = sqrt(1 - R).
class Reflectivity {
 public:
  explicit Reflectivity(double R) : R_(R) {
    if (!(R >= 0.0 && R <= 1.0))
      throw error(errc::invalid_reflectivity, "R = " + std::to_string(R) + " outside [0, 1]");
  }
  double value() const { return R_; }
  double r() const { return std::sqrt(R_); }
  double t() const { return std::sqrt(1.0 - R_); }

 private:
  double R_;
};

struct PortPair {
  std::string first;
  std::string second;
};

namespace detail {

inline std::vector<ModeLabel> polarization_pairs(const std::vector<std::string>& spatial) {
  std::vector<ModeLabel> out;
  for (const auto& s : spatial) {
    out.emplace_back(s, Pol::H);
    out.emplace_back(s, Pol::V);
  }
  return out;
}

inline void require_distinct(const std::vector<std::string>& ids) {
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j)
      if (ids[i] == ids[j]) throw error(errc::mode_collision, "spatial mode '" + ids[i] + "' repeated");
}

}  // namespace detail

/// b_p -> i r f_p + t e_p,  c_p -> t f_p + i r e_p  for p in {H, V}.
/// Reflection carries the factor i. Other phase conventions shift
/// intermediate phases only; fidelities and probabilities are unchanged.
inline ModeTransform beamsplitter(Reflectivity R, const PortPair& in, const PortPair& out) {
  detail::require_distinct({in.first, in.second, out.first, out.second});
  const cplx t = R.t();
  const cplx ir = cplx(0.0, R.r());
  // inputs: b_H b_V c_H c_V ; outputs: e_H e_V f_H f_V
  Matrix m = Matrix::Zero(4, 4);
  for (int p = 0; p < 2; ++p) {
    m(p, p) = t;            // b -> e
    m(2 + p, p) = ir;       // b -> f
    m(p, 2 + p) = ir;       // c -> e
    m(2 + p, 2 + p) = t;    // c -> f
  }
  return ModeTransform(detail::polarization_pairs({in.first, in.second}),
                       detail::polarization_pairs({out.first, out.second}), m);
}

inline ModeTransform beamsplitter(double R, const PortPair& in, const PortPair& out) {
  return beamsplitter(Reflectivity(R), in, out);
}

/// e^{i phi} on a spatial mode; with `only` set, on that polarization alone.
inline ModeTransform phase_shift(double phi, const std::string& spatial, std::optional<Pol> only = {}) {
  Matrix m = Matrix::Identity(2, 2);
  const cplx ph = std::polar(1.0, phi);
  if (!only || *only == Pol::H) m(0, 0) = ph;
  if (!only || *only == Pol::V) m(1, 1) = ph;
  auto modes = detail::polarization_pairs({spatial});
  return ModeTransform(modes, modes, m);
}

/// Applies the 2x2 Jones matrix `u` (basis H, V) to every listed spatial mode.
inline ModeTransform polarization_rotation(const Matrix& u, const std::vector<std::string>& spatial) {
  if (u.rows() != 2 || u.cols() != 2) throw error(errc::mode_mismatch, "Jones matrix must be 2x2");
  if (!(unitarity_residual(u) < kUnitarityTolerance))
    throw error(errc::non_unitary_transform, "Jones matrix is not unitary");
  detail::require_distinct(spatial);
  const auto n = static_cast<Eigen::Index>(spatial.size());
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  for (Eigen::Index k = 0; k < n; ++k) m.block(2 * k, 2 * k, 2, 2) = u;
  auto modes = detail::polarization_pairs(spatial);
  return ModeTransform(modes, modes, m);
}

enum class WavePlate { quarter, half };

/// Retarder Jones matrix R(theta) diag(1, e^{i Gamma}) R(-theta), fast axis at
/// `angle` radians from horizontal; Gamma = pi/2 (quarter) or pi (half).
inline Matrix wave_plate_jones(WavePlate kind, double angle) {
  const double retardance = kind == WavePlate::quarter ? std::numbers::pi / 2 : std::numbers::pi;
  const double c = std::cos(angle), s = std::sin(angle);
  Matrix rot(2, 2), rot_inv(2, 2), ret = Matrix::Zero(2, 2);
  rot << c, -s, s, c;
  rot_inv << c, s, -s, c;
  ret(0, 0) = 1.0;
  ret(1, 1) = std::polar(1.0, retardance);
  return rot * ret * rot_inv;
}

inline ModeTransform wave_plate(WavePlate kind, double angle, const std::string& spatial) {
  return polarization_rotation(wave_plate_jones(kind, angle), {spatial});
}

inline Jones apply_jones(const Matrix& u, const Jones& in) {
  return Jones(u(0, 0) * in.h() + u(0, 1) * in.v(), u(1, 0) * in.h() + u(1, 1) * in.v());
}

/// Two balanced beamsplitter() stages around a pair of arms. The first splitter's
/// `first` output (arm 1) carries the common phase phi, an H-only
/// birefringent error delta and the compensator's H-only phase -gamma; the
/// arms cross before the second splitter so phi = 0 is fully transmissive.
/// For delta == gamma the H and V blocks coincide and the device acts as a
/// splitter with reflectivity sin^2(phi / 2).
inline ModeTransform mach_zehnder(double phi, double delta, double gamma, const PortPair& in,
                                  const PortPair& out) {
  detail::require_distinct({in.first, in.second, out.first, out.second});
  const std::string arm1 = "mz(" + in.first + "," + in.second + ").arm1";
  const std::string arm2 = "mz(" + in.first + "," + in.second + ").arm2";
  auto t = beamsplitter(0.5, in, {arm1, arm2});
  t = compose(t, phase_shift(phi, arm1));
  t = compose(t, phase_shift(delta - gamma, arm1, Pol::H));
  t = compose(t, beamsplitter(0.5, {arm2, arm1}, out));
  return t;
}

/// Mach-Zehnder phase giving reflectivity R: inverse of sin^2(phi / 2).
inline double mach_zehnder_phase_for(double R) {
  Reflectivity checked(R);
  return 2.0 * std::asin(std::sqrt(checked.value()));
}

/// |amplitude(in_p -> reflected_p)|^2 for polarization p of a two-port device.
inline double effective_reflectivity(const ModeTransform& t, const std::string& in,
                                     const std::string& reflected_out, Pol p) {
  return std::norm(t.amplitude(ModeLabel(reflected_out, p), ModeLabel(in, p)));
}

/// 2x2 block of `t` restricted to polarization p, rows (out.first, out.second),
/// columns (in.first, in.second).
inline Matrix polarization_block(const ModeTransform& t, const PortPair& in, const PortPair& out, Pol p) {
  Matrix b(2, 2);
  const std::string ins[2] = {in.first, in.second};
  const std::string outs[2] = {out.first, out.second};
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) b(r, c) = t.amplitude(ModeLabel(outs[r], p), ModeLabel(ins[c], p));
  return b;
}

}  // namespace telecloning
