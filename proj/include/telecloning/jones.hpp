#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "telecloning/error.hpp"

namespace telecloning {

using cplx = std::complex<double>;

/// Normalized polarization state alpha|H> + beta|V>.
class Jones {
 public:
  Jones() = default;

  /// Normalizes the given amplitudes; throws on a zero vector.
  Jones(cplx h, cplx v) {
    const double n = std::sqrt(std::norm(h) + std::norm(v));
    if (!(n > 1e-12)) throw error(errc::invalid_argument, "zero Jones vector");
    h_ = h / n;
    v_ = v / n;
  }

  cplx h() const { return h_; }
  cplx v() const { return v_; }

  /// The orthogonal state (-conj(beta), conj(alpha)).
  Jones orthogonal() const { return Jones(-std::conj(v_), std::conj(h_)); }

  /// <this|other>
  cplx overlap(const Jones& other) const { return std::conj(h_) * other.h_ + std::conj(v_) * other.v_; }

  /// Linear polarization at `angle` radians from horizontal.
  static Jones linear(double angle) { return Jones(std::cos(angle), std::sin(angle)); }

  static Jones horizontal() { return Jones(1.0, 0.0); }
  static Jones vertical() { return Jones(0.0, 1.0); }
  static Jones diagonal() { return Jones(1.0, 1.0); }
  static Jones antidiagonal() { return Jones(1.0, -1.0); }
  /// Left-handed circular, (|H> + i|V>)/sqrt(2).
  static Jones left() { return Jones(1.0, cplx(0.0, 1.0)); }
  static Jones right() { return Jones(1.0, cplx(0.0, -1.0)); }

 private:
  cplx h_{1.0, 0.0};
  cplx v_{0.0, 0.0};
};

}  // namespace telecloning
