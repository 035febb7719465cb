#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "telecloning/error.hpp"
#include "telecloning/jones.hpp"
#include "telecloning/mode.hpp"

namespace telecloning {

using Matrix = Eigen::MatrixXcd;

inline constexpr double kUnitarityTolerance = 1e-10;

/// max |(U^dagger U - I)_ij|
inline double unitarity_residual(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  const Matrix d = m.adjoint() * m - Matrix::Identity(m.rows(), m.cols());
  return d.size() == 0 ? 0.0 : d.cwiseAbs().maxCoeff();
}

/// Linear map on creation operators: a_in^dagger -> sum_out matrix(out, in) a_out^dagger.
/// Rows are outputs, columns inputs. Modes are (spatial, polarization) pairs;
/// internal tags pass through unchanged, so listed labels must carry tag 0.
class ModeTransform {
 public:
  ModeTransform(std::vector<ModeLabel> inputs, std::vector<ModeLabel> outputs, Matrix matrix)
      : inputs_(std::move(inputs)), outputs_(std::move(outputs)), matrix_(std::move(matrix)) {
    const auto n = static_cast<Eigen::Index>(inputs_.size());
    if (static_cast<Eigen::Index>(outputs_.size()) != n || matrix_.rows() != n || matrix_.cols() != n)
      throw error(errc::mode_mismatch, "transform dimension does not match its mode lists");
    check_distinct(inputs_);
    check_distinct(outputs_);
    const double res = unitarity_residual(matrix_);
    if (!(res < kUnitarityTolerance))
      throw error(errc::non_unitary_transform, "unitarity residual " + std::to_string(res));
  }

  static ModeTransform identity(std::vector<ModeLabel> modes) {
    const auto n = static_cast<Eigen::Index>(modes.size());
    auto copy = modes;
    return ModeTransform(std::move(modes), std::move(copy), Matrix::Identity(n, n));
  }

  const std::vector<ModeLabel>& inputs() const { return inputs_; }
  const std::vector<ModeLabel>& outputs() const { return outputs_; }
  const Matrix& matrix() const { return matrix_; }
  std::size_t size() const { return inputs_.size(); }

  std::optional<std::size_t> input_index(const ModeLabel& m) const { return index_of(inputs_, m); }
  std::optional<std::size_t> output_index(const ModeLabel& m) const { return index_of(outputs_, m); }

  /// Amplitude for a photon entering `in` to leave in `out` (0 if either is not listed).
  cplx amplitude(const ModeLabel& out, const ModeLabel& in) const {
    auto i = input_index(in);
    auto o = output_index(out);
    if (!i || !o) return 0.0;
    return matrix_(static_cast<Eigen::Index>(*o), static_cast<Eigen::Index>(*i));
  }

  /// Hermitian conjugate: maps outputs back onto inputs.
  ModeTransform inverse() const { return ModeTransform(outputs_, inputs_, matrix_.adjoint()); }

  /// Extends with identity on `extra` modes that the transform does not touch.
  ModeTransform embed(const std::vector<ModeLabel>& extra) const {
    std::vector<ModeLabel> in = inputs_, out = outputs_;
    std::vector<ModeLabel> added;
    for (const auto& m : extra) {
      if (input_index(m)) continue;
      if (output_index(m))
        throw error(errc::mode_mismatch, "cannot pass " + m.str() + " through: it is an output");
      added.push_back(m);
    }
    const auto n = static_cast<Eigen::Index>(size());
    const auto k = static_cast<Eigen::Index>(added.size());
    Matrix m = Matrix::Identity(n + k, n + k);
    m.topLeftCorner(n, n) = matrix_;
    in.insert(in.end(), added.begin(), added.end());
    out.insert(out.end(), added.begin(), added.end());
    return ModeTransform(std::move(in), std::move(out), std::move(m));
  }

 private:
  static std::optional<std::size_t> index_of(const std::vector<ModeLabel>& v, const ModeLabel& m) {
    auto it = std::find(v.begin(), v.end(), m);
    if (it == v.end()) return std::nullopt;
    return static_cast<std::size_t>(it - v.begin());
  }

  static void check_distinct(const std::vector<ModeLabel>& v) {
    std::set<ModeLabel> seen;
    for (const auto& m : v) {
      if (m.tag != 0) throw error(errc::mode_mismatch, "transform modes must be untagged: " + m.str());
      if (!seen.insert(m).second) throw error(errc::mode_mismatch, "duplicate mode " + m.str());
    }
  }

  std::vector<ModeLabel> inputs_;
  std::vector<ModeLabel> outputs_;
  Matrix matrix_;
};

/// Applies t1 then t2. t2's inputs must be a subset of t1's outputs; the
/// remaining t1 outputs pass through t2 unchanged.
inline ModeTransform compose(const ModeTransform& t1, const ModeTransform& t2) {
  for (const auto& m : t2.inputs())
    if (!t1.output_index(m))
      throw error(errc::mode_mismatch, "mode " + m.str() + " is not produced by the first transform");
  const ModeTransform second = t2.size() == t1.size() ? t2 : t2.embed(t1.outputs());

  const auto n = static_cast<Eigen::Index>(t1.size());
  // Permute second's columns into t1's output order.
  Matrix reordered(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const auto src = *second.input_index(t1.outputs()[static_cast<std::size_t>(c)]);
    reordered.col(c) = second.matrix().col(static_cast<Eigen::Index>(src));
  }
  return ModeTransform(t1.inputs(), second.outputs(), reordered * t1.matrix());
}

}  // namespace telecloning
