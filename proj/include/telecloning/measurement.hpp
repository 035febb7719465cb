#pragma once

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "telecloning/error.hpp"
#include "telecloning/fock.hpp"
#include "telecloning/jones.hpp"

namespace telecloning {

/// Spatial modes that must each hold exactly one photon (any polarization, any tag).
class CoincidencePattern {
 public:
  CoincidencePattern(std::initializer_list<std::string> modes) : CoincidencePattern(std::vector(modes)) {}
  explicit CoincidencePattern(const std::vector<std::string>& modes) {
    for (const auto& m : modes) {
      if (m.empty()) throw error(errc::invalid_argument, "empty spatial identifier in pattern");
      if (!required_.insert(m).second)
        throw error(errc::invalid_argument, "spatial mode '" + m + "' listed twice in pattern");
    }
    if (required_.empty()) throw error(errc::invalid_argument, "empty coincidence pattern");
  }

  const std::set<std::string>& required() const { return required_; }

  bool matches(const BasisConfiguration& c) const {
    for (const auto& s : required_)
      if (c.spatial_count(s) != 1) return false;
    return true;
  }

 private:
  std::set<std::string> required_;
};

/// Unnormalized component of `state` that satisfies the pattern.
inline PureState coincidence_component(const PureState& state, const CoincidencePattern& pattern) {
  PureState::term_map kept;
  for (const auto& [c, a] : state.terms())
    if (pattern.matches(c)) kept.emplace(c, a);
  return PureState(std::move(kept), state.max_photons());
}

struct PostSelection {
  PureState conditional;  // normalized, or the zero state when `empty`
  double probability = 0.0;
  bool empty = true;
};

inline constexpr double kNormalizationTolerance = 1e-9;

inline void require_normalized(const PureState& state) {
  if (std::abs(state.squared_norm() - 1.0) > kNormalizationTolerance)
    throw error(errc::unnormalized_input, "squared norm " + std::to_string(state.squared_norm()));
}

/// Conditions on the pattern. A zero-probability outcome is reported through
/// `empty`, not as an error.
inline PostSelection post_select(const PureState& state, const CoincidencePattern& pattern) {
  require_normalized(state);
  PureState kept = coincidence_component(state, pattern);
  const double p = kept.squared_norm();
  if (!(p > kPruneThreshold)) return {PureState{}, 0.0, true};
  return {normalize(kept).state, p, false};
}

/// Reduced density matrix over configurations of a set of spatial modes.
class DensityMatrix {
 public:
  DensityMatrix(std::vector<BasisConfiguration> basis, Matrix rho)
      : basis_(std::move(basis)), rho_(std::move(rho)) {}

  const std::vector<BasisConfiguration>& basis() const { return basis_; }
  const Matrix& matrix() const { return rho_; }
  std::size_t dimension() const { return basis_.size(); }

  double trace() const { return rho_.trace().real(); }

  cplx element(const BasisConfiguration& row, const BasisConfiguration& col) const {
    auto r = index_of(row), c = index_of(col);
    if (r < 0 || c < 0) return 0.0;
    return rho_(r, c);
  }

  double hermiticity_residual() const {
    return rho_.size() == 0 ? 0.0 : (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  }

  double min_eigenvalue() const {
    if (rho_.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

 private:
  Eigen::Index index_of(const BasisConfiguration& c) const {
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (basis_[i] == c) return static_cast<Eigen::Index>(i);
    return -1;
  }

  std::vector<BasisConfiguration> basis_;
  Matrix rho_;
};

/// Traces out every spatial mode not in `keep`. Trace equals the input's squared norm.
inline DensityMatrix partial_trace(const PureState& state, const std::set<std::string>& keep) {
  std::map<BasisConfiguration, std::vector<std::pair<BasisConfiguration, cplx>>> by_env;
  std::set<BasisConfiguration> kept_configs;
  for (const auto& [c, a] : state.terms()) {
    auto [kept, env] = c.partition([&](const ModeLabel& m) { return keep.count(m.spatial) > 0; });
    kept_configs.insert(kept);
    by_env[env].emplace_back(kept, a);
  }
  std::vector<BasisConfiguration> basis(kept_configs.begin(), kept_configs.end());
  std::map<BasisConfiguration, Eigen::Index> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = static_cast<Eigen::Index>(i);

  const auto n = static_cast<Eigen::Index>(basis.size());
  Matrix rho = Matrix::Zero(n, n);
  for (const auto& [env, terms] : by_env)
    for (const auto& [ki, ai] : terms)
      for (const auto& [kj, aj] : terms) rho(index[ki], index[kj]) += ai * std::conj(aj);
  return DensityMatrix(std::move(basis), std::move(rho));
}

namespace detail {

inline const ModeLabel& single_photon_mode(const BasisConfiguration& c, const std::string& spatial) {
  if (c.total() != 1 || c.entries().front().first.spatial != spatial)
    throw error(errc::wrong_subsystem,
                "expected one photon in mode '" + spatial + "', found configuration " + c.str());
  return c.entries().front().first;
}

inline cplx jones_component(const Jones& j, Pol p) { return p == Pol::H ? j.h() : j.v(); }

}  // namespace detail

/// Projection probability <target|rho|target> for a one-photon state of one
/// spatial mode, summed over internal tags.
inline double fidelity(const DensityMatrix& rho, const Jones& target, const std::string& spatial) {
  if (rho.dimension() == 0) throw error(errc::wrong_subsystem, "empty density matrix");
  const auto& basis = rho.basis();
  double f = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& mi = detail::single_photon_mode(basis[i], spatial);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const auto& mj = detail::single_photon_mode(basis[j], spatial);
      if (mi.tag != mj.tag) continue;
      f += (std::conj(detail::jones_component(target, mi.pol)) *
            rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
            detail::jones_component(target, mj.pol))
               .real();
    }
  }
  return f;
}

/// 2x2 polarization matrix (basis H, V) of a one-photon density matrix, tags traced out.
inline Matrix polarization_matrix(const DensityMatrix& rho, const std::string& spatial) {
  Matrix out = Matrix::Zero(2, 2);
  const auto& basis = rho.basis();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& mi = detail::single_photon_mode(basis[i], spatial);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const auto& mj = detail::single_photon_mode(basis[j], spatial);
      if (mi.tag != mj.tag) continue;
      out(static_cast<int>(mi.pol), static_cast<int>(mj.pol)) +=
          rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

/// Polarizer followed by a detector click: projects onto exactly one photon
/// in `pol` at a spatial mode. Non-unitary; the result is unnormalized and its
/// squared norm is the click probability.
class PolarizationProjector {
 public:
  PolarizationProjector(std::string spatial, Jones pol) : spatial_(std::move(spatial)), pol_(pol) {}

  const std::string& spatial() const { return spatial_; }
  const Jones& polarization() const { return pol_; }

  PureState apply(const PureState& state) const {
    PureState::term_map out;
    for (const auto& [c, a] : state.terms()) {
      if (c.spatial_count(spatial_) != 1) continue;
      auto [here, env] = c.partition([&](const ModeLabel& m) { return m.spatial == spatial_; });
      const ModeLabel& m = here.entries().front().first;
      const cplx proj = std::conj(detail::jones_component(pol_, m.pol)) * a;
      for (Pol p : {Pol::H, Pol::V}) {
        BasisConfiguration next = env;
        next.add(ModeLabel(spatial_, p, m.tag));
        out[next] += detail::jones_component(pol_, p) * proj;
      }
    }
    return PureState(std::move(out), state.max_photons());
  }

  double probability(const PureState& state) const { return apply(state).squared_norm(); }

 private:
  std::string spatial_;
  Jones pol_;
};

inline PolarizationProjector polarization_projector(std::string spatial, Jones pol) {
  return PolarizationProjector(std::move(spatial), pol);
}

/// splitmix64 finalizer; derives independent per-task seeds as
/// split_seed(seed, index) = splitmix64(seed + index).
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + index + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counting RNG, version 1: std::mt19937_64 (its output sequence is fixed by
/// the C++ standard) and uniforms built from the top 53 bits, so draws are
/// identical on every conforming platform.
class CountingRng {
 public:
  static constexpr int version = 1;

  explicit CountingRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Multinomial draw of `trials` events over the listed outcomes; the remaining
/// mass is "no detection" and is not counted.
inline std::vector<std::uint64_t> sample_counts(std::span<const double> probabilities,
                                                std::uint64_t trials, std::uint64_t seed) {
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0 && p <= 1.0))
      throw error(errc::invalid_distribution, "probability " + std::to_string(p) + " outside [0, 1]");
    total += p;
  }
  if (total > 1.0 + 1e-12)
    throw error(errc::invalid_distribution, "probabilities sum to " + std::to_string(total));

  std::vector<double> cumulative;
  double acc = 0.0;
  for (double p : probabilities) cumulative.push_back(acc += p);

  std::vector<std::uint64_t> counts(probabilities.size(), 0);
  CountingRng rng(seed);
  for (std::uint64_t k = 0; k < trials; ++k) {
    const double u = rng.uniform();
    for (std::size_t i = 0; i < cumulative.size(); ++i)
      if (u < cumulative[i]) {
        ++counts[i];
        break;
      }
  }
  return counts;
}

}  // namespace telecloning
