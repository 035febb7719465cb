#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "telecloning/error.hpp"
#include "telecloning/jones.hpp"
#include "telecloning/mode.hpp"
#include "telecloning/transform.hpp"

namespace telecloning {

inline constexpr unsigned kDefaultMaxPhotons = 6;
inline constexpr double kPruneThreshold = 1e-12;

/// Sparse few-photon state: occupation configuration -> amplitude.
/// Immutable once built; amplitudes below kPruneThreshold are dropped.
class PureState {
 public:
  using term_map = std::map<BasisConfiguration, cplx>;

  /// The zero vector (used for empty post-selection results).
  PureState() = default;

  explicit PureState(term_map terms, unsigned max_photons = kDefaultMaxPhotons)
      : max_photons_(max_photons) {
    for (auto& [config, amp] : terms) {
      if (std::abs(amp) < kPruneThreshold) continue;
      if (config.total() > max_photons_)
        throw error(errc::max_photons_exceeded,
                    std::to_string(config.total()) + " photons > limit " + std::to_string(max_photons_));
      squared_norm_ += std::norm(amp);
      terms_.emplace(config, amp);
    }
  }

  const term_map& terms() const { return terms_; }
  double squared_norm() const { return squared_norm_; }
  unsigned max_photons() const { return max_photons_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  cplx amplitude(const BasisConfiguration& c) const {
    auto it = terms_.find(c);
    return it == terms_.end() ? cplx{} : it->second;
  }

  std::set<std::string> spatial_modes() const {
    std::set<std::string> out;
    for (const auto& [config, amp] : terms_)
      for (const auto& [m, n] : config) out.insert(m.spatial);
    return out;
  }

  PureState scaled(cplx factor) const {
    term_map t;
    for (const auto& [c, a] : terms_) t.emplace(c, a * factor);
    return PureState(std::move(t), max_photons_);
  }

  friend PureState operator+(const PureState& a, const PureState& b) {
    term_map t = a.terms_;
    for (const auto& [c, amp] : b.terms_) t[c] += amp;
    return PureState(std::move(t), std::max(a.max_photons_, b.max_photons_));
  }
  friend PureState operator*(cplx f, const PureState& s) { return s.scaled(f); }

 private:
  term_map terms_;
  double squared_norm_ = 0.0;
  unsigned max_photons_ = kDefaultMaxPhotons;
};

inline PureState vacuum(unsigned max_photons = kDefaultMaxPhotons) {
  return PureState({{BasisConfiguration{}, cplx{1.0, 0.0}}}, max_photons);
}

/// Applies a^dagger for `mode`: |n> -> sqrt(n+1)|n+1>.
inline PureState create_photon(const PureState& state, const ModeLabel& mode) {
  PureState::term_map t;
  for (const auto& [config, amp] : state.terms()) {
    const unsigned n = config.count(mode);
    if (config.total() + 1 > state.max_photons())
      throw error(errc::max_photons_exceeded, "adding a photon to " + mode.str() + " exceeds limit " +
                                                  std::to_string(state.max_photons()));
    BasisConfiguration next = config;
    next.add(mode);
    t[next] += amp * std::sqrt(static_cast<double>(n + 1));
  }
  return PureState(std::move(t), state.max_photons());
}

/// Applies (alpha a_H^dagger + beta a_V^dagger) on a spatial mode.
inline PureState create_photon(const PureState& state, const std::string& spatial, const Jones& pol,
                               std::uint32_t tag = 0) {
  PureState out;
  if (std::abs(pol.h()) >= kPruneThreshold)
    out = out + pol.h() * create_photon(state, ModeLabel(spatial, Pol::H, tag));
  if (std::abs(pol.v()) >= kPruneThreshold)
    out = out + pol.v() * create_photon(state, ModeLabel(spatial, Pol::V, tag));
  return PureState(out.terms(), state.max_photons());
}

inline PureState tensor(const PureState& s1, const PureState& s2) {
  const auto m1 = s1.spatial_modes();
  for (const auto& s : s2.spatial_modes())
    if (m1.count(s)) throw error(errc::mode_collision, "spatial mode '" + s + "' appears in both factors");
  const unsigned limit = std::max(s1.max_photons(), s2.max_photons());
  PureState::term_map t;
  for (const auto& [c1, a1] : s1.terms())
    for (const auto& [c2, a2] : s2.terms()) {
      if (c1.total() + c2.total() > limit)
        throw error(errc::max_photons_exceeded, "tensor product exceeds photon limit");
      BasisConfiguration c = c1;
      for (const auto& [m, n] : c2) c.add(m, n);
      t[c] += a1 * a2;
    }
  return PureState(std::move(t), limit);
}

struct Normalized {
  PureState state;
  double norm;
};

inline Normalized normalize(const PureState& state) {
  if (!(state.squared_norm() > kPruneThreshold))
    throw error(errc::zero_state, "cannot normalize a state with squared norm " +
                                      std::to_string(state.squared_norm()));
  const double n = std::sqrt(state.squared_norm());
  return {state.scaled(1.0 / n), n};
}

/// <s1|s2>
inline cplx inner_product(const PureState& s1, const PureState& s2) {
  cplx acc{};
  const auto& small = s1.size() <= s2.size() ? s1 : s2;
  const auto& large = s1.size() <= s2.size() ? s2 : s1;
  for (const auto& [c, a] : small.terms()) {
    auto it = large.terms().find(c);
    if (it == large.terms().end()) continue;
    acc += &small == &s1 ? std::conj(a) * it->second : std::conj(it->second) * a;
  }
  return acc;
}

namespace detail {

inline double sqrt_factorial(unsigned n) {
  double f = 1.0;
  for (unsigned k = 2; k <= n; ++k) f *= static_cast<double>(k);
  return std::sqrt(f);
}

}  // namespace detail

/// Substitutes each input creation operator by its image under `t` and
/// re-expands. Modes the transform does not list pass through; internal tags
/// are carried onto the output modes.
inline PureState apply_transform(const PureState& state, const ModeTransform& t) {
  using poly = std::map<BasisConfiguration, cplx>;
  const auto& u = t.matrix();
  PureState::term_map out;

  for (const auto& [config, amp] : state.terms()) {
    double denom = 1.0;
    for (const auto& [m, n] : config) denom *= detail::sqrt_factorial(n);
    poly p{{BasisConfiguration{}, amp / denom}};

    for (const auto& [mode, n] : config) {
      std::vector<std::pair<ModeLabel, cplx>> image;
      if (auto idx = t.input_index(mode.with_tag(0))) {
        const auto col = static_cast<Eigen::Index>(*idx);
        for (Eigen::Index r = 0; r < u.rows(); ++r)
          if (std::abs(u(r, col)) > 0.0)
            image.emplace_back(t.outputs()[static_cast<std::size_t>(r)].with_tag(mode.tag), u(r, col));
      } else {
        image.emplace_back(mode, cplx{1.0, 0.0});
      }
      for (unsigned k = 0; k < n; ++k) {
        poly next;
        for (const auto& [mono, c] : p)
          for (const auto& [target, coeff] : image) {
            BasisConfiguration m2 = mono;
            m2.add(target);
            next[m2] += c * coeff;
          }
        p = std::move(next);
      }
    }

    for (const auto& [mono, c] : p) {
      double mult = 1.0;
      for (const auto& [m, n] : mono) mult *= detail::sqrt_factorial(n);
      out[mono] += c * mult;
    }
  }
  return PureState(std::move(out), state.max_photons());
}

}  // namespace telecloning
