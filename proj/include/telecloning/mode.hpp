#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "telecloning/error.hpp"

namespace telecloning {

enum class Pol : std::uint8_t { H = 0, V = 1 };

inline char to_char(Pol p) { return p == Pol::H ? 'H' : 'V'; }

/// One optical mode: spatial channel x polarization. `tag` is an internal
/// degree of freedom (arrival time, frequency) that linear optics leaves
/// untouched; photons with different tags never interfere. Untagged modes
/// use tag 0.
struct ModeLabel {
  std::string spatial;
  Pol pol = Pol::H;
  std::uint32_t tag = 0;

  ModeLabel() = default;
  ModeLabel(std::string s, Pol p, std::uint32_t t = 0) : spatial(std::move(s)), pol(p), tag(t) {
    if (spatial.empty()) throw error(errc::invalid_argument, "empty spatial mode identifier");
  }

  friend auto operator<=>(const ModeLabel&, const ModeLabel&) = default;
  friend bool operator==(const ModeLabel&, const ModeLabel&) = default;

  /// Same spatial channel and polarization, ignoring the internal tag.
  bool same_optical_mode(const ModeLabel& other) const {
    return spatial == other.spatial && pol == other.pol;
  }

  ModeLabel with_tag(std::uint32_t t) const { return ModeLabel(spatial, pol, t); }

  std::string str() const {
    std::string out = spatial + ":" + to_char(pol);
    if (tag != 0) out += "#" + std::to_string(tag);
    return out;
  }
};

inline ModeLabel H(std::string spatial) { return {std::move(spatial), Pol::H}; }
inline ModeLabel V(std::string spatial) { return {std::move(spatial), Pol::V}; }

/// Photon occupation numbers over modes. Kept sorted by ModeLabel with no
/// zero entries, so structural equality is physical equality.
class BasisConfiguration {
 public:
  using entry = std::pair<ModeLabel, unsigned>;

  BasisConfiguration() = default;

  explicit BasisConfiguration(std::vector<entry> entries) {
    for (auto& [m, n] : entries) add(m, n);
  }

  unsigned count(const ModeLabel& m) const {
    auto it = find(m);
    return it != entries_.end() && it->first == m ? it->second : 0u;
  }

  void add(const ModeLabel& m, unsigned n = 1) {
    if (n == 0) return;
    auto it = find(m);
    if (it != entries_.end() && it->first == m) {
      it->second += n;
    } else {
      entries_.insert(it, {m, n});
    }
  }

  unsigned total() const {
    unsigned t = 0;
    for (const auto& e : entries_) t += e.second;
    return t;
  }

  /// Photons in a spatial channel, summed over polarization and tag.
  unsigned spatial_count(const std::string& spatial) const {
    unsigned t = 0;
    for (const auto& [m, n] : entries_)
      if (m.spatial == spatial) t += n;
    return t;
  }

  bool empty() const { return entries_.empty(); }
  const std::vector<entry>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  /// Split into (entries on `keep` spatial modes, the rest).
  template <class Pred>
  std::pair<BasisConfiguration, BasisConfiguration> partition(Pred keep) const {
    BasisConfiguration in, out;
    for (const auto& e : entries_) (keep(e.first) ? in : out).entries_.push_back(e);
    return {in, out};
  }

  std::string str() const {
    if (entries_.empty()) return "vac";
    std::string out;
    for (const auto& [m, n] : entries_) {
      if (!out.empty()) out += ' ';
      out += m.str();
      if (n != 1) out += "^" + std::to_string(n);
    }
    return out;
  }

  friend auto operator<=>(const BasisConfiguration&, const BasisConfiguration&) = default;
  friend bool operator==(const BasisConfiguration&, const BasisConfiguration&) = default;

 private:
  std::vector<entry>::iterator find(const ModeLabel& m) {
    return std::lower_bound(entries_.begin(), entries_.end(), m,
                            [](const entry& e, const ModeLabel& k) { return e.first < k; });
  }
  std::vector<entry>::const_iterator find(const ModeLabel& m) const {
    return std::lower_bound(entries_.begin(), entries_.end(), m,
                            [](const entry& e, const ModeLabel& k) { return e.first < k; });
  }

  std::vector<entry> entries_;
};

}  // namespace telecloning
