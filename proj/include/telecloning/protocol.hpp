#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "telecloning/error.hpp"
#include "telecloning/fock.hpp"
#include "telecloning/jones.hpp"
#include "telecloning/measurement.hpp"
#include "telecloning/optics.hpp"

namespace telecloning {

// Mode names follow the optical layout: a-b is the heralding pair, c-d the
// ancilla pair, e and f the outputs of the partial Bell measurement.
namespace modes {
inline const std::string a = "a", b = "b", c = "c", d = "d", e = "e", f = "f";
}

/// (|H>_{s1}|V>_{s2} - |V>_{s1}|H>_{s2}) / sqrt(2)
inline PureState bell_psi_minus(const std::string& s1, const std::string& s2, std::uint32_t tag1 = 0,
                                std::uint32_t tag2 = 0) {
  if (s1 == s2) throw error(errc::mode_collision, "Bell pair needs two distinct modes, got '" + s1 + "' twice");
  const double k = 1.0 / std::numbers::sqrt2;
  BasisConfiguration hv({{ModeLabel(s1, Pol::H, tag1), 1}, {ModeLabel(s2, Pol::V, tag2), 1}});
  BasisConfiguration vh({{ModeLabel(s1, Pol::V, tag1), 1}, {ModeLabel(s2, Pol::H, tag2), 1}});
  return PureState({{hv, k}, {vh, -k}});
}

struct HeraldedInput {
  PureState state;  // normalized, over modes a and b
  double herald_probability;
};

/// Heralds the b photon of |Psi->_ab in `pol` by detecting a behind a
/// polarizer set to the orthogonal state.
inline HeraldedInput prepare_heralded_input(const Jones& pol) {
  const PureState pair = bell_psi_minus(modes::a, modes::b);
  const PureState projected = polarization_projector(modes::a, pol.orthogonal()).apply(pair);
  const double p = projected.squared_norm();
  return {normalize(projected).state, p};
}

/// A single photon in `pol` at mode b, no herald.
inline PureState direct_input(const Jones& pol, std::uint32_t tag = 0) {
  return create_photon(vacuum(), modes::b, pol, tag);
}

enum class InputRoute { heralded, direct };

struct CloningResult {
  double R = 0.0;
  Jones input;
  double F_e = 0.0;
  double F_d = 0.0;
  double p_success = 0.0;
};

/// Intermediate states of one pass through the cloning pipeline.
struct CloningRun {
  PureState initial;
  PureState after_splitter;
  PureState selected_component;  // unnormalized four-fold component
  PostSelection selection;
  CloningResult result;
};

/// The cloning pipeline. With `distinguishable`, Eve's c photon carries an
/// internal tag orthogonal to the input photon's, so the two never interfere.
inline CloningRun simulate_cloning(double R, const Jones& input, InputRoute route = InputRoute::heralded,
                                   bool distinguishable = false) {
  const Reflectivity refl(R);
  const std::uint32_t ancilla_tag = distinguishable ? 1u : 0u;
  const PureState ancilla = bell_psi_minus(modes::c, modes::d, ancilla_tag, 0);

  std::vector<std::string> fourfold = {modes::d, modes::e, modes::f};
  PureState in;
  if (route == InputRoute::heralded) {
    in = prepare_heralded_input(input).state;
    fourfold.push_back(modes::a);
  } else {
    in = direct_input(input);
  }

  CloningRun run;
  run.initial = tensor(in, ancilla);
  run.after_splitter = apply_transform(run.initial, beamsplitter(refl, {modes::b, modes::c}, {modes::e, modes::f}));
  const CoincidencePattern pattern(fourfold);
  run.selected_component = coincidence_component(run.after_splitter, pattern);
  run.selection = post_select(run.after_splitter, pattern);

  run.result.R = R;
  run.result.input = input;
  run.result.p_success = run.selection.probability;
  if (!run.selection.empty) {
    run.result.F_e = fidelity(partial_trace(run.selection.conditional, {modes::e}), input, modes::e);
    run.result.F_d = fidelity(partial_trace(run.selection.conditional, {modes::d}), input, modes::d);
  }
  return run;
}

struct AnalyticFidelities {
  double F_e;
  double F_d;
  double P;
};

/// Closed forms: P = 1 - 3R + 3R^2,
/// F_e = [(1 - 2R)^2 + (1 - R)^2] / 2P,  F_d = [R^2 + (1 - R)^2] / 2P.
inline AnalyticFidelities analytic_fidelities(double R) {
  Reflectivity checked(R);
  const double P = 1.0 - 3.0 * R + 3.0 * R * R;
  const double F_e = ((1.0 - 2.0 * R) * (1.0 - 2.0 * R) + (1.0 - R) * (1.0 - R)) / (2.0 * P);
  const double F_d = (R * R + (1.0 - R) * (1.0 - R)) / (2.0 * P);
  return {F_e, F_d, P};
}

/// (1 - F_d)(1 - F_e) - [1/2 - (1 - F_d) - (1 - F_e)]^2; negative means the
/// pair of fidelities is forbidden, zero means the bound is saturated.
inline double no_cloning_residual(double F_e, double F_d) {
  const double x = 1.0 - F_e, y = 1.0 - F_d;
  const double s = 0.5 - y - x;
  return y * x - s * s;
}

inline constexpr double kBranchTolerance = 1e-10;

/// True on the optimal branch, where 1/2 - (1 - F_d) - (1 - F_e) >= 0.
inline bool optimal_branch(double F_e, double F_d) {
  return 0.5 - (1.0 - F_d) - (1.0 - F_e) >= -kBranchTolerance;
}

inline void require_overlap(double v) {
  if (!(v >= 0.0 && v <= 1.0))
    throw error(errc::invalid_overlap, "overlap v = " + std::to_string(v) + " outside [0, 1]");
}

/// Mixture v * (coherent protocol) + (1 - v) * (distinguishable photons),
/// interpolated linearly in F_e, F_d and p_success.
inline CloningResult distinguishability_fidelities(double R, const Jones& input, double v,
                                                   InputRoute route = InputRoute::heralded) {
  require_overlap(v);
  Reflectivity checked(R);
  const auto coherent = simulate_cloning(R, input, route, false).result;
  if (v == 1.0) return coherent;
  const auto tagged = simulate_cloning(R, input, route, true).result;
  if (v == 0.0) return tagged;
  CloningResult out = coherent;
  out.F_e = v * coherent.F_e + (1.0 - v) * tagged.F_e;
  out.F_d = v * coherent.F_d + (1.0 - v) * tagged.F_d;
  out.p_success = v * coherent.p_success + (1.0 - v) * tagged.p_success;
  return out;
}

inline CloningResult run_cloning(double R, const Jones& input, double v = 1.0,
                                 InputRoute route = InputRoute::heralded) {
  require_overlap(v);
  if (v == 1.0) return simulate_cloning(R, input, route).result;
  return distinguishability_fidelities(R, input, v, route);
}

/// R-major, then input order.
inline std::vector<CloningResult> sweep(const std::vector<double>& R_values, const std::vector<Jones>& inputs,
                                        double v = 1.0) {
  for (double R : R_values) Reflectivity checked(R);
  require_overlap(v);
  std::vector<CloningResult> out;
  out.reserve(R_values.size() * inputs.size());
  for (double R : R_values)
    for (const auto& in : inputs) out.push_back(run_cloning(R, in, v));
  return out;
}

/// Two photons entering b and c of beamsplitter(R); returns the probability
/// of one photon in each of e and f. `distinguishable` gives them orthogonal tags.
inline double two_photon_coincidence(double R, const Jones& pol_b, const Jones& pol_c, bool distinguishable) {
  PureState s = create_photon(vacuum(), modes::b, pol_b, 0);
  s = create_photon(s, modes::c, pol_c, distinguishable ? 1u : 0u);
  s = apply_transform(s, beamsplitter(R, {modes::b, modes::c}, {modes::e, modes::f}));
  return coincidence_component(s, {modes::e, modes::f}).squared_norm();
}

// ---------------------------------------------------------------------------
// Fringes of the two-photon Mach-Zehnder

struct FringePoint {
  double phi;
  double coincidence_ae;  // V photon (heralded by a behind 0 deg) found in e
  double coincidence_df;  // H photon (heralded by d behind 90 deg) found in f
};

inline constexpr double kSynchronizedTolerance = 1e-6;

/// Heralds b as V and c as H from two Bell pairs, sends both through the
/// interferometer and reports the polarization-resolved output probabilities
/// for each phase.
inline std::vector<FringePoint> simulate_fringes(const std::vector<double>& phi_values, double delta,
                                                 double gamma) {
  PureState src = tensor(bell_psi_minus(modes::a, modes::b), bell_psi_minus(modes::c, modes::d));
  src = polarization_projector(modes::a, Jones::horizontal()).apply(src);
  src = polarization_projector(modes::d, Jones::vertical()).apply(src);
  src = normalize(src).state;

  std::vector<FringePoint> out;
  out.reserve(phi_values.size());
  for (double phi : phi_values) {
    const PureState s =
        apply_transform(src, mach_zehnder(phi, delta, gamma, {modes::b, modes::c}, {modes::e, modes::f}));
    double ae = 0.0, df = 0.0;
    for (const auto& [config, amp] : s.terms()) {
      if (config.count(ModeLabel(modes::e, Pol::V)) > 0) ae += std::norm(amp);
      if (config.count(ModeLabel(modes::f, Pol::H)) > 0) df += std::norm(amp);
    }
    out.push_back({phi, ae, df});
  }
  return out;
}

/// Maximum |coincidence_ae - coincidence_df| over a fringe table.
inline double fringe_gap(const std::vector<FringePoint>& fringes) {
  double gap = 0.0;
  for (const auto& p : fringes) gap = std::max(gap, std::abs(p.coincidence_ae - p.coincidence_df));
  return gap;
}

/// Optional mapping from delay-line position to interferometer phase.
/// Defaults: 788 nm down-converted photons behind a 3 nm FWHM filter with a
/// Gaussian spectrum; coherence length lambda^2 / dlambda.
struct DelayLineOptics {
  double wavelength_um = 0.788;
  double bandwidth_um = 0.003;

  double phase(double delay_um) const { return 2.0 * std::numbers::pi * delay_um / wavelength_um; }
  double coherence_length_um() const { return wavelength_um * wavelength_um / bandwidth_um; }
  /// |g1| of a Gaussian spectrum at path difference `delay_um`.
  double envelope(double delay_um) const {
    const double x = std::numbers::pi * delay_um / coherence_length_um();
    return std::exp(-x * x / (4.0 * std::numbers::ln2));
  }
};

/// Single-photon fringe versus delay-line position: the coherent curve washed
/// out toward 1/2 by the coherence envelope.
inline std::vector<FringePoint> simulate_position_scan(const std::vector<double>& delays_um, double delta,
                                                       double gamma, const DelayLineOptics& optics = {}) {
  std::vector<double> phases;
  for (double x : delays_um) phases.push_back(optics.phase(x));
  auto fringes = simulate_fringes(phases, delta, gamma);
  for (std::size_t i = 0; i < fringes.size(); ++i) {
    const double env = optics.envelope(delays_um[i]);
    fringes[i].coincidence_ae = 0.5 + env * (fringes[i].coincidence_ae - 0.5);
    fringes[i].coincidence_df = 0.5 + env * (fringes[i].coincidence_df - 0.5);
  }
  return fringes;
}

// ---------------------------------------------------------------------------
// Finite-count experiments

/// Joint analyzer outcomes per heralded trial. Index: 0 = (e in input, d in
/// input), 1 = (e in input, d orthogonal), 2 = (e orthogonal, d in input),
/// 3 = both orthogonal.
using OutcomeProbabilities = std::array<double, 4>;

inline OutcomeProbabilities analyzer_distribution(const CloningRun& run) {
  OutcomeProbabilities q{};
  if (run.selection.empty) return q;
  const Jones in = run.result.input;
  const Jones settings[2] = {in, in.orthogonal()};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      const auto s = polarization_projector(modes::e, settings[x])
                         .apply(polarization_projector(modes::d, settings[y]).apply(run.selection.conditional));
      q[static_cast<std::size_t>(2 * x + y)] = run.selection.probability * s.squared_norm();
    }
  return q;
}

struct Estimate {
  double value;
  double standard_error;
};

struct MonteCarloResult {
  CloningResult exact;
  double v = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::array<std::uint64_t, 4> counts{};
  std::uint64_t kept = 0;
  std::optional<Estimate> F_e;  // absent when nothing was kept
  std::optional<Estimate> F_d;
};

inline Estimate binomial_estimate(std::uint64_t hits, std::uint64_t n) {
  const double f = static_cast<double>(hits) / static_cast<double>(n);
  return {f, std::sqrt(f * (1.0 - f) / static_cast<double>(n))};
}

/// Samples `trials` heralded events through the analyzers and estimates the
/// clone fidelities from the four-fold counts.
inline MonteCarloResult monte_carlo_experiment(double R, const Jones& input, std::uint64_t trials,
                                               std::uint64_t seed, double v = 1.0) {
  require_overlap(v);
  const auto coherent = simulate_cloning(R, input);
  OutcomeProbabilities q = analyzer_distribution(coherent);
  if (v < 1.0) {
    const auto tagged = simulate_cloning(R, input, InputRoute::heralded, true);
    const auto qt = analyzer_distribution(tagged);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = v * q[i] + (1.0 - v) * qt[i];
  }
  double total = 0.0;
  for (double& x : q) total += x = std::clamp(x, 0.0, 1.0);
  if (total > 1.0)
    for (double& x : q) x /= total;

  MonteCarloResult out;
  out.exact = run_cloning(R, input, v);
  out.v = v;
  out.seed = seed;
  out.trials = trials;
  const auto counts = sample_counts(q, trials, seed);
  std::copy(counts.begin(), counts.end(), out.counts.begin());
  for (auto n : counts) out.kept += n;
  if (out.kept > 0) {
    out.F_e = binomial_estimate(out.counts[0] + out.counts[1], out.kept);
    out.F_d = binomial_estimate(out.counts[0] + out.counts[2], out.kept);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct Band {
  double min;
  double max;
};

struct JitterBand {
  Band F_e;
  Band F_d;
};

/// Range of the closed-form fidelities while the reflectivity wanders over
/// [R - dR, R + dR]. F_e is stationary at R = 0 and R = 2/3, F_d at R = 1/2.
inline JitterBand reflectivity_jitter_band(double R, double dR) {
  if (!(dR >= 0.0)) throw error(errc::invalid_reflectivity, "negative jitter " + std::to_string(dR));
  const double lo = R - dR, hi = R + dR;
  Reflectivity check_lo(lo), check_hi(hi);

  auto band_of = [&](std::initializer_list<double> stationary, auto field) {
    std::vector<double> pts = {lo, hi};
    for (double s : stationary)
      if (s > lo && s < hi) pts.push_back(s);
    Band b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (double x : pts) {
      const double val = field(analytic_fidelities(x));
      b.min = std::min(b.min, val);
      b.max = std::max(b.max, val);
    }
    return b;
  };
  return {band_of({0.0, 2.0 / 3.0}, [](const AnalyticFidelities& a) { return a.F_e; }),
          band_of({0.5}, [](const AnalyticFidelities& a) { return a.F_d; })};
}

}  // namespace telecloning
