#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "telecloning/protocol.hpp"

namespace telecloning {

/// Haar-random polarization: a normalized pair of complex Gaussians
/// (Box-Muller on CountingRng uniforms, so it is reproducible).
inline Jones random_jones(CountingRng& rng) {
  auto gaussian_pair = [&rng]() {
    double u1 = rng.uniform();
    while (u1 <= 0.0) u1 = rng.uniform();
    const double u2 = rng.uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    return cplx(rad * std::cos(2.0 * std::numbers::pi * u2), rad * std::sin(2.0 * std::numbers::pi * u2));
  };
  const cplx h = gaussian_pair();
  const cplx v = gaussian_pair();
  return Jones(h, v);
}

inline std::vector<Jones> random_inputs(std::size_t n, std::uint64_t seed) {
  CountingRng rng(seed);
  std::vector<Jones> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_jones(rng));
  return out;
}

/// Evenly spaced R in [0, 1], endpoints included.
inline std::vector<double> reflectivity_grid(std::size_t points) {
  std::vector<double> out;
  if (points == 1) return {0.0};
  for (std::size_t i = 0; i < points; ++i)
    out.push_back(static_cast<double>(i) / static_cast<double>(points - 1));
  return out;
}

/// The one-photon-per-output component for a V input, written out from the
/// hand expansion of b -> (i r f + t e), c -> (t f + i r e) on |V>_b|Psi->_cd
/// without the Bell prefactor:
///   (t^2 |V>_e|H>_f - r^2 |H>_e|V>_f)|V>_d - (t^2 - r^2)|V>_e|V>_f|H>_d
inline PureState vertical_input_reference(double R) {
  const double t2 = 1.0 - R, r2 = R;
  auto cfg = [](Pol e, Pol f, Pol d) {
    return BasisConfiguration({{ModeLabel("e", e), 1}, {ModeLabel("f", f), 1}, {ModeLabel("d", d), 1}});
  };
  return PureState({{cfg(Pol::V, Pol::H, Pol::V), t2},
                    {cfg(Pol::H, Pol::V, Pol::V), -r2},
                    {cfg(Pol::V, Pol::V, Pol::H), -(t2 - r2)}});
}

/// Largest amplitude difference between two states over the union of their terms.
inline double max_amplitude_difference(const PureState& a, const PureState& b) {
  double worst = 0.0;
  for (const auto& [c, amp] : a.terms()) worst = std::max(worst, std::abs(amp - b.amplitude(c)));
  for (const auto& [c, amp] : b.terms()) worst = std::max(worst, std::abs(amp - a.amplitude(c)));
  return worst;
}

/// sqrt(2) times the simulated post-selected component against the reference expansion.
inline double vertical_input_structure_residual(double R) {
  const auto run = simulate_cloning(R, Jones::vertical(), InputRoute::direct);
  return max_amplitude_difference(run.selected_component.scaled(std::numbers::sqrt2),
                                  vertical_input_reference(R));
}

inline double sample_stddev(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

struct CheckResult {
  std::string name;
  bool passed;
  double residual;
  double tolerance;
};

struct VerifyOptions {
  std::size_t grid_points = 101;
  std::size_t random_inputs = 50;
  double tolerance = 1e-10;
  std::uint64_t seed = 20060101;
};

/// The protocol invariants, each reduced to one worst-case residual.
inline std::vector<CheckResult> run_invariant_suite(const VerifyOptions& opt) {
  const auto grid = reflectivity_grid(opt.grid_points);
  std::vector<Jones> inputs = {Jones::horizontal(), Jones::diagonal(), Jones::left()};
  const auto randoms = random_inputs(opt.random_inputs, opt.seed);
  inputs.insert(inputs.end(), randoms.begin(), randoms.end());

  std::vector<CheckResult> out;
  auto add = [&](std::string name, double residual, double tol) {
    out.push_back({std::move(name), residual <= tol, residual, tol});
  };

  {
    const auto r = run_cloning(1.0 / 3.0, Jones::vertical());
    add("symmetric_point",
        std::max({std::abs(r.F_e - 5.0 / 6.0), std::abs(r.F_d - 5.0 / 6.0), std::abs(r.p_success - 1.0 / 3.0)}),
        opt.tolerance);
  }

  double brute = 0.0, saturation = 0.0, universality = 0.0, routes = 0.0;
  std::size_t branch_mismatches = 0;
  for (double R : grid) {
    const auto a = analytic_fidelities(R);
    std::vector<double> fe, fd;
    for (const auto& in : inputs) {
      const auto r = run_cloning(R, in);
      brute = std::max({brute, std::abs(r.F_e - a.F_e), std::abs(r.F_d - a.F_d), std::abs(r.p_success - a.P)});
      fe.push_back(r.F_e);
      fd.push_back(r.F_d);
    }
    universality = std::max({universality, sample_stddev(fe), sample_stddev(fd)});
    saturation = std::max(saturation, std::abs(no_cloning_residual(a.F_e, a.F_d)));
    const bool expected = R <= 0.5 + 1e-9;
    if (optimal_branch(a.F_e, a.F_d) != expected) ++branch_mismatches;

    const auto direct = run_cloning(R, inputs.front(), 1.0, InputRoute::direct);
    const auto heralded = run_cloning(R, inputs.front());
    routes = std::max({routes, std::abs(direct.F_e - heralded.F_e), std::abs(direct.F_d - heralded.F_d),
                       std::abs(direct.p_success - heralded.p_success)});
  }
  add("brute_force_vs_analytic", brute, opt.tolerance);
  add("saturation_residual", saturation, opt.tolerance);
  add("branch_condition", static_cast<double>(branch_mismatches), 0.0);
  add("universality", universality, std::min(opt.tolerance, 1e-9));
  add("heralded_vs_direct", routes, opt.tolerance);

  double structure = 0.0;
  for (double R : grid) structure = std::max(structure, vertical_input_structure_residual(R));
  add("post_selected_structure", structure, std::min(opt.tolerance, 1e-12));
  return out;
}

}  // namespace telecloning
