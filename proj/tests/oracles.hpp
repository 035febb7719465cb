#pragma once

// Test-only reference computations that do not share code paths with the
// library's implementations.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "telecloning/fock.hpp"

namespace telecloning::oracle {

/// Permanent by summing over all permutations (n <= 6 here).
inline cplx permanent(const Matrix& m) {
  const auto n = static_cast<int>(m.rows());
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  cplx total{};
  do {
    cplx prod{1.0, 0.0};
    for (int i = 0; i < n; ++i) prod *= m(i, perm[static_cast<std::size_t>(i)]);
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline double factorial(unsigned n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

/// First-quantized amplitude <out|U|in> = Perm(U[out_i, in_j]) / sqrt(prod n! prod m!),
/// for untagged states over the transform's modes.
inline PureState transform_by_permanent(const PureState& state, const ModeTransform& t) {
  const auto nmodes = t.size();
  PureState::term_map out;
  for (const auto& [config, amp] : state.terms()) {
    std::vector<std::size_t> in_list;
    double in_norm = 1.0;
    for (const auto& [m, n] : config) {
      for (unsigned k = 0; k < n; ++k) in_list.push_back(*t.input_index(m));
      in_norm *= factorial(n);
    }
    const auto photons = in_list.size();
    // Enumerate every output multiset of `photons` photons over nmodes.
    std::vector<unsigned> occ(nmodes, 0);
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t mode, unsigned left) {
      if (mode + 1 == nmodes) {
        occ[mode] = left;
        std::vector<std::size_t> out_list;
        double out_norm = 1.0;
        BasisConfiguration oc;
        for (std::size_t k = 0; k < nmodes; ++k) {
          for (unsigned j = 0; j < occ[k]; ++j) out_list.push_back(k);
          out_norm *= factorial(occ[k]);
          oc.add(t.outputs()[k], occ[k]);
        }
        Matrix sub(static_cast<Eigen::Index>(photons), static_cast<Eigen::Index>(photons));
        for (std::size_t i = 0; i < photons; ++i)
          for (std::size_t j = 0; j < photons; ++j)
            sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                t.matrix()(static_cast<Eigen::Index>(out_list[i]), static_cast<Eigen::Index>(in_list[j]));
        out[oc] += amp * permanent(sub) / std::sqrt(in_norm * out_norm);
        return;
      }
      for (unsigned n = 0; n <= left; ++n) {
        occ[mode] = n;
        rec(mode + 1, left - n);
      }
    };
    if (photons == 0) {
      out[BasisConfiguration{}] += amp;
    } else {
      rec(0, static_cast<unsigned>(photons));
    }
  }
  return PureState(std::move(out), state.max_photons());
}

/// Haar-random unitary via QR of a complex Gaussian matrix with phase fix.
inline Matrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix z(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) z(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx d = r(i, i);
    q.col(i) *= d / std::abs(d);
  }
  return q;
}

/// Distinguishable-photon outcome worked out by hand: the input photon and
/// Eve's photon split independently; (1-R)^2 weight leaves the input in e
/// (F_e = 1), R^2 weight puts Eve's half-singlet photon in e (F_e = 1/2);
/// Bob's photon stays half of an unmeasured singlet (F_d = 1/2).
struct Distinguishable {
  double F_e, F_d, p;
};
inline Distinguishable distinguishable_closed_form(double R) {
  const double stay = (1 - R) * (1 - R), swap = R * R;
  return {(stay + 0.5 * swap) / (stay + swap), 0.5, stay + swap};
}

}  // namespace telecloning::oracle
