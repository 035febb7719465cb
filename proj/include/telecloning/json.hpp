#pragma once

// Debug serialization.
//
//   state:     {"max_photons": 6, "squared_norm": x, "terms": {"<config>": [re, im], ...}}
//   transform: {"inputs": ["b:H", ...], "outputs": [...], "matrix": [[[re, im], ...], ...]}
//   density:   {"basis": ["<config>", ...], "trace": x, "matrix": [[[re, im], ...], ...]}
//
// <config> is the canonical occupation string, e.g. "d:V e:H f:V": entries
// sorted by (spatial, tag, H < V), "^n" for n > 1 photons, "#k" for a
// nonzero internal tag, "vac" for the vacuum. Matrices are row-major with
// rows indexing outputs.

#include <json.hpp>

#include "telecloning/fock.hpp"
#include "telecloning/measurement.hpp"
#include "telecloning/transform.hpp"

namespace telecloning {

inline nlohmann::json complex_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline nlohmann::json matrix_json(const Matrix& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::json to_json(const PureState& s) {
  nlohmann::json terms = nlohmann::json::object();
  for (const auto& [config, amp] : s.terms()) terms[config.str()] = complex_json(amp);
  return {{"max_photons", s.max_photons()}, {"squared_norm", s.squared_norm()}, {"terms", std::move(terms)}};
}

inline nlohmann::json to_json(const ModeTransform& t) {
  auto labels = [](const std::vector<ModeLabel>& v) {
    auto a = nlohmann::json::array();
    for (const auto& m : v) a.push_back(m.str());
    return a;
  };
  return {{"inputs", labels(t.inputs())}, {"outputs", labels(t.outputs())}, {"matrix", matrix_json(t.matrix())}};
}

inline nlohmann::json to_json(const DensityMatrix& rho) {
  auto basis = nlohmann::json::array();
  for (const auto& c : rho.basis()) basis.push_back(c.str());
  return {{"basis", std::move(basis)}, {"trace", rho.trace()}, {"matrix", matrix_json(rho.matrix())}};
}

}  // namespace telecloning
