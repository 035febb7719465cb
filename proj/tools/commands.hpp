#pragma once

// Subcommand implementations, separated from argument parsing so tests can
// drive them with in-memory streams.
//
// Exit codes: 0 success, 1 failed check or runtime error, 2 bad flags or
// circuit parse error, 3 output write failure, 4 zero-probability
// post-selection in `run`.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "telecloning/circuit.hpp"
#include "telecloning/json.hpp"
#include "telecloning/protocol.hpp"
#include "telecloning/report.hpp"
#include "telecloning/verification.hpp"

namespace telecloning::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitWrite = 3;
inline constexpr int kExitZeroProbability = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::optional<Jones> named_polarization(const std::string& label) {
  if (label == "H") return Jones::horizontal();
  if (label == "V") return Jones::vertical();
  if (label == "P45") return Jones::diagonal();
  if (label == "M45") return Jones::antidiagonal();
  if (label == "L") return Jones::left();
  if (label == "R") return Jones::right();
  return std::nullopt;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    const auto b = cur.find_first_not_of(" \t");
    const auto e = cur.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
    cur.clear();
  };
  for (char ch : s) {
    if (ch == ',') flush();
    else cur += ch;
  }
  flush();
  return out;
}

inline double parse_number(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = first + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v))
    throw UsageError("invalid number '" + s + "' in " + what);
  return v;
}

inline void require_format(const std::string& format) {
  if (format != "csv" && format != "json") throw UsageError("unknown format '" + format + "' (csv or json)");
}

/// Writes `content` to `path`, or to `fallback` when path is empty.
inline int emit(const std::string& content, const std::string& path, std::ostream& fallback, std::ostream& err) {
  if (path.empty()) {
    fallback << content;
    fallback.flush();
    if (!fallback) {
      err << "error: failed writing output\n";
      return kExitWrite;
    }
    return kExitOk;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot open '" << path << "' for writing\n";
    return kExitWrite;
  }
  f << content;
  f.close();
  if (!f) {
    err << "error: failed writing '" << path << "'\n";
    return kExitWrite;
  }
  return kExitOk;
}

inline std::string render_table(const report::Table& t, const std::string& format) {
  std::ostringstream os;
  if (format == "json") report::write_json(os, t);
  else report::write_csv(os, t);
  return os.str();
}

// --- sweep -----------------------------------------------------------------

struct SweepOptions {
  std::string r_list = "0.1,0.3,0.5,0.7,0.9";
  std::string inputs = "H,P45,L";
  double v = 1.0;
  std::string out;
  std::string format = "csv";
};

inline report::Table sweep_table(const SweepOptions& opt) {
  require_format(opt.format);
  std::vector<double> Rs;
  for (const auto& tok : split_list(opt.r_list)) {
    const double R = parse_number(tok, "--r-list");
    if (!(R >= 0.0 && R <= 1.0)) throw UsageError("reflectivity " + tok + " outside [0, 1]");
    Rs.push_back(R);
  }
  std::vector<std::string> labels = split_list(opt.inputs);
  std::vector<Jones> inputs;
  for (const auto& l : labels) {
    auto j = named_polarization(l);
    if (!j) throw UsageError("unknown input polarization '" + l + "' (H, V, P45, M45, L, R)");
    inputs.push_back(*j);
  }
  if (!(opt.v >= 0.0 && opt.v <= 1.0)) throw UsageError("--v must lie in [0, 1]");

  const auto results = sweep(Rs, inputs, opt.v);
  report::Table t;
  t.columns = {"R", "input", "F_e", "F_d", "p_success", "F_e_analytic", "F_d_analytic", "P_analytic", "v",
               "optimal_branch"};
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    const auto a = analytic_fidelities(r.R);
    t.rows.push_back({r.R, labels[i % labels.size()], r.F_e, r.F_d, r.p_success, a.F_e, a.F_d, a.P, opt.v,
                      optimal_branch(r.F_e, r.F_d)});
  }
  return t;
}

inline int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    return emit(render_table(sweep_table(opt), opt.format), opt.out, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

// --- verify ----------------------------------------------------------------

inline int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.grid_points < 2) {
    err << "error: --grid-points must be at least 2\n";
    return kExitUsage;
  }
  if (!(opt.tolerance >= 0.0)) {
    err << "error: --tolerance must be nonnegative\n";
    return kExitUsage;
  }
  const auto checks = run_invariant_suite(opt);
  std::size_t failed = 0;
  for (const auto& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " residual=" << report::format_number(c.residual)
        << " tolerance=" << report::format_number(c.tolerance) << '\n';
    if (!c.passed) ++failed;
  }
  if (failed == 0) {
    out << "all " << checks.size() << " checks passed\n";
    return kExitOk;
  }
  out << failed << " of " << checks.size() << " checks failed\n";
  return kExitFailed;
}

// --- fringe ----------------------------------------------------------------

struct FringeOptions {
  int phi_steps = 41;
  double delta = 0.0;
  double gamma = 0.0;
  std::string out;
  std::string format = "csv";
};

inline int cmd_fringe(const FringeOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    require_format(opt.format);
    if (opt.phi_steps < 2) throw UsageError("--phi-steps must be at least 2");
    std::vector<double> phis;
    for (int k = 0; k < opt.phi_steps; ++k) phis.push_back(2.0 * std::numbers::pi * k / (opt.phi_steps - 1));
    const auto fringes = simulate_fringes(phis, opt.delta, opt.gamma);
    report::Table t;
    t.columns = {"phi", "coincidence_ae", "coincidence_df", "gap", "synchronized"};
    for (const auto& p : fringes) {
      const double gap = std::abs(p.coincidence_ae - p.coincidence_df);
      t.rows.push_back({p.phi, p.coincidence_ae, p.coincidence_df, gap, gap < kSynchronizedTolerance});
    }
    return emit(render_table(t, opt.format), opt.out, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

// --- counts ----------------------------------------------------------------

struct CountsOptions {
  double r = 1.0 / 3.0;
  std::string input = "V";
  std::int64_t trials = 100000;
  std::uint64_t seed = 0;
  double v = 1.0;
  std::string out;
  std::string format = "csv";
};

inline report::Table counts_table(const CountsOptions& opt) {
  require_format(opt.format);
  if (!(opt.r >= 0.0 && opt.r <= 1.0)) throw UsageError("--r must lie in [0, 1]");
  if (!(opt.v >= 0.0 && opt.v <= 1.0)) throw UsageError("--v must lie in [0, 1]");
  if (opt.trials < 0) throw UsageError("--trials must be nonnegative");
  const auto pol = named_polarization(opt.input);
  if (!pol) throw UsageError("unknown input polarization '" + opt.input + "'");

  const auto mc = monte_carlo_experiment(opt.r, *pol, static_cast<std::uint64_t>(opt.trials), opt.seed, opt.v);
  auto est = [](const std::optional<Estimate>& e, bool se) -> report::Cell {
    if (!e) return report::Absent{};
    return se ? e->standard_error : e->value;
  };
  report::Table t;
  t.columns = {"R",        "input",     "v",        "seed",     "trials",   "n_in_in",  "n_in_orth",
               "n_orth_in", "n_orth_orth", "kept",   "F_e_hat",  "F_e_se",   "F_d_hat",  "F_d_se",
               "F_e",      "F_d",       "p_success"};
  t.rows.push_back({opt.r, opt.input, opt.v, mc.seed, mc.trials, mc.counts[0], mc.counts[1], mc.counts[2],
                    mc.counts[3], mc.kept, est(mc.F_e, false), est(mc.F_e, true), est(mc.F_d, false),
                    est(mc.F_d, true), mc.exact.F_e, mc.exact.F_d, mc.exact.p_success});
  return t;
}

inline int cmd_counts(const CountsOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    return emit(render_table(counts_table(opt), opt.format), opt.out, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

// --- run -------------------------------------------------------------------

struct RunOptions {
  std::string circuit_path;
  std::string out;
  std::string format = "text";
  std::string dump_transform;
};

inline std::string complex_text(cplx z) {
  return report::format_number(z.real()) + (z.imag() < 0 ? "" : "+") + report::format_number(z.imag()) + "i";
}

inline std::string run_report_text(const circuit::CircuitRun& run) {
  std::ostringstream os;
  os << "p_success " << report::format_number(run.probability) << '\n';
  os << "post_selected " << (run.post_selected ? "true" : "false") << '\n';
  os << "state\n";
  for (const auto& [config, amp] : run.state.terms()) os << "  " << config.str() << "  " << complex_text(amp) << '\n';
  for (const auto& mode : run.modes) {
    const auto rho = partial_trace(run.state, {mode});
    os << "rho " << mode << " basis";
    for (const auto& c : rho.basis()) os << " [" << c.str() << "]";
    os << '\n';
    for (Eigen::Index r = 0; r < rho.matrix().rows(); ++r) {
      os << " ";
      for (Eigen::Index c = 0; c < rho.matrix().cols(); ++c) os << ' ' << complex_text(rho.matrix()(r, c));
      os << '\n';
    }
  }
  return os.str();
}

inline std::string run_report_json(const circuit::CircuitRun& run) {
  nlohmann::json reduced = nlohmann::json::object();
  for (const auto& mode : run.modes) reduced[mode] = to_json(partial_trace(run.state, {mode}));
  nlohmann::json j = {{"p_success", run.probability},
                      {"post_selected", run.post_selected},
                      {"state", to_json(run.state)},
                      {"reduced", std::move(reduced)}};
  return j.dump(2) + "\n";
}

inline int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.format != "text" && opt.format != "json") {
    err << "error: unknown format '" << opt.format << "' (text or json)\n";
    return kExitUsage;
  }
  std::ifstream in(opt.circuit_path, std::ios::binary);
  if (!in) {
    err << "error: cannot read circuit file '" << opt.circuit_path << "'\n";
    return kExitUsage;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  circuit::CircuitDescription desc;
  try {
    desc = circuit::parse_circuit(buf.str());
  } catch (const parse_error& e) {
    err << opt.circuit_path << ": " << e.what() << '\n';
    return kExitUsage;
  }

  circuit::CircuitRun run;
  try {
    run = circuit::execute(desc);
  } catch (const error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailed;
  }

  if (!opt.dump_transform.empty()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : run.transforms) arr.push_back(to_json(t));
    if (int rc = emit(arr.dump(2) + "\n", opt.dump_transform, out, err); rc != kExitOk) return rc;
  }
  if (run.failed) {
    err << "error: measurement at line " << run.failed_line << " has zero probability; no conditional state\n";
    return kExitZeroProbability;
  }
  return emit(opt.format == "json" ? run_report_json(run) : run_report_text(run), opt.out, out, err);
}

}  // namespace telecloning::cli
