#pragma once

// Line-based circuit description:
//
//   mode <id>
//   photon <id> <H|V|P45|L|jones(aRe,aIm,bRe,bIm)>
//   bell <id1> <id2>
//   bs <in1> <in2> <out1> <out2> R=<float>
//   mz <in1> <in2> <out1> <out2> phi=<float> [delta=<float>] [gamma=<float>]
//   qwp <id> angle=<float>
//   hwp <id> angle=<float>
//   pol <id> angle=<float>
//   select <id>...
//
// '#' starts a comment. Angles are degrees; mz phases are radians.
// mode/photon/bell declare their ids and bs/mz declare their outputs; every
// other use must refer to a declared id.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "telecloning/error.hpp"
#include "telecloning/fock.hpp"
#include "telecloning/measurement.hpp"
#include "telecloning/optics.hpp"

namespace telecloning::circuit {

struct ModeDecl {
  std::string id;
};
struct PhotonStmt {
  std::string id;
  std::string label;  // H, V, P45, L, or empty for an explicit jones(...)
  Jones pol;
};
struct BellStmt {
  std::string first, second;
};
struct BeamsplitterStmt {
  std::string in1, in2, out1, out2;
  double R;
};
struct MachZehnderStmt {
  std::string in1, in2, out1, out2;
  double phi, delta = 0.0, gamma = 0.0;
};
struct WavePlateStmt {
  WavePlate kind;
  std::string id;
  double angle_deg;
};
struct PolarizerStmt {
  std::string id;
  double angle_deg;
};
struct SelectStmt {
  std::vector<std::string> ids;
};

using StatementBody = std::variant<ModeDecl, PhotonStmt, BellStmt, BeamsplitterStmt, MachZehnderStmt,
                                   WavePlateStmt, PolarizerStmt, SelectStmt>;

struct Statement {
  StatementBody body;
  std::size_t line = 0;
  std::size_t column = 0;
};

struct CircuitDescription {
  std::vector<Statement> statements;
};

namespace detail {

struct Token {
  std::string text;
  std::size_t column;
};

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
  return true;
}

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    int depth = 0;
    while (i < line.size() && (depth > 0 || !std::isspace(static_cast<unsigned char>(line[i])))) {
      if (line[i] == '(') ++depth;
      if (line[i] == ')') --depth;
      ++i;
    }
    std::string text;
    for (char ch : line.substr(start, i - start))
      if (!std::isspace(static_cast<unsigned char>(ch))) text += ch;
    out.push_back({std::move(text), start + 1});
  }
  return out;
}

class LineParser {
 public:
  LineParser(std::vector<Token> tokens, std::size_t line) : tokens_(std::move(tokens)), line_(line) {}

  [[noreturn]] void fail(const Token& tok, const std::string& msg, errc code = errc::parse_error) const {
    throw parse_error(code, line_, tok.column, tok.text, msg);
  }

  const Token& keyword() const { return tokens_.front(); }

  void expect_arity(std::size_t min_args, std::size_t max_args) const {
    const std::size_t args = tokens_.size() - 1;
    if (args < min_args || args > max_args) {
      const Token& at = args > max_args ? tokens_[max_args + 1] : tokens_.back();
      fail(at, "'" + keyword().text + "' expects " + std::to_string(min_args) +
                   (min_args == max_args ? "" : " to " + std::to_string(max_args)) + " arguments, got " +
                   std::to_string(args));
    }
  }

  const Token& arg(std::size_t i) const { return tokens_[i + 1]; }
  std::size_t arg_count() const { return tokens_.size() - 1; }

  std::string identifier(std::size_t i) const {
    const Token& t = arg(i);
    if (!is_identifier(t.text)) fail(t, "expected a mode identifier");
    return t.text;
  }

  double number(const Token& t, std::string_view text) const {
    double value = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (!text.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) fail(t, "malformed number");
    return value;
  }

  /// Parses `key=<float>` arguments from position `from` onward.
  std::map<std::string, double> key_values(std::size_t from, const std::set<std::string>& allowed) const {
    std::map<std::string, double> out;
    for (std::size_t i = from; i < arg_count(); ++i) {
      const Token& t = arg(i);
      const auto eq = t.text.find('=');
      if (eq == std::string::npos) fail(t, "expected key=value");
      const std::string key = t.text.substr(0, eq);
      if (!allowed.count(key)) fail(t, "unknown parameter '" + key + "'");
      if (out.count(key)) fail(t, "parameter '" + key + "' given twice");
      out[key] = number(t, std::string_view(t.text).substr(eq + 1));
    }
    return out;
  }

  double required(const std::map<std::string, double>& kv, const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end()) fail(keyword(), "missing parameter '" + key + "='");
    return it->second;
  }

  PhotonStmt photon() const {
    expect_arity(2, 2);
    PhotonStmt s{identifier(0), "", Jones()};
    const Token& p = arg(1);
    if (p.text == "H") s.pol = Jones::horizontal();
    else if (p.text == "V") s.pol = Jones::vertical();
    else if (p.text == "P45") s.pol = Jones::diagonal();
    else if (p.text == "L") s.pol = Jones::left();
    else if (p.text.rfind("jones(", 0) == 0 && p.text.back() == ')') {
      const std::string inner = p.text.substr(6, p.text.size() - 7);
      std::vector<double> parts;
      std::size_t pos = 0;
      while (true) {
        const auto comma = inner.find(',', pos);
        parts.push_back(number(p, std::string_view(inner).substr(pos, comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      if (parts.size() != 4) fail(p, "jones(...) takes four numbers");
      const cplx h(parts[0], parts[1]), v(parts[2], parts[3]);
      if (std::norm(h) + std::norm(v) < 1e-24) fail(p, "zero Jones vector");
      s.pol = Jones(h, v);
      return s;
    } else {
      fail(p, "unknown polarization");
    }
    s.label = p.text;
    return s;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t line_;
};

}  // namespace detail

/// Parses and validates a circuit. Throws parse_error carrying line and column.
inline CircuitDescription parse_circuit(std::string_view text) {
  CircuitDescription desc;
  std::set<std::string> declared;
  bool have_select = false;
  std::size_t line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);

    auto tokens = detail::tokenize(raw);
    if (tokens.empty()) continue;
    detail::LineParser p(tokens, line_no);
    const auto& kw = p.keyword();

    auto use = [&](std::size_t i) {
      const std::string id = p.identifier(i);
      if (!declared.count(id)) p.fail(p.arg(i), "mode used before declaration", errc::undeclared_mode);
      return id;
    };
    auto distinct4 = [&](const std::string& a, const std::string& b, const std::string& c,
                         const std::string& d) {
      const std::set<std::string> s{a, b, c, d};
      if (s.size() != 4) p.fail(kw, "ports must be four distinct modes");
    };

    Statement st;
    st.line = line_no;
    st.column = kw.column;
    if (kw.text == "mode") {
      p.expect_arity(1, 1);
      st.body = ModeDecl{p.identifier(0)};
      declared.insert(p.identifier(0));
    } else if (kw.text == "photon") {
      auto s = p.photon();
      declared.insert(s.id);
      st.body = std::move(s);
    } else if (kw.text == "bell") {
      p.expect_arity(2, 2);
      BellStmt s{p.identifier(0), p.identifier(1)};
      if (s.first == s.second) p.fail(p.arg(1), "Bell pair needs two distinct modes", errc::mode_collision);
      declared.insert(s.first);
      declared.insert(s.second);
      st.body = std::move(s);
    } else if (kw.text == "bs") {
      p.expect_arity(5, 5);
      BeamsplitterStmt s{use(0), use(1), p.identifier(2), p.identifier(3), 0.0};
      distinct4(s.in1, s.in2, s.out1, s.out2);
      s.R = p.required(p.key_values(4, {"R"}), "R");
      if (!(s.R >= 0.0 && s.R <= 1.0))
        p.fail(p.arg(4), "reflectivity outside [0, 1]", errc::invalid_reflectivity);
      declared.insert(s.out1);
      declared.insert(s.out2);
      st.body = std::move(s);
    } else if (kw.text == "mz") {
      p.expect_arity(5, 7);
      MachZehnderStmt s{use(0), use(1), p.identifier(2), p.identifier(3), 0.0};
      distinct4(s.in1, s.in2, s.out1, s.out2);
      const auto kv = p.key_values(4, {"phi", "delta", "gamma"});
      s.phi = p.required(kv, "phi");
      if (kv.count("delta")) s.delta = kv.at("delta");
      if (kv.count("gamma")) s.gamma = kv.at("gamma");
      declared.insert(s.out1);
      declared.insert(s.out2);
      st.body = std::move(s);
    } else if (kw.text == "qwp" || kw.text == "hwp") {
      p.expect_arity(2, 2);
      const auto id = use(0);
      st.body = WavePlateStmt{kw.text == "qwp" ? WavePlate::quarter : WavePlate::half, id,
                              p.required(p.key_values(1, {"angle"}), "angle")};
    } else if (kw.text == "pol") {
      p.expect_arity(2, 2);
      const auto id = use(0);
      st.body = PolarizerStmt{id, p.required(p.key_values(1, {"angle"}), "angle")};
    } else if (kw.text == "select") {
      if (have_select) p.fail(kw, "only one select statement is allowed", errc::duplicate_select);
      if (p.arg_count() == 0) p.fail(kw, "select needs at least one mode");
      SelectStmt s;
      std::set<std::string> seen;
      for (std::size_t i = 0; i < p.arg_count(); ++i) {
        s.ids.push_back(use(i));
        if (!seen.insert(s.ids.back()).second) p.fail(p.arg(i), "mode selected twice");
      }
      have_select = true;
      st.body = std::move(s);
    } else {
      p.fail(kw, "unknown statement");
    }
    desc.statements.push_back(std::move(st));
  }
  return desc;
}

namespace detail {

inline std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace detail

/// Canonical text: one statement per line, all optional parameters explicit,
/// floats with round-trip precision.
inline std::string render(const CircuitDescription& desc) {
  using detail::fmt_double;
  std::ostringstream os;
  for (const auto& st : desc.statements) {
    std::visit(detail::overloaded{
                   [&](const ModeDecl& s) { os << "mode " << s.id; },
                   [&](const PhotonStmt& s) {
                     os << "photon " << s.id << ' ';
                     if (!s.label.empty())
                       os << s.label;
                     else
                       os << "jones(" << fmt_double(s.pol.h().real()) << ',' << fmt_double(s.pol.h().imag())
                          << ',' << fmt_double(s.pol.v().real()) << ',' << fmt_double(s.pol.v().imag()) << ')';
                   },
                   [&](const BellStmt& s) { os << "bell " << s.first << ' ' << s.second; },
                   [&](const BeamsplitterStmt& s) {
                     os << "bs " << s.in1 << ' ' << s.in2 << ' ' << s.out1 << ' ' << s.out2
                        << " R=" << fmt_double(s.R);
                   },
                   [&](const MachZehnderStmt& s) {
                     os << "mz " << s.in1 << ' ' << s.in2 << ' ' << s.out1 << ' ' << s.out2
                        << " phi=" << fmt_double(s.phi) << " delta=" << fmt_double(s.delta)
                        << " gamma=" << fmt_double(s.gamma);
                   },
                   [&](const WavePlateStmt& s) {
                     os << (s.kind == WavePlate::quarter ? "qwp " : "hwp ") << s.id
                        << " angle=" << fmt_double(s.angle_deg);
                   },
                   [&](const PolarizerStmt& s) { os << "pol " << s.id << " angle=" << fmt_double(s.angle_deg); },
                   [&](const SelectStmt& s) {
                     os << "select";
                     for (const auto& id : s.ids) os << ' ' << id;
                   },
               },
               st.body);
    os << '\n';
  }
  return os.str();
}

struct ExecutionOptions {
  unsigned max_photons = kDefaultMaxPhotons;
};

struct CircuitRun {
  PureState state;            // final state, renormalized after every measurement
  double probability = 1.0;   // product of polarizer and select probabilities
  bool post_selected = false;
  bool failed = false;        // a measurement had zero probability
  std::size_t failed_line = 0;
  std::vector<std::string> modes;  // declared spatial modes, declaration order
  std::vector<ModeTransform> transforms;
};

inline double degrees(double deg) { return deg * std::numbers::pi / 180.0; }

/// Runs the statements in order. Stops at the first zero-probability
/// measurement and reports it through `failed`.
inline CircuitRun execute(const CircuitDescription& desc, const ExecutionOptions& opt = {}) {
  CircuitRun run;
  run.state = vacuum(opt.max_photons);
  auto declare = [&](const std::string& id) {
    if (std::find(run.modes.begin(), run.modes.end(), id) == run.modes.end()) run.modes.push_back(id);
  };
  auto transform = [&](ModeTransform t) {
    run.state = apply_transform(run.state, t);
    run.transforms.push_back(std::move(t));
  };
  auto measured = [&](const PureState& kept, const Statement& st) {
    const double p = kept.squared_norm();
    if (!(p > kPruneThreshold)) {
      run.failed = true;
      run.failed_line = st.line;
      run.probability = 0.0;
      run.state = PureState{};
      return false;
    }
    run.probability *= p;
    run.state = normalize(kept).state;
    return true;
  };

  for (const auto& st : desc.statements) {
    bool ok = true;
    std::visit(detail::overloaded{
                   [&](const ModeDecl& s) { declare(s.id); },
                   [&](const PhotonStmt& s) {
                     declare(s.id);
                     run.state = normalize(create_photon(run.state, s.id, s.pol)).state;
                   },
                   [&](const BellStmt& s) {
                     declare(s.first);
                     declare(s.second);
                     const auto hv =
                         create_photon(create_photon(run.state, ModeLabel(s.first, Pol::H)), ModeLabel(s.second, Pol::V));
                     const auto vh =
                         create_photon(create_photon(run.state, ModeLabel(s.first, Pol::V)), ModeLabel(s.second, Pol::H));
                     run.state = normalize(hv + vh.scaled(-1.0)).state;
                   },
                   [&](const BeamsplitterStmt& s) {
                     transform(beamsplitter(s.R, {s.in1, s.in2}, {s.out1, s.out2}));
                     declare(s.out1);
                     declare(s.out2);
                   },
                   [&](const MachZehnderStmt& s) {
                     transform(mach_zehnder(s.phi, s.delta, s.gamma, {s.in1, s.in2}, {s.out1, s.out2}));
                     declare(s.out1);
                     declare(s.out2);
                   },
                   [&](const WavePlateStmt& s) { transform(wave_plate(s.kind, degrees(s.angle_deg), s.id)); },
                   [&](const PolarizerStmt& s) {
                     ok = measured(
                         polarization_projector(s.id, Jones::linear(degrees(s.angle_deg))).apply(run.state), st);
                   },
                   [&](const SelectStmt& s) {
                     run.post_selected = true;
                     ok = measured(coincidence_component(run.state, CoincidencePattern(s.ids)), st);
                   },
               },
               st.body);
    if (!ok) break;
  }
  return run;
}

}  // namespace telecloning::circuit
