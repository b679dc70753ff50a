#pragma once

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "vlseq/error.hpp"
#include "vlseq/exponents.hpp"
#include "vlseq/sequence.hpp"

// Exponent description files are line oriented:
//
//   # comment
//   kind: model              (or "constant", then a single "value:" line)
//   prefix: 1 1.5 inf
//   tail: power 1 0.5        (constant v | affine_log a b | power a g | infinite)
//   declared_inf: 1
//
// declared_inf is required except for kind "constant", where it defaults to the value.
// Sequence files hold one real per line; the index is the line order.

namespace vlseq {

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string strip_comment(const std::string& line) { return trim(line.substr(0, line.find('#'))); }

inline double parse_real(const std::string& tok, const std::string& where) {
  if (tok == "inf" || tok == "infinity" || tok == "Inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw ParseError(where + ": '" + tok + "' is not a number");
  }
  if (used != tok.size()) throw ParseError(where + ": trailing characters in '" + tok + "'");
  if (std::isnan(v)) throw ParseError(where + ": NaN is not allowed");
  return v;
}

inline std::vector<std::string> split_words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

inline TailModel parse_tail(const std::string& spec, const std::string& where) {
  const auto w = split_words(spec);
  if (w.empty()) throw ParseError(where + ": empty tail");
  auto arity = [&](std::size_t n) {
    if (w.size() != n + 1)
      throw ParseError(where + ": tail '" + w[0] + "' takes " + std::to_string(n) + " parameter(s)");
  };
  if (w[0] == "infinite") {
    arity(0);
    return infinite_tail();
  }
  if (w[0] == "constant") {
    arity(1);
    return ConstantTail{Exponent(parse_real(w[1], where))};
  }
  if (w[0] == "affine_log") {
    arity(2);
    return AffineLogTail{parse_real(w[1], where), parse_real(w[2], where)};
  }
  if (w[0] == "power") {
    arity(2);
    return PowerTail{parse_real(w[1], where), parse_real(w[2], where)};
  }
  throw ParseError(where + ": unknown tail kind '" + w[0] + "'");
}

}  // namespace detail

inline ExponentSequence parse_exponent_sequence(std::istream& in, const std::string& source = "<input>") {
  std::optional<std::string> kind, value, prefix, tail, declared;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto body = detail::strip_comment(line);
    if (body.empty()) continue;
    const auto where = source + ":" + std::to_string(lineno);
    const auto colon = body.find(':');
    if (colon == std::string::npos) throw ParseError(where + ": expected 'field: value'");
    const auto key = detail::trim(body.substr(0, colon));
    const auto val = detail::trim(body.substr(colon + 1));
    std::optional<std::string>* slot = nullptr;
    if (key == "kind") slot = &kind;
    else if (key == "value") slot = &value;
    else if (key == "prefix") slot = &prefix;
    else if (key == "tail") slot = &tail;
    else if (key == "declared_inf") slot = &declared;
    else throw ParseError(where + ": unknown field '" + key + "'");
    if (*slot) throw ParseError(where + ": field '" + key + "' given twice");
    *slot = val;
  }

  if (kind && *kind == "constant") {
    if (!value || prefix || tail) throw ParseError(source + ": kind 'constant' takes exactly one 'value:' field");
    const Exponent v(detail::parse_real(*value, source));
    const Exponent d = declared ? Exponent(detail::parse_real(*declared, source)) : v;
    return ExponentSequence({}, ConstantTail{v}, d);
  }
  if (kind && *kind != "model") throw ParseError(source + ": unknown kind '" + *kind + "'");
  if (value) throw ParseError(source + ": 'value:' is only valid with kind 'constant'");
  if (!tail) throw ParseError(source + ": missing 'tail:' field");

  std::vector<Exponent> values;
  if (prefix)
    for (const auto& w : detail::split_words(*prefix)) values.emplace_back(detail::parse_real(w, source + " prefix"));
  const TailModel t = detail::parse_tail(*tail, source + " tail");
  detail::validate_tail(t);
  if (!declared) throw ParseError(source + ": missing 'declared_inf:' field");
  const double d = detail::parse_real(*declared, source + " declared_inf");
  if (!(d > 0.0)) throw PreconditionError(source + ": declared_inf must be positive");
  return ExponentSequence(std::move(values), t, Exponent(d));
}

inline ExponentSequence load_exponent_sequence(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open exponent file '" + path + "'");
  return parse_exponent_sequence(in, path);
}

inline void write_exponent_sequence(std::ostream& out, const ExponentSequence& p) {
  out << "kind: model\n";
  if (p.prefix_length() > 0) {
    out << "prefix:";
    for (auto e : p.prefix()) out << ' ' << e.str();
    out << '\n';
  }
  out << "tail: ";
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        std::ostringstream os;
        os.precision(17);
        if constexpr (std::is_same_v<T, ConstantTail>) {
          if (t.value.is_infinite()) os << "infinite";
          else os << "constant " << t.value.str();
        } else if constexpr (std::is_same_v<T, AffineLogTail>) {
          os << "affine_log " << t.slope << ' ' << t.intercept;
        } else {
          os << "power " << t.scale << ' ' << t.power;
        }
        out << os.str();
      },
      p.tail());
  out << "\ndeclared_inf: " << p.inf().str() << '\n';
}

inline FiniteSequence parse_sequence(std::istream& in, const std::string& source = "<input>") {
  std::vector<double> values;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto body = detail::strip_comment(line);
    if (body.empty()) continue;
    const double v = detail::parse_real(body, source + ":" + std::to_string(lineno));
    if (!std::isfinite(v)) throw ParseError(source + ":" + std::to_string(lineno) + ": entries must be finite");
    values.push_back(v);
  }
  if (values.empty()) throw ParseError(source + ": sequence file has no entries");
  return FiniteSequence(std::move(values));
}

inline FiniteSequence load_sequence(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open sequence file '" + path + "'");
  return parse_sequence(in, path);
}

/// Run table: first index, run length, value.
inline void write_run_table(std::ostream& out, const RunSequence& a) {
  std::ostringstream os;
  os.precision(17);
  os << "first,length,value\n";
  for (const auto& r : a.runs()) os << r.first << ',' << r.length << ',' << r.value << '\n';
  out << os.str();
}

}  // namespace vlseq
