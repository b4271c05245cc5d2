#pragma once

// JSON forms of circle sets, singular measures and symbols, and CSV output
// with shortest round-trip number formatting.

#include <charconv>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hbspace/circle_sets.hpp"
#include "hbspace/symbol.hpp"

namespace hbspace {

using json = nlohmann::json;

inline std::string format_number(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

/// CSV table with a fixed header; numbers in shortest round-trip form.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(const std::vector<double>& row) {
    std::vector<std::string> s;
    for (double x : row) s.push_back(format_number(x));
    add_row(std::move(s));
  }
  void add_row(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw Error("CSV row width differs from header");
    rows_.push_back(std::move(row));
  }

  std::size_t rows() const { return rows_.size(); }

  std::string str() const {
    std::ostringstream os;
    write_line(os, header_);
    for (const auto& r : rows_) write_line(os, r);
    return os.str();
  }

 private:
  static void write_line(std::ostringstream& os, const std::vector<std::string>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << '\n';
  }
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// ---------------------------------------------------------------------------
// reading helpers

namespace detail {

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
  return j.at(key);
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

inline double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  return number(j.at(key), where + "." + key);
}

inline int integer_or(const json& j, const char* key, int fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) throw ParseError(where + "." + key + ": expected an integer");
  return j.at(key).get<int>();
}

inline std::string string_or(const json& j, const char* key, const std::string& fallback,
                             const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) throw ParseError(where + "." + key + ": expected a string");
  return j.at(key).get<std::string>();
}

inline complex complex_value(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2) return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
  throw ParseError(where + ": expected a number or [re, im]");
}

inline json complex_json(complex z) { return json::array({z.real(), z.imag()}); }

inline Arc arc_value(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() < 2) throw ParseError(where + ": expected [start, end] in turns");
  return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Cantor schedules and sets

inline json to_json(const CantorSchedule& s) {
  json j;
  switch (s.kind) {
    case CantorSchedule::Kind::fixed: j["kind"] = "fixed"; break;
    case CantorSchedule::Kind::power: j["kind"] = "power"; break;
    case CantorSchedule::Kind::superbranch: j["kind"] = "superbranch"; break;
  }
  j["ratio"] = s.ratio;
  j["exponent"] = s.exponent;
  j["growth"] = s.growth;
  j["branch_scale"] = s.branch_scale;
  j["base_arc"] = json::array({s.base.start, s.base.end});
  j["depth"] = s.depth;
  return j;
}

inline CantorSchedule cantor_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  CantorSchedule s;
  const std::string kind = detail::string_or(j, "kind", "fixed", where);
  if (kind == "fixed")
    s.kind = CantorSchedule::Kind::fixed;
  else if (kind == "power")
    s.kind = CantorSchedule::Kind::power;
  else if (kind == "superbranch")
    s.kind = CantorSchedule::Kind::superbranch;
  else
    throw ParseError(where + ".kind: unknown Cantor schedule '" + kind + "'");
  s.ratio = detail::number_or(j, "ratio", s.ratio, where);
  s.exponent = detail::number_or(j, "exponent", s.exponent, where);
  s.growth = detail::number_or(j, "growth", s.growth, where);
  s.branch_scale = detail::number_or(j, "branch_scale", s.branch_scale, where);
  if (j.contains("base_arc")) s.base = detail::arc_value(j.at("base_arc"), where + ".base_arc");
  s.depth = detail::integer_or(j, "depth", s.depth, where);
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw ParseError(where + ": " + e.what());
  }
  return s;
}

inline json to_json(const CircleSet& E) {
  json j;
  j["kind"] = to_string(E.kind());
  if (E.kind() == CircleSet::Kind::arcs) {
    j["arcs"] = json::array();
    for (const Arc& a : E.arcs()) j["arcs"].push_back(json::array({a.start, a.end}));
  } else {
    j["cantor"] = to_json(E.schedule());
  }
  return j;
}

inline CircleSet circle_set_from_json(const json& j, const std::string& where) {
  const std::string kind = detail::string_or(j, "kind", "arcs", where);
  if (kind == "arcs") {
    std::vector<Arc> arcs;
    const json& a = detail::field(j, "arcs", where);
    if (!a.is_array()) throw ParseError(where + ".arcs: expected an array");
    for (std::size_t i = 0; i < a.size(); ++i)
      arcs.push_back(detail::arc_value(a[i], where + ".arcs[" + std::to_string(i) + "]"));
    return CircleSet::from_arcs(arcs);
  }
  const CantorSchedule s = cantor_from_json(detail::field(j, "cantor", where), where + ".cantor");
  if (kind == "cantor") return CircleSet::cantor(s);
  if (kind == "cantor-complement") return CircleSet::cantor_complement(s);
  throw ParseError(where + ".kind: unknown set kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Symbols

inline json to_json(const OuterModulus& o) {
  json j;
  j["kind"] = to_string(o.kind);
  switch (o.kind) {
    case OuterModulus::Kind::constant: j["value"] = o.value; break;
    case OuterModulus::Kind::cos_half: break;
    case OuterModulus::Kind::arcs:
      j["arcs"] = json::array();
      for (const ArcValue& a : o.arcs) j["arcs"].push_back(json::array({a.arc.start, a.arc.end, a.value}));
      break;
    case OuterModulus::Kind::bump:
      j["arc"] = json::array({o.bump_arc.start, o.bump_arc.end});
      j["amplitude"] = o.amplitude;
      break;
    case OuterModulus::Kind::volberg:
      j["cantor"] = to_json(o.cantor);
      j["amplitude"] = o.amplitude;
      j["lambda"] = o.lambda;
      j["gamma"] = o.gamma;
      break;
    case OuterModulus::Kind::distance:
      j["cantor"] = to_json(o.cantor);
      j["slope"] = o.slope;
      break;
    case OuterModulus::Kind::cantor_set:
      j["cantor"] = to_json(o.cantor);
      j["value"] = o.value;
      break;
    case OuterModulus::Kind::samples: j["samples"] = o.samples; break;
  }
  return j;
}

inline OuterModulus outer_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  const std::string kind = detail::string_or(j, "kind", "constant", where);
  OuterModulus o;
  if (kind == "constant") {
    o = OuterModulus::constant(detail::number_or(j, "value", 1.0, where));
  } else if (kind == "cos_half") {
    o = OuterModulus::cos_half();
  } else if (kind == "arcs") {
    std::vector<ArcValue> arcs;
    const json& a = detail::field(j, "arcs", where);
    if (!a.is_array()) throw ParseError(where + ".arcs: expected an array");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string w = where + ".arcs[" + std::to_string(i) + "]";
      if (!a[i].is_array() || a[i].size() != 3) throw ParseError(w + ": expected [start, end, omega]");
      arcs.push_back({detail::arc_value(a[i], w), detail::number(a[i][2], w + "[2]")});
    }
    o = OuterModulus::on_arcs(std::move(arcs));
  } else if (kind == "bump") {
    o = OuterModulus::bump(detail::arc_value(detail::field(j, "arc", where), where + ".arc"),
                           detail::number_or(j, "amplitude", 1.0, where));
  } else if (kind == "volberg") {
    o = OuterModulus::volberg(cantor_from_json(detail::field(j, "cantor", where), where + ".cantor"),
                              detail::number_or(j, "amplitude", 1.0, where),
                              detail::number_or(j, "lambda", 1.0, where),
                              detail::number_or(j, "gamma", 1.0, where));
  } else if (kind == "distance") {
    o = OuterModulus::distance(cantor_from_json(detail::field(j, "cantor", where), where + ".cantor"),
                               detail::number_or(j, "slope", 1.0, where));
  } else if (kind == "cantor_set") {
    o = OuterModulus::on_cantor_set(cantor_from_json(detail::field(j, "cantor", where), where + ".cantor"),
                                    detail::number_or(j, "value", 0.5, where));
  } else if (kind == "samples") {
    const json& s = detail::field(j, "samples", where);
    if (!s.is_array()) throw ParseError(where + ".samples: expected an array");
    std::vector<double> v;
    for (std::size_t i = 0; i < s.size(); ++i)
      v.push_back(detail::number(s[i], where + ".samples[" + std::to_string(i) + "]"));
    o = OuterModulus::from_samples(std::move(v));
  } else {
    throw ParseError(where + ".kind: unknown outer profile '" + kind + "'");
  }
  return o;
}

inline json to_json(const SymbolSpec& s) {
  json j;
  j["blaschke_zeros"] = json::array();
  for (const BlaschkeZero& z : s.blaschke_zeros)
    j["blaschke_zeros"].push_back(json::array({z.z.real(), z.z.imag(), z.multiplicity}));
  j["atoms"] = json::array();
  for (const Atom& a : s.singular.atoms) j["atoms"].push_back(json::array({a.theta, a.mass}));
  j["cantor"] = json::array();
  for (const CantorPart& c : s.singular.cantor_parts) {
    json cj = to_json(c.support);
    cj["mass"] = c.mass;
    j["cantor"].push_back(cj);
  }
  j["outer"] = to_json(s.outer);
  j["scale"] = detail::complex_json(s.scale);
  return j;
}

inline SymbolSpec symbol_from_json(const json& j, const std::string& where = "symbol") {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  SymbolSpec s;
  if (j.contains("blaschke_zeros")) {
    const json& z = j.at("blaschke_zeros");
    if (!z.is_array()) throw ParseError(where + ".blaschke_zeros: expected an array");
    for (std::size_t i = 0; i < z.size(); ++i) {
      const std::string w = where + ".blaschke_zeros[" + std::to_string(i) + "]";
      if (!z[i].is_array() || z[i].size() < 2) throw ParseError(w + ": expected [re, im, multiplicity]");
      BlaschkeZero b;
      b.z = {detail::number(z[i][0], w), detail::number(z[i][1], w)};
      if (z[i].size() > 2) {
        if (!z[i][2].is_number_integer()) throw ParseError(w + "[2]: multiplicity must be an integer");
        b.multiplicity = z[i][2].get<int>();
      }
      s.blaschke_zeros.push_back(b);
    }
  }
  if (j.contains("atoms")) {
    const json& a = j.at("atoms");
    if (!a.is_array()) throw ParseError(where + ".atoms: expected an array");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string w = where + ".atoms[" + std::to_string(i) + "]";
      if (!a[i].is_array() || a[i].size() != 2) throw ParseError(w + ": expected [theta, mass]");
      s.singular.atoms.push_back({detail::number(a[i][0], w), detail::number(a[i][1], w)});
    }
  }
  if (j.contains("cantor")) {
    json parts = j.at("cantor");
    if (parts.is_object()) parts = json::array({parts});
    if (!parts.is_array()) throw ParseError(where + ".cantor: expected an object or array");
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const std::string w = where + ".cantor[" + std::to_string(i) + "]";
      CantorPart c;
      c.support = cantor_from_json(parts[i], w);
      c.mass = detail::number(detail::field(parts[i], "mass", w), w + ".mass");
      s.singular.cantor_parts.push_back(c);
    }
  }
  if (j.contains("outer")) s.outer = outer_from_json(j.at("outer"), where + ".outer");
  if (j.contains("scale")) s.scale = detail::complex_value(j.at("scale"), where + ".scale");
  return s;
}

inline json to_json(const BCReport& r) {
  json j;
  j["classification"] = to_string(r.classification);
  j["limit"] = r.limit ? json(*r.limit) : json(nullptr);
  j["measure"] = r.measure;
  j["witness"] = r.witness;
  j["final_partial_sum"] = r.partial_sums.empty() ? 0.0 : r.partial_sums.back();
  return j;
}

}  // namespace hbspace
