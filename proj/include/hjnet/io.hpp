#pragma once

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hjnet/network.hpp"

namespace hjnet::io {

using nlohmann::json;

namespace detail {

inline void require_keys(const json& j, const std::string& where,
                         std::initializer_list<const char*> required,
                         std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidInput, where + " must be an object");
  std::set<std::string> allowed;
  for (const char* k : required) {
    allowed.insert(k);
    if (!j.contains(k)) throw Error(ErrorKind::InvalidInput, where + " is missing key '" + k + "'");
  }
  for (const char* k : optional) allowed.insert(k);
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw Error(ErrorKind::InvalidInput, where + " has unknown key '" + item.key() + "'");
    }
  }
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw Error(ErrorKind::InvalidInput, where + " must be a number");
  return j.get<double>();
}

inline int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw Error(ErrorKind::InvalidInput, where + " must be an integer");
  return j.get<int>();
}

inline Point point(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw Error(ErrorKind::InvalidInput, where + " must be a non-empty array");
  Point p;
  for (const auto& x : j) p.push_back(number(x, where));
  return p;
}

inline GeometrySpec geometry(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw Error(ErrorKind::InvalidInput, where + " needs a string 'kind'");
  }
  const auto kind = j["kind"].get<std::string>();
  if (kind == "segment") {
    require_keys(j, where, {"kind", "from", "to"});
    return Segment{point(j["from"], where + ".from"), point(j["to"], where + ".to")};
  }
  if (kind == "polyline") {
    require_keys(j, where, {"kind", "points"});
    if (!j["points"].is_array()) throw Error(ErrorKind::InvalidInput, where + ".points must be an array");
    Polyline poly;
    for (const auto& p : j["points"]) poly.points.push_back(point(p, where + ".points"));
    if (poly.points.size() < 2) throw Error(ErrorKind::InvalidInput, where + " needs at least two points");
    return poly;
  }
  if (kind == "sine") {
    require_keys(j, where, {"kind", "base", "axis", "amplitude", "omega", "extent"},
                 {"normal", "phase"});
    Sine s;
    s.base = point(j["base"], where + ".base");
    s.axis = point(j["axis"], where + ".axis");
    s.amplitude = number(j["amplitude"], where + ".amplitude");
    s.omega = number(j["omega"], where + ".omega");
    s.extent = number(j["extent"], where + ".extent");
    if (j.contains("phase")) s.phase = number(j["phase"], where + ".phase");
    if (s.axis.size() != s.base.size()) throw Error(ErrorKind::InvalidInput, where + ".axis dimension mismatch");
    if (j.contains("normal")) {
      s.normal = point(j["normal"], where + ".normal");
    } else if (s.base.size() == 2) {
      s.normal = {-s.axis[1], s.axis[0]};
    } else {
      throw Error(ErrorKind::InvalidInput, where + " needs 'normal' outside the plane");
    }
    if (s.normal.size() != s.base.size()) throw Error(ErrorKind::InvalidInput, where + ".normal dimension mismatch");
    double aa = 0.0, nn = 0.0, an = 0.0;
    for (std::size_t i = 0; i < s.axis.size(); ++i) {
      aa += s.axis[i] * s.axis[i];
      nn += s.normal[i] * s.normal[i];
      an += s.axis[i] * s.normal[i];
    }
    if (std::abs(aa - 1.0) > 1e-12 || std::abs(nn - 1.0) > 1e-12 || std::abs(an) > 1e-12) {
      throw Error(ErrorKind::InvalidInput, where + " axis and normal must be orthonormal");
    }
    return s;
  }
  throw Error(ErrorKind::InvalidInput, where + " has unknown geometry kind '" + kind + "'");
}

inline CostSpec cost(const json& j) {
  require_keys(j, "cost", {"kind", "params", "eta"});
  const auto kind = j["kind"].is_string() ? j["kind"].get<std::string>() : std::string{};
  const json& p = j["params"];
  CostSpec c;
  c.eta = number(j["eta"], "cost.eta");
  if (kind == "constant") {
    require_keys(p, "cost.params", {"value"});
    c.form = ConstantCost{number(p["value"], "cost.params.value")};
  } else if (kind == "affine-x1") {
    require_keys(p, "cost.params", {"slope", "origin", "offset"});
    c.form = AffineX1Cost{number(p["slope"], "slope"), number(p["origin"], "origin"),
                          number(p["offset"], "offset")};
  } else if (kind == "sinusoidal") {
    require_keys(p, "cost.params", {"mean", "a", "k1", "b", "k2"});
    c.form = SinusoidalCost{number(p["mean"], "mean"), number(p["a"], "a"), number(p["k1"], "k1"),
                            number(p["b"], "b"), number(p["k2"], "k2")};
  } else if (kind == "expression-table") {
    require_keys(p, "cost.params", {"terms"});
    if (!p["terms"].is_array()) throw Error(ErrorKind::InvalidInput, "cost.params.terms must be an array");
    ExpressionTableCost table;
    for (const auto& t : p["terms"]) {
      require_keys(t, "cost term", {"coef", "fn"}, {"axis", "freq", "shift"});
      ExpressionTableCost::Term term;
      term.coef = number(t["coef"], "coef");
      const auto fn = t["fn"].is_string() ? t["fn"].get<std::string>() : std::string{};
      if (fn == "const") term.fn = ExpressionTableCost::Fn::Const;
      else if (fn == "linear") term.fn = ExpressionTableCost::Fn::Linear;
      else if (fn == "sin") term.fn = ExpressionTableCost::Fn::Sin;
      else if (fn == "cos") term.fn = ExpressionTableCost::Fn::Cos;
      else throw Error(ErrorKind::InvalidInput, "unknown cost term fn '" + fn + "'");
      if (t.contains("axis")) term.axis = integer(t["axis"], "axis");
      if (t.contains("freq")) term.freq = number(t["freq"], "freq");
      if (t.contains("shift")) term.shift = number(t["shift"], "shift");
      table.terms.push_back(term);
    }
    c.form = std::move(table);
  } else {
    throw Error(ErrorKind::InvalidInput, "unknown cost kind '" + kind + "'");
  }
  return c;
}

inline json point_json(const Point& p) { return json(p); }

}  // namespace detail

/// Parses a network description. Throws InvalidInput on malformed or unknown keys.
inline Network parse_network(const json& doc) {
  detail::require_keys(doc, "network", {"vertices", "arcs", "boundary", "cost"});
  for (const char* k : {"vertices", "arcs", "boundary"}) {
    if (!doc[k].is_array()) throw Error(ErrorKind::InvalidInput, std::string(k) + " must be an array");
  }
  std::vector<Vertex> vertices;
  for (const auto& v : doc["vertices"]) {
    detail::require_keys(v, "vertex", {"id", "position"});
    vertices.push_back({detail::integer(v["id"], "vertex.id"), detail::point(v["position"], "vertex.position")});
  }
  std::vector<Arc> arcs;
  for (const auto& a : doc["arcs"]) {
    detail::require_keys(a, "arc", {"id", "start", "end", "geometry"});
    const int id = detail::integer(a["id"], "arc.id");
    arcs.push_back({id, detail::integer(a["start"], "arc.start"), detail::integer(a["end"], "arc.end"),
                    detail::geometry(a["geometry"], "arc " + std::to_string(id) + " geometry")});
  }
  std::vector<BoundaryCondition> boundary;
  for (const auto& b : doc["boundary"]) {
    detail::require_keys(b, "boundary entry", {"vertex"}, {"g"});
    BoundaryCondition bc{detail::integer(b["vertex"], "boundary.vertex"), std::nullopt};
    if (b.contains("g") && !b["g"].is_null()) bc.g = detail::number(b["g"], "boundary.g");
    boundary.push_back(bc);
  }
  return Network(std::move(vertices), std::move(arcs), std::move(boundary), detail::cost(doc["cost"]));
}

inline Network parse_network(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
  return parse_network(doc);
}

inline Network load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open network file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str());
}

inline json to_json(const GeometrySpec& g) {
  if (auto* s = std::get_if<Segment>(&g)) return {{"kind", "segment"}, {"from", s->from}, {"to", s->to}};
  if (auto* p = std::get_if<Polyline>(&g)) return {{"kind", "polyline"}, {"points", p->points}};
  const auto& s = std::get<Sine>(g);
  return {{"kind", "sine"}, {"base", s.base},         {"axis", s.axis},   {"normal", s.normal},
          {"amplitude", s.amplitude}, {"omega", s.omega}, {"phase", s.phase}, {"extent", s.extent}};
}

inline json to_json(const CostSpec& c) {
  json params;
  if (auto* k = std::get_if<ConstantCost>(&c.form)) {
    params = {{"value", k->value}};
  } else if (auto* a = std::get_if<AffineX1Cost>(&c.form)) {
    params = {{"slope", a->slope}, {"origin", a->origin}, {"offset", a->offset}};
  } else if (auto* s = std::get_if<SinusoidalCost>(&c.form)) {
    params = {{"mean", s->mean}, {"a", s->a}, {"k1", s->k1}, {"b", s->b}, {"k2", s->k2}};
  } else {
    json terms = json::array();
    for (const auto& t : std::get<ExpressionTableCost>(c.form).terms) {
      static constexpr const char* names[] = {"const", "linear", "sin", "cos"};
      terms.push_back({{"coef", t.coef}, {"fn", names[static_cast<int>(t.fn)]}, {"axis", t.axis},
                       {"freq", t.freq}, {"shift", t.shift}});
    }
    params = {{"terms", terms}};
  }
  return {{"kind", c.kind()}, {"params", params}, {"eta", c.eta}};
}

inline json to_json(const Network& net) {
  json doc;
  doc["vertices"] = json::array();
  for (const auto& v : net.vertices()) doc["vertices"].push_back({{"id", v.id}, {"position", v.position}});
  doc["arcs"] = json::array();
  for (const auto& a : net.arcs()) {
    doc["arcs"].push_back({{"id", a.id}, {"start", a.start}, {"end", a.end}, {"geometry", to_json(a.geometry)}});
  }
  doc["boundary"] = json::array();
  for (const auto& b : net.boundary()) {
    json e = {{"vertex", b.vertex}};
    if (b.g) e["g"] = *b.g;
    doc["boundary"].push_back(e);
  }
  doc["cost"] = to_json(net.cost());
  return doc;
}

/// %.17g formatting used by every CSV writer.
inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace hjnet::io
