#pragma once

#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gdpq/minlp.hpp"
#include "gdpq/model.hpp"

namespace gdpq {

inline constexpr int kFormatVersion = 1;

/// Schema violation with a JSON-pointer-style location.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string where, const std::string& message)
      : std::runtime_error(where + ": " + message), path(std::move(where)) {}

  std::string path;
};

namespace io_detail {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

/// Read-side cursor carrying the JSON-pointer path for diagnostics.
struct Cursor {
  const json* node;
  std::string path;

  const json& self() const { return *node; }

  Cursor child(const std::string& key) const {
    auto it = node->find(key);
    if (it == node->end()) throw SchemaError(path, "missing field '" + key + "'");
    return {&*it, path + "/" + key};
  }

  Cursor at(std::size_t i) const {
    return {&(*node)[i], path + "/" + std::to_string(i)};
  }

  void require_object() const {
    if (!node->is_object()) throw SchemaError(path, "expected an object");
  }
  void require_array() const {
    if (!node->is_array()) throw SchemaError(path, "expected an array");
  }

  /// Unknown fields are rejected, not ignored.
  void allow_only(std::initializer_list<const char*> keys) const {
    require_object();
    for (auto it = node->begin(); it != node->end(); ++it) {
      bool known = false;
      for (const char* k : keys)
        if (it.key() == k) {
          known = true;
          break;
        }
      if (!known)
        throw SchemaError(path + "/" + it.key(), "unknown field");
    }
  }

  double number() const {
    if (node->is_number()) return node->get<double>();
    if (node->is_string()) {
      const auto s = node->get<std::string>();
      if (s == "inf") return std::numeric_limits<double>::infinity();
      if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    throw SchemaError(path, "expected a number (or \"inf\"/\"-inf\")");
  }

  long integer() const {
    if (!node->is_number_integer()) throw SchemaError(path, "expected an integer");
    return node->get<long>();
  }

  std::string text() const {
    if (!node->is_string()) throw SchemaError(path, "expected a string");
    return node->get<std::string>();
  }
};

inline ojson bound_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? ojson("inf") : ojson("-inf");
  return ojson(v);
}

// --- expressions -----------------------------------------------------------

inline ojson expr_to_json(const QuadraticExpr& e) {
  QuadraticExpr q = e;
  q.prune();
  ojson out;
  out["type"] = "quadratic";
  out["dim"] = q.dim();
  ojson qt = ojson::array();
  for (const auto& t : q.quad_terms()) qt.push_back({t.i, t.j, t.coeff});
  out["q"] = std::move(qt);
  ojson ct = ojson::array();
  for (const auto& t : q.linear_terms()) ct.push_back({t.var, t.coeff});
  out["c"] = std::move(ct);
  out["d"] = q.constant();
  return out;
}

inline ojson expr_to_json(const PolynomialExpr& e) {
  PolynomialExpr p = e;
  p.prune();
  ojson out;
  out["type"] = "polynomial";
  out["dim"] = p.dim();
  ojson terms = ojson::array();
  for (const auto& t : p.terms()) {
    ojson mono = ojson::array();
    for (const auto& [v, exp] : t.mono) mono.push_back({v, exp});
    terms.push_back({std::move(mono), t.coeff});
  }
  out["terms"] = std::move(terms);
  return out;
}

inline ojson expr_to_json(const Expr& e) {
  return std::visit([](const auto& b) { return expr_to_json(b); }, e);
}

inline QuadraticExpr quadratic_from_json(const Cursor& c) {
  c.allow_only({"type", "dim", "q", "c", "d"});
  const int dim = static_cast<int>(c.child("dim").integer());
  QuadraticExpr e(dim);
  const Cursor q = c.child("q");
  q.require_array();
  for (std::size_t i = 0; i < q.self().size(); ++i) {
    const Cursor t = q.at(i);
    t.require_array();
    if (t.self().size() != 3) throw SchemaError(t.path, "expected [i, j, coeff]");
    const int a = static_cast<int>(t.at(0).integer());
    const int b = static_cast<int>(t.at(1).integer());
    const double coeff = t.at(2).number();
    if (a < 0 || b < 0 || a >= dim || b >= dim)
      throw SchemaError(t.path, "variable index out of range");
    e.add_quadratic(a, b, (a == b) ? coeff : 2.0 * coeff);
  }
  const Cursor lin = c.child("c");
  lin.require_array();
  for (std::size_t i = 0; i < lin.self().size(); ++i) {
    const Cursor t = lin.at(i);
    t.require_array();
    if (t.self().size() != 2) throw SchemaError(t.path, "expected [var, coeff]");
    const int v = static_cast<int>(t.at(0).integer());
    if (v < 0 || v >= dim) throw SchemaError(t.path, "variable index out of range");
    e.add_linear(v, t.at(1).number());
  }
  e.add_constant(c.child("d").number());
  return e;
}

inline PolynomialExpr polynomial_from_json(const Cursor& c) {
  c.allow_only({"type", "dim", "terms"});
  const int dim = static_cast<int>(c.child("dim").integer());
  PolynomialExpr e(dim);
  const Cursor terms = c.child("terms");
  terms.require_array();
  for (std::size_t i = 0; i < terms.self().size(); ++i) {
    const Cursor t = terms.at(i);
    t.require_array();
    if (t.self().size() != 2)
      throw SchemaError(t.path, "expected [monomial, coeff]");
    const Cursor mono = t.at(0);
    mono.require_array();
    Monomial m;
    for (std::size_t f = 0; f < mono.self().size(); ++f) {
      const Cursor factor = mono.at(f);
      factor.require_array();
      if (factor.self().size() != 2)
        throw SchemaError(factor.path, "expected [var, exponent]");
      const int v = static_cast<int>(factor.at(0).integer());
      const int exp = static_cast<int>(factor.at(1).integer());
      if (v < 0 || v >= dim)
        throw SchemaError(factor.path, "variable index out of range");
      if (exp < 1) throw SchemaError(factor.path, "exponent must be >= 1");
      m.emplace_back(v, exp);
    }
    e.add_term(std::move(m), t.at(1).number());
  }
  return e;
}

inline Expr expr_from_json(const Cursor& c) {
  const std::string type = c.child("type").text();
  if (type == "quadratic") return Expr{quadratic_from_json(c)};
  if (type == "polynomial") return Expr{polynomial_from_json(c)};
  throw SchemaError(c.path + "/type", "unknown expression type '" + type + "'");
}

// --- enum names ------------------------------------------------------------

inline const char* origin_name(ConstraintOrigin o) {
  switch (o) {
    case ConstraintOrigin::User: return "user";
    case ConstraintOrigin::EqualitySplitLo: return "equality-split-lo";
    case ConstraintOrigin::EqualitySplitHi: return "equality-split-hi";
  }
  return "?";
}

inline ConstraintOrigin origin_from(const Cursor& c) {
  const std::string s = c.text();
  if (s == "user") return ConstraintOrigin::User;
  if (s == "equality-split-lo") return ConstraintOrigin::EqualitySplitLo;
  if (s == "equality-split-hi") return ConstraintOrigin::EqualitySplitHi;
  throw SchemaError(c.path, "unknown constraint origin '" + s + "'");
}

inline const char* row_origin_name(RowOrigin o) {
  switch (o) {
    case RowOrigin::Global: return "global";
    case RowOrigin::Xor: return "xor";
    case RowOrigin::Logic: return "logic";
    case RowOrigin::DisaggBound: return "bound";
    case RowOrigin::Link: return "link";
    case RowOrigin::Disjunct: return "disjunct";
    case RowOrigin::Glover: return "glover";
  }
  return "?";
}

inline RowOrigin row_origin_from(const Cursor& c) {
  const std::string s = c.text();
  if (s == "global") return RowOrigin::Global;
  if (s == "xor") return RowOrigin::Xor;
  if (s == "logic") return RowOrigin::Logic;
  if (s == "bound") return RowOrigin::DisaggBound;
  if (s == "link") return RowOrigin::Link;
  if (s == "disjunct") return RowOrigin::Disjunct;
  if (s == "glover") return RowOrigin::Glover;
  throw SchemaError(c.path, "unknown row origin '" + s + "'");
}

inline const char* sense_name(Sense s) {
  switch (s) {
    case Sense::LE: return "le";
    case Sense::GE: return "ge";
    case Sense::EQ: return "eq";
  }
  return "?";
}

inline Sense sense_from(const Cursor& c) {
  const std::string s = c.text();
  if (s == "le") return Sense::LE;
  if (s == "ge") return Sense::GE;
  if (s == "eq") return Sense::EQ;
  throw SchemaError(c.path, "unknown sense '" + s + "'");
}

inline const char* kind_name(VarKind k) {
  return k == VarKind::Binary ? "binary" : "continuous";
}

inline VarKind kind_from(const Cursor& c) {
  const std::string s = c.text();
  if (s == "continuous") return VarKind::Continuous;
  if (s == "binary") return VarKind::Binary;
  throw SchemaError(c.path, "unknown variable kind '" + s + "'");
}

inline const char* role_name(VarRole::Kind k) {
  switch (k) {
    case VarRole::Kind::Original: return "original";
    case VarRole::Kind::Indicator: return "indicator";
    case VarRole::Kind::Disaggregated: return "disaggregated";
    case VarRole::Kind::Glover: return "glover";
    case VarRole::Kind::AuxNorm: return "aux-norm";
  }
  return "?";
}

inline VarRole::Kind role_from(const Cursor& c) {
  const std::string s = c.text();
  if (s == "original") return VarRole::Kind::Original;
  if (s == "indicator") return VarRole::Kind::Indicator;
  if (s == "disaggregated") return VarRole::Kind::Disaggregated;
  if (s == "glover") return VarRole::Kind::Glover;
  if (s == "aux-norm") return VarRole::Kind::AuxNorm;
  throw SchemaError(c.path, "unknown variable role '" + s + "'");
}

}  // namespace io_detail

// ---------------------------------------------------------------------------
// GDP documents

inline std::string write_model(const GdpModel& m) {
  using io_detail::ojson;
  ojson doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = "gdp";
  doc["metadata"] = ojson::object();
  for (const auto& [k, v] : m.metadata) doc["metadata"][k] = v;
  ojson vars = ojson::array();
  for (const auto& v : m.variables) {
    ojson jv;
    jv["name"] = v.name;
    jv["lower"] = io_detail::bound_to_json(v.lower);
    jv["upper"] = io_detail::bound_to_json(v.upper);
    jv["kind"] = io_detail::kind_name(v.kind);
    vars.push_back(std::move(jv));
  }
  doc["variables"] = std::move(vars);
  doc["objective"] = io_detail::expr_to_json(m.objective);
  ojson globals = ojson::array();
  for (const auto& c : m.global_constraints) {
    ojson jc;
    jc["origin"] = io_detail::origin_name(c.origin);
    jc["body"] = io_detail::expr_to_json(c.body);
    globals.push_back(std::move(jc));
  }
  doc["global_constraints"] = std::move(globals);
  ojson djs = ojson::array();
  for (const auto& dj : m.disjunctions) {
    ojson jd;
    jd["id"] = dj.id;
    ojson disjuncts = ojson::array();
    for (const auto& d : dj.disjuncts) {
      ojson jdis;
      jdis["indicator"] = d.indicator;
      ojson cons = ojson::array();
      for (const auto& c : d.constraints) {
        ojson jc;
        jc["origin"] = io_detail::origin_name(c.origin);
        jc["body"] = io_detail::expr_to_json(c.body);
        cons.push_back(std::move(jc));
      }
      jdis["constraints"] = std::move(cons);
      disjuncts.push_back(std::move(jdis));
    }
    jd["disjuncts"] = std::move(disjuncts);
    djs.push_back(std::move(jd));
  }
  doc["disjunctions"] = std::move(djs);
  ojson clauses = ojson::array();
  for (const auto& cl : m.logic) {
    ojson jc;
    jc["positive"] = ojson::array();
    for (const auto& n : cl.positive) jc["positive"].push_back(n);
    jc["negative"] = ojson::array();
    for (const auto& n : cl.negative) jc["negative"].push_back(n);
    clauses.push_back(std::move(jc));
  }
  doc["logic"] = std::move(clauses);
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// MINLP documents

inline std::string write_model(const MinlpModel& m) {
  using io_detail::ojson;
  ojson doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = "minlp";
  doc["metadata"] = ojson::object();
  for (const auto& [k, v] : m.metadata) doc["metadata"][k] = v;
  ojson vars = ojson::array();
  for (const auto& v : m.variables) {
    ojson jv;
    jv["name"] = v.name;
    jv["lower"] = io_detail::bound_to_json(v.lower);
    jv["upper"] = io_detail::bound_to_json(v.upper);
    jv["kind"] = io_detail::kind_name(v.kind);
    ojson role;
    role["kind"] = io_detail::role_name(v.role.kind);
    role["var"] = v.role.orig_var;
    role["disjunction"] = v.role.disjunction;
    role["disjunct"] = v.role.disjunct;
    jv["role"] = std::move(role);
    vars.push_back(std::move(jv));
  }
  doc["variables"] = std::move(vars);
  doc["objective"] = io_detail::expr_to_json(m.objective);

  ojson lrows = ojson::array();
  for (const auto& r : m.linear_rows) {
    ojson jr;
    jr["name"] = r.name;
    jr["sense"] = io_detail::sense_name(r.sense);
    jr["rhs"] = r.rhs;
    ojson terms = ojson::array();
    for (const auto& t : r.terms) terms.push_back({t.var, t.coeff});
    jr["terms"] = std::move(terms);
    jr["origin"] = io_detail::row_origin_name(r.origin);
    jr["disjunction"] = r.disjunction;
    jr["disjunct"] = r.disjunct;
    jr["constraint"] = r.constraint;
    lrows.push_back(std::move(jr));
  }
  doc["linear_rows"] = std::move(lrows);

  ojson nrows = ojson::array();
  for (const auto& row : m.nonlinear_rows) {
    ojson jr;
    std::visit(
        [&](const auto& r) {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, QuadRow>) {
            jr["type"] = "quadratic";
          } else if constexpr (std::is_same_v<T, PolyRow>) {
            jr["type"] = "polynomial";
          } else if constexpr (std::is_same_v<T, EpsQuadRow>) {
            jr["type"] = "eps-quadratic";
          } else {
            jr["type"] = "eps-polynomial";
          }
          jr["name"] = r.name;
          jr["origin"] = io_detail::row_origin_name(r.origin);
          jr["disjunction"] = r.disjunction;
          jr["disjunct"] = r.disjunct;
          jr["constraint"] = r.constraint;
          if constexpr (std::is_same_v<T, QuadRow>) {
            jr["expr"] = io_detail::expr_to_json(r.expr);
            if (r.s2) {
              ojson s2;
              s2["y"] = r.s2->y_var;
              s2["d"] = r.s2->d_coeff;
              ojson terms = ojson::array();
              for (const auto& t : r.s2->terms)
                terms.push_back(
                    {t.v_var, t.c_coeff, t.orig_var, t.x_lower, t.x_upper});
              s2["terms"] = std::move(terms);
              jr["s2"] = std::move(s2);
            }
          } else if constexpr (std::is_same_v<T, PolyRow>) {
            jr["expr"] = io_detail::expr_to_json(r.expr);
          } else if constexpr (std::is_same_v<T, EpsQuadRow>) {
            jr["y"] = r.y_var;
            jr["eps"] = r.eps;
            ojson quad = io_detail::expr_to_json(r.quad);
            jr["quad"] = std::move(quad);
            ojson lin = ojson::array();
            for (const auto& t : r.linear) lin.push_back({t.var, t.coeff});
            jr["linear"] = std::move(lin);
          } else {
            jr["y"] = r.y_var;
            jr["eps"] = r.eps;
            jr["body"] = io_detail::expr_to_json(r.body);
          }
        },
        row);
    nrows.push_back(std::move(jr));
  }
  doc["nonlinear_rows"] = std::move(nrows);
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Reading

struct ModelDocument {
  int format_version = kFormatVersion;
  std::variant<GdpModel, MinlpModel> model;

  bool is_gdp() const { return std::holds_alternative<GdpModel>(model); }
  const GdpModel& gdp() const { return std::get<GdpModel>(model); }
  const MinlpModel& minlp() const { return std::get<MinlpModel>(model); }
};

namespace io_detail {

inline GdpModel read_gdp(const Cursor& root) {
  root.allow_only({"format_version", "kind", "metadata", "variables",
                   "objective", "global_constraints", "disjunctions", "logic"});
  GdpModel m;
  const Cursor meta = root.child("metadata");
  meta.require_object();
  for (auto it = meta.self().begin(); it != meta.self().end(); ++it) {
    if (!it->is_string())
      throw SchemaError(meta.path + "/" + it.key(), "metadata values are strings");
    m.metadata[it.key()] = it->get<std::string>();
  }
  const Cursor vars = root.child("variables");
  vars.require_array();
  for (std::size_t i = 0; i < vars.self().size(); ++i) {
    const Cursor v = vars.at(i);
    v.allow_only({"name", "lower", "upper", "kind"});
    m.variables.push_back({v.child("name").text(), v.child("lower").number(),
                           v.child("upper").number(), kind_from(v.child("kind"))});
  }
  m.objective = [&] {
    const Cursor obj = root.child("objective");
    const Expr e = expr_from_json(obj);
    if (!std::holds_alternative<QuadraticExpr>(e))
      throw SchemaError(obj.path, "objective must be quadratic");
    return std::get<QuadraticExpr>(e);
  }();
  const Cursor globals = root.child("global_constraints");
  globals.require_array();
  for (std::size_t i = 0; i < globals.self().size(); ++i) {
    const Cursor c = globals.at(i);
    c.allow_only({"origin", "body"});
    m.global_constraints.push_back(
        {expr_from_json(c.child("body")), origin_from(c.child("origin"))});
  }
  const Cursor djs = root.child("disjunctions");
  djs.require_array();
  for (std::size_t k = 0; k < djs.self().size(); ++k) {
    const Cursor jd = djs.at(k);
    jd.allow_only({"id", "disjuncts"});
    Disjunction dj;
    dj.id = jd.child("id").text();
    const Cursor disjuncts = jd.child("disjuncts");
    disjuncts.require_array();
    for (std::size_t i = 0; i < disjuncts.self().size(); ++i) {
      const Cursor jdis = disjuncts.at(i);
      jdis.allow_only({"indicator", "constraints"});
      Disjunct d;
      d.indicator = jdis.child("indicator").text();
      const Cursor cons = jdis.child("constraints");
      cons.require_array();
      for (std::size_t c = 0; c < cons.self().size(); ++c) {
        const Cursor jc = cons.at(c);
        jc.allow_only({"origin", "body"});
        d.constraints.push_back(
            {expr_from_json(jc.child("body")), origin_from(jc.child("origin"))});
      }
      dj.disjuncts.push_back(std::move(d));
    }
    m.disjunctions.push_back(std::move(dj));
  }
  const Cursor clauses = root.child("logic");
  clauses.require_array();
  for (std::size_t c = 0; c < clauses.self().size(); ++c) {
    const Cursor jc = clauses.at(c);
    jc.allow_only({"positive", "negative"});
    LogicClause cl;
    const Cursor pos = jc.child("positive");
    pos.require_array();
    for (std::size_t i = 0; i < pos.self().size(); ++i)
      cl.positive.insert(pos.at(i).text());
    const Cursor neg = jc.child("negative");
    neg.require_array();
    for (std::size_t i = 0; i < neg.self().size(); ++i)
      cl.negative.insert(neg.at(i).text());
    m.logic.push_back(std::move(cl));
  }
  return m;
}

inline MinlpModel read_minlp(const Cursor& root) {
  root.allow_only({"format_version", "kind", "metadata", "variables",
                   "objective", "linear_rows", "nonlinear_rows"});
  MinlpModel m;
  const Cursor meta = root.child("metadata");
  meta.require_object();
  for (auto it = meta.self().begin(); it != meta.self().end(); ++it) {
    if (!it->is_string())
      throw SchemaError(meta.path + "/" + it.key(), "metadata values are strings");
    m.metadata[it.key()] = it->get<std::string>();
  }
  const Cursor vars = root.child("variables");
  vars.require_array();
  for (std::size_t i = 0; i < vars.self().size(); ++i) {
    const Cursor v = vars.at(i);
    v.allow_only({"name", "lower", "upper", "kind", "role"});
    const Cursor role = v.child("role");
    role.allow_only({"kind", "var", "disjunction", "disjunct"});
    VarRole r;
    r.kind = role_from(role.child("kind"));
    r.orig_var = static_cast<int>(role.child("var").integer());
    r.disjunction = static_cast<int>(role.child("disjunction").integer());
    r.disjunct = static_cast<int>(role.child("disjunct").integer());
    m.variables.push_back({v.child("name").text(), v.child("lower").number(),
                           v.child("upper").number(), kind_from(v.child("kind")),
                           r});
  }
  m.objective = [&] {
    const Expr e = expr_from_json(root.child("objective"));
    if (!std::holds_alternative<QuadraticExpr>(e))
      throw SchemaError(root.path + "/objective", "objective must be quadratic");
    return std::get<QuadraticExpr>(e);
  }();
  const Cursor lrows = root.child("linear_rows");
  lrows.require_array();
  for (std::size_t i = 0; i < lrows.self().size(); ++i) {
    const Cursor jr = lrows.at(i);
    jr.allow_only({"name", "sense", "rhs", "terms", "origin", "disjunction",
                   "disjunct", "constraint"});
    LinearRow r;
    r.name = jr.child("name").text();
    r.sense = sense_from(jr.child("sense"));
    r.rhs = jr.child("rhs").number();
    const Cursor terms = jr.child("terms");
    terms.require_array();
    for (std::size_t t = 0; t < terms.self().size(); ++t) {
      const Cursor jt = terms.at(t);
      jt.require_array();
      if (jt.self().size() != 2) throw SchemaError(jt.path, "expected [var, coeff]");
      r.terms.push_back({static_cast<int>(jt.at(0).integer()), jt.at(1).number()});
    }
    r.origin = row_origin_from(jr.child("origin"));
    r.disjunction = static_cast<int>(jr.child("disjunction").integer());
    r.disjunct = static_cast<int>(jr.child("disjunct").integer());
    r.constraint = static_cast<int>(jr.child("constraint").integer());
    m.linear_rows.push_back(std::move(r));
  }
  const Cursor nrows = root.child("nonlinear_rows");
  nrows.require_array();
  for (std::size_t i = 0; i < nrows.self().size(); ++i) {
    const Cursor jr = nrows.at(i);
    const std::string type = jr.child("type").text();
    auto common = [&](auto& r) {
      r.name = jr.child("name").text();
      r.origin = row_origin_from(jr.child("origin"));
      r.disjunction = static_cast<int>(jr.child("disjunction").integer());
      r.disjunct = static_cast<int>(jr.child("disjunct").integer());
      r.constraint = static_cast<int>(jr.child("constraint").integer());
    };
    if (type == "quadratic") {
      jr.allow_only({"type", "name", "origin", "disjunction", "disjunct",
                     "constraint", "expr", "s2"});
      QuadRow r;
      common(r);
      r.expr = quadratic_from_json(jr.child("expr"));
      if (jr.self().contains("s2")) {
        const Cursor s2 = jr.child("s2");
        s2.allow_only({"y", "d", "terms"});
        QuadRow::S2Meta meta2;
        meta2.y_var = static_cast<int>(s2.child("y").integer());
        meta2.d_coeff = s2.child("d").number();
        const Cursor terms = s2.child("terms");
        terms.require_array();
        for (std::size_t t = 0; t < terms.self().size(); ++t) {
          const Cursor jt = terms.at(t);
          jt.require_array();
          if (jt.self().size() != 5)
            throw SchemaError(jt.path, "expected [v, c, orig, lower, upper]");
          QuadRow::S2Term term;
          term.v_var = static_cast<int>(jt.at(0).integer());
          term.c_coeff = jt.at(1).number();
          term.orig_var = static_cast<int>(jt.at(2).integer());
          term.x_lower = jt.at(3).number();
          term.x_upper = jt.at(4).number();
          meta2.terms.push_back(term);
        }
        r.s2 = std::move(meta2);
      }
      m.nonlinear_rows.push_back(std::move(r));
    } else if (type == "polynomial") {
      jr.allow_only({"type", "name", "origin", "disjunction", "disjunct",
                     "constraint", "expr"});
      PolyRow r;
      common(r);
      r.expr = polynomial_from_json(jr.child("expr"));
      m.nonlinear_rows.push_back(std::move(r));
    } else if (type == "eps-quadratic") {
      jr.allow_only({"type", "name", "origin", "disjunction", "disjunct",
                     "constraint", "y", "eps", "quad", "linear"});
      EpsQuadRow r;
      common(r);
      r.y_var = static_cast<int>(jr.child("y").integer());
      r.eps = jr.child("eps").number();
      r.quad = quadratic_from_json(jr.child("quad"));
      const Cursor lin = jr.child("linear");
      lin.require_array();
      for (std::size_t t = 0; t < lin.self().size(); ++t) {
        const Cursor jt = lin.at(t);
        jt.require_array();
        if (jt.self().size() != 2) throw SchemaError(jt.path, "expected [var, coeff]");
        r.linear.push_back({static_cast<int>(jt.at(0).integer()), jt.at(1).number()});
      }
      m.nonlinear_rows.push_back(std::move(r));
    } else if (type == "eps-polynomial") {
      jr.allow_only({"type", "name", "origin", "disjunction", "disjunct",
                     "constraint", "y", "eps", "body"});
      EpsPolyRow r;
      common(r);
      r.y_var = static_cast<int>(jr.child("y").integer());
      r.eps = jr.child("eps").number();
      r.body = polynomial_from_json(jr.child("body"));
      m.nonlinear_rows.push_back(std::move(r));
    } else {
      throw SchemaError(jr.path + "/type", "unknown row type '" + type + "'");
    }
  }
  m.finalize();
  return m;
}

}  // namespace io_detail

inline ModelDocument read_model(const std::string& text) {
  io_detail::json parsed;
  try {
    parsed = io_detail::json::parse(text);
  } catch (const io_detail::json::parse_error& e) {
    throw SchemaError("", std::string("not valid JSON: ") + e.what());
  }
  const io_detail::Cursor root{&parsed, ""};
  root.require_object();
  const long version = root.child("format_version").integer();
  if (version != kFormatVersion)
    throw SchemaError("/format_version",
                      "unsupported version " + std::to_string(version) +
                          " (expected " + std::to_string(kFormatVersion) + ")");
  const std::string kind = root.child("kind").text();
  ModelDocument doc;
  doc.format_version = static_cast<int>(version);
  if (kind == "gdp") {
    doc.model = io_detail::read_gdp(root);
  } else if (kind == "minlp") {
    doc.model = io_detail::read_minlp(root);
  } else {
    throw SchemaError("/kind", "unknown model kind '" + kind + "'");
  }
  return doc;
}

inline ModelDocument read_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return read_model(buffer.str());
}

template <typename Model>
void write_model_file(const Model& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << write_model(m);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace gdpq
