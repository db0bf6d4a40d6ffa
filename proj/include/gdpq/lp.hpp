#pragma once

#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gdpq/format.hpp"
#include "gdpq/minlp.hpp"

namespace gdpq {

namespace lp_detail {

/// Names restricted to [A-Za-z0-9_], starting with a letter or '_';
/// collisions disambiguated with a numeric suffix.
inline std::vector<std::string> sanitized_names(const MinlpModel& m) {
  std::vector<std::string> out;
  std::set<std::string> used;
  out.reserve(m.variables.size());
  for (const auto& v : m.variables) {
    std::string s;
    for (char c : v.name)
      s += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) s = "v" + s;
    std::string candidate = s;
    int suffix = 2;
    while (!used.insert(candidate).second)
      candidate = s + "_" + std::to_string(suffix++);
    out.push_back(candidate);
  }
  return out;
}

struct TermWriter {
  std::ostringstream& os;
  bool first = true;

  void term(double coeff, const std::string& body) {
    if (coeff == 0.0) return;
    if (first) {
      if (coeff < 0) os << "- ";
      first = false;
    } else {
      os << (coeff < 0 ? " - " : " + ");
    }
    const double mag = std::abs(coeff);
    if (mag != 1.0 || body.empty()) {
      os << format_double(mag);
      if (!body.empty()) os << " ";
    }
    os << body;
  }

  void constant(double c) {
    if (c == 0.0) return;
    term(c, "");
  }

  void finish_empty() {
    if (first) os << "0";
  }
};

inline void write_quadratic_expr(std::ostringstream& os,
                                 const QuadraticExpr& expr,
                                 const std::vector<std::string>& names) {
  TermWriter lin{os};
  for (const auto& t : expr.linear_terms()) lin.term(t.coeff, names[t.var]);
  if (!expr.quad_terms().empty()) {
    if (!lin.first) os << " + ";
    os << "[ ";
    TermWriter quad{os};
    for (const auto& t : expr.quad_terms()) {
      if (t.i == t.j)
        quad.term(t.coeff, names[t.i] + " ^ 2");
      else
        quad.term(2.0 * t.coeff, names[t.i] + " * " + names[t.j]);
    }
    os << " ]";
    lin.first = false;
  }
  lin.constant(expr.constant());
  lin.finish_empty();
}

/// The rational hull-eps row lowered to a polynomial (quadratic) row:
/// multiplying v^T Q v / D + c^T v + d y <= 0 by D = (1-eps) y + eps is
/// valid because D >= eps > 0 on y in [0, 1].
inline QuadraticExpr lowered_eps_row(const EpsQuadRow& r, int dim) {
  QuadraticExpr out = r.quad;
  out.set_dim(dim);
  for (const auto& t : r.linear) {
    out.add_quadratic(t.var, r.y_var, t.coeff * (1.0 - r.eps));
    out.add_linear(t.var, t.coeff * r.eps);
  }
  return out;
}

}  // namespace lp_detail

/// Deterministic LP-style text export. Sections: MIN / SUBJECT TO / BOUNDS /
/// BINARY / END, quadratic terms in bracketed [ ... ] blocks. Only linear and
/// quadratic rows are representable; polynomial rows (hull-poly output,
/// binary-multiplication of quadratics) export to the JSON format instead.
inline std::string export_lp(const MinlpModel& m) {
  const auto names = lp_detail::sanitized_names(m);
  std::vector<std::string> lowered;
  for (const auto& row : m.nonlinear_rows) {
    if (std::holds_alternative<PolyRow>(row))
      throw std::invalid_argument(
          "row '" + row_name(row) +
          "' has degree > 2; use the JSON export for polynomial rows");
    if (std::holds_alternative<EpsPolyRow>(row))
      throw std::invalid_argument(
          "row '" + row_name(row) +
          "' is a rational polynomial; use the JSON export");
    if (std::holds_alternative<EpsQuadRow>(row)) lowered.push_back(row_name(row));
  }

  std::ostringstream os;
  os << "\\ gdpq LP export, format_version 1\n";
  if (!lowered.empty()) {
    os << "\\ eps-lowered rows:";
    for (const auto& n : lowered) os << " " << n;
    os << "\n";
  }
  os << "MIN\n obj: ";
  lp_detail::write_quadratic_expr(os, m.objective, names);
  os << "\nSUBJECT TO\n";
  for (const auto& row : m.linear_rows) {
    os << " " << row.name << ": ";
    lp_detail::TermWriter w{os};
    for (const auto& t : row.terms) w.term(t.coeff, names[t.var]);
    w.finish_empty();
    switch (row.sense) {
      case Sense::LE: os << " <= "; break;
      case Sense::GE: os << " >= "; break;
      case Sense::EQ: os << " = "; break;
    }
    os << format_double(row.rhs) << "\n";
  }
  for (const auto& row : m.nonlinear_rows) {
    os << " " << row_name(row) << ": ";
    QuadraticExpr expr;
    if (const auto* quad = std::get_if<QuadRow>(&row)) {
      expr = quad->expr;
    } else {
      expr = lp_detail::lowered_eps_row(std::get<EpsQuadRow>(row), m.num_vars());
    }
    const double rhs = -expr.constant();
    QuadraticExpr body = expr;
    body.add_constant(-expr.constant());
    body.prune();
    lp_detail::write_quadratic_expr(os, body, names);
    os << " <= " << format_double(rhs) << "\n";
  }
  os << "BOUNDS\n";
  for (int v = 0; v < m.num_vars(); ++v) {
    const auto& var = m.variables[v];
    if (var.kind == VarKind::Binary) continue;  // declared in BINARY
    const bool lo_inf = std::isinf(var.lower);
    const bool hi_inf = std::isinf(var.upper);
    if (lo_inf && hi_inf) {
      os << " " << names[v] << " free\n";
    } else if (hi_inf) {
      os << " " << names[v] << " >= " << format_double(var.lower) << "\n";
    } else if (lo_inf) {
      os << " " << names[v] << " <= " << format_double(var.upper) << "\n";
    } else {
      os << " " << format_double(var.lower) << " <= " << names[v] << " <= "
         << format_double(var.upper) << "\n";
    }
  }
  os << "BINARY\n";
  for (int v = 0; v < m.num_vars(); ++v)
    if (m.variables[v].kind == VarKind::Binary) os << " " << names[v] << "\n";
  os << "END\n";
  return os.str();
}

}  // namespace gdpq
