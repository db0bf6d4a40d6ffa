#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gdpq/model.hpp"

namespace gdpq {

struct VarRole {
  enum class Kind { Original, Indicator, Disaggregated, Glover, AuxNorm };
  Kind kind = Kind::Original;
  int orig_var = -1;     // Disaggregated/Glover: the source variable
  int disjunction = -1;  // Indicator/Disaggregated/Glover
  int disjunct = -1;     // Indicator/Disaggregated/Glover
};

struct MinlpVar {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
  VarKind kind = VarKind::Continuous;
  VarRole role;
};

/// Pure quadratic row expr <= 0 over the MINLP variable space.
struct QuadRow {
  std::string name;
  QuadraticExpr expr;
  RowOrigin origin = RowOrigin::Disjunct;
  int disjunction = -1;
  int disjunct = -1;
  int constraint = -1;

  /// Decomposition metadata attached by the exact hull transform; needed to
  /// rebuild the row as its Glover-linearized convex variant.
  struct S2Term {
    int v_var = -1;
    double c_coeff = 0.0;
    int orig_var = -1;
    double x_lower = 0.0;
    double x_upper = 0.0;
  };
  struct S2Meta {
    int y_var = -1;
    double d_coeff = 0.0;
    std::vector<S2Term> terms;
  };
  std::optional<S2Meta> s2;

  double value(std::span<const double> x) const { return expr.eval_unchecked(x); }
};

/// Polynomial row expr <= 0 (degree-d hull, binary multiplication).
struct PolyRow {
  std::string name;
  PolynomialExpr expr;
  RowOrigin origin = RowOrigin::Disjunct;
  int disjunction = -1;
  int disjunct = -1;
  int constraint = -1;

  double value(std::span<const double> x) const { return expr.eval_unchecked(x); }
};

/// Rational row from the eps-approximated hull of a quadratic constraint:
///   quad(v) / ((1-eps) y + eps) + linear(v, y) <= 0.
struct EpsQuadRow {
  std::string name;
  QuadraticExpr quad;            // v^T Q v over disaggregated variables
  std::vector<LinTerm> linear;   // c^T v + d*y
  int y_var = -1;
  double eps = 1e-4;
  RowOrigin origin = RowOrigin::Disjunct;
  int disjunction = -1;
  int disjunct = -1;
  int constraint = -1;

  double denom(std::span<const double> x) const {
    return (1.0 - eps) * x[y_var] + eps;
  }
  double value(std::span<const double> x) const {
    double acc = quad.eval_unchecked(x) / denom(x);
    for (const auto& t : linear) acc += t.coeff * x[t.var];
    return acc;
  }
};

/// Rational row from the eps-approximated closure of a polynomial body h:
///   D * h(v / D) - eps * h(0) * (1 - y) <= 0,  D = (1-eps) y + eps.
struct EpsPolyRow {
  std::string name;
  PolynomialExpr body;  // original h with x already rewritten to v indices
  int y_var = -1;
  double eps = 1e-4;
  RowOrigin origin = RowOrigin::Disjunct;
  int disjunction = -1;
  int disjunct = -1;
  int constraint = -1;

  double denom(std::span<const double> x) const {
    return (1.0 - eps) * x[y_var] + eps;
  }
  double value(std::span<const double> x) const {
    const double d = denom(x);
    std::vector<double> scaled(x.begin(), x.end());
    for (int v : body.variables()) scaled[v] = x[v] / d;
    return d * body.eval_unchecked(scaled) -
           eps * body.constant_component() * (1.0 - x[y_var]);
  }
};

using NonlinearRow = std::variant<QuadRow, PolyRow, EpsQuadRow, EpsPolyRow>;

inline double row_value(const NonlinearRow& row, std::span<const double> x) {
  return std::visit([&](const auto& r) { return r.value(x); }, row);
}

/// g += scale * grad(row lhs)(x).
inline void row_add_gradient(const NonlinearRow& row, std::span<const double> x,
                             double scale, std::span<double> g) {
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, QuadRow> || std::is_same_v<T, PolyRow>) {
          r.expr.add_gradient(x, scale, g);
        } else if constexpr (std::is_same_v<T, EpsQuadRow>) {
          const double d = r.denom(x);
          r.quad.add_gradient(x, scale / d, g);
          g[r.y_var] -= scale * r.quad.eval_unchecked(x) * (1.0 - r.eps) / (d * d);
          for (const auto& t : r.linear) g[t.var] += scale * t.coeff;
        } else {
          // d/dv [D h(v/D)] = grad h(v/D); d/dy = (1-eps) (h(s) - grad h(s).s)
          const double d = r.denom(x);
          std::vector<double> scaled(x.begin(), x.end());
          const auto vars = r.body.variables();
          for (int v : vars) scaled[v] = x[v] / d;
          std::vector<double> gh(x.size(), 0.0);
          r.body.add_gradient(scaled, 1.0, gh);
          double dot = 0.0;
          for (int v : vars) {
            g[v] += scale * gh[v];
            dot += gh[v] * scaled[v];
          }
          const double h_at = r.body.eval_unchecked(scaled);
          g[r.y_var] += scale * ((1.0 - r.eps) * (h_at - dot) +
                                 r.eps * r.body.constant_component());
        }
      },
      row);
}

inline const std::string& row_name(const NonlinearRow& row) {
  return std::visit([](const auto& r) -> const std::string& { return r.name; }, row);
}

inline RowOrigin nonlinear_row_origin(const NonlinearRow& row) {
  return std::visit([](const auto& r) { return r.origin; }, row);
}

inline int nonlinear_row_disjunction(const NonlinearRow& row) {
  return std::visit([](const auto& r) { return r.disjunction; }, row);
}

/// Flat MINLP produced by the disjunction transforms.
struct MinlpModel {
  std::vector<MinlpVar> variables;
  QuadraticExpr objective;
  std::vector<LinearRow> linear_rows;
  std::vector<NonlinearRow> nonlinear_rows;
  std::map<std::string, std::string> metadata;

  int num_vars() const { return static_cast<int>(variables.size()); }

  int num_binaries() const {
    int n = 0;
    for (const auto& v : variables)
      if (v.kind == VarKind::Binary) ++n;
    return n;
  }

  int num_continuous() const { return num_vars() - num_binaries(); }

  int num_disaggregated() const {
    int n = 0;
    for (const auto& v : variables)
      if (v.role.kind == VarRole::Kind::Disaggregated) ++n;
    return n;
  }

  int add_variable(std::string name, double lower, double upper, VarKind kind,
                   VarRole role) {
    variables.push_back({std::move(name), lower, upper, kind, role});
    return num_vars() - 1;
  }

  std::vector<Interval> box() const {
    std::vector<Interval> b;
    b.reserve(variables.size());
    for (const auto& v : variables) b.push_back({v.lower, v.upper});
    return b;
  }

  /// Widens every stored expression to the final variable count. Transforms
  /// call this once after all variables exist.
  void finalize() {
    const int n = num_vars();
    objective.set_dim(n);
    for (auto& row : nonlinear_rows) {
      std::visit(
          [&](auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, QuadRow>) {
              r.expr.set_dim(n);
            } else if constexpr (std::is_same_v<T, PolyRow>) {
              r.expr.set_dim(n);
            } else if constexpr (std::is_same_v<T, EpsQuadRow>) {
              r.quad.set_dim(n);
            } else {
              r.body.set_dim(n);
            }
          },
          row);
    }
  }

  /// Max violation over all rows at a full-space point.
  double max_violation(std::span<const double> x) const {
    double worst = 0.0;
    for (const auto& row : linear_rows)
      worst = std::max(worst, row.violation(x));
    for (const auto& row : nonlinear_rows)
      worst = std::max(worst, row_value(row, x));
    return worst;
  }

  bool feasible(std::span<const double> x, double tol) const {
    return max_violation(x) <= tol;
  }

  /// Binary indicator column for (disjunction k, disjunct i), or -1.
  int indicator_var(int disjunction, int disjunct) const {
    for (int v = 0; v < num_vars(); ++v) {
      const auto& role = variables[v].role;
      if (role.kind == VarRole::Kind::Indicator &&
          role.disjunction == disjunction && role.disjunct == disjunct)
        return v;
    }
    return -1;
  }

  /// Disaggregated copy of orig_var in (disjunction, disjunct), or -1.
  int disaggregated_var(int disjunction, int disjunct, int orig_var) const {
    for (int v = 0; v < num_vars(); ++v) {
      const auto& role = variables[v].role;
      if (role.kind == VarRole::Kind::Disaggregated &&
          role.disjunction == disjunction && role.disjunct == disjunct &&
          role.orig_var == orig_var)
        return v;
    }
    return -1;
  }

  int num_disjunctions() const {
    int hi = -1;
    for (const auto& v : variables)
      if (v.role.kind == VarRole::Kind::Indicator)
        hi = std::max(hi, v.role.disjunction);
    return hi + 1;
  }

  int num_disjuncts(int disjunction) const {
    int hi = -1;
    for (const auto& v : variables)
      if (v.role.kind == VarRole::Kind::Indicator &&
          v.role.disjunction == disjunction)
        hi = std::max(hi, v.role.disjunct);
    return hi + 1;
  }
};

}  // namespace gdpq
