#pragma once

#include <cmath>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gdpq/expr.hpp"

namespace gdpq {

enum class VarKind { Continuous, Binary };

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
  VarKind kind = VarKind::Continuous;

  friend bool operator==(const Variable&, const Variable&) = default;
};

enum class ConstraintOrigin { User, EqualitySplitLo, EqualitySplitHi };

/// Canonical constraint: body <= 0. An equality h = 0 is stored as the pair
/// {h <= 0 (split-hi), -h <= 0 (split-lo)}.
struct Constraint {
  Expr body;
  ConstraintOrigin origin = ConstraintOrigin::User;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

struct Disjunct {
  std::string indicator;
  std::vector<Constraint> constraints;

  friend bool operator==(const Disjunct&, const Disjunct&) = default;
};

struct Disjunction {
  std::string id;
  std::vector<Disjunct> disjuncts;  // exactly-one semantics is implicit

  friend bool operator==(const Disjunction&, const Disjunction&) = default;
};

/// CNF clause over indicator names: OR of positive and negated literals.
struct LogicClause {
  std::set<std::string> positive;
  std::set<std::string> negative;

  friend bool operator==(const LogicClause&, const LogicClause&) = default;
};

struct GdpModel {
  std::vector<Variable> variables;
  QuadraticExpr objective;  // minimized
  std::vector<Constraint> global_constraints;
  std::vector<Disjunction> disjunctions;
  std::vector<LogicClause> logic;
  std::map<std::string, std::string> metadata;

  friend bool operator==(const GdpModel&, const GdpModel&) = default;

  int num_vars() const { return static_cast<int>(variables.size()); }

  int add_variable(std::string name, double lower, double upper,
                   VarKind kind = VarKind::Continuous) {
    variables.push_back({std::move(name), lower, upper, kind});
    return num_vars() - 1;
  }

  std::vector<Interval> box() const {
    std::vector<Interval> b;
    b.reserve(variables.size());
    for (const auto& v : variables) b.push_back({v.lower, v.upper});
    return b;
  }

  void add_global(Expr body) {
    global_constraints.push_back({std::move(body), ConstraintOrigin::User});
  }

  /// h = 0 stored as the <= pair.
  void add_global_equality(const Expr& h) {
    global_constraints.push_back({h, ConstraintOrigin::EqualitySplitHi});
    global_constraints.push_back({expr_negated(h), ConstraintOrigin::EqualitySplitLo});
  }

  /// Sorted distinct continuous variables referenced inside a disjunction.
  std::vector<int> disjunction_variables(const Disjunction& dj) const {
    std::set<int> vars;
    for (const auto& d : dj.disjuncts)
      for (const auto& c : d.constraints)
        for (int v : expr_variables(c.body)) vars.insert(v);
    return {vars.begin(), vars.end()};
  }
};

inline void add_disjunct_equality(Disjunct& d, const Expr& h) {
  d.constraints.push_back({h, ConstraintOrigin::EqualitySplitHi});
  d.constraints.push_back({expr_negated(h), ConstraintOrigin::EqualitySplitLo});
}

// ---------------------------------------------------------------------------
// Validation

struct Diagnostic {
  std::string code;
  std::string message;
  std::string where;
};

namespace diag {
inline constexpr const char* kBoundsReversed = "BOUNDS_REVERSED";
inline constexpr const char* kUnboundedDisjunctVar = "UNBOUNDED_DISJUNCT_VAR";
inline constexpr const char* kClauseLiteralConflict = "CLAUSE_LITERAL_CONFLICT";
inline constexpr const char* kUnknownVariable = "UNKNOWN_VARIABLE";
inline constexpr const char* kUnknownIndicator = "UNKNOWN_INDICATOR";
inline constexpr const char* kDuplicateIndicator = "DUPLICATE_INDICATOR";
inline constexpr const char* kDuplicateVariable = "DUPLICATE_VARIABLE_NAME";
inline constexpr const char* kEmptyDisjunction = "EMPTY_DISJUNCTION";
inline constexpr const char* kBinaryInExpression = "BINARY_IN_EXPRESSION";
inline constexpr const char* kNonFiniteCoefficient = "NONFINITE_COEFFICIENT";
}  // namespace diag

namespace detail {

inline bool expr_coeffs_finite(const Expr& e) {
  if (const auto* q = std::get_if<QuadraticExpr>(&e)) {
    if (!std::isfinite(q->constant())) return false;
    for (const auto& t : q->linear_terms())
      if (!std::isfinite(t.coeff)) return false;
    for (const auto& t : q->quad_terms())
      if (!std::isfinite(t.coeff)) return false;
    return true;
  }
  for (const auto& t : std::get<PolynomialExpr>(e).terms())
    if (!std::isfinite(t.coeff)) return false;
  return true;
}

}  // namespace detail

/// Structural checks; returns one diagnostic per violation (empty == valid).
inline std::vector<Diagnostic> validate(const GdpModel& m) {
  std::vector<Diagnostic> out;
  const int n = m.num_vars();

  std::set<std::string> var_names;
  for (int i = 0; i < n; ++i) {
    const auto& v = m.variables[i];
    const std::string where = "variables/" + std::to_string(i);
    if (v.lower > v.upper)
      out.push_back({diag::kBoundsReversed,
                     "variable '" + v.name + "' has lower > upper", where});
    if (!var_names.insert(v.name).second)
      out.push_back({diag::kDuplicateVariable,
                     "variable name '" + v.name + "' declared twice", where});
  }

  auto check_expr = [&](const Expr& e, const std::string& where,
                        bool continuous_only) {
    if (expr_dim(e) != n)
      out.push_back({diag::kUnknownVariable,
                     "expression dimension " + std::to_string(expr_dim(e)) +
                         " does not match model (" + std::to_string(n) + ")",
                     where});
    else if (continuous_only)
      for (int v : expr_variables(e))
        if (m.variables[v].kind != VarKind::Continuous)
          out.push_back({diag::kBinaryInExpression,
                         "variable '" + m.variables[v].name +
                             "' is not continuous",
                         where});
    if (!detail::expr_coeffs_finite(e))
      out.push_back({diag::kNonFiniteCoefficient,
                     "expression has a non-finite coefficient", where});
  };

  check_expr(QuadraticExpr(m.objective), "objective", true);
  for (std::size_t i = 0; i < m.global_constraints.size(); ++i)
    check_expr(m.global_constraints[i].body,
               "global_constraints/" + std::to_string(i), true);

  std::set<std::string> indicators;
  for (std::size_t k = 0; k < m.disjunctions.size(); ++k) {
    const auto& dj = m.disjunctions[k];
    const std::string where = "disjunctions/" + std::to_string(k);
    if (dj.disjuncts.empty())
      out.push_back({diag::kEmptyDisjunction,
                     "disjunction '" + dj.id + "' has no disjuncts", where});
    for (std::size_t i = 0; i < dj.disjuncts.size(); ++i) {
      const auto& d = dj.disjuncts[i];
      if (!indicators.insert(d.indicator).second)
        out.push_back({diag::kDuplicateIndicator,
                       "indicator '" + d.indicator + "' declared twice",
                       where + "/disjuncts/" + std::to_string(i)});
      for (std::size_t c = 0; c < d.constraints.size(); ++c)
        check_expr(d.constraints[c].body,
                   where + "/disjuncts/" + std::to_string(i) + "/constraints/" +
                       std::to_string(c),
                   false);
    }
    // Hull bound rows need finite boxes for every variable in the disjunction.
    for (int v : m.disjunction_variables(dj)) {
      if (v < 0 || v >= n) continue;
      if (!std::isfinite(m.variables[v].lower) ||
          !std::isfinite(m.variables[v].upper))
        out.push_back({diag::kUnboundedDisjunctVar,
                       "variable '" + m.variables[v].name +
                           "' appears in disjunction '" + dj.id +
                           "' but has non-finite bounds",
                       where});
    }
  }

  for (std::size_t c = 0; c < m.logic.size(); ++c) {
    const auto& cl = m.logic[c];
    const std::string where = "logic/" + std::to_string(c);
    for (const auto& name : cl.positive)
      if (cl.negative.count(name))
        out.push_back({diag::kClauseLiteralConflict,
                       "literal '" + name + "' is both positive and negative",
                       where});
    for (const auto& name : cl.positive)
      if (!indicators.count(name))
        out.push_back({diag::kUnknownIndicator,
                       "unknown indicator '" + name + "'", where});
    for (const auto& name : cl.negative)
      if (!indicators.count(name))
        out.push_back({diag::kUnknownIndicator,
                       "unknown indicator '" + name + "'", where});
  }

  return out;
}

// ---------------------------------------------------------------------------
// Logic-to-linear translation

enum class Sense { LE, GE, EQ };

enum class RowOrigin {
  Global,
  Xor,
  Logic,
  DisaggBound,
  Link,
  Disjunct,
  Glover,
};

struct LinearRow {
  std::string name;
  std::vector<LinTerm> terms;  // sorted by var
  double rhs = 0.0;
  Sense sense = Sense::LE;
  RowOrigin origin = RowOrigin::Global;
  int disjunction = -1;
  int disjunct = -1;
  int constraint = -1;

  double lhs(std::span<const double> x) const {
    double acc = 0.0;
    for (const auto& t : terms) acc += t.coeff * x[t.var];
    return acc;
  }

  /// Signed violation: positive means the row is violated by that amount.
  double violation(std::span<const double> x) const {
    const double v = lhs(x);
    switch (sense) {
      case Sense::LE:
        return v - rhs;
      case Sense::GE:
        return rhs - v;
      case Sense::EQ:
        return std::abs(v - rhs);
    }
    return 0.0;
  }
};

/// Translates CNF clauses into E y >= e rows: each clause becomes
///   sum_{i in positive} y_i + sum_{i in negative} (1 - y_i) >= 1,
/// i.e. sum_pos y_i - sum_neg y_i >= 1 - |negative|.
inline std::vector<LinearRow> logic_to_linear(
    const std::vector<LogicClause>& clauses,
    const std::map<std::string, int>& indicator_var) {
  std::vector<LinearRow> rows;
  rows.reserve(clauses.size());
  for (std::size_t c = 0; c < clauses.size(); ++c) {
    const auto& cl = clauses[c];
    LinearRow row;
    row.name = "logic_" + std::to_string(c);
    row.sense = Sense::GE;
    row.origin = RowOrigin::Logic;
    row.rhs = 1.0 - static_cast<double>(cl.negative.size());
    std::map<int, double> coeffs;
    for (const auto& name : cl.positive) {
      auto it = indicator_var.find(name);
      if (it == indicator_var.end())
        throw std::invalid_argument("unknown indicator '" + name + "'");
      coeffs[it->second] += 1.0;
    }
    for (const auto& name : cl.negative) {
      auto it = indicator_var.find(name);
      if (it == indicator_var.end())
        throw std::invalid_argument("unknown indicator '" + name + "'");
      coeffs[it->second] -= 1.0;
    }
    for (const auto& [v, c2] : coeffs) row.terms.push_back({v, c2});
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Evaluates a clause under a truth assignment keyed by indicator name.
inline bool clause_satisfied(const LogicClause& cl,
                             const std::map<std::string, bool>& truth) {
  for (const auto& name : cl.positive)
    if (truth.at(name)) return true;
  for (const auto& name : cl.negative)
    if (!truth.at(name)) return true;
  return false;
}

}  // namespace gdpq
