#pragma once

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gdpq/minlp.hpp"
#include "gdpq/model.hpp"
#include "gdpq/numeric.hpp"

namespace gdpq {

enum class Method { BigM, HullEps, HullExact, HullPoly, BinaryMult };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::BigM: return "bigm";
    case Method::HullEps: return "hull-eps";
    case Method::HullExact: return "hull-exact";
    case Method::HullPoly: return "hull-poly";
    case Method::BinaryMult: return "binary-mult";
  }
  return "?";
}

inline std::optional<Method> parse_method(const std::string& s) {
  if (s == "bigm") return Method::BigM;
  if (s == "hull-eps") return Method::HullEps;
  if (s == "hull-exact") return Method::HullExact;
  if (s == "hull-poly") return Method::HullPoly;
  if (s == "binary-mult") return Method::BinaryMult;
  return std::nullopt;
}

/// Key of a disjunct constraint: (disjunction, disjunct, constraint) indices.
struct ConstraintKey {
  int disjunction = 0;
  int disjunct = 0;
  int constraint = 0;

  friend auto operator<=>(const ConstraintKey&, const ConstraintKey&) = default;
};

struct ReformConfig {
  Method method = Method::HullExact;
  double eps = 1e-4;  // default matches the usual modeling-layer setting
  enum class BigMStrategy { Interval, User } bigm_strategy = BigMStrategy::Interval;
  std::map<ConstraintKey, double> user_bigm;
  bool emit_s3 = false;  // hull-exact only
};

struct TransformCounts {
  int continuous_vars = 0;
  int binary_vars = 0;
  int disaggregated_vars = 0;
  int linear_rows = 0;
  int quadratic_rows = 0;
  int rational_rows = 0;
  int polynomial_rows = 0;

  friend bool operator==(const TransformCounts&, const TransformCounts&) = default;
};

struct TransformReport {
  TransformCounts counts;
  std::map<std::string, int> provenance;
  std::vector<std::string> warnings;
};

inline TransformCounts make_counts(const MinlpModel& m) {
  TransformCounts c;
  c.continuous_vars = m.num_continuous();
  c.binary_vars = m.num_binaries();
  c.disaggregated_vars = m.num_disaggregated();
  c.linear_rows = static_cast<int>(m.linear_rows.size());
  for (const auto& row : m.nonlinear_rows) {
    if (std::holds_alternative<QuadRow>(row))
      ++c.quadratic_rows;
    else if (std::holds_alternative<PolyRow>(row))
      ++c.polynomial_rows;
    else
      ++c.rational_rows;
  }
  return c;
}

inline std::map<std::string, int> make_provenance(const MinlpModel& m) {
  std::map<std::string, int> p;
  for (const auto& v : m.variables) {
    switch (v.role.kind) {
      case VarRole::Kind::Original: ++p["original"]; break;
      case VarRole::Kind::Indicator: ++p["indicator"]; break;
      case VarRole::Kind::Disaggregated: ++p["disaggregated"]; break;
      case VarRole::Kind::Glover: ++p["glover"]; break;
      case VarRole::Kind::AuxNorm: ++p["aux-norm"]; break;
    }
  }
  return p;
}

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Diagnostic> diags)
      : std::runtime_error(format(diags)), diagnostics(std::move(diags)) {}

  std::vector<Diagnostic> diagnostics;

 private:
  static std::string format(const std::vector<Diagnostic>& diags) {
    std::ostringstream os;
    os << "model validation failed:";
    for (const auto& d : diags) os << " [" << d.code << " at " << d.where << "]";
    return os.str();
  }
};

namespace detail {

inline std::string itos(int v) { return std::to_string(v); }

/// Emits body <= 0 as the cheapest row kind: linear if degree <= 1,
/// quadratic if degree 2, polynomial otherwise.
inline void emit_expr_row(MinlpModel& m, Expr body, const std::string& name,
                          RowOrigin origin, ConstraintKey key) {
  const int n = m.num_vars();
  const int deg = expr_degree(body);
  if (deg <= 1) {
    LinearRow row;
    row.name = name;
    row.sense = Sense::LE;
    row.origin = origin;
    row.disjunction = key.disjunction;
    row.disjunct = key.disjunct;
    row.constraint = key.constraint;
    QuadraticExpr q = (std::holds_alternative<QuadraticExpr>(body))
                          ? std::get<QuadraticExpr>(body)
                          : *std::get<PolynomialExpr>(body).to_quadratic();
    q.prune();
    row.terms = q.linear_terms();
    row.rhs = -q.constant();
    m.linear_rows.push_back(std::move(row));
    return;
  }
  if (deg == 2) {
    QuadRow row;
    row.name = name;
    row.origin = origin;
    row.disjunction = key.disjunction;
    row.disjunct = key.disjunct;
    row.constraint = key.constraint;
    if (auto* q = std::get_if<QuadraticExpr>(&body)) {
      q->set_dim(n);
      row.expr = std::move(*q);
    } else {
      auto& p = std::get<PolynomialExpr>(body);
      p.set_dim(n);
      row.expr = *p.to_quadratic();
    }
    m.nonlinear_rows.push_back(std::move(row));
    return;
  }
  PolyRow row;
  row.name = name;
  row.origin = origin;
  row.disjunction = key.disjunction;
  row.disjunct = key.disjunct;
  row.constraint = key.constraint;
  auto p = expr_to_polynomial(body);
  p.set_dim(n);
  row.expr = std::move(p);
  m.nonlinear_rows.push_back(std::move(row));
}

}  // namespace detail

/// Disjunction-independent scaffold: original variables, objective and global
/// constraints copied verbatim, one binary per disjunct, one XOR row
/// sum_i y_ik = 1 per disjunction, and the logic rows E y >= e.
/// Disjunct constraints are not reformulated here.
inline MinlpModel scaffold(const GdpModel& gdp) {
  if (auto diags = validate(gdp); !diags.empty())
    throw ValidationError(std::move(diags));

  MinlpModel m;
  m.metadata = gdp.metadata;
  for (int i = 0; i < gdp.num_vars(); ++i) {
    const auto& v = gdp.variables[i];
    VarRole role;
    role.kind = VarRole::Kind::Original;
    role.orig_var = i;
    m.add_variable(v.name, v.lower, v.upper, v.kind, role);
  }
  m.objective = gdp.objective;

  for (std::size_t c = 0; c < gdp.global_constraints.size(); ++c) {
    detail::emit_expr_row(m, gdp.global_constraints[c].body,
                          "g" + detail::itos(static_cast<int>(c)),
                          RowOrigin::Global, {-1, -1, static_cast<int>(c)});
  }

  std::map<std::string, int> indicator_var;
  for (std::size_t k = 0; k < gdp.disjunctions.size(); ++k) {
    const auto& dj = gdp.disjunctions[k];
    LinearRow xor_row;
    xor_row.name = "xor_" + detail::itos(static_cast<int>(k));
    xor_row.sense = Sense::EQ;
    xor_row.rhs = 1.0;
    xor_row.origin = RowOrigin::Xor;
    xor_row.disjunction = static_cast<int>(k);
    for (std::size_t i = 0; i < dj.disjuncts.size(); ++i) {
      VarRole role;
      role.kind = VarRole::Kind::Indicator;
      role.disjunction = static_cast<int>(k);
      role.disjunct = static_cast<int>(i);
      const int y = m.add_variable(dj.disjuncts[i].indicator, 0.0, 1.0,
                                   VarKind::Binary, role);
      indicator_var[dj.disjuncts[i].indicator] = y;
      xor_row.terms.push_back({y, 1.0});
    }
    m.linear_rows.push_back(std::move(xor_row));
  }

  for (auto& row : logic_to_linear(gdp.logic, indicator_var))
    m.linear_rows.push_back(std::move(row));

  m.finalize();
  return m;
}

namespace detail {

/// Disaggregated-variable bookkeeping for the hull transforms. Only
/// variables actually appearing in a disjunction's constraints are copied;
/// absent variables are unconstrained within the disjunct, so the projected
/// region is unchanged.
struct HullSpace {
  std::vector<std::vector<int>> participating;           // per disjunction
  std::vector<std::vector<std::map<int, int>>> vmap;     // [k][i]: x -> v
};

inline HullSpace make_disaggregation(const GdpModel& gdp, MinlpModel& m) {
  HullSpace hs;
  hs.participating.resize(gdp.disjunctions.size());
  hs.vmap.resize(gdp.disjunctions.size());
  for (std::size_t k = 0; k < gdp.disjunctions.size(); ++k) {
    const auto& dj = gdp.disjunctions[k];
    hs.participating[k] = gdp.disjunction_variables(dj);
    hs.vmap[k].resize(dj.disjuncts.size());
    for (std::size_t i = 0; i < dj.disjuncts.size(); ++i) {
      for (int xv : hs.participating[k]) {
        const auto& x = gdp.variables[xv];
        VarRole role;
        role.kind = VarRole::Kind::Disaggregated;
        role.orig_var = xv;
        role.disjunction = static_cast<int>(k);
        role.disjunct = static_cast<int>(i);
        const int v = m.add_variable(
            "v_" + x.name + "_" + itos(static_cast<int>(k)) + "_" +
                itos(static_cast<int>(i)),
            std::min(0.0, x.lower), std::max(0.0, x.upper),
            VarKind::Continuous, role);
        hs.vmap[k][i][xv] = v;
      }
    }
  }
  return hs;
}

/// Bound rows x^l y <= v <= x^u y and linking rows x = sum_i v_ik.
inline void emit_hull_structure(const GdpModel& gdp, MinlpModel& m,
                                const HullSpace& hs) {
  for (std::size_t k = 0; k < gdp.disjunctions.size(); ++k) {
    const auto& dj = gdp.disjunctions[k];
    for (std::size_t i = 0; i < dj.disjuncts.size(); ++i) {
      const int y = m.indicator_var(static_cast<int>(k), static_cast<int>(i));
      for (int xv : hs.participating[k]) {
        const int v = hs.vmap[k][i].at(xv);
        const auto& x = gdp.variables[xv];
        LinearRow lo;
        lo.name = "vlo_" + itos(static_cast<int>(k)) + "_" +
                  itos(static_cast<int>(i)) + "_" + itos(xv);
        lo.terms = (y < v) ? std::vector<LinTerm>{{y, x.lower}, {v, -1.0}}
                           : std::vector<LinTerm>{{v, -1.0}, {y, x.lower}};
        lo.rhs = 0.0;
        lo.sense = Sense::LE;
        lo.origin = RowOrigin::DisaggBound;
        lo.disjunction = static_cast<int>(k);
        lo.disjunct = static_cast<int>(i);
        m.linear_rows.push_back(std::move(lo));
        LinearRow up;
        up.name = "vup_" + itos(static_cast<int>(k)) + "_" +
                  itos(static_cast<int>(i)) + "_" + itos(xv);
        up.terms = (y < v) ? std::vector<LinTerm>{{y, -x.upper}, {v, 1.0}}
                           : std::vector<LinTerm>{{v, 1.0}, {y, -x.upper}};
        up.rhs = 0.0;
        up.sense = Sense::LE;
        up.origin = RowOrigin::DisaggBound;
        up.disjunction = static_cast<int>(k);
        up.disjunct = static_cast<int>(i);
        m.linear_rows.push_back(std::move(up));
      }
    }
    for (int xv : hs.participating[k]) {
      LinearRow link;
      link.name = "lnk_" + itos(static_cast<int>(k)) + "_" + itos(xv);
      link.terms.push_back({xv, 1.0});
      for (std::size_t i = 0; i < dj.disjuncts.size(); ++i)
        link.terms.push_back({hs.vmap[k][i].at(xv), -1.0});
      link.rhs = 0.0;
      link.sense = Sense::EQ;
      link.origin = RowOrigin::Link;
      link.disjunction = static_cast<int>(k);
      m.linear_rows.push_back(std::move(link));
    }
  }
}

inline std::string disjunct_row_name(ConstraintKey key) {
  return "d_" + itos(key.disjunction) + "_" + itos(key.disjunct) + "_" +
         itos(key.constraint);
}

/// Linear hull row A v <= b y for degree <= 1 bodies; linearity is
/// preserved exactly, shared by all three hull variants.
inline void emit_linear_hull_row(MinlpModel& m, const QuadraticExpr& body,
                                 const std::map<int, int>& vmap, int y,
                                 ConstraintKey key) {
  LinearRow row;
  row.name = disjunct_row_name(key);
  row.sense = Sense::LE;
  row.rhs = 0.0;
  row.origin = RowOrigin::Disjunct;
  row.disjunction = key.disjunction;
  row.disjunct = key.disjunct;
  row.constraint = key.constraint;
  std::map<int, double> coeffs;
  for (const auto& t : body.linear_terms()) coeffs[vmap.at(t.var)] += t.coeff;
  if (body.constant() != 0.0) coeffs[y] += body.constant();
  for (const auto& [v, c] : coeffs)
    if (c != 0.0) row.terms.push_back({v, c});
  m.linear_rows.push_back(std::move(row));
}

inline QuadraticExpr body_as_quadratic(const Expr& body,
                                       const std::string& where) {
  if (const auto* q = std::get_if<QuadraticExpr>(&body)) return *q;
  auto q = std::get<PolynomialExpr>(body).to_quadratic();
  if (!q)
    throw std::invalid_argument("constraint body at " + where +
                                " has degree > 2; not quadratic");
  return *q;
}

/// Walks every disjunct constraint in deterministic order.
template <typename F>
void for_each_disjunct_constraint(const GdpModel& gdp, F&& f) {
  for (std::size_t k = 0; k < gdp.disjunctions.size(); ++k) {
    const auto& dj = gdp.disjunctions[k];
    for (std::size_t i = 0; i < dj.disjuncts.size(); ++i) {
      for (std::size_t c = 0; c < dj.disjuncts[i].constraints.size(); ++c) {
        f(ConstraintKey{static_cast<int>(k), static_cast<int>(i),
                        static_cast<int>(c)},
          dj.disjuncts[i].constraints[c].body);
      }
    }
  }
}

}  // namespace detail

/// Big-M: each disjunct constraint h <= 0 becomes h(x) - M (1 - y) <= 0 with
/// M = max(0, interval upper bound of h over the box) under the interval
/// strategy. The variable space is unchanged.
inline std::pair<MinlpModel, TransformReport> reformulate_bigm(
    const GdpModel& gdp, const ReformConfig& config = {}) {
  MinlpModel m = scaffold(gdp);
  TransformReport report;
  const auto box = gdp.box();
  detail::for_each_disjunct_constraint(gdp, [&](ConstraintKey key,
                                                const Expr& body) {
    const int y = m.indicator_var(key.disjunction, key.disjunct);
    double interval_m = -1.0;  // -1 marks "not computable"
    try {
      interval_m = std::max(0.0, expr_interval(body, box).hi);
    } catch (const std::domain_error&) {
      if (config.bigm_strategy == ReformConfig::BigMStrategy::Interval) throw;
    }
    double big_m = interval_m;
    if (config.bigm_strategy == ReformConfig::BigMStrategy::User) {
      auto it = config.user_bigm.find(key);
      if (it == config.user_bigm.end())
        throw std::invalid_argument("no user Big-M for constraint " +
                                    detail::disjunct_row_name(key));
      big_m = it->second;
      if (interval_m >= 0.0 && big_m < interval_m)
        report.warnings.push_back(
            "user Big-M " + std::to_string(big_m) + " for " +
            detail::disjunct_row_name(key) +
            " is below the interval-derived value " +
            std::to_string(interval_m));
    }
    Expr row = body;
    std::visit(
        [&](auto& b) {
          b.set_dim(m.num_vars());
          if constexpr (std::is_same_v<std::decay_t<decltype(b)>,
                                       QuadraticExpr>) {
            b.add_linear(y, big_m);
            b.add_constant(-big_m);
          } else {
            b.add_term({{y, 1}}, big_m);
            b.add_constant(-big_m);
          }
        },
        row);
    detail::emit_expr_row(m, std::move(row), detail::disjunct_row_name(key),
                          RowOrigin::Disjunct, key);
  });
  m.finalize();
  report.counts = make_counts(m);
  report.provenance = make_provenance(m);
  return {std::move(m), std::move(report)};
}

/// Exact hull for quadratic disjunct constraints: with disaggregated v and
/// indicator y, the row v^T Q v + (c^T v) y + d y^2 <= 0 describes the same
/// lifted set as the perspective closure, while staying quadratic.
/// Degree <= 1 bodies use the linear hull row A v <= b y.
inline std::pair<MinlpModel, TransformReport> reformulate_hull_exact(
    const GdpModel& gdp, const ReformConfig& config = {});

/// Eps-approximated hull of quadratic constraints; for quadratic bodies the
/// simplified rational row v^T Q v / ((1-eps) y + eps) + c^T v + d y <= 0 is
/// used, while higher-degree polynomial bodies keep the generic form
/// D h(v/D) - eps h(0) (1 - y) <= 0.
inline std::pair<MinlpModel, TransformReport> reformulate_hull_eps(
    const GdpModel& gdp, const ReformConfig& config = {});

/// Degree-preserving exact hull for polynomial constraints:
/// sum_k p_k(v) y^(d-k) <= 0, every emitted monomial of total degree d.
inline std::pair<MinlpModel, TransformReport> reformulate_hull_poly(
    const GdpModel& gdp, const ReformConfig& config = {});

/// Binary multiplication: y * h(x) <= 0, no disaggregation.
inline std::pair<MinlpModel, TransformReport> reformulate_binary_mult(
    const GdpModel& gdp, const ReformConfig& config = {});

namespace detail {

inline void hull_exact_row(MinlpModel& m, const QuadraticExpr& body,
                           const GdpModel& gdp, const std::map<int, int>& vmap,
                           int y, ConstraintKey key) {
  QuadRow row;
  row.name = disjunct_row_name(key);
  row.origin = RowOrigin::Disjunct;
  row.disjunction = key.disjunction;
  row.disjunct = key.disjunct;
  row.constraint = key.constraint;
  QuadraticExpr expr(m.num_vars());
  for (const auto& t : body.quad_terms()) {
    const double mono = (t.i == t.j) ? t.coeff : 2.0 * t.coeff;
    expr.add_quadratic(vmap.at(t.i), vmap.at(t.j), mono);
  }
  for (const auto& t : body.linear_terms())
    expr.add_quadratic(vmap.at(t.var), y, t.coeff);
  if (body.constant() != 0.0) expr.add_quadratic(y, y, body.constant());
  row.expr = std::move(expr);

  QuadRow::S2Meta meta;
  meta.y_var = y;
  meta.d_coeff = body.constant();
  for (int xv : body.variables()) {
    QuadRow::S2Term term;
    term.v_var = vmap.at(xv);
    term.c_coeff = body.linear_coeff(xv);
    term.orig_var = xv;
    term.x_lower = gdp.variables[xv].lower;
    term.x_upper = gdp.variables[xv].upper;
    meta.terms.push_back(term);
  }
  row.s2 = std::move(meta);
  m.nonlinear_rows.push_back(std::move(row));
}

}  // namespace detail

/// Rebuilds an exact-hull quadratic row as its explicitly convex variant:
/// the bilinear (c^T v) y is replaced by c^T z with Glover rows binding z to
/// v y at binary y, and d y^2 by d y. The caller asserts Q is PSD; this
/// function does not verify it. Returns the indices of the Glover rows added.
///
/// Glover bounds are clamped to [min(0, x^l), max(0, x^u)] so that y = 0
/// (which forces v = 0) stays feasible for boxes that exclude zero.
inline std::vector<std::size_t> convexify_s3(MinlpModel& m,
                                             std::size_t row_index) {
  auto* row = std::get_if<QuadRow>(&m.nonlinear_rows[row_index]);
  if (row == nullptr || !row->s2.has_value())
    throw std::invalid_argument(
        "convexify_s3 requires an exact-hull quadratic row");
  const auto meta = *row->s2;
  if (std::cmp_greater_equal(static_cast<std::size_t>(meta.y_var),
                             m.variables.size()))
    throw std::invalid_argument("corrupt S2 metadata");

  QuadraticExpr expr(m.num_vars());
  for (const auto& t : row->expr.quad_terms()) {
    if (t.i == meta.y_var || t.j == meta.y_var) continue;  // v-block only
    const double mono = (t.i == t.j) ? t.coeff : 2.0 * t.coeff;
    expr.add_quadratic(t.i, t.j, mono);
  }

  std::vector<std::size_t> added;
  int glover_idx = 0;
  for (const auto& term : meta.terms) {
    if (term.c_coeff == 0.0) continue;
    if (!std::isfinite(term.x_lower) || !std::isfinite(term.x_upper))
      throw std::domain_error("convexify_s3 requires finite variable bounds");
    const double lo = std::min(0.0, term.x_lower);
    const double up = std::max(0.0, term.x_upper);
    VarRole role;
    role.kind = VarRole::Kind::Glover;
    role.orig_var = term.orig_var;
    role.disjunction = row->disjunction;
    role.disjunct = row->disjunct;
    const int z = m.add_variable(
        "z_" + row->name + "_" + detail::itos(glover_idx++), lo, up,
        VarKind::Continuous, role);
    expr.set_dim(m.num_vars());

    const int y = meta.y_var;
    const int v = term.v_var;
    auto push = [&](const char* tag, std::vector<LinTerm> terms, double rhs) {
      LinearRow r;
      r.name = "glv_" + std::string(tag) + "_" + row->name + "_" +
               detail::itos(glover_idx - 1);
      std::sort(terms.begin(), terms.end(),
                [](const LinTerm& a, const LinTerm& b) { return a.var < b.var; });
      r.terms = std::move(terms);
      r.rhs = rhs;
      r.sense = Sense::LE;
      r.origin = RowOrigin::Glover;
      r.disjunction = row->disjunction;
      r.disjunct = row->disjunct;
      added.push_back(m.linear_rows.size());
      m.linear_rows.push_back(std::move(r));
    };
    // z <= U y ; z >= L y ; z <= v - L (1 - y) ; z >= v - U (1 - y)
    push("ub", {{z, 1.0}, {y, -up}}, 0.0);
    push("lb", {{z, -1.0}, {y, lo}}, 0.0);
    push("v1", {{z, 1.0}, {v, -1.0}, {y, -lo}}, -lo);
    push("v2", {{z, -1.0}, {v, 1.0}, {y, up}}, up);

    expr.add_linear(z, term.c_coeff);
  }
  if (meta.d_coeff != 0.0) expr.add_linear(meta.y_var, meta.d_coeff);

  auto& target = std::get<QuadRow>(m.nonlinear_rows[row_index]);
  target.expr = std::move(expr);
  target.s2.reset();
  m.finalize();
  return added;
}

/// Min eigenvalue of the v-block of an exact-hull row (the caller's PSD
/// gate for S3 emission).
inline double hull_row_min_eigenvalue(const MinlpModel& m,
                                      const QuadRow& row) {
  if (!row.s2) throw std::invalid_argument("row has no S2 metadata");
  std::vector<int> vars;
  for (const auto& t : row.expr.quad_terms()) {
    if (t.i != row.s2->y_var) vars.push_back(t.i);
    if (t.j != row.s2->y_var) vars.push_back(t.j);
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  if (vars.empty()) return 0.0;
  QuadraticExpr vblock(m.num_vars());
  for (const auto& t : row.expr.quad_terms()) {
    if (t.i == row.s2->y_var || t.j == row.s2->y_var) continue;
    const double mono = (t.i == t.j) ? t.coeff : 2.0 * t.coeff;
    vblock.add_quadratic(t.i, t.j, mono);
  }
  return min_symmetric_eigenvalue(vblock.dense_matrix(vars), vars.size());
}

inline std::pair<MinlpModel, TransformReport> reformulate_hull_exact(
    const GdpModel& gdp, const ReformConfig& config) {
  MinlpModel m = scaffold(gdp);
  TransformReport report;
  auto hs = detail::make_disaggregation(gdp, m);
  detail::emit_hull_structure(gdp, m, hs);
  detail::for_each_disjunct_constraint(gdp, [&](ConstraintKey key,
                                                const Expr& body) {
    const QuadraticExpr q =
        detail::body_as_quadratic(body, detail::disjunct_row_name(key));
    const int y = m.indicator_var(key.disjunction, key.disjunct);
    const auto& vmap = hs.vmap[key.disjunction][key.disjunct];
    if (q.is_linear())
      detail::emit_linear_hull_row(m, q, vmap, y, key);
    else
      detail::hull_exact_row(m, q, gdp, vmap, y, key);
  });
  m.finalize();
  if (config.emit_s3) {
    for (std::size_t r = 0; r < m.nonlinear_rows.size(); ++r) {
      auto* qr = std::get_if<QuadRow>(&m.nonlinear_rows[r]);
      if (qr == nullptr || !qr->s2 || qr->origin != RowOrigin::Disjunct)
        continue;
      const double lam = hull_row_min_eigenvalue(m, *qr);
      if (lam >= -1e-10) {
        convexify_s3(m, r);
      } else {
        report.warnings.push_back("row " + qr->name +
                                  " kept in S2 form: min eigenvalue " +
                                  std::to_string(lam) + " fails the PSD gate");
      }
    }
  }
  if (!hs.participating.empty())
    report.warnings.push_back(
        "disaggregation restricted to variables appearing in each "
        "disjunction");
  report.counts = make_counts(m);
  report.provenance = make_provenance(m);
  return {std::move(m), std::move(report)};
}

inline std::pair<MinlpModel, TransformReport> reformulate_hull_eps(
    const GdpModel& gdp, const ReformConfig& config) {
  if (!(config.eps > 0.0))
    throw std::invalid_argument("eps must be > 0");
  MinlpModel m = scaffold(gdp);
  TransformReport report;
  auto hs = detail::make_disaggregation(gdp, m);
  detail::emit_hull_structure(gdp, m, hs);
  detail::for_each_disjunct_constraint(gdp, [&](ConstraintKey key,
                                                const Expr& body) {
    const int y = m.indicator_var(key.disjunction, key.disjunct);
    const auto& vmap = hs.vmap[key.disjunction][key.disjunct];
    const int deg = expr_degree(body);
    if (deg <= 1) {
      detail::emit_linear_hull_row(
          m, detail::body_as_quadratic(body, detail::disjunct_row_name(key)),
          vmap, y, key);
      return;
    }
    if (deg == 2) {
      const QuadraticExpr q =
          detail::body_as_quadratic(body, detail::disjunct_row_name(key));
      EpsQuadRow row;
      row.name = detail::disjunct_row_name(key);
      row.y_var = y;
      row.eps = config.eps;
      row.origin = RowOrigin::Disjunct;
      row.disjunction = key.disjunction;
      row.disjunct = key.disjunct;
      row.constraint = key.constraint;
      QuadraticExpr vquad(m.num_vars());
      for (const auto& t : q.quad_terms()) {
        const double mono = (t.i == t.j) ? t.coeff : 2.0 * t.coeff;
        vquad.add_quadratic(vmap.at(t.i), vmap.at(t.j), mono);
      }
      row.quad = std::move(vquad);
      std::map<int, double> lin;
      for (const auto& t : q.linear_terms()) lin[vmap.at(t.var)] += t.coeff;
      if (q.constant() != 0.0) lin[y] += q.constant();
      for (const auto& [v, c] : lin)
        if (c != 0.0) row.linear.push_back({v, c});
      m.nonlinear_rows.push_back(std::move(row));
      return;
    }
    // Generic closure approximation for degree >= 3 polynomial bodies.
    EpsPolyRow row;
    row.name = detail::disjunct_row_name(key);
    row.y_var = y;
    row.eps = config.eps;
    row.origin = RowOrigin::Disjunct;
    row.disjunction = key.disjunction;
    row.disjunct = key.disjunct;
    row.constraint = key.constraint;
    std::map<int, int> sub;
    const auto poly = expr_to_polynomial(body);
    for (int xv : poly.variables()) sub[xv] = vmap.at(xv);
    row.body = poly.substituted(sub, m.num_vars());
    m.nonlinear_rows.push_back(std::move(row));
  });
  m.finalize();
  report.counts = make_counts(m);
  report.provenance = make_provenance(m);
  return {std::move(m), std::move(report)};
}

inline std::pair<MinlpModel, TransformReport> reformulate_hull_poly(
    const GdpModel& gdp, const ReformConfig& config) {
  (void)config;
  MinlpModel m = scaffold(gdp);
  TransformReport report;
  auto hs = detail::make_disaggregation(gdp, m);
  detail::emit_hull_structure(gdp, m, hs);
  detail::for_each_disjunct_constraint(gdp, [&](ConstraintKey key,
                                                const Expr& body) {
    const int y = m.indicator_var(key.disjunction, key.disjunct);
    const auto& vmap = hs.vmap[key.disjunction][key.disjunct];
    const PolynomialExpr poly = expr_to_polynomial(body);
    const int d = poly.degree();
    if (d == 0)
      throw std::invalid_argument("constraint " +
                                  detail::disjunct_row_name(key) +
                                  " is a degree-0 (constant) body");
    std::map<int, int> sub;
    for (int xv : poly.variables()) sub[xv] = vmap.at(xv);
    const PolynomialExpr over_v = poly.substituted(sub, m.num_vars());
    if (d == 1) {
      detail::emit_linear_hull_row(
          m, detail::body_as_quadratic(body, detail::disjunct_row_name(key)),
          vmap, y, key);
      return;
    }
    PolynomialExpr lifted(m.num_vars());
    for (const auto& t : over_v.terms()) {
      const int k = monomial_degree(t.mono);
      Monomial mono = t.mono;
      if (d - k > 0) mono.emplace_back(y, d - k);
      lifted.add_term(std::move(mono), t.coeff);
    }
    detail::emit_expr_row(m, std::move(lifted), detail::disjunct_row_name(key),
                          RowOrigin::Disjunct, key);
  });
  m.finalize();
  report.counts = make_counts(m);
  report.provenance = make_provenance(m);
  return {std::move(m), std::move(report)};
}

inline std::pair<MinlpModel, TransformReport> reformulate_binary_mult(
    const GdpModel& gdp, const ReformConfig& config) {
  (void)config;
  MinlpModel m = scaffold(gdp);
  TransformReport report;
  detail::for_each_disjunct_constraint(gdp, [&](ConstraintKey key,
                                                const Expr& body) {
    const int y = m.indicator_var(key.disjunction, key.disjunct);
    PolynomialExpr poly = expr_to_polynomial(body);
    poly.set_dim(m.num_vars());
    detail::emit_expr_row(m, poly.multiplied_by_power(y, 1),
                          detail::disjunct_row_name(key), RowOrigin::Disjunct,
                          key);
  });
  m.finalize();
  report.counts = make_counts(m);
  report.provenance = make_provenance(m);
  return {std::move(m), std::move(report)};
}

inline std::pair<MinlpModel, TransformReport> reformulate(
    const GdpModel& gdp, const ReformConfig& config) {
  switch (config.method) {
    case Method::BigM: return reformulate_bigm(gdp, config);
    case Method::HullEps: return reformulate_hull_eps(gdp, config);
    case Method::HullExact: return reformulate_hull_exact(gdp, config);
    case Method::HullPoly: return reformulate_hull_poly(gdp, config);
    case Method::BinaryMult: return reformulate_binary_mult(gdp, config);
  }
  throw std::logic_error("unknown method");
}

}  // namespace gdpq
