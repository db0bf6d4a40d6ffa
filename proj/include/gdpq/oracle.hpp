#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gdpq/minlp.hpp"
#include "gdpq/model.hpp"
#include "gdpq/rng.hpp"

namespace gdpq {

/// Lifted sample for perspective checks; at y = 0 the reformulation domain
/// forces v = 0.
struct PerspectivePoint {
  std::vector<double> v;
  double y = 0.0;
};

/// Closure of the perspective function: y h(v/y) for y > 0, 0 at (0, 0).
inline double eval_perspective_closure(const Expr& h,
                                       const PerspectivePoint& p) {
  if (p.y < 0.0 || p.y > 1.0)
    throw std::domain_error("perspective point needs y in [0, 1]");
  if (p.y == 0.0) {
    for (double vi : p.v)
      if (vi != 0.0)
        throw std::domain_error(
            "closure at y = 0 is defined only at v = 0 inside the "
            "reformulation domain");
    return 0.0;
  }
  std::vector<double> scaled(p.v.size());
  for (std::size_t i = 0; i < p.v.size(); ++i) scaled[i] = p.v[i] / p.y;
  return p.y * eval_expr(h, scaled);
}

struct Disagreement {
  std::vector<double> point;  // sample layout depends on the check
  double lhs_inner = 0.0;
  double lhs_outer = 0.0;
};

struct MembershipReport {
  long samples_total = 0;
  long agree = 0;
  std::vector<Disagreement> disagree;
  double max_abs_gap = 0.0;

  bool clean() const { return disagree.empty(); }
};

namespace detail {

/// (v, y) sampling law: y = 0 occasionally (with v = 0), 5% pinned to the
/// small-y strata {1e-6, 1e-4, 1e-2} where the eps-approximation degrades,
/// the rest uniform on (0, 1]; v uniform in [x^l y, x^u y] given y.
inline PerspectivePoint sample_perspective(RandomStream& rng,
                                           std::span<const Interval> bounds,
                                           long index) {
  PerspectivePoint p;
  p.v.assign(bounds.size(), 0.0);
  if (index % 50 == 49) {
    p.y = 0.0;
    return p;
  }
  if (index % 20 == 19) {
    static constexpr double kStrata[3] = {1e-6, 1e-4, 1e-2};
    p.y = kStrata[(index / 20) % 3];
  } else {
    p.y = 1.0 - rng.uniform01();  // uniform on (0, 1]
  }
  for (std::size_t i = 0; i < bounds.size(); ++i)
    p.v[i] = rng.uniform(bounds[i].lo * p.y, bounds[i].hi * p.y);
  return p;
}

inline void quadratic_parts(const QuadraticExpr& h, std::span<const double> v,
                            double& quad, double& lin) {
  quad = 0.0;
  lin = 0.0;
  for (const auto& t : h.quad_terms()) {
    const double p = v[t.i] * v[t.j];
    quad += (t.i == t.j) ? t.coeff * p : 2.0 * t.coeff * p;
  }
  for (const auto& t : h.linear_terms()) lin += t.coeff * v[t.var];
}

}  // namespace detail

/// S2 row of a quadratic body: v^T Q v + (c^T v) y + d y^2.
inline double eval_s2_row(const QuadraticExpr& h, const PerspectivePoint& p) {
  double quad = 0.0, lin = 0.0;
  detail::quadratic_parts(h, p.v, quad, lin);
  return quad + lin * p.y + h.constant() * p.y * p.y;
}

/// Degree-preserving row of a polynomial body: sum_k p_k(v) y^(d-k).
inline double eval_sd_row(const PolynomialExpr& h, const PerspectivePoint& p) {
  const int d = h.degree();
  double acc = 0.0;
  for (const auto& t : h.terms()) {
    double term = t.coeff;
    for (const auto& [var, e] : t.mono)
      for (int r = 0; r < e; ++r) term *= p.v[var];
    const int rest = d - monomial_degree(t.mono);
    for (int r = 0; r < rest; ++r) term *= p.y;
    acc += term;
  }
  return acc;
}

/// Eps-approximated row of a quadratic body (the simplified rational form):
/// v^T Q v / ((1-eps) y + eps) + c^T v + d y.
inline double eval_eps_row(const QuadraticExpr& h, const PerspectivePoint& p,
                           double eps) {
  double quad = 0.0, lin = 0.0;
  detail::quadratic_parts(h, p.v, quad, lin);
  return quad / ((1.0 - eps) * p.y + eps) + lin + h.constant() * p.y;
}

/// Samples the lifted box and compares membership in the closure row (S1)
/// against the algebraic row (S2 for quadratics, S_d for polynomials).
/// Samples within `band` of either boundary are excluded from disagreement
/// counting; the equivalence is a statement about sets, and the band removes
/// floating-point flip-flops on the shared boundary.
inline MembershipReport check_s1_s2(const Expr& h,
                                    std::span<const Interval> bounds,
                                    long n_samples, std::uint64_t seed,
                                    double band = 1e-9) {
  for (const auto& b : bounds)
    if (!b.finite()) throw std::domain_error("finite bounds required");
  RandomStream rng(seed);
  MembershipReport report;
  for (long s = 0; s < n_samples; ++s) {
    const PerspectivePoint p = detail::sample_perspective(rng, bounds, s);
    const double s1 = eval_perspective_closure(h, p);
    const double s2 = (std::holds_alternative<QuadraticExpr>(h))
                          ? eval_s2_row(std::get<QuadraticExpr>(h), p)
                          : eval_sd_row(std::get<PolynomialExpr>(h), p);
    ++report.samples_total;
    const bool in1 = s1 <= 0.0;
    const bool in2 = s2 <= 0.0;
    if (in1 != in2 && std::abs(s1) > band && std::abs(s2) > band) {
      Disagreement d;
      d.point = p.v;
      d.point.push_back(p.y);
      d.lhs_inner = s1;
      d.lhs_outer = s2;
      report.disagree.push_back(std::move(d));
      report.max_abs_gap =
          std::max(report.max_abs_gap, std::min(std::abs(s1), std::abs(s2)));
    } else {
      ++report.agree;
    }
  }
  return report;
}

using RowFn = std::function<double(std::span<const double>)>;
using PointSampler = std::function<void(RandomStream&, std::vector<double>&)>;

/// Samples points and reports any inner-feasible point that is not
/// outer-feasible. Vacuously agreeing samples (inner-infeasible) count as
/// agreement. Inner membership is strict (<= inner_tol, default 0) while the
/// outer set is checked at the feasibility tolerance: a slack inner tolerance
/// would admit points just outside the inner set whose outer-row values blow
/// up near y = 0, which is boundary noise rather than a containment failure.
inline MembershipReport check_containment(const std::vector<RowFn>& inner,
                                          const std::vector<RowFn>& outer,
                                          const PointSampler& sampler,
                                          std::size_t point_dim, long n_samples,
                                          std::uint64_t seed,
                                          double inner_tol = 0.0,
                                          double outer_tol = 1e-8) {
  RandomStream rng(seed);
  MembershipReport report;
  std::vector<double> x(point_dim, 0.0);
  for (long s = 0; s < n_samples; ++s) {
    sampler(rng, x);
    ++report.samples_total;
    double inner_worst = -1e300;
    for (const auto& row : inner) inner_worst = std::max(inner_worst, row(x));
    if (inner_worst > inner_tol) {
      ++report.agree;  // not an inner point; nothing to check
      continue;
    }
    double outer_worst = -1e300;
    for (const auto& row : outer) outer_worst = std::max(outer_worst, row(x));
    if (outer_worst > outer_tol) {
      Disagreement d;
      d.point = x;
      d.lhs_inner = inner_worst;
      d.lhs_outer = outer_worst;
      report.disagree.push_back(std::move(d));
      report.max_abs_gap = std::max(report.max_abs_gap, outer_worst);
    } else {
      ++report.agree;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Fixed-binary equivalence

/// Canonical MINLP lift of a GDP point under a binary assignment:
/// y from the assignment, v_active = x, v_inactive = 0, z = v y.
inline std::vector<double> canonical_lift(const MinlpModel& minlp,
                                          const std::vector<int>& assignment,
                                          std::span<const double> x) {
  std::vector<double> point(minlp.num_vars(), 0.0);
  for (int v = 0; v < minlp.num_vars(); ++v) {
    const auto& role = minlp.variables[v].role;
    switch (role.kind) {
      case VarRole::Kind::Original:
        point[v] = x[role.orig_var];
        break;
      case VarRole::Kind::Indicator:
        point[v] = (assignment[role.disjunction] == role.disjunct) ? 1.0 : 0.0;
        break;
      case VarRole::Kind::Disaggregated:
      case VarRole::Kind::Glover:
        point[v] = (assignment[role.disjunction] == role.disjunct)
                       ? x[role.orig_var]
                       : 0.0;
        break;
      case VarRole::Kind::AuxNorm:
        point[v] = 0.0;
        break;
    }
  }
  return point;
}

/// Checks that a binary assignment satisfies the model's logic clauses
/// (the XOR condition holds by construction of the assignment encoding).
inline bool assignment_consistent(const GdpModel& gdp,
                                  const std::vector<int>& assignment) {
  std::map<std::string, bool> truth;
  for (std::size_t k = 0; k < gdp.disjunctions.size(); ++k)
    for (std::size_t i = 0; i < gdp.disjunctions[k].disjuncts.size(); ++i)
      truth[gdp.disjunctions[k].disjuncts[i].indicator] =
          assignment[k] == static_cast<int>(i);
  for (const auto& cl : gdp.logic)
    if (!clause_satisfied(cl, truth)) return false;
  return true;
}

/// GDP feasibility at x under an assignment: global constraints plus the
/// active disjuncts' constraints, each within tol.
inline double gdp_assignment_violation(const GdpModel& gdp,
                                       const std::vector<int>& assignment,
                                       std::span<const double> x) {
  double worst = -1e300;
  for (const auto& c : gdp.global_constraints)
    worst = std::max(worst, eval_expr(c.body, x));
  for (std::size_t k = 0; k < gdp.disjunctions.size(); ++k) {
    const auto& active = gdp.disjunctions[k].disjuncts[assignment[k]];
    for (const auto& c : active.constraints)
      worst = std::max(worst, eval_expr(c.body, x));
  }
  return worst;
}

/// Samples x in the box and compares GDP feasibility under the active
/// disjuncts against MINLP feasibility at the canonical lift.
inline MembershipReport fixed_binary_check(const GdpModel& gdp,
                                           const MinlpModel& minlp,
                                           const std::vector<int>& assignment,
                                           long n_samples, std::uint64_t seed,
                                           double tol = 1e-8) {
  if (assignment.size() != gdp.disjunctions.size())
    throw std::invalid_argument(
        "INCONSISTENT_ASSIGNMENT: one disjunct index per disjunction required");
  for (std::size_t k = 0; k < assignment.size(); ++k)
    if (assignment[k] < 0 ||
        assignment[k] >= static_cast<int>(gdp.disjunctions[k].disjuncts.size()))
      throw std::invalid_argument("INCONSISTENT_ASSIGNMENT: index out of range");
  if (!assignment_consistent(gdp, assignment))
    throw std::invalid_argument(
        "INCONSISTENT_ASSIGNMENT: assignment violates a logic clause");

  RandomStream rng(seed);
  MembershipReport report;
  const auto box = gdp.box();
  std::vector<double> x(gdp.num_vars());
  for (long s = 0; s < n_samples; ++s) {
    for (int i = 0; i < gdp.num_vars(); ++i)
      x[i] = rng.uniform(box[i].lo, box[i].hi);
    const double gdp_worst = gdp_assignment_violation(gdp, assignment, x);
    const auto lifted = canonical_lift(minlp, assignment, x);
    const double minlp_worst = minlp.max_violation(lifted);
    ++report.samples_total;
    const bool gdp_ok = gdp_worst <= tol;
    const bool minlp_ok = minlp_worst <= tol;
    if (gdp_ok != minlp_ok && std::abs(gdp_worst - tol) > 1e-10) {
      Disagreement d;
      d.point.assign(x.begin(), x.end());
      d.lhs_inner = gdp_worst;
      d.lhs_outer = minlp_worst;
      report.disagree.push_back(std::move(d));
      report.max_abs_gap =
          std::max(report.max_abs_gap, std::abs(minlp_worst - gdp_worst));
    } else {
      ++report.agree;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Eps-enlargement witness

/// Searches along the dominant diagonal direction for a lifted point that
/// satisfies the eps-approximated row but violates the exact S2 row by at
/// least min_gap. The comparison is between the two rows themselves, so the
/// scan overshoots the lifted box slightly: when the S2 boundary lies exactly
/// on the box edge (as for x^2 - 1 on [-1, 1]) the enlargement shows up just
/// outside it. Returns nothing when the scan finds no such point.
inline std::optional<PerspectivePoint> find_eps_witness(
    const QuadraticExpr& h, std::span<const Interval> bounds, double eps,
    double y = 0.01, double min_gap = 1e-7) {
  int dir = -1;
  double best_diag = 0.0;
  for (const auto& t : h.quad_terms())
    if (t.i == t.j && t.coeff > best_diag) {
      best_diag = t.coeff;
      dir = t.i;
    }
  if (dir < 0) return std::nullopt;
  PerspectivePoint p;
  p.v.assign(bounds.size(), 0.0);
  p.y = y;
  const double lo = 1.05 * bounds[dir].lo * y;
  const double hi = 1.05 * bounds[dir].hi * y;
  constexpr int kSteps = 200000;
  for (int s = 0; s <= kSteps; ++s) {
    p.v[dir] = lo + (hi - lo) * s / kSteps;
    const double s2 = eval_s2_row(h, p);
    const double se = eval_eps_row(h, p, eps);
    if (se <= 0.0 && s2 >= min_gap) return p;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Desk-scale incumbent finder

struct BruteForceBudget {
  int restarts = 3;
  int iters = 12000;  // per penalty round; stall detection exits early
  double step = 1.0;
  std::uint64_t seed = 0;
};

struct BruteForceResult {
  enum class Status { HeuristicFeasible, ExhaustedInfeasible };
  Status status = Status::ExhaustedInfeasible;
  double objective = 0.0;
  std::vector<double> point;
  std::vector<int> assignment;  // disjunct index per disjunction
  int restarts_used = 0;
};

namespace detail {

struct PenaltyProblem {
  const MinlpModel* m = nullptr;
  double weight = 1.0;
  bool objective_on = true;

  double penalty(std::span<const double> x) const {
    double acc = 0.0;
    for (const auto& row : m->linear_rows) {
      const double v = row.violation(x);
      if (v > 0.0) acc += v * v;
    }
    for (const auto& row : m->nonlinear_rows) {
      const double v = row_value(row, x);
      if (v > 0.0) acc += v * v;
    }
    return acc;
  }

  double value(std::span<const double> x) const {
    double acc = objective_on ? m->objective.eval_unchecked(x) : 0.0;
    return acc + weight * penalty(x);
  }

  void gradient(std::span<const double> x, std::span<double> g) const {
    std::fill(g.begin(), g.end(), 0.0);
    if (objective_on) m->objective.add_gradient(x, 1.0, g);
    for (const auto& row : m->linear_rows) {
      double v = row.lhs(x);
      double scale = 0.0;
      switch (row.sense) {
        case Sense::LE: scale = (v > row.rhs) ? 2.0 * (v - row.rhs) : 0.0; break;
        case Sense::GE: scale = (v < row.rhs) ? 2.0 * (v - row.rhs) : 0.0; break;
        case Sense::EQ: scale = 2.0 * (v - row.rhs); break;
      }
      if (scale != 0.0)
        for (const auto& t : row.terms) g[t.var] += weight * scale * t.coeff;
    }
    for (const auto& row : m->nonlinear_rows) {
      const double v = row_value(row, x);
      if (v > 0.0) row_add_gradient(row, x, weight * 2.0 * v, g);
    }
  }
};

/// Projected gradient descent with Barzilai-Borwein steps and a nonmonotone
/// (Grippo-Lucidi) Armijo safeguard; monotone backtracking would defeat the
/// BB step on ill-conditioned penalty surfaces.
inline void projected_bb_descent(const PenaltyProblem& prob,
                                 std::span<const double> lower,
                                 std::span<const double> upper,
                                 std::vector<double>& x, int iters,
                                 double step0) {
  const std::size_t n = x.size();
  auto project = [&](std::vector<double>& p) {
    for (std::size_t i = 0; i < n; ++i)
      p[i] = std::clamp(p[i], lower[i], upper[i]);
  };
  project(x);
  std::vector<double> g(n), g_prev(n), x_prev(n), trial(n);
  prob.gradient(x, g);
  double fx = prob.value(x);
  constexpr int kMemory = 10;
  std::vector<double> recent(kMemory, fx);
  int recent_pos = 0;
  double gnorm = 0.0;
  for (double gi : g) gnorm = std::max(gnorm, std::abs(gi));
  double alpha = step0 / std::max(1.0, gnorm);
  for (int it = 0; it < iters; ++it) {
    if (it > 0) {
      double ss = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double s = x[i] - x_prev[i];
        ss += s * s;
        sy += s * (g[i] - g_prev[i]);
      }
      alpha = (sy > 1e-18) ? ss / sy : alpha * 2.0;
      alpha = std::clamp(alpha, 1e-14, 1e12);
    }
    const double f_ref = *std::max_element(recent.begin(), recent.end());
    double a = alpha;
    bool moved = false;
    for (int bt = 0; bt < 40; ++bt) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] - a * g[i];
      project(trial);
      double decrease = 0.0;
      for (std::size_t i = 0; i < n; ++i) decrease += g[i] * (x[i] - trial[i]);
      const double ft = prob.value(trial);
      if (ft <= f_ref - 1e-4 * decrease + 1e-16) {
        x_prev = x;
        g_prev = g;
        x = trial;
        fx = ft;
        prob.gradient(x, g);
        moved = true;
        break;
      }
      a *= 0.5;
    }
    if (!moved) break;
    recent[recent_pos] = fx;
    recent_pos = (recent_pos + 1) % kMemory;
    double shift = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      shift = std::max(shift, std::abs(x[i] - x_prev[i]));
    if (shift < 1e-13) break;
  }
}

}  // namespace detail

/// Enumerates consistent binary assignments (<= 20 binaries) and runs a
/// multistart penalty descent on the continuous variables per assignment.
/// A heuristic upper-bound oracle: the incumbent is feasible within 1e-8 by
/// independent re-evaluation, with no global-optimality claim for
/// non-convex rows.
inline BruteForceResult brute_force_solve(const MinlpModel& m,
                                          const BruteForceBudget& budget = {}) {
  constexpr double kFeasTol = 1e-8;
  if (m.num_binaries() > 20)
    throw std::invalid_argument(
        "enumeration bound exceeded: more than 20 binaries");
  const int n_disj = m.num_disjunctions();
  std::vector<int> sizes(n_disj);
  for (int k = 0; k < n_disj; ++k) {
    sizes[k] = m.num_disjuncts(k);
    if (sizes[k] == 0) throw std::invalid_argument("disjunction without binaries");
  }

  std::vector<double> lower(m.num_vars()), upper(m.num_vars());
  for (int v = 0; v < m.num_vars(); ++v) {
    lower[v] = m.variables[v].lower;
    upper[v] = m.variables[v].upper;
    if (!std::isfinite(lower[v]) || !std::isfinite(upper[v]))
      throw std::domain_error("brute force requires finite variable bounds");
  }

  RandomStream rng(budget.seed);
  BruteForceResult best;
  best.status = BruteForceResult::Status::ExhaustedInfeasible;
  double best_obj = 1e300;

  std::vector<int> assign(n_disj, 0);
  bool done = n_disj == 0 && m.num_binaries() > 0;
  std::vector<double> x(m.num_vars());
  while (!done) {
    // Logic rows are over binaries only; screen the assignment first.
    std::vector<double> fixed_lower = lower, fixed_upper = upper;
    for (int v = 0; v < m.num_vars(); ++v) {
      const auto& role = m.variables[v].role;
      if (role.kind == VarRole::Kind::Indicator) {
        const double val = (assign[role.disjunction] == role.disjunct) ? 1.0 : 0.0;
        fixed_lower[v] = fixed_upper[v] = val;
      }
    }
    bool logic_ok = true;
    {
      std::vector<double> y(m.num_vars(), 0.0);
      for (int v = 0; v < m.num_vars(); ++v) y[v] = fixed_lower[v];
      for (const auto& row : m.linear_rows) {
        if (row.origin != RowOrigin::Logic && row.origin != RowOrigin::Xor)
          continue;
        if (row.violation(y) > 1e-9) {
          logic_ok = false;
          break;
        }
      }
    }
    if (logic_ok) {
      for (int r = 0; r < budget.restarts; ++r) {
        ++best.restarts_used;
        for (int v = 0; v < m.num_vars(); ++v) {
          if (fixed_lower[v] == fixed_upper[v]) {
            x[v] = fixed_lower[v];
          } else if (r == 0) {
            x[v] = 0.5 * (fixed_lower[v] + fixed_upper[v]);
          } else {
            x[v] = rng.uniform(fixed_lower[v], fixed_upper[v]);
          }
        }
        detail::PenaltyProblem prob;
        prob.m = &m;
        for (int round = 0; round < 5; ++round) {
          prob.weight = 1e3 * std::pow(10.0, round);
          prob.objective_on = true;
          detail::projected_bb_descent(prob, fixed_lower, fixed_upper, x,
                                       budget.iters, budget.step);
        }
        // Feasibility polish: descend on the violation alone; the objective
        // drift is bounded by the (already tiny) remaining violation.
        prob.weight = 1.0;
        prob.objective_on = false;
        detail::projected_bb_descent(prob, fixed_lower, fixed_upper, x,
                                     budget.iters, budget.step);
        if (m.max_violation(x) <= kFeasTol) {
          const double obj = m.objective.eval_unchecked(x);
          if (obj < best_obj) {
            best_obj = obj;
            best.objective = obj;
            best.point = x;
            best.assignment = assign;
            best.status = BruteForceResult::Status::HeuristicFeasible;
          }
        }
      }
    }
    // Odometer step over per-disjunction choices.
    done = true;
    for (int k = 0; k < n_disj; ++k) {
      if (++assign[k] < sizes[k]) {
        done = false;
        break;
      }
      assign[k] = 0;
    }
    if (n_disj == 0) break;
  }
  return best;
}

}  // namespace gdpq
