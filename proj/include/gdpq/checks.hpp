#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "gdpq/gen.hpp"
#include "gdpq/oracle.hpp"
#include "gdpq/reform.hpp"

namespace gdpq {

struct VerifyOutcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    ok = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
};

enum class SpectrumKind { Psd, Indefinite };

namespace checks_detail {

/// Dense random quadratic with the spectrum adjusted: PSD via the diagonal
/// shift, indefinite by centering the spectrum so it straddles zero.
inline QuadraticExpr make_spectrum_quadratic(RandomStream& rng, int n,
                                             SpectrumKind kind) {
  QuadraticExpr h = detail::draw_dense_quadratic(rng, n);
  std::vector<int> vars(n);
  for (int i = 0; i < n; ++i) vars[i] = i;
  const auto eig = symmetric_eigenvalues(h.dense_matrix(vars), n);
  if (kind == SpectrumKind::Psd) {
    if (eig.front() < 0.0) {
      const double shift = -eig.front() + 1e-9;
      for (int i = 0; i < n; ++i) h.add_quadratic(i, i, shift);
    }
  } else {
    // Center the spectrum: lambda_min < 0 < lambda_max afterwards.
    const double mid = 0.5 * (eig.front() + eig.back());
    if (eig.front() - mid >= 0.0 || eig.back() - mid <= 0.0) {
      // Degenerate (all eigenvalues equal); break it explicitly.
      h.add_quadratic(0, 0, -2.0 * std::abs(eig.front()) - 1.0);
    } else {
      for (int i = 0; i < n; ++i) h.add_quadratic(i, i, -mid);
    }
  }
  return h;
}

inline std::vector<Interval> default_box(int n) {
  return std::vector<Interval>(n, Interval{-10.0, 10.0});
}

}  // namespace checks_detail

/// S1 = S2 on samples for random quadratics, half PSD and half indefinite.
inline VerifyOutcome verify_prop1(int count, long samples, std::uint64_t seed,
                                  int dim = 4) {
  VerifyOutcome out;
  RandomStream rng(seed);
  const auto box = checks_detail::default_box(dim);
  for (int rep = 0; rep < count; ++rep) {
    const SpectrumKind kind =
        (rep < count / 2) ? SpectrumKind::Psd : SpectrumKind::Indefinite;
    QuadraticExpr h = checks_detail::make_spectrum_quadratic(rng, dim, kind);
    const auto report = check_s1_s2(Expr{h}, box, samples, seed + 101 * rep + 1);
    if (!report.clean()) {
      std::ostringstream os;
      os << "quadratic " << rep << " ("
         << (kind == SpectrumKind::Psd ? "psd" : "indefinite") << "): "
         << report.disagree.size() << " disagreements, max gap "
         << report.max_abs_gap;
      out.fail(os.str());
    }
  }
  return out;
}

namespace checks_detail {

inline PolynomialExpr random_polynomial(RandomStream& rng, int n, int degree,
                                        int terms) {
  PolynomialExpr h(n);
  for (int t = 0; t < terms; ++t) {
    Monomial mono;
    int remaining = 1 + static_cast<int>(rng.below(degree));
    while (remaining > 0) {
      const int var = static_cast<int>(rng.below(n));
      const int e = 1 + static_cast<int>(rng.below(remaining));
      mono.emplace_back(var, e);
      remaining -= e;
    }
    h.add_term(mono, rng.uniform(-1.0, 1.0));
  }
  h.add_term({{static_cast<int>(rng.below(n)), degree}},
             rng.uniform(0.1, 1.0));  // pin the top degree
  h.add_constant(rng.uniform(-1.0, 1.0));
  return h;
}

}  // namespace checks_detail

/// S_d^(1) = S_d^(2) on samples for random cubics and quartics, plus the
/// degree-2 coefficient identity between the polynomial and quadratic hull
/// paths.
inline VerifyOutcome verify_prop2(int count_per_degree, long samples,
                                  std::uint64_t seed, int dim = 3) {
  VerifyOutcome out;
  RandomStream rng(seed);
  const auto box = checks_detail::default_box(dim);
  for (int degree : {3, 4}) {
    for (int rep = 0; rep < count_per_degree; ++rep) {
      const PolynomialExpr h =
          checks_detail::random_polynomial(rng, dim, degree, 8);
      const auto report =
          check_s1_s2(Expr{h}, box, samples, seed + 977 * rep + degree);
      if (!report.clean()) {
        std::ostringstream os;
        os << "degree-" << degree << " polynomial " << rep << ": "
           << report.disagree.size() << " disagreements";
        out.fail(os.str());
      }
    }
  }

  // Degree-2 bodies through the polynomial path must match hull-exact
  // coefficient by coefficient after canonical ordering.
  for (int rep = 0; rep < count_per_degree; ++rep) {
    GdpModel m;
    for (int i = 0; i < dim; ++i)
      m.add_variable("x" + std::to_string(i), -10.0, 10.0);
    m.objective = QuadraticExpr(dim);
    QuadraticExpr h = detail::draw_dense_quadratic(rng, dim);
    Disjunction dj;
    dj.id = "K0";
    dj.disjuncts.push_back(
        {"Yq_" + std::to_string(rep) + "_on", {{Expr{h}, ConstraintOrigin::User}}});
    dj.disjuncts.push_back({"Yq_" + std::to_string(rep) + "_off", {}});
    m.disjunctions.push_back(std::move(dj));
    auto [exact, re] = reformulate_hull_exact(m, {});
    auto [poly, rp] = reformulate_hull_poly(m, {});
    const QuadRow* row_e = nullptr;
    const QuadRow* row_p = nullptr;
    for (const auto& row : exact.nonlinear_rows)
      if (const auto* q = std::get_if<QuadRow>(&row)) row_e = q;
    for (const auto& row : poly.nonlinear_rows)
      if (const auto* q = std::get_if<QuadRow>(&row)) row_p = q;
    if (row_e == nullptr || row_p == nullptr) {
      out.fail("degree-2 identity: missing rows");
      continue;
    }
    QuadraticExpr lhs = row_e->expr;
    QuadraticExpr rhs = row_p->expr;
    lhs.prune();
    rhs.prune();
    if (!(lhs.quad_terms() == rhs.quad_terms() &&
          lhs.linear_terms() == rhs.linear_terms() &&
          lhs.constant() == rhs.constant()))
      out.fail("degree-2 rows differ between hull-poly and hull-exact (rep " +
               std::to_string(rep) + ")");
  }
  return out;
}

/// Binary-fixing equivalence across all five transforms, all consistent
/// assignments of small random instances.
inline VerifyOutcome verify_binary_fix(int instances, long samples,
                                       std::uint64_t seed, int n_dims = 3,
                                       int n_disjunctions = 3,
                                       int disjuncts_per = 3,
                                       int constraints_per = 2) {
  VerifyOutcome out;
  for (int inst = 0; inst < instances; ++inst) {
    RandomGdpParams p;
    p.n_dims = n_dims;
    p.n_disjunctions = n_disjunctions;
    p.disjuncts_per = disjuncts_per;
    p.constraints_per = constraints_per;
    p.n_feasible_points = 3;
    p.convex = inst % 2 == 0;
    p.seed = seed + 7919 * inst;
    const GdpModel gdp = gen_random(p);
    for (Method method : {Method::BigM, Method::HullEps, Method::HullExact,
                          Method::HullPoly, Method::BinaryMult}) {
      ReformConfig cfg;
      cfg.method = method;
      auto [minlp, report] = reformulate(gdp, cfg);
      std::vector<int> assign(p.n_disjunctions, 0);
      for (;;) {
        const auto rep = fixed_binary_check(gdp, minlp, assign, samples,
                                            seed + 31 * inst);
        if (!rep.clean()) {
          std::ostringstream os;
          os << "instance " << inst << " method " << method_name(method)
             << " assignment";
          for (int a : assign) os << " " << a;
          os << ": " << rep.disagree.size() << " disagreements";
          out.fail(os.str());
        }
        int k = 0;
        for (; k < p.n_disjunctions; ++k) {
          if (++assign[k] < p.disjuncts_per) break;
          assign[k] = 0;
        }
        if (k == p.n_disjunctions) break;
      }
    }
  }
  return out;
}

/// Sampled S2 subset-of S_eps over every disjunct constraint of convex
/// random instances, plus the constructed enlargement witness (eps-feasible,
/// S2-infeasible by at least 1e-7).
inline VerifyOutcome verify_eps_enlargement(int instances, long samples,
                                            std::uint64_t seed,
                                            double eps = 1e-4) {
  VerifyOutcome out;
  const int dim = 3;
  for (int inst = 0; inst < instances; ++inst) {
    RandomGdpParams params;
    params.n_dims = dim;
    params.n_disjunctions = 3;
    params.disjuncts_per = 3;
    params.constraints_per = 2;
    params.convex = true;
    params.n_feasible_points = 3;
    params.seed = seed + 5381 * inst;
    const GdpModel gdp = gen_random(params);
    const auto box = gdp.box();
    long violations = 0;
    int constraint_index = 0;
    for (const auto& dj : gdp.disjunctions) {
      for (const auto& d : dj.disjuncts) {
        for (const auto& c : d.constraints) {
          const auto& h = std::get<QuadraticExpr>(c.body);
          PointSampler sampler = [&](RandomStream& r, std::vector<double>& x) {
            const double y = 1.0 - r.uniform01();
            x[dim] = y;
            for (int i = 0; i < dim; ++i)
              x[i] = r.uniform(box[i].lo * y, box[i].hi * y);
          };
          RowFn s2 = [&](std::span<const double> x) {
            PerspectivePoint p;
            p.v.assign(x.begin(), x.begin() + dim);
            p.y = x[dim];
            return eval_s2_row(h, p);
          };
          RowFn eps_row = [&](std::span<const double> x) {
            PerspectivePoint p;
            p.v.assign(x.begin(), x.begin() + dim);
            p.y = x[dim];
            return eval_eps_row(h, p, eps);
          };
          const auto rep =
              check_containment({s2}, {eps_row}, sampler, dim + 1, samples,
                                seed + 13 * inst + constraint_index);
          violations += static_cast<long>(rep.disagree.size());
          ++constraint_index;
        }
      }
    }
    if (violations > 0)
      out.fail("instance " + std::to_string(inst) + ": " +
               std::to_string(violations) + " S_eps violations");
  }

  // The documented witness for h = x^2 - 1 on [-1, 1].
  QuadraticExpr unit(1);
  unit.add_quadratic(0, 0, 1.0);
  unit.add_constant(-1.0);
  PerspectivePoint w;
  w.v = {0.01002};
  w.y = 0.01;
  if (!(eval_eps_row(unit, w, eps) <= 0.0))
    out.fail("witness is not eps-feasible");
  if (!(eval_s2_row(unit, w) >= 1e-7))
    out.fail("witness does not violate the exact row by 1e-7");
  return out;
}

/// Every hull-exact-feasible sample (via its proportional (v, y) witness) is
/// Big-M feasible at the same fractional y (convex instances, interval M).
inline VerifyOutcome verify_hull_in_bigm(int instances, long samples,
                                         std::uint64_t seed) {
  VerifyOutcome out;
  for (int inst = 0; inst < instances; ++inst) {
    RandomGdpParams p;
    p.n_dims = 3;
    p.n_disjunctions = 2;
    p.disjuncts_per = 3;
    p.constraints_per = 2;
    p.convex = true;
    p.n_feasible_points = 3;
    p.seed = seed + 773 * inst;
    const GdpModel gdp = gen_random(p);
    auto [hull, rh] = reformulate_hull_exact(gdp, {});
    auto [bigm, rb] = reformulate_bigm(gdp, {});

    RandomStream rng(seed + 31 * inst + 7);
    const auto box = gdp.box();
    std::vector<double> x(gdp.num_vars());
    std::vector<double> hull_pt(hull.num_vars(), 0.0);
    std::vector<double> bigm_pt(bigm.num_vars(), 0.0);
    long checked = 0;
    for (long s = 0; s < samples; ++s) {
      for (int i = 0; i < gdp.num_vars(); ++i)
        x[i] = rng.uniform(box[i].lo, box[i].hi);
      // Fractional y per disjunction from the simplex interior.
      std::vector<std::vector<double>> ys;
      for (const auto& dj : gdp.disjunctions) {
        std::vector<double> y(dj.disjuncts.size());
        double total = 0.0;
        for (auto& yi : y) {
          yi = -std::log(1.0 - rng.uniform01());
          total += yi;
        }
        for (auto& yi : y) yi /= total;
        ys.push_back(std::move(y));
      }
      // Proportional hull witness: v_ik = y_ik x. Witness acceptance is
      // near-strict (1e-12 covers linking-row round-off); a loose tolerance
      // would admit near-boundary points whose image under Big-M drifts.
      for (int i = 0; i < gdp.num_vars(); ++i) {
        hull_pt[i] = x[i];
        bigm_pt[i] = x[i];
      }
      for (int v = 0; v < hull.num_vars(); ++v) {
        const auto& role = hull.variables[v].role;
        if (role.kind == VarRole::Kind::Indicator)
          hull_pt[v] = ys[role.disjunction][role.disjunct];
        if (role.kind == VarRole::Kind::Disaggregated)
          hull_pt[v] = ys[role.disjunction][role.disjunct] * x[role.orig_var];
      }
      if (hull.max_violation(hull_pt) > 1e-12) continue;  // not a hull witness
      ++checked;
      for (int v = 0; v < bigm.num_vars(); ++v) {
        const auto& role = bigm.variables[v].role;
        if (role.kind == VarRole::Kind::Indicator)
          bigm_pt[v] = ys[role.disjunction][role.disjunct];
      }
      if (bigm.max_violation(bigm_pt) > 1e-8) {
        out.fail("instance " + std::to_string(inst) +
                 ": hull witness escaped the Big-M relaxation");
        break;
      }
    }
    (void)checked;
  }
  return out;
}

}  // namespace gdpq
