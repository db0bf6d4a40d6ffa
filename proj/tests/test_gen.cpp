#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cmath>
#include <vector>

#include "gdpq/gen.hpp"
#include "gdpq/numeric.hpp"
#include "gdpq/oracle.hpp"
#include "gdpq/reform.hpp"

using namespace gdpq;

TEST_CASE("random generator is deterministic per seed") {
  RandomGdpParams p;
  p.n_dims = 3;
  p.n_disjunctions = 3;
  p.disjuncts_per = 2;
  p.constraints_per = 2;
  p.seed = 12345;
  const GdpModel a = gen_random(p);
  const GdpModel b = gen_random(p);
  CHECK(a == b);
  p.seed = 12346;
  CHECK_FALSE(gen_random(p) == a);
}

TEST_CASE("convex instances have PSD constraint matrices") {
  RandomGdpParams p;
  p.n_dims = 4;
  p.n_disjunctions = 2;
  p.disjuncts_per = 2;
  p.constraints_per = 2;
  p.convex = true;
  p.seed = 9;
  const GdpModel m = gen_random(p);
  std::vector<int> vars(p.n_dims);
  for (int i = 0; i < p.n_dims; ++i) vars[i] = i;
  for (const auto& dj : m.disjunctions)
    for (const auto& d : dj.disjuncts)
      for (const auto& c : d.constraints) {
        const auto& q = std::get<QuadraticExpr>(c.body);
        const double lam =
            min_symmetric_eigenvalue(q.dense_matrix(vars), vars.size());
        CHECK(lam >= -1e-12);
      }
  const double obj_lam = min_symmetric_eigenvalue(
      m.objective.dense_matrix(vars), vars.size());
  CHECK(obj_lam >= -1e-12);
  CHECK(m.metadata.at("objective_psd_shift") == "applied");
}

TEST_CASE("every injected point is feasible for its designated disjuncts") {
  RandomGdpParams p;
  p.n_dims = 3;
  p.n_disjunctions = 3;
  p.disjuncts_per = 3;
  p.constraints_per = 2;
  p.n_feasible_points = 5;
  p.seed = 2024;
  const GdpModel m = gen_random(p);

  const auto pts = nlohmann::json::parse(m.metadata.at("injected_points"));
  const auto des = nlohmann::json::parse(m.metadata.at("designated_disjuncts"));
  REQUIRE(pts.size() == 5);
  REQUIRE(des.size() == 5);
  for (std::size_t q = 0; q < pts.size(); ++q) {
    std::vector<double> x = pts[q].get<std::vector<double>>();
    std::vector<int> assignment = des[q].get<std::vector<int>>();
    // The designated assignment accepts the point; in particular every
    // disjunction has at least one feasible disjunct at x.
    CHECK(gdp_assignment_violation(m, assignment, x) <= 0.0);
  }
}

TEST_CASE("parameter warnings flag departures from the benchmark ranges") {
  RandomGdpParams p;
  p.n_dims = 3;
  p.n_disjunctions = 3;
  p.disjuncts_per = 10;
  p.constraints_per = 10;
  CHECK(param_warnings(p).empty());
  p.disjuncts_per = 2;
  p.n_dims = 12;
  CHECK(param_warnings(p).size() == 2);
}

TEST_CASE("k-means structure: disjunctions, symmetry rows, block pattern") {
  KmeansParams p;
  p.n_points = 10;
  p.n_dims = 2;
  p.clusters = 3;
  p.seed = 77;
  const GdpModel m = gen_kmeans(p);
  CHECK(validate(m).empty());
  CHECK(m.disjunctions.size() == 10);
  for (const auto& dj : m.disjunctions) CHECK(dj.disjuncts.size() == 3);
  CHECK(m.global_constraints.size() == 2);  // c_{k-1,1} <= c_{k,1}

  const auto pts = nlohmann::json::parse(m.metadata.at("points"))
                       .get<std::vector<std::vector<double>>>();
  for (std::size_t i = 0; i < m.disjunctions.size(); ++i) {
    for (std::size_t k = 0; k < m.disjunctions[i].disjuncts.size(); ++k) {
      const auto& d = m.disjunctions[i].disjuncts[k];
      REQUIRE(d.constraints.size() == 1);
      const auto& q = std::get<QuadraticExpr>(d.constraints[0].body);
      // Q is the identity on this cluster's center block, the linear part
      // carries -2 p_ij on centers and -1 on d_i.
      for (const auto& t : q.quad_terms()) {
        CHECK(t.i == t.j);
        CHECK(t.coeff == 1.0);
      }
      CHECK(q.quad_terms().size() == 2);
      CHECK(q.linear_coeff(static_cast<int>(i)) == -1.0);
      const int c0 = 10 + static_cast<int>(k) * 2;
      CHECK(q.linear_coeff(c0) == -2.0 * pts[i][0]);
      CHECK(q.linear_coeff(c0 + 1) == -2.0 * pts[i][1]);
    }
  }

  CHECK_THROWS_AS(gen_kmeans({.points = {}, .n_points = 2, .n_dims = 2,
                              .clusters = 3, .seed = 0}),
                  std::invalid_argument);
}

TEST_CASE("k-means objective equals the independent WCSS oracle") {
  KmeansParams p;
  p.n_points = 8;
  p.n_dims = 3;
  p.clusters = 2;
  p.seed = 123;
  const GdpModel m = gen_kmeans(p);
  const auto pts = nlohmann::json::parse(m.metadata.at("points"))
                       .get<std::vector<std::vector<double>>>();

  RandomStream rng(55);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<int> assign(8);
    for (auto& a : assign) a = static_cast<int>(rng.below(2));
    // Centroids at cluster means, d_i at the squared distances.
    std::vector<std::vector<double>> mean(2, std::vector<double>(3, 0.0));
    std::vector<int> count(2, 0);
    for (int i = 0; i < 8; ++i) {
      ++count[assign[i]];
      for (int j = 0; j < 3; ++j) mean[assign[i]][j] += pts[i][j];
    }
    for (int k = 0; k < 2; ++k)
      if (count[k])
        for (int j = 0; j < 3; ++j) mean[k][j] /= count[k];

    std::vector<double> x(m.num_vars(), 0.0);
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 3; ++j) x[8 + k * 3 + j] = mean[k][j];
    for (int i = 0; i < 8; ++i) {
      double dist = 0.0;
      for (int j = 0; j < 3; ++j) {
        const double diff = pts[i][j] - mean[assign[i]][j];
        dist += diff * diff;
      }
      x[i] = dist;
    }
    const double model_obj = m.objective.eval(x);
    const double oracle = kmeans_wcss(pts, assign, 2);
    CHECK_THAT(model_obj, Catch::Matchers::WithinAbs(oracle, 1e-10));
    // The distance rows are active (zero) at this point.
    for (int i = 0; i < 8; ++i) {
      const auto& d = m.disjunctions[i].disjuncts[assign[i]];
      CHECK(std::abs(eval_expr(d.constraints[0].body, x)) <= 1e-12);
    }
  }
}

namespace {

/// Assignment activating stage-1 feed, reactor and recycle for NT=1.
std::vector<int> cstr_all_on_assignment(const GdpModel& m) {
  std::vector<int> a(m.disjunctions.size(), 0);
  return a;  // disjunct 0 is YF_1 / YP_n / YR_n in every disjunction
}

}  // namespace

TEST_CASE("CSTR structural counts for NT in {1,2,3}") {
  for (int nt = 1; nt <= 3; ++nt) {
    CstrParams p;
    p.stages = nt;
    const GdpModel m = gen_cstr(p);
    CHECK(validate(m).empty());

    CHECK(m.num_vars() == 11 * nt + 6);
    CHECK(static_cast<int>(m.global_constraints.size()) == 10 * nt + 10);
    CHECK(static_cast<int>(m.disjunctions.size()) == 1 + 2 * nt);
    CHECK(static_cast<int>(m.logic.size()) == (nt + 1) * (nt + 1));

    // Feed selector: NT empty disjuncts.
    CHECK(static_cast<int>(m.disjunctions[0].disjuncts.size()) == nt);
    for (const auto& d : m.disjunctions[0].disjuncts)
      CHECK(d.constraints.empty());
    // Reactor disjunctions: 6 rows on, 12 rows off; recycle: 6 and 6.
    for (int s = 0; s < nt; ++s) {
      const auto& reactor = m.disjunctions[1 + s];
      REQUIRE(reactor.disjuncts.size() == 2);
      CHECK(reactor.disjuncts[0].constraints.size() == 6);
      CHECK(reactor.disjuncts[1].constraints.size() == 12);
      const auto& recycle = m.disjunctions[1 + nt + s];
      REQUIRE(recycle.disjuncts.size() == 2);
      CHECK(recycle.disjuncts[0].constraints.size() == 6);
      CHECK(recycle.disjuncts[1].constraints.size() == 6);
    }

    // Every constraint in the model is polynomial of degree <= 2.
    int quad_globals = 0;
    for (const auto& c : m.global_constraints) {
      CHECK(expr_degree(c.body) <= 2);
      if (expr_degree(c.body) == 2) ++quad_globals;
    }
    CHECK(quad_globals == 6 * nt + 4);
    for (const auto& dj : m.disjunctions)
      for (const auto& d : dj.disjuncts)
        for (const auto& c : d.constraints) CHECK(expr_degree(c.body) <= 2);
  }
}

TEST_CASE("analytically balanced NT=1 operating point has tiny residuals") {
  CstrParams p;  // defaults: k = 2, F0 = (0.99, 0.01), Q_F0 = 1
  p.stages = 1;
  const GdpModel m = gen_cstr(p);
  CstrLayout lay;
  lay.stages = 1;

  // Steady state with no recycle flow: product at 0.95 B purity.
  const double fa = 0.05, fb = 0.95, q1 = 1.0, t1 = 1.0;
  const double ra = -p.k_rate * fa * fb / t1;
  const double volume = (fa - p.f0_a) / ra;

  std::vector<double> x(m.num_vars(), 0.0);
  x[lay.stage_var(0, 0)] = fa;
  x[lay.stage_var(0, 1)] = fb;
  x[lay.stage_var(0, 4)] = q1;
  x[lay.stage_var(0, 6)] = volume;
  x[lay.stage_var(0, 7)] = volume;  // c = V in the reactor disjunct
  x[lay.stage_var(0, 8)] = ra;
  x[lay.stage_var(0, 9)] = -ra;
  x[lay.stage_var(0, 10)] = t1;
  x[lay.p_a()] = fa;
  x[lay.p_b()] = fb;
  x[lay.q_p()] = q1;

  CHECK(volume > 0.0);
  CHECK(volume < 100.0);
  const double residual =
      gdp_assignment_violation(m, cstr_all_on_assignment(m), x);
  CHECK(residual < 1e-8);
  CHECK(assignment_consistent(m, cstr_all_on_assignment(m)));
  // Objective: total cost equals the reactor volume here.
  CHECK_THAT(m.objective.eval(x), Catch::Matchers::WithinRel(volume, 1e-12));
}

namespace {

ClayInstance synthetic_clay(ClayNorm norm) {
  ClayInstance inst;
  inst.name = "synthetic4";
  inst.rectangles = {{1, 1}, {1, 1}, {1, 1}, {1, 1}};
  inst.circles = {{0, 0, 10}, {25, 0, 6}};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) inst.costs[{i, j}] = 10.0 * (i + j + 1);
  inst.x_bounds.assign(4, {-30.0, 30.0});
  inst.y_bounds.assign(4, {-30.0, 30.0});
  inst.norm = norm;
  return inst;
}

}  // namespace

TEST_CASE("constrained layout structure: pairs, containment, corner rows") {
  const GdpModel m = gen_clay(synthetic_clay(ClayNorm::L1));
  CHECK(validate(m).empty());
  CHECK(m.disjunctions.size() == 6 + 4);  // C(4,2) non-overlap + containment
  for (int pair = 0; pair < 6; ++pair)
    CHECK(m.disjunctions[pair].disjuncts.size() == 4);
  for (int i = 0; i < 4; ++i) {
    const auto& contain = m.disjunctions[6 + i];
    REQUIRE(contain.disjuncts.size() == 2);
    for (const auto& d : contain.disjuncts) {
      CHECK(d.constraints.size() == 4);
      for (const auto& c : d.constraints)
        CHECK(expr_degree(c.body) == 2);
    }
  }
  CHECK(m.global_constraints.size() == 6 * 4);  // delta linearization rows
}

TEST_CASE("hand-placed layout is feasible at the matching assignment") {
  for (ClayNorm norm : {ClayNorm::L1, ClayNorm::L2}) {
    const ClayInstance inst = synthetic_clay(norm);
    const GdpModel m = gen_clay(inst);
    ClayLayout lay;
    lay.n_rects = 4;
    lay.l2 = norm == ClayNorm::L2;

    const double px[4] = {-2, 2, -2, 2};
    const double py[4] = {-2, -2, 2, 2};
    std::vector<double> x(m.num_vars(), 0.0);
    for (int i = 0; i < 4; ++i) {
      x[lay.x(i)] = px[i];
      x[lay.y(i)] = py[i];
    }
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        x[lay.dx(i, j)] = std::abs(px[i] - px[j]);
        x[lay.dy(i, j)] = std::abs(py[i] - py[j]);
        if (lay.l2)
          x[lay.t(i, j)] = std::hypot(x[lay.dx(i, j)], x[lay.dy(i, j)]);
      }

    // Separating direction per pair: 0/1 for x-separation, 2/3 for y.
    std::vector<int> assignment;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        if (px[i] + 0.5 <= px[j] - 0.5)
          assignment.push_back(0);
        else if (px[j] + 0.5 <= px[i] - 0.5)
          assignment.push_back(1);
        else if (py[i] + 0.5 <= py[j] - 0.5)
          assignment.push_back(2);
        else
          assignment.push_back(3);
      }
    for (int i = 0; i < 4; ++i) assignment.push_back(0);  // circle 0

    CHECK(gdp_assignment_violation(m, assignment, x) <= 1e-9);
  }
}

TEST_CASE("clay generator rejects malformed instances") {
  ClayInstance inst = synthetic_clay(ClayNorm::L1);
  inst.rectangles[0].length = -1.0;
  CHECK_THROWS_AS(gen_clay(inst), std::invalid_argument);
  ClayInstance no_circles = synthetic_clay(ClayNorm::L1);
  no_circles.circles.clear();
  CHECK_THROWS_AS(gen_clay(no_circles), std::invalid_argument);
}
