#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <fstream>
#include <sstream>

#include "gdpq/gen.hpp"
#include "gdpq/io.hpp"
#include "gdpq/lp.hpp"
#include "gdpq/reform.hpp"

using namespace gdpq;

namespace {

GdpModel sample_gdp() {
  RandomGdpParams p;
  p.n_dims = 3;
  p.n_disjunctions = 2;
  p.disjuncts_per = 2;
  p.constraints_per = 2;
  p.n_feasible_points = 2;
  p.seed = 2718;
  GdpModel m = gen_random(p);
  m.logic.push_back({{m.disjunctions[0].disjuncts[0].indicator},
                     {m.disjunctions[1].disjuncts[1].indicator}});
  return m;
}

std::string golden_path(const char* name) {
  return std::string(GDPQ_TEST_DIR) + "/golden/" + name;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("GDP documents round trip byte-identically") {
  const GdpModel m = sample_gdp();
  const std::string text = write_model(m);
  const ModelDocument doc = read_model(text);
  REQUIRE(doc.is_gdp());
  CHECK(doc.gdp() == m);
  CHECK(write_model(doc.gdp()) == text);
}

TEST_CASE("MINLP documents round trip byte-identically for every method") {
  const GdpModel gdp = sample_gdp();
  for (Method method : {Method::BigM, Method::HullEps, Method::HullExact,
                        Method::HullPoly, Method::BinaryMult}) {
    ReformConfig cfg;
    cfg.method = method;
    cfg.emit_s3 = method == Method::HullExact;
    auto [m, report] = reformulate(gdp, cfg);
    const std::string text = write_model(m);
    const ModelDocument doc = read_model(text);
    REQUIRE_FALSE(doc.is_gdp());
    const std::string again = write_model(doc.minlp());
    INFO(method_name(method));
    CHECK(again == text);
  }
}

TEST_CASE("infinite bounds survive the round trip") {
  GdpModel m;
  m.add_variable("x", -1.0, 1.0);
  m.add_variable("free", 0.0, std::numeric_limits<double>::infinity());
  m.objective = QuadraticExpr(2);
  const ModelDocument doc = read_model(write_model(m));
  CHECK(std::isinf(doc.gdp().variables[1].upper));
  CHECK(doc.gdp() == m);
}

TEST_CASE("schema violations carry JSON-pointer style paths") {
  const GdpModel m = sample_gdp();
  auto parsed = nlohmann::json::parse(write_model(m));

  SECTION("missing variable bounds") {
    parsed["variables"][1].erase("lower");
    try {
      read_model(parsed.dump());
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(e.path == "/variables/1");
      CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("lower"));
    }
  }

  SECTION("unknown fields are rejected with their location") {
    parsed["disjunctions"][0]["extra"] = 1;
    try {
      read_model(parsed.dump());
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(e.path == "/disjunctions/0/extra");
    }
  }

  SECTION("version mismatch") {
    parsed["format_version"] = 99;
    CHECK_THROWS_AS(read_model(parsed.dump()), SchemaError);
  }
}

TEST_CASE("megabyte-scale document round trips in under a second") {
  RandomGdpParams p;
  p.n_dims = 6;
  p.n_disjunctions = 6;
  p.disjuncts_per = 8;
  p.constraints_per = 6;
  p.seed = 1;
  const GdpModel m = gen_random(p);
  const std::string text = write_model(m);
  REQUIRE(text.size() > 1000000);
  const auto start = std::chrono::steady_clock::now();
  const ModelDocument doc = read_model(text);
  const std::string again = write_model(doc.gdp());
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  CHECK(again == text);
  CHECK(seconds < 1.0);
}

TEST_CASE("LP export emits the hull-exact row as a bracketed quadratic") {
  GdpModel gdp;
  gdp.add_variable("x", -1.0, 1.0);
  gdp.objective = QuadraticExpr(1);
  QuadraticExpr h(1);
  h.add_quadratic(0, 0, 1.0);
  h.add_constant(-1.0);
  Disjunction dj;
  dj.id = "K0";
  dj.disjuncts.push_back({"Y_on", {{Expr{h}, ConstraintOrigin::User}}});
  dj.disjuncts.push_back({"Y_off", {}});
  gdp.disjunctions.push_back(dj);

  auto [m, report] = reformulate_hull_exact(gdp, {});
  const std::string lp = export_lp(m);
  CHECK_THAT(lp, Catch::Matchers::ContainsSubstring(
                     "d_0_0_0: [ - Y_on ^ 2 + v_x_0_0 ^ 2 ] <= 0"));
  CHECK_THAT(lp, Catch::Matchers::ContainsSubstring("MIN"));
  CHECK_THAT(lp, Catch::Matchers::ContainsSubstring("SUBJECT TO"));
  CHECK_THAT(lp, Catch::Matchers::ContainsSubstring("BOUNDS"));
  CHECK_THAT(lp, Catch::Matchers::ContainsSubstring("BINARY\n Y_on\n Y_off"));
  CHECK(export_lp(m) == lp);  // deterministic re-export
}

TEST_CASE("LP export lowers the rational hull-eps row") {
  GdpModel gdp;
  gdp.add_variable("x", -1.0, 1.0);
  gdp.objective = QuadraticExpr(1);
  QuadraticExpr h(1);
  h.add_quadratic(0, 0, 1.0);
  h.add_constant(-1.0);
  Disjunction dj;
  dj.id = "K0";
  dj.disjuncts.push_back({"Y_on", {{Expr{h}, ConstraintOrigin::User}}});
  dj.disjuncts.push_back({"Y_off", {}});
  gdp.disjunctions.push_back(dj);

  ReformConfig cfg;
  cfg.method = Method::HullEps;
  auto [m, report] = reformulate_hull_eps(gdp, cfg);
  const std::string lp = export_lp(m);
  // v^2 - 0.9999 y^2 - 0.0001 y <= 0 after multiplying through by the
  // strictly positive denominator.
  CHECK_THAT(lp, Catch::Matchers::ContainsSubstring("eps-lowered rows: d_0_0_0"));
  CHECK_THAT(lp, Catch::Matchers::ContainsSubstring("- 1e-04 Y_on"));
  CHECK_THAT(lp, Catch::Matchers::ContainsSubstring(
                     "[ - 0.9999 Y_on ^ 2 + v_x_0_0 ^ 2 ]"));

  SECTION("the lowered row keeps the same feasible set on y in [0, 1]") {
    const auto* row = [&]() -> const EpsQuadRow* {
      for (const auto& r : m.nonlinear_rows)
        if (const auto* e = std::get_if<EpsQuadRow>(&r)) return e;
      return nullptr;
    }();
    REQUIRE(row != nullptr);
    const QuadraticExpr lowered = lp_detail::lowered_eps_row(*row, m.num_vars());
    RandomStream rng(31);
    std::vector<double> pt(m.num_vars(), 0.0);
    for (int s = 0; s < 10000; ++s) {
      const double y = rng.uniform01();
      pt[row->y_var] = y;
      pt[m.disaggregated_var(0, 0, 0)] = rng.uniform(-y, y);
      const double rational = row->value(pt);
      const double poly = lowered.eval_unchecked(pt);
      const bool in_rational = rational <= 0.0;
      const bool in_poly = poly <= 0.0;
      if (std::abs(rational) > 1e-9 && std::abs(poly) > 1e-9)
        CHECK(in_rational == in_poly);
    }
  }
}

TEST_CASE("polynomial rows refuse LP export") {
  GdpModel gdp;
  gdp.add_variable("x", -1.0, 1.0);
  gdp.objective = QuadraticExpr(1);
  PolynomialExpr h(1);
  h.add_term({{0, 3}}, 1.0);
  h.add_term({{0, 1}}, -1.0);
  Disjunction dj;
  dj.id = "K0";
  dj.disjuncts.push_back({"Y_on", {{Expr{h}, ConstraintOrigin::User}}});
  dj.disjuncts.push_back({"Y_off", {}});
  gdp.disjunctions.push_back(dj);
  auto [m, report] = reformulate_hull_poly(gdp, {});
  CHECK_THROWS_AS(export_lp(m), std::invalid_argument);
}

TEST_CASE("LP export matches the golden file") {
  GdpModel gdp;
  gdp.add_variable("x", -1.0, 1.0);
  gdp.add_variable("w", 0.0, 2.0);
  gdp.objective = QuadraticExpr(2);
  gdp.objective.add_quadratic(0, 0, 1.0);
  gdp.objective.add_linear(1, 0.5);
  QuadraticExpr g(2);
  g.add_linear(0, 1.0);
  g.add_linear(1, 1.0);
  g.add_constant(-2.0);
  gdp.add_global(g);
  QuadraticExpr h(2);
  h.add_quadratic(0, 0, 1.0);
  h.add_linear(1, -1.0);
  Disjunction dj;
  dj.id = "K0";
  dj.disjuncts.push_back({"Y_on", {{Expr{h}, ConstraintOrigin::User}}});
  dj.disjuncts.push_back({"Y_off", {}});
  gdp.disjunctions.push_back(dj);

  auto [m, report] = reformulate_hull_exact(gdp, {});
  const std::string lp = export_lp(m);
  CHECK(lp == read_file(golden_path("hull_exact_toy.lp")));
}
