#include <catch2/catch_amalgamated.hpp>

#include <limits>
#include <map>
#include <vector>

#include "gdpq/model.hpp"
#include "gdpq/rng.hpp"

using namespace gdpq;

namespace {

GdpModel two_disjunct_toy() {
  GdpModel m;
  m.add_variable("x", -1.0, 1.0);
  m.objective = QuadraticExpr(1);
  m.objective.add_quadratic(0, 0, 1.0);

  QuadraticExpr left(1);
  left.add_quadratic(0, 0, 1.0);
  left.add_constant(-1.0);
  QuadraticExpr right(1);
  right.add_linear(0, 1.0);
  right.add_constant(-0.5);

  Disjunction dj;
  dj.id = "K0";
  dj.disjuncts.push_back({"Y_a", {{left, ConstraintOrigin::User}}});
  dj.disjuncts.push_back({"Y_b", {{right, ConstraintOrigin::User}}});
  m.disjunctions.push_back(dj);
  return m;
}

bool has_code(const std::vector<Diagnostic>& diags, const char* code) {
  for (const auto& d : diags)
    if (d.code == code) return true;
  return false;
}

}  // namespace

TEST_CASE("well-formed model validates cleanly") {
  CHECK(validate(two_disjunct_toy()).empty());
}

TEST_CASE("unbounded disjunct variable is flagged") {
  GdpModel m = two_disjunct_toy();
  m.variables[0].upper = std::numeric_limits<double>::infinity();
  const auto diags = validate(m);
  REQUIRE_FALSE(diags.empty());
  CHECK(has_code(diags, diag::kUnboundedDisjunctVar));
}

TEST_CASE("unbounded global-only variable is accepted") {
  GdpModel m = two_disjunct_toy();
  const int extra =
      m.add_variable("free", 0.0, std::numeric_limits<double>::infinity());
  m.objective.set_dim(2);
  for (auto& dj : m.disjunctions)
    for (auto& d : dj.disjuncts)
      for (auto& c : d.constraints)
        std::visit([](auto& b) { b.set_dim(2); }, c.body);
  QuadraticExpr g(2);
  g.add_linear(extra, 1.0);
  g.add_constant(-100.0);
  m.add_global(g);
  CHECK(validate(m).empty());
}

TEST_CASE("conflicting clause literal is flagged") {
  GdpModel m = two_disjunct_toy();
  m.logic.push_back({{"Y_a"}, {"Y_a"}});
  const auto diags = validate(m);
  CHECK(has_code(diags, diag::kClauseLiteralConflict));
}

TEST_CASE("unknown indicator and duplicate names are flagged") {
  GdpModel m = two_disjunct_toy();
  m.logic.push_back({{"nope"}, {}});
  CHECK(has_code(validate(m), diag::kUnknownIndicator));

  GdpModel dup = two_disjunct_toy();
  dup.disjunctions[0].disjuncts[1].indicator = "Y_a";
  CHECK(has_code(validate(dup), diag::kDuplicateIndicator));

  GdpModel rev = two_disjunct_toy();
  rev.variables[0].lower = 2.0;
  CHECK(has_code(validate(rev), diag::kBoundsReversed));
}

TEST_CASE("equality split accepts exactly the near-zero band") {
  const double tol = 1e-9;
  QuadraticExpr h(1);
  h.add_quadratic(0, 0, 1.0);
  h.add_constant(-0.25);
  const Expr pos{h};
  const Expr neg = expr_negated(pos);

  RandomStream rng(17);
  for (int s = 0; s < 20000; ++s) {
    const std::vector<double> x{rng.uniform(-1.0, 1.0)};
    const double hv = eval_expr(pos, x);
    const bool pair_ok = eval_expr(pos, x) <= tol && eval_expr(neg, x) <= tol;
    CHECK(pair_ok == (std::abs(hv) <= tol));
  }
  // Points on the sphere itself satisfy both rows.
  const std::vector<double> on{0.5};
  CHECK(eval_expr(pos, on) <= tol);
  CHECK(eval_expr(neg, on) <= tol);
}

TEST_CASE("logic_to_linear hand examples") {
  const std::map<std::string, int> vars{{"A", 0}, {"B", 1}, {"P", 2}, {"R", 3}};

  SECTION("unit clause: y_A >= 1") {
    const auto rows = logic_to_linear({{{"A"}, {}}}, vars);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].sense == Sense::GE);
    CHECK(rows[0].rhs == 1.0);
    REQUIRE(rows[0].terms.size() == 1);
    CHECK(rows[0].terms[0].var == 0);
    CHECK(rows[0].terms[0].coeff == 1.0);
  }

  SECTION("all-negative clause: -y_A - y_B >= -1, i.e. y_A + y_B <= 1") {
    const auto rows = logic_to_linear({{{}, {"A", "B"}}}, vars);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].rhs == -1.0);
    REQUIRE(rows[0].terms.size() == 2);
    CHECK(rows[0].terms[0].coeff == -1.0);
    CHECK(rows[0].terms[1].coeff == -1.0);
  }

  SECTION("implication R => P encoded as {pos P, neg R}: y_P - y_R >= 0") {
    const auto rows = logic_to_linear({{{"P"}, {"R"}}}, vars);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].rhs == 0.0);
    REQUIRE(rows[0].terms.size() == 2);
    CHECK(rows[0].terms[0].var == 2);
    CHECK(rows[0].terms[0].coeff == 1.0);
    CHECK(rows[0].terms[1].var == 3);
    CHECK(rows[0].terms[1].coeff == -1.0);
  }

  SECTION("unknown literal throws") {
    CHECK_THROWS_AS(logic_to_linear({{{"Z"}, {}}}, vars), std::invalid_argument);
  }
}

TEST_CASE("logic_to_linear agrees with CNF on every assignment") {
  RandomStream rng(4242);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 3 + static_cast<int>(rng.below(10));  // up to 12 indicators
    std::map<std::string, int> vars;
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) {
      names.push_back("I" + std::to_string(i));
      vars[names.back()] = i;
    }
    std::vector<LogicClause> clauses;
    const int n_clauses = 1 + static_cast<int>(rng.below(6));
    for (int c = 0; c < n_clauses; ++c) {
      LogicClause cl;
      const int lits = 1 + static_cast<int>(rng.below(4));
      for (int l = 0; l < lits; ++l) {
        const auto& name = names[rng.below(n)];
        if (cl.positive.count(name) || cl.negative.count(name)) continue;
        if (rng.below(2) == 0)
          cl.positive.insert(name);
        else
          cl.negative.insert(name);
      }
      if (cl.positive.empty() && cl.negative.empty()) continue;
      clauses.push_back(cl);
    }
    const auto rows = logic_to_linear(clauses, vars);
    REQUIRE(rows.size() == clauses.size());

    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      std::map<std::string, bool> truth;
      std::vector<double> y(n);
      for (int i = 0; i < n; ++i) {
        const bool bit = (mask >> i) & 1u;
        truth[names[i]] = bit;
        y[i] = bit ? 1.0 : 0.0;
      }
      bool cnf_ok = true;
      for (const auto& cl : clauses) cnf_ok = cnf_ok && clause_satisfied(cl, truth);
      bool rows_ok = true;
      for (const auto& row : rows) rows_ok = rows_ok && row.violation(y) <= 1e-12;
      CHECK(cnf_ok == rows_ok);
    }
  }
}
