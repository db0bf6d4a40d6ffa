#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "gdpq/expr.hpp"
#include "gdpq/rng.hpp"

using namespace gdpq;

namespace {

/// Independent dense evaluator: x^T Q x + c^T x + d over full row-major Q.
double dense_eval(const std::vector<double>& q_dense,
                  const std::vector<double>& c, double d,
                  const std::vector<double>& x) {
  const std::size_t n = x.size();
  double acc = d;
  for (std::size_t i = 0; i < n; ++i) {
    acc += c[i] * x[i];
    for (std::size_t j = 0; j < n; ++j) acc += q_dense[i * n + j] * x[i] * x[j];
  }
  return acc;
}

}  // namespace

TEST_CASE("quadratic evaluation matches hand values") {
  QuadraticExpr e(1);
  e.add_quadratic(0, 0, 1.0);
  e.add_constant(-1.0);
  CHECK(e.eval(std::vector<double>{2.0}) == 3.0);

  QuadraticExpr cross(2);
  cross.add_quadratic(0, 1, 1.0);
  cross.add_quadratic(1, 0, 1.0);  // raw Q = [[0,1],[1,0]]
  CHECK(cross.eval(std::vector<double>{1.0, 1.0}) == 2.0);
}

TEST_CASE("sparse symmetric evaluation equals dense brute force") {
  RandomStream rng(20240301);
  const std::size_t n = 5;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> q_dense(n * n);
    std::vector<double> c(n);
    for (auto& v : q_dense) v = rng.uniform(-1.0, 1.0);
    for (auto& v : c) v = rng.uniform(-1.0, 1.0);
    const double d = rng.uniform(-1.0, 1.0);

    QuadraticExpr e(static_cast<int>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        e.add_quadratic(static_cast<int>(i), static_cast<int>(j), q_dense[i * n + j]);
    for (std::size_t i = 0; i < n; ++i) e.add_linear(static_cast<int>(i), c[i]);
    e.add_constant(d);

    std::vector<double> x(n);
    for (auto& v : x) v = rng.uniform(-3.0, 3.0);
    CHECK_THAT(e.eval(x), Catch::Matchers::WithinRel(dense_eval(q_dense, c, d, x), 1e-12));
  }
}

TEST_CASE("symmetrization is evaluation-neutral") {
  RandomStream rng(7);
  const std::size_t n = 4;
  std::vector<double> q_dense(n * n);
  for (auto& v : q_dense) v = rng.uniform(-1.0, 1.0);

  QuadraticExpr raw(static_cast<int>(n));
  QuadraticExpr sym(static_cast<int>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      raw.add_quadratic(static_cast<int>(i), static_cast<int>(j), q_dense[i * n + j]);
      const double s = 0.5 * (q_dense[i * n + j] + q_dense[j * n + i]);
      sym.add_quadratic(static_cast<int>(i), static_cast<int>(j), s);
    }

  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> x(n);
    for (auto& v : x) v = rng.uniform(-5.0, 5.0);
    const double a = raw.eval(x);
    const double b = sym.eval(x);
    CHECK_THAT(a, Catch::Matchers::WithinRel(b, 1e-12));
  }
}

TEST_CASE("evaluation rejects dimension mismatch") {
  QuadraticExpr e(2);
  e.add_linear(0, 1.0);
  CHECK_THROWS_AS(e.eval(std::vector<double>{1.0}), std::invalid_argument);
  PolynomialExpr p(2);
  p.add_term({{0, 2}}, 1.0);
  CHECK_THROWS_AS(p.eval(std::vector<double>{1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("interval bound hand examples") {
  QuadraticExpr sq(1);
  sq.add_quadratic(0, 0, 1.0);
  sq.add_constant(-1.0);
  std::vector<Interval> box{{-1.0, 1.0}};
  const Interval b = sq.interval(box);
  CHECK(b.lo == -1.0);  // x^2 in [0,1], shifted by -1
  CHECK(b.hi == 0.0);

  QuadraticExpr bilinear(2);
  bilinear.add_quadratic(0, 1, 2.0);
  std::vector<Interval> box2{{-1.0, 1.0}, {-1.0, 1.0}};
  const Interval b2 = bilinear.interval(box2);
  CHECK(b2.lo == -2.0);
  CHECK(b2.hi == 2.0);
}

TEST_CASE("interval bound encloses sampled evaluation") {
  RandomStream rng(99);
  const std::size_t n = 4;
  for (int expr_rep = 0; expr_rep < 100; ++expr_rep) {
    QuadraticExpr e(static_cast<int>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        e.add_quadratic(static_cast<int>(i), static_cast<int>(j), rng.uniform(-1.0, 1.0));
    for (std::size_t i = 0; i < n; ++i) e.add_linear(static_cast<int>(i), rng.uniform(-1.0, 1.0));
    e.add_constant(rng.uniform(-1.0, 1.0));

    std::vector<Interval> box(n);
    for (auto& b : box) {
      const double a = rng.uniform(-4.0, 4.0);
      const double c = rng.uniform(-4.0, 4.0);
      b = {std::min(a, c), std::max(a, c)};
    }
    const Interval enclosure = e.interval(box);

    double lo = 1e300, hi = -1e300;
    std::vector<double> x(n);
    for (int s = 0; s < 1000; ++s) {
      for (std::size_t i = 0; i < n; ++i) x[i] = rng.uniform(box[i].lo, box[i].hi);
      const double v = e.eval(x);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK(enclosure.lo <= lo);
    CHECK(enclosure.hi >= hi);
  }
}

TEST_CASE("interval bound rejects unbounded variables") {
  QuadraticExpr e(1);
  e.add_linear(0, 1.0);
  std::vector<Interval> box{{0.0, std::numeric_limits<double>::infinity()}};
  CHECK_THROWS_AS(e.interval(box), std::domain_error);
}

TEST_CASE("polynomial round trips through quadratic for degree <= 2") {
  RandomStream rng(5150);
  for (int rep = 0; rep < 50; ++rep) {
    QuadraticExpr q(3);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) q.add_quadratic(i, j, rng.uniform(-2.0, 2.0));
    for (int i = 0; i < 3; ++i) q.add_linear(i, rng.uniform(-2.0, 2.0));
    q.add_constant(rng.uniform(-2.0, 2.0));

    const PolynomialExpr p = PolynomialExpr::from_quadratic(q);
    REQUIRE(p.degree() <= 2);
    const auto back = p.to_quadratic();
    REQUIRE(back.has_value());
    CHECK(*back == q);

    std::vector<double> x{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    CHECK_THAT(p.eval(x), Catch::Matchers::WithinRel(q.eval(x), 1e-13));
  }
}

TEST_CASE("homogeneous components have uniform total degree") {
  PolynomialExpr p(2);
  p.add_term({{0, 3}}, 1.0);
  p.add_term({{0, 1}, {1, 1}}, 2.0);
  p.add_term({{0, 1}}, -1.0);
  p.add_constant(4.0);
  CHECK(p.degree() == 3);
  CHECK(p.constant_component() == 4.0);
  for (const auto& t : p.terms()) {
    int d = monomial_degree(t.mono);
    CHECK((d == 0 || d == 1 || d == 2 || d == 3));
  }
  // x^3 term must not convert to quadratic.
  CHECK_FALSE(p.to_quadratic().has_value());
}

TEST_CASE("monomials merge repeated variables and stay canonical") {
  PolynomialExpr p(2);
  p.add_term({{1, 1}, {0, 1}, {1, 1}}, 3.0);  // 3 * x0 * x1^2
  REQUIRE(p.terms().size() == 1);
  const Monomial expected{{0, 1}, {1, 2}};
  CHECK(p.terms()[0].mono == expected);
  std::vector<double> x{2.0, 3.0};
  CHECK(p.eval(x) == 54.0);
}

TEST_CASE("polynomial gradient matches finite differences") {
  RandomStream rng(31337);
  PolynomialExpr p(3);
  for (int rep = 0; rep < 8; ++rep) {
    Monomial m;
    const int nfac = 1 + static_cast<int>(rng.below(3));
    for (int f = 0; f < nfac; ++f)
      m.emplace_back(static_cast<int>(rng.below(3)), 1 + static_cast<int>(rng.below(2)));
    p.add_term(m, rng.uniform(-1.0, 1.0));
  }
  std::vector<double> x{0.7, -1.2, 0.4};
  std::vector<double> g(3, 0.0);
  p.add_gradient(x, 1.0, g);
  const double h = 1e-6;
  for (int i = 0; i < 3; ++i) {
    auto xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double fd = (p.eval(xp) - p.eval(xm)) / (2 * h);
    CHECK_THAT(g[i], Catch::Matchers::WithinAbs(fd, 1e-5));
  }
}
