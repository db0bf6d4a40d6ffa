#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gdpq/numeric.hpp"

namespace gdpq {

struct LinTerm {
  int var = 0;
  double coeff = 0.0;

  friend bool operator==(const LinTerm&, const LinTerm&) = default;
};

namespace detail {

/// Insert-or-accumulate into a vector kept sorted by key.
template <typename T, typename Key, typename KeyOf>
void accumulate_sorted(std::vector<T>& terms, const Key& key, double coeff,
                       KeyOf key_of, T fresh) {
  auto it = std::lower_bound(
      terms.begin(), terms.end(), key,
      [&](const T& t, const Key& k) { return key_of(t) < k; });
  if (it != terms.end() && key_of(*it) == key) {
    it->coeff += coeff;
  } else {
    fresh.coeff = coeff;
    terms.insert(it, std::move(fresh));
  }
}

}  // namespace detail

/// Sparse quadratic expression  x^T Q x + c^T x + d  with symmetric Q held
/// as its upper triangle. Construction symmetrizes: adding the monomial
/// a*x_i*x_j for i != j stores (Q_ij = Q_ji = a/2) once as entry (i, j),
/// which leaves the evaluated value unchanged.
class QuadraticExpr {
 public:
  struct QuadTerm {
    int i = 0;
    int j = 0;        // i <= j
    double coeff = 0.0;  // matrix entry; off-diagonal evaluates as 2*coeff*x_i*x_j

    friend bool operator==(const QuadTerm&, const QuadTerm&) = default;
  };

  QuadraticExpr() = default;
  explicit QuadraticExpr(int dim) : dim_(dim) {}

  int dim() const { return dim_; }

  /// Widens the variable space (used when embedding into a larger model).
  void set_dim(int dim) {
    if (dim < dim_) throw std::invalid_argument("cannot shrink expression dim");
    dim_ = dim;
  }

  /// Adds the monomial coeff * x_i * x_j.
  void add_quadratic(int i, int j, double coeff) {
    check_var(i);
    check_var(j);
    if (coeff == 0.0) return;
    const int a = std::min(i, j);
    const int b = std::max(i, j);
    const double entry = (a == b) ? coeff : 0.5 * coeff;
    detail::accumulate_sorted(
        quad_, std::pair<int, int>{a, b}, entry,
        [](const QuadTerm& t) { return std::pair<int, int>{t.i, t.j}; },
        QuadTerm{a, b, 0.0});
  }

  void add_linear(int i, double coeff) {
    check_var(i);
    if (coeff == 0.0) return;
    detail::accumulate_sorted(
        lin_, i, coeff, [](const LinTerm& t) { return t.var; }, LinTerm{i, 0.0});
  }

  void add_constant(double d) { constant_ += d; }

  const std::vector<QuadTerm>& quad_terms() const { return quad_; }
  const std::vector<LinTerm>& linear_terms() const { return lin_; }
  double constant() const { return constant_; }

  bool is_linear() const { return quad_.empty(); }
  bool empty() const { return quad_.empty() && lin_.empty() && constant_ == 0.0; }

  /// Symmetrized matrix entry Q_ij (either triangle).
  double quad_entry(int i, int j) const {
    const int a = std::min(i, j);
    const int b = std::max(i, j);
    auto it = std::lower_bound(quad_.begin(), quad_.end(), std::pair{a, b},
                               [](const QuadTerm& t, const std::pair<int, int>& k) {
                                 return std::pair{t.i, t.j} < k;
                               });
    if (it != quad_.end() && it->i == a && it->j == b) return it->coeff;
    return 0.0;
  }

  double linear_coeff(int i) const {
    auto it = std::lower_bound(lin_.begin(), lin_.end(), i,
                               [](const LinTerm& t, int k) { return t.var < k; });
    if (it != lin_.end() && it->var == i) return it->coeff;
    return 0.0;
  }

  double eval(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_)
      throw std::invalid_argument("point dimension does not match expression");
    return eval_unchecked(x);
  }

  double eval_unchecked(std::span<const double> x) const {
    double acc = constant_;
    for (const auto& t : lin_) acc += t.coeff * x[t.var];
    for (const auto& t : quad_) {
      const double p = x[t.i] * x[t.j];
      acc += (t.i == t.j) ? t.coeff * p : 2.0 * t.coeff * p;
    }
    return acc;
  }

  /// g += scale * grad(expr)(x).
  void add_gradient(std::span<const double> x, double scale,
                    std::span<double> g) const {
    for (const auto& t : lin_) g[t.var] += scale * t.coeff;
    for (const auto& t : quad_) {
      if (t.i == t.j) {
        g[t.i] += scale * 2.0 * t.coeff * x[t.i];
      } else {
        g[t.i] += scale * 2.0 * t.coeff * x[t.j];
        g[t.j] += scale * 2.0 * t.coeff * x[t.i];
      }
    }
  }

  /// Valid enclosure of the expression over the given variable box.
  /// Throws if a referenced variable has a non-finite bound.
  Interval interval(std::span<const Interval> box) const {
    Interval acc{constant_, constant_};
    for (const auto& t : lin_) {
      require_finite(box, t.var);
      acc = interval_add(acc, interval_scale(t.coeff, box[t.var]));
    }
    for (const auto& t : quad_) {
      require_finite(box, t.i);
      require_finite(box, t.j);
      if (t.i == t.j) {
        acc = interval_add(acc, interval_scale(t.coeff, interval_square(box[t.i])));
      } else {
        acc = interval_add(acc, interval_scale(2.0 * t.coeff,
                                               interval_mul(box[t.i], box[t.j])));
      }
    }
    return acc;
  }

  /// Sorted distinct variables with a stored coefficient.
  std::vector<int> variables() const {
    std::vector<int> vars;
    for (const auto& t : lin_) vars.push_back(t.var);
    for (const auto& t : quad_) {
      vars.push_back(t.i);
      vars.push_back(t.j);
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
  }

  /// Rewrites variable indices; every referenced variable must be mapped.
  QuadraticExpr substituted(const std::map<int, int>& var_map, int new_dim) const {
    QuadraticExpr out(new_dim);
    out.constant_ = constant_;
    for (const auto& t : lin_) out.add_linear(var_map.at(t.var), t.coeff);
    for (const auto& t : quad_) {
      const double mono = (t.i == t.j) ? t.coeff : 2.0 * t.coeff;
      out.add_quadratic(var_map.at(t.i), var_map.at(t.j), mono);
    }
    return out;
  }

  /// Dense symmetric matrix restricted to `vars` (row-major |vars|^2).
  std::vector<double> dense_matrix(const std::vector<int>& vars) const {
    const std::size_t m = vars.size();
    std::map<int, std::size_t> pos;
    for (std::size_t k = 0; k < m; ++k) pos[vars[k]] = k;
    std::vector<double> mat(m * m, 0.0);
    for (const auto& t : quad_) {
      auto pi = pos.find(t.i);
      auto pj = pos.find(t.j);
      if (pi == pos.end() || pj == pos.end())
        throw std::invalid_argument("dense_matrix: variable not in basis");
      mat[pi->second * m + pj->second] = t.coeff;
      mat[pj->second * m + pi->second] = t.coeff;
    }
    return mat;
  }

  /// Drops exact-zero stored terms (canonical form for serialization).
  void prune() {
    std::erase_if(quad_, [](const QuadTerm& t) { return t.coeff == 0.0; });
    std::erase_if(lin_, [](const LinTerm& t) { return t.coeff == 0.0; });
  }

  friend bool operator==(const QuadraticExpr&, const QuadraticExpr&) = default;

 private:
  void check_var(int i) const {
    if (i < 0 || i >= dim_) throw std::out_of_range("variable index out of range");
  }
  static void require_finite(std::span<const Interval> box, int var) {
    if (!box[var].finite())
      throw std::domain_error("interval bound requires finite variable bounds");
  }

  int dim_ = 0;
  std::vector<QuadTerm> quad_;
  std::vector<LinTerm> lin_;
  double constant_ = 0.0;
};

/// Monomial as sorted (variable, exponent) pairs with exponents >= 1.
/// The empty monomial is the constant term.
using Monomial = std::vector<std::pair<int, int>>;

inline int monomial_degree(const Monomial& m) {
  int d = 0;
  for (const auto& [v, e] : m) d += e;
  return d;
}

/// Canonical order: total degree first, then lexicographic on the pairs.
inline bool monomial_less(const Monomial& a, const Monomial& b) {
  const int da = monomial_degree(a);
  const int db = monomial_degree(b);
  if (da != db) return da < db;
  return a < b;
}

/// Sparse polynomial stored as canonical monomial -> coefficient terms,
/// i.e. the sum of its homogeneous components of each total degree.
class PolynomialExpr {
 public:
  struct Term {
    Monomial mono;
    double coeff = 0.0;

    friend bool operator==(const Term&, const Term&) = default;
  };

  PolynomialExpr() = default;
  explicit PolynomialExpr(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  void set_dim(int dim) {
    if (dim < dim_) throw std::invalid_argument("cannot shrink expression dim");
    dim_ = dim;
  }

  /// Adds coeff * monomial. The monomial need not be sorted; exponents of a
  /// repeated variable are merged.
  void add_term(Monomial mono, double coeff) {
    if (coeff == 0.0) return;
    normalize_monomial(mono);
    for (const auto& [v, e] : mono) {
      if (v < 0 || v >= dim_) throw std::out_of_range("variable index out of range");
      if (e <= 0) throw std::invalid_argument("monomial exponent must be >= 1");
    }
    auto it = std::lower_bound(terms_.begin(), terms_.end(), mono,
                               [](const Term& t, const Monomial& k) {
                                 return monomial_less(t.mono, k);
                               });
    if (it != terms_.end() && it->mono == mono) {
      it->coeff += coeff;
    } else {
      terms_.insert(it, Term{std::move(mono), coeff});
    }
  }

  void add_constant(double c) { add_term({}, c); }

  const std::vector<Term>& terms() const { return terms_; }

  bool empty() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const Term& t) { return t.coeff == 0.0; });
  }

  /// Max total degree carrying a nonzero coefficient (0 for constants).
  int degree() const {
    int d = 0;
    for (const auto& t : terms_)
      if (t.coeff != 0.0) d = std::max(d, monomial_degree(t.mono));
    return d;
  }

  /// The degree-0 component p_0.
  double constant_component() const {
    for (const auto& t : terms_)
      if (t.mono.empty()) return t.coeff;
    return 0.0;
  }

  double eval(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_)
      throw std::invalid_argument("point dimension does not match expression");
    return eval_unchecked(x);
  }

  double eval_unchecked(std::span<const double> x) const {
    double acc = 0.0;
    for (const auto& t : terms_) {
      double p = t.coeff;
      for (const auto& [v, e] : t.mono)
        for (int r = 0; r < e; ++r) p *= x[v];
      acc += p;
    }
    return acc;
  }

  void add_gradient(std::span<const double> x, double scale,
                    std::span<double> g) const {
    for (const auto& t : terms_) {
      for (std::size_t k = 0; k < t.mono.size(); ++k) {
        const auto [v, e] = t.mono[k];
        double p = t.coeff * e;
        for (int r = 0; r < e - 1; ++r) p *= x[v];
        for (std::size_t l = 0; l < t.mono.size(); ++l) {
          if (l == k) continue;
          const auto [w, f] = t.mono[l];
          for (int r = 0; r < f; ++r) p *= x[w];
        }
        g[v] += scale * p;
      }
    }
  }

  Interval interval(std::span<const Interval> box) const {
    Interval acc{0.0, 0.0};
    for (const auto& t : terms_) {
      Interval p{1.0, 1.0};
      for (const auto& [v, e] : t.mono) {
        if (!box[v].finite())
          throw std::domain_error("interval bound requires finite variable bounds");
        p = interval_mul(p, interval_pow(box[v], e));
      }
      acc = interval_add(acc, interval_scale(t.coeff, p));
    }
    return acc;
  }

  std::vector<int> variables() const {
    std::vector<int> vars;
    for (const auto& t : terms_)
      for (const auto& [v, e] : t.mono) vars.push_back(v);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
  }

  PolynomialExpr substituted(const std::map<int, int>& var_map, int new_dim) const {
    PolynomialExpr out(new_dim);
    for (const auto& t : terms_) {
      Monomial m;
      m.reserve(t.mono.size());
      for (const auto& [v, e] : t.mono) m.emplace_back(var_map.at(v), e);
      out.add_term(std::move(m), t.coeff);
    }
    return out;
  }

  /// Multiplies every term by extra_var^(power) (power >= 0 per term caller).
  PolynomialExpr multiplied_by_power(int extra_var, int power) const {
    PolynomialExpr out(dim_);
    for (const auto& t : terms_) {
      Monomial m = t.mono;
      if (power > 0) m.emplace_back(extra_var, power);
      out.add_term(std::move(m), t.coeff);
    }
    return out;
  }

  static PolynomialExpr from_quadratic(const QuadraticExpr& q) {
    PolynomialExpr out(q.dim());
    if (q.constant() != 0.0) out.add_constant(q.constant());
    for (const auto& t : q.linear_terms()) out.add_term({{t.var, 1}}, t.coeff);
    for (const auto& t : q.quad_terms()) {
      if (t.i == t.j)
        out.add_term({{t.i, 2}}, t.coeff);
      else
        out.add_term({{t.i, 1}, {t.j, 1}}, 2.0 * t.coeff);
    }
    return out;
  }

  /// Lossless conversion when the total degree is <= 2.
  std::optional<QuadraticExpr> to_quadratic() const {
    if (degree() > 2) return std::nullopt;
    QuadraticExpr out(dim_);
    for (const auto& t : terms_) {
      if (t.coeff == 0.0) continue;
      const int d = monomial_degree(t.mono);
      if (d == 0) {
        out.add_constant(t.coeff);
      } else if (d == 1) {
        out.add_linear(t.mono[0].first, t.coeff);
      } else if (t.mono.size() == 1) {
        out.add_quadratic(t.mono[0].first, t.mono[0].first, t.coeff);
      } else {
        out.add_quadratic(t.mono[0].first, t.mono[1].first, t.coeff);
      }
    }
    return out;
  }

  void prune() {
    std::erase_if(terms_, [](const Term& t) { return t.coeff == 0.0; });
  }

  friend bool operator==(const PolynomialExpr&, const PolynomialExpr&) = default;

 private:
  static void normalize_monomial(Monomial& m) {
    std::sort(m.begin(), m.end());
    Monomial merged;
    for (const auto& [v, e] : m) {
      if (!merged.empty() && merged.back().first == v)
        merged.back().second += e;
      else
        merged.emplace_back(v, e);
    }
    m = std::move(merged);
  }

  int dim_ = 0;
  std::vector<Term> terms_;  // sorted by monomial_less
};

/// A constraint body is quadratic or polynomial; the sense is always <= 0.
using Expr = std::variant<QuadraticExpr, PolynomialExpr>;

inline double eval_expr(const Expr& e, std::span<const double> x) {
  return std::visit([&](const auto& b) { return b.eval(x); }, e);
}

inline int expr_dim(const Expr& e) {
  return std::visit([](const auto& b) { return b.dim(); }, e);
}

inline int expr_degree(const Expr& e) {
  if (const auto* q = std::get_if<QuadraticExpr>(&e)) {
    if (!q->quad_terms().empty()) return 2;
    return q->linear_terms().empty() ? 0 : 1;
  }
  return std::get<PolynomialExpr>(e).degree();
}

inline std::vector<int> expr_variables(const Expr& e) {
  return std::visit([](const auto& b) { return b.variables(); }, e);
}

inline Interval expr_interval(const Expr& e, std::span<const Interval> box) {
  return std::visit([&](const auto& b) { return b.interval(box); }, e);
}

inline PolynomialExpr expr_to_polynomial(const Expr& e) {
  if (const auto* q = std::get_if<QuadraticExpr>(&e))
    return PolynomialExpr::from_quadratic(*q);
  return std::get<PolynomialExpr>(e);
}

/// Negated copy (used when splitting equalities into <= pairs).
inline Expr expr_negated(const Expr& e) {
  if (const auto* q = std::get_if<QuadraticExpr>(&e)) {
    QuadraticExpr out(q->dim());
    out.add_constant(-q->constant());
    for (const auto& t : q->linear_terms()) out.add_linear(t.var, -t.coeff);
    for (const auto& t : q->quad_terms()) {
      const double mono = (t.i == t.j) ? t.coeff : 2.0 * t.coeff;
      out.add_quadratic(t.i, t.j, -mono);
    }
    return out;
  }
  const auto& p = std::get<PolynomialExpr>(e);
  PolynomialExpr out(p.dim());
  for (const auto& t : p.terms()) out.add_term(t.mono, -t.coeff);
  return out;
}

}  // namespace gdpq
