#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gdpq/format.hpp"
#include "gdpq/model.hpp"
#include "gdpq/numeric.hpp"
#include "gdpq/rng.hpp"

namespace gdpq {

// ---------------------------------------------------------------------------
// Random quadratically constrained instances

struct RandomGdpParams {
  int n_dims = 3;
  int n_disjunctions = 3;
  int disjuncts_per = 3;
  int constraints_per = 2;
  int n_feasible_points = 10;
  bool convex = false;
  std::uint64_t seed = 0;
};

/// Soft range checks mirroring the benchmark family the generator models;
/// values outside produce warnings, never failures.
inline std::vector<std::string> param_warnings(const RandomGdpParams& p) {
  std::vector<std::string> w;
  if (p.n_disjunctions < 3 || p.n_disjunctions > 10)
    w.push_back("n_disjunctions outside the benchmark range [3, 10]");
  if (p.disjuncts_per < 10 || p.disjuncts_per > 15)
    w.push_back("disjuncts_per outside the benchmark range [10, 15]");
  if (p.constraints_per != 10)
    w.push_back("constraints_per differs from the benchmark value 10");
  if (p.n_dims < 3 || p.n_dims > 9)
    w.push_back("n_dims outside the benchmark range [3, 9]");
  return w;
}

namespace detail {

inline void check_positive(long v, const char* what) {
  if (v < 1) throw std::invalid_argument(std::string(what) + " must be >= 1");
}

/// Draws a dense quadratic expression with all coefficients from U[-1, 1];
/// construction symmetrizes Q. Draw order (row-major Q, then c, then d) is
/// part of the determinism contract.
inline QuadraticExpr draw_dense_quadratic(RandomStream& rng, int n) {
  QuadraticExpr e(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) e.add_quadratic(i, j, rng.uniform(-1.0, 1.0));
  for (int i = 0; i < n; ++i) e.add_linear(i, rng.uniform(-1.0, 1.0));
  e.add_constant(rng.uniform(-1.0, 1.0));
  return e;
}

/// Shifts the diagonal by |lambda_min| + 1e-9 when the symmetrized Q has a
/// negative eigenvalue, making it positive semidefinite while preserving the
/// off-diagonal structure.
inline void shift_to_psd(QuadraticExpr& e, int n) {
  std::vector<int> vars(n);
  for (int i = 0; i < n; ++i) vars[i] = i;
  const double lam = min_symmetric_eigenvalue(e.dense_matrix(vars), n);
  if (lam < 0.0) {
    const double shift = -lam + 1e-9;
    for (int i = 0; i < n; ++i) e.add_quadratic(i, i, shift);
  }
}

inline std::string json_points(const std::vector<std::vector<double>>& pts) {
  std::ostringstream os;
  os << "[";
  for (std::size_t p = 0; p < pts.size(); ++p) {
    os << (p ? "," : "") << "[";
    for (std::size_t i = 0; i < pts[p].size(); ++i)
      os << (i ? "," : "") << format_double(pts[p][i]);
    os << "]";
  }
  os << "]";
  return os.str();
}

inline std::string json_int_matrix(const std::vector<std::vector<int>>& rows) {
  std::ostringstream os;
  os << "[";
  for (std::size_t p = 0; p < rows.size(); ++p) {
    os << (p ? "," : "") << "[";
    for (std::size_t i = 0; i < rows[p].size(); ++i)
      os << (i ? "," : "") << rows[p][i];
    os << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace detail

/// Injected feasibility data recoverable from a generated model's metadata.
struct InjectedFeasibility {
  std::vector<std::vector<double>> points;
  // designated[p][k] = disjunct made feasible for point p in disjunction k
  std::vector<std::vector<int>> designated;
};

/// Random quadratically constrained GDP: dense U[-1, 1] coefficients, a
/// quadratic objective, no global constraints, box [-10, 10]^n. With
/// convex=true every Q (objective included) is eigenvalue-shifted to be PSD.
/// Each of n_feasible_points sampled points is made feasible by decreasing
/// the constants d of one uniformly chosen disjunct per disjunction so that
/// h(x*) <= -1e-3.
inline GdpModel gen_random(const RandomGdpParams& p) {
  detail::check_positive(p.n_dims, "n_dims");
  detail::check_positive(p.n_disjunctions, "n_disjunctions");
  detail::check_positive(p.disjuncts_per, "disjuncts_per");
  detail::check_positive(p.constraints_per, "constraints_per");
  if (p.n_feasible_points < 0)
    throw std::invalid_argument("n_feasible_points must be >= 0");

  constexpr double kBoxLo = -10.0, kBoxHi = 10.0, kSlack = 1e-3;
  RandomStream rng(p.seed);
  const int n = p.n_dims;

  QuadraticExpr objective = detail::draw_dense_quadratic(rng, n);
  if (p.convex) detail::shift_to_psd(objective, n);

  // bodies[k][i][j]
  std::vector<std::vector<std::vector<QuadraticExpr>>> bodies(p.n_disjunctions);
  for (int k = 0; k < p.n_disjunctions; ++k) {
    bodies[k].resize(p.disjuncts_per);
    for (int i = 0; i < p.disjuncts_per; ++i) {
      for (int j = 0; j < p.constraints_per; ++j) {
        QuadraticExpr body = detail::draw_dense_quadratic(rng, n);
        if (p.convex) detail::shift_to_psd(body, n);
        bodies[k][i].push_back(std::move(body));
      }
    }
  }

  InjectedFeasibility inj;
  for (int q = 0; q < p.n_feasible_points; ++q) {
    std::vector<double> x(n);
    for (auto& v : x) v = rng.uniform(kBoxLo, kBoxHi);
    inj.points.push_back(std::move(x));
  }
  for (int q = 0; q < p.n_feasible_points; ++q) {
    std::vector<int> designated(p.n_disjunctions);
    for (int k = 0; k < p.n_disjunctions; ++k)
      designated[k] = static_cast<int>(rng.below(p.disjuncts_per));
    inj.designated.push_back(std::move(designated));
  }
  for (int q = 0; q < p.n_feasible_points; ++q) {
    for (int k = 0; k < p.n_disjunctions; ++k) {
      const int i = inj.designated[q][k];
      for (auto& body : bodies[k][i]) {
        const double h = body.eval(inj.points[q]);
        if (h > -kSlack) body.add_constant(-(h + kSlack));
      }
    }
  }

  GdpModel m;
  for (int i = 0; i < n; ++i)
    m.add_variable("x" + std::to_string(i), kBoxLo, kBoxHi);
  m.objective = std::move(objective);
  for (int k = 0; k < p.n_disjunctions; ++k) {
    Disjunction dj;
    dj.id = "K" + std::to_string(k);
    for (int i = 0; i < p.disjuncts_per; ++i) {
      Disjunct d;
      d.indicator = "Y_" + std::to_string(k) + "_" + std::to_string(i);
      for (auto& body : bodies[k][i])
        d.constraints.push_back({std::move(body), ConstraintOrigin::User});
      dj.disjuncts.push_back(std::move(d));
    }
    m.disjunctions.push_back(std::move(dj));
  }

  m.metadata["generator"] = "random";
  m.metadata["seed"] = std::to_string(p.seed);
  m.metadata["n_dims"] = std::to_string(p.n_dims);
  m.metadata["n_disjunctions"] = std::to_string(p.n_disjunctions);
  m.metadata["disjuncts_per"] = std::to_string(p.disjuncts_per);
  m.metadata["constraints_per"] = std::to_string(p.constraints_per);
  m.metadata["convex"] = p.convex ? "true" : "false";
  m.metadata["box"] = "[-10,10]";  // not stated by the benchmark family
  if (p.convex) m.metadata["objective_psd_shift"] = "applied";
  m.metadata["injected_points"] = detail::json_points(inj.points);
  m.metadata["designated_disjuncts"] = detail::json_int_matrix(inj.designated);
  return m;
}

// ---------------------------------------------------------------------------
// k-means clustering as a GDP

struct KmeansParams {
  std::vector<std::vector<double>> points;  // |N| x |D|; sampled when empty
  int n_points = 0;                         // used only when sampling
  int n_dims = 0;
  int clusters = 2;
  std::uint64_t seed = 0;
};

/// Min sum of squared distances: one disjunction per point with one disjunct
/// per cluster holding d_i >= sum_j (p_ij - c_kj)^2, plus the symmetry rows
/// c_{k-1,1} <= c_{k,1} on the first center coordinate.
inline GdpModel gen_kmeans(const KmeansParams& params) {
  std::vector<std::vector<double>> pts = params.points;
  if (pts.empty()) {
    detail::check_positive(params.n_points, "n_points");
    detail::check_positive(params.n_dims, "n_dims");
    RandomStream rng(params.seed);
    pts.resize(params.n_points, std::vector<double>(params.n_dims));
    for (auto& row : pts)
      for (auto& v : row) v = rng.uniform(-1.0, 1.0);
  }
  const int n_pts = static_cast<int>(pts.size());
  const int dims = static_cast<int>(pts[0].size());
  const int k_clusters = params.clusters;
  if (k_clusters < 2) throw std::invalid_argument("clusters must be >= 2");
  if (k_clusters > n_pts)
    throw std::invalid_argument("clusters must not exceed point count");
  for (const auto& row : pts)
    if (static_cast<int>(row.size()) != dims)
      throw std::invalid_argument("ragged point matrix");

  std::vector<double> lo(dims, 1e300), hi(dims, -1e300);
  for (const auto& row : pts)
    for (int j = 0; j < dims; ++j) {
      lo[j] = std::min(lo[j], row[j]);
      hi[j] = std::max(hi[j], row[j]);
    }
  for (int j = 0; j < dims; ++j) {
    double margin = 0.1 * (hi[j] - lo[j]);
    if (margin == 0.0) margin = 0.1;
    lo[j] -= margin;
    hi[j] += margin;
  }

  GdpModel m;
  const int n_vars = n_pts + k_clusters * dims;
  // d_i first, then centers c_{k,j} row-major.
  for (int i = 0; i < n_pts; ++i) {
    double dmax = 0.0;
    for (int j = 0; j < dims; ++j) {
      const double a = pts[i][j] - lo[j];
      const double b = pts[i][j] - hi[j];
      dmax += std::max(a * a, b * b);
    }
    m.add_variable("d_" + std::to_string(i), 0.0, dmax);
  }
  auto center_var = [&](int k, int j) { return n_pts + k * dims + j; };
  for (int k = 0; k < k_clusters; ++k)
    for (int j = 0; j < dims; ++j)
      m.add_variable("c_" + std::to_string(k) + "_" + std::to_string(j), lo[j],
                     hi[j]);

  m.objective = QuadraticExpr(n_vars);
  for (int i = 0; i < n_pts; ++i) m.objective.add_linear(i, 1.0);

  for (int k = 1; k < k_clusters; ++k) {
    QuadraticExpr row(n_vars);
    row.add_linear(center_var(k - 1, 0), 1.0);
    row.add_linear(center_var(k, 0), -1.0);
    m.add_global(row);
  }

  for (int i = 0; i < n_pts; ++i) {
    Disjunction dj;
    dj.id = "assign_" + std::to_string(i);
    for (int k = 0; k < k_clusters; ++k) {
      QuadraticExpr body(n_vars);
      double constant = 0.0;
      for (int j = 0; j < dims; ++j) {
        body.add_quadratic(center_var(k, j), center_var(k, j), 1.0);
        body.add_linear(center_var(k, j), -2.0 * pts[i][j]);
        constant += pts[i][j] * pts[i][j];
      }
      body.add_linear(i, -1.0);
      body.add_constant(constant);
      Disjunct d;
      d.indicator = "Y_" + std::to_string(i) + "_" + std::to_string(k);
      d.constraints.push_back({std::move(body), ConstraintOrigin::User});
      dj.disjuncts.push_back(std::move(d));
    }
    m.disjunctions.push_back(std::move(dj));
  }

  m.metadata["generator"] = "kmeans";
  m.metadata["n_points"] = std::to_string(n_pts);
  m.metadata["n_dims"] = std::to_string(dims);
  m.metadata["clusters"] = std::to_string(k_clusters);
  m.metadata["seed"] = std::to_string(params.seed);
  m.metadata["points"] = detail::json_points(pts);
  return m;
}

/// Within-cluster sum of squares for a point/assignment pair with centroids
/// at the cluster means; the independent objective oracle for gen_kmeans.
inline double kmeans_wcss(const std::vector<std::vector<double>>& pts,
                          const std::vector<int>& assign, int k_clusters) {
  const int dims = static_cast<int>(pts[0].size());
  std::vector<std::vector<double>> mean(k_clusters, std::vector<double>(dims, 0.0));
  std::vector<int> count(k_clusters, 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    ++count[assign[i]];
    for (int j = 0; j < dims; ++j) mean[assign[i]][j] += pts[i][j];
  }
  for (int k = 0; k < k_clusters; ++k)
    if (count[k] > 0)
      for (int j = 0; j < dims; ++j) mean[k][j] /= count[k];
  double wcss = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (int j = 0; j < dims; ++j) {
      const double diff = pts[i][j] - mean[assign[i]][j];
      wcss += diff * diff;
    }
  return wcss;
}

// ---------------------------------------------------------------------------
// CSTR network superstructure

struct CstrParams {
  int stages = 1;          // N_T
  double k_rate = 2.0;     // rate constant of A + B -> 2B
  double f0_a = 0.99;      // fresh feed of A
  double f0_b = 0.01;      // fresh feed of B
  double q_f0 = 1.0;       // fresh volumetric feed
  double flow_max = 10.0;  // bound for all molar/volumetric flows
  double volume_max = 100.0;
  double rate_max = 10.0;
  double t_max = 100.0;  // bound for t_n = Q_n^2
};

/// Variable layout of the CSTR model; exposed so tests and the structural
/// acceptance check can address variables without string lookups.
struct CstrLayout {
  int stages = 0;
  // per-stage blocks, stage n in [0, stages): index(stage, slot)
  // slots: F_A, F_B, FR_A, FR_B, Q, QFR, V, c, r_A, r_B, t
  static constexpr int kSlots = 11;
  int stage_var(int stage, int slot) const { return stage * kSlots + slot; }
  int p_a() const { return stages * kSlots + 0; }
  int p_b() const { return stages * kSlots + 1; }
  int r_a() const { return stages * kSlots + 2; }
  int r_b() const { return stages * kSlots + 3; }
  int q_p() const { return stages * kSlots + 4; }
  int q_r() const { return stages * kSlots + 5; }
  int total() const { return stages * kSlots + 6; }
};

/// All balance equalities are split into <= pairs; the cubic rate expression
/// is kept quadratic through the auxiliary t_n = Q_n^2. Stage N_T receives
/// the fresh feed and stage 1 feeds the product splitter. Reaction rates can
/// be negative (r_A <= 0 <= r_B at a reacting steady state), so the rate
/// bounds are symmetric.
inline GdpModel gen_cstr(const CstrParams& p) {
  detail::check_positive(p.stages, "stages");
  if (p.k_rate <= 0 || p.q_f0 <= 0 || p.f0_a <= 0 || p.f0_b <= 0)
    throw std::invalid_argument("physical CSTR parameters must be positive");

  const int nt = p.stages;
  CstrLayout lay;
  lay.stages = nt;
  const int n_vars = lay.total();

  GdpModel m;
  static constexpr const char* kSlotName[CstrLayout::kSlots] = {
      "F_A", "F_B", "FR_A", "FR_B", "Q", "QFR", "V", "c", "r_A", "r_B", "t"};
  for (int s = 0; s < nt; ++s) {
    const std::string suffix = "_" + std::to_string(s + 1);
    const double flow_bounds[CstrLayout::kSlots][2] = {
        {0, p.flow_max},   {0, p.flow_max},   {0, p.flow_max},
        {0, p.flow_max},   {0, p.flow_max},   {0, p.flow_max},
        {0, p.volume_max}, {0, p.volume_max}, {-p.rate_max, p.rate_max},
        {-p.rate_max, p.rate_max}, {0, p.t_max}};
    for (int slot = 0; slot < CstrLayout::kSlots; ++slot)
      m.add_variable(std::string(kSlotName[slot]) + suffix,
                     flow_bounds[slot][0], flow_bounds[slot][1]);
  }
  m.add_variable("P_A", 0.0, p.flow_max);
  m.add_variable("P_B", 0.0, p.flow_max);
  m.add_variable("R_A", 0.0, p.flow_max);
  m.add_variable("R_B", 0.0, p.flow_max);
  m.add_variable("Q_P", 0.0, p.flow_max);
  m.add_variable("Q_R", 0.0, p.flow_max);

  m.objective = QuadraticExpr(n_vars);
  for (int s = 0; s < nt; ++s)
    m.objective.add_linear(lay.stage_var(s, 7), 1.0);

  auto lin = [&](std::initializer_list<LinTerm> terms, double constant) {
    QuadraticExpr e(n_vars);
    for (const auto& t : terms) e.add_linear(t.var, t.coeff);
    e.add_constant(constant);
    return e;
  };

  const int feed = nt - 1;  // stage N_T (0-based)
  for (int comp = 0; comp < 2; ++comp) {
    // F_{i,NT} - F0_i - FR_{i,NT} - r_{i,NT} V_NT = 0
    QuadraticExpr e = lin({{lay.stage_var(feed, 0 + comp), 1.0},
                           {lay.stage_var(feed, 2 + comp), -1.0}},
                          comp == 0 ? -p.f0_a : -p.f0_b);
    e.add_quadratic(lay.stage_var(feed, 8 + comp), lay.stage_var(feed, 6), -1.0);
    m.add_global_equality(Expr{std::move(e)});
  }
  m.add_global_equality(Expr{lin(
      {{lay.stage_var(feed, 4), 1.0}, {lay.stage_var(feed, 5), -1.0}}, -p.q_f0)});
  for (int s = 0; s < nt - 1; ++s) {
    for (int comp = 0; comp < 2; ++comp) {
      // F_{i,n} - F_{i,n+1} - FR_{i,n} - r_{i,n} V_n = 0
      QuadraticExpr e = lin({{lay.stage_var(s, 0 + comp), 1.0},
                             {lay.stage_var(s + 1, 0 + comp), -1.0},
                             {lay.stage_var(s, 2 + comp), -1.0}},
                            0.0);
      e.add_quadratic(lay.stage_var(s, 8 + comp), lay.stage_var(s, 6), -1.0);
      m.add_global_equality(Expr{std::move(e)});
    }
    m.add_global_equality(Expr{lin({{lay.stage_var(s, 4), 1.0},
                                    {lay.stage_var(s + 1, 4), -1.0},
                                    {lay.stage_var(s, 5), -1.0}},
                                   0.0)});
  }
  for (int comp = 0; comp < 2; ++comp)
    m.add_global_equality(Expr{lin({{lay.stage_var(0, 0 + comp), 1.0},
                                    {comp == 0 ? lay.p_a() : lay.p_b(), -1.0},
                                    {comp == 0 ? lay.r_a() : lay.r_b(), -1.0}},
                                   0.0)});
  m.add_global_equality(Expr{lin(
      {{lay.stage_var(0, 4), 1.0}, {lay.q_p(), -1.0}, {lay.q_r(), -1.0}}, 0.0)});
  for (int comp = 0; comp < 2; ++comp) {
    // P_i Q_1 - F_{i,1} Q_P = 0
    QuadraticExpr e(n_vars);
    e.add_quadratic(comp == 0 ? lay.p_a() : lay.p_b(), lay.stage_var(0, 4), 1.0);
    e.add_quadratic(lay.stage_var(0, 0 + comp), lay.q_p(), -1.0);
    m.add_global_equality(Expr{std::move(e)});
  }
  m.add_global_equality(
      Expr{lin({{lay.q_p(), 0.95}, {lay.p_b(), -1.0}}, 0.0)});
  for (int s = 1; s < nt; ++s)
    m.add_global_equality(Expr{lin(
        {{lay.stage_var(s, 6), 1.0}, {lay.stage_var(s - 1, 6), -1.0}}, 0.0)});
  for (int s = 0; s < nt; ++s) {
    // Q_n^2 - t_n = 0
    QuadraticExpr e(n_vars);
    e.add_quadratic(lay.stage_var(s, 4), lay.stage_var(s, 4), 1.0);
    e.add_linear(lay.stage_var(s, 10), -1.0);
    m.add_global_equality(Expr{std::move(e)});
  }

  // Fresh-feed location selector: pure indicators, XOR handled implicitly.
  {
    Disjunction dj;
    dj.id = "feed";
    for (int s = 0; s < nt; ++s)
      dj.disjuncts.push_back({"YF_" + std::to_string(s + 1), {}});
    m.disjunctions.push_back(std::move(dj));
  }

  for (int s = 0; s < nt; ++s) {
    Disjunction dj;
    dj.id = "reactor_" + std::to_string(s + 1);
    Disjunct on;
    on.indicator = "YP_" + std::to_string(s + 1);
    {
      // r_{A,n} t_n + k F_{A,n} F_{B,n} = 0
      QuadraticExpr e(n_vars);
      e.add_quadratic(lay.stage_var(s, 8), lay.stage_var(s, 10), 1.0);
      e.add_quadratic(lay.stage_var(s, 0), lay.stage_var(s, 1), p.k_rate);
      add_disjunct_equality(on, Expr{std::move(e)});
    }
    add_disjunct_equality(on, Expr{lin({{lay.stage_var(s, 9), 1.0},
                                        {lay.stage_var(s, 8), 1.0}},
                                       0.0)});
    add_disjunct_equality(on, Expr{lin({{lay.stage_var(s, 7), 1.0},
                                        {lay.stage_var(s, 6), -1.0}},
                                       0.0)});
    Disjunct off;
    off.indicator = "YP_" + std::to_string(s + 1) + "_off";
    add_disjunct_equality(off, Expr{lin({{lay.stage_var(s, 2), 1.0}}, 0.0)});
    add_disjunct_equality(off, Expr{lin({{lay.stage_var(s, 3), 1.0}}, 0.0)});
    add_disjunct_equality(off, Expr{lin({{lay.stage_var(s, 8), 1.0}}, 0.0)});
    add_disjunct_equality(off, Expr{lin({{lay.stage_var(s, 9), 1.0}}, 0.0)});
    add_disjunct_equality(off, Expr{lin({{lay.stage_var(s, 5), 1.0}}, 0.0)});
    add_disjunct_equality(off, Expr{lin({{lay.stage_var(s, 7), 1.0}}, 0.0)});
    dj.disjuncts.push_back(std::move(on));
    dj.disjuncts.push_back(std::move(off));
    m.disjunctions.push_back(std::move(dj));
  }

  for (int s = 0; s < nt; ++s) {
    Disjunction dj;
    dj.id = "recycle_" + std::to_string(s + 1);
    Disjunct on;
    on.indicator = "YR_" + std::to_string(s + 1);
    add_disjunct_equality(
        on, Expr{lin({{lay.stage_var(s, 2), 1.0}, {lay.r_a(), -1.0}}, 0.0)});
    add_disjunct_equality(
        on, Expr{lin({{lay.stage_var(s, 3), 1.0}, {lay.r_b(), -1.0}}, 0.0)});
    add_disjunct_equality(
        on, Expr{lin({{lay.stage_var(s, 5), 1.0}, {lay.q_r(), -1.0}}, 0.0)});
    Disjunct off;
    off.indicator = "YR_" + std::to_string(s + 1) + "_off";
    add_disjunct_equality(off, Expr{lin({{lay.stage_var(s, 2), 1.0}}, 0.0)});
    add_disjunct_equality(off, Expr{lin({{lay.stage_var(s, 3), 1.0}}, 0.0)});
    add_disjunct_equality(off, Expr{lin({{lay.stage_var(s, 5), 1.0}}, 0.0)});
    dj.disjuncts.push_back(std::move(on));
    dj.disjuncts.push_back(std::move(off));
    m.disjunctions.push_back(std::move(dj));
  }

  auto yf = [](int s) { return "YF_" + std::to_string(s + 1); };
  auto yp = [](int s) { return "YP_" + std::to_string(s + 1); };
  auto yr = [](int s) { return "YR_" + std::to_string(s + 1); };

  // YP_n <=> (AND_{j<=n} !YF_j) OR YF_n, in CNF with tautologies dropped.
  for (int s = 0; s < nt; ++s) {
    for (int j = 0; j < s; ++j)
      m.logic.push_back({{yf(s)}, {yp(s), yf(j)}});
    LogicClause at_least;
    for (int j = 0; j <= s; ++j) at_least.positive.insert(yf(j));
    at_least.positive.insert(yp(s));
    m.logic.push_back(std::move(at_least));
    m.logic.push_back({{yp(s)}, {yf(s)}});
  }
  for (int s = 0; s < nt; ++s) m.logic.push_back({{yp(s)}, {yr(s)}});
  {
    LogicClause at_least;
    for (int s = 0; s < nt; ++s) at_least.positive.insert(yr(s));
    m.logic.push_back(std::move(at_least));
    for (int a = 0; a < nt; ++a)
      for (int b = a + 1; b < nt; ++b) m.logic.push_back({{}, {yr(a), yr(b)}});
  }

  m.metadata["generator"] = "cstr";
  m.metadata["stages"] = std::to_string(nt);
  m.metadata["k_rate"] = format_double(p.k_rate);
  m.metadata["f0_a"] = format_double(p.f0_a);
  m.metadata["f0_b"] = format_double(p.f0_b);
  m.metadata["q_f0"] = format_double(p.q_f0);
  m.metadata["parameter_preset"] = "default (not validated against plant data)";
  return m;
}

// ---------------------------------------------------------------------------
// Constrained layout (rectangles in circles)

struct ClayRect {
  double length = 0.0;
  double height = 0.0;
};

struct ClayCircle {
  double x = 0.0;
  double y = 0.0;
  double r = 0.0;
};

enum class ClayNorm { L1, L2 };

struct ClayInstance {
  std::string name;
  std::vector<ClayRect> rectangles;
  std::vector<ClayCircle> circles;
  std::map<std::pair<int, int>, double> costs;  // keyed (i, j), i < j
  std::vector<std::pair<double, double>> x_bounds;
  std::vector<std::pair<double, double>> y_bounds;
  ClayNorm norm = ClayNorm::L1;
};

/// Variable layout of a generated constrained-layout model.
struct ClayLayout {
  int n_rects = 0;
  bool l2 = false;
  int x(int i) const { return i; }
  int y(int i) const { return n_rects + i; }
  int pair_index(int i, int j) const {  // i < j, lexicographic pair rank
    return i * n_rects - i * (i + 1) / 2 + (j - i - 1);
  }
  int dx(int i, int j) const {
    return 2 * n_rects + (l2 ? 3 : 2) * pair_index(i, j);
  }
  int dy(int i, int j) const { return dx(i, j) + 1; }
  int t(int i, int j) const { return dx(i, j) + 2; }
  int total() const {
    const int pairs = n_rects * (n_rects - 1) / 2;
    return 2 * n_rects + (l2 ? 3 : 2) * pairs;
  }
};

/// Non-overlap via a 4-disjunct disjunction per rectangle pair; containment
/// via one disjunct per circle holding the four corner-in-circle quadratic
/// rows. The l2 objective is lifted with t_ij >= 0, dx^2 + dy^2 <= t^2,
/// which is exact at the optimum because the objective minimizes t.
inline GdpModel gen_clay(const ClayInstance& inst) {
  const int n = static_cast<int>(inst.rectangles.size());
  if (n < 2) throw std::invalid_argument("need at least two rectangles");
  if (inst.circles.empty()) throw std::invalid_argument("need at least one circle");
  if (inst.x_bounds.size() != static_cast<std::size_t>(n) ||
      inst.y_bounds.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("bounds must be given per rectangle");
  for (const auto& r : inst.rectangles)
    if (r.length <= 0 || r.height <= 0)
      throw std::invalid_argument("rectangle sides must be positive");
  for (const auto& c : inst.circles)
    if (c.r <= 0) throw std::invalid_argument("circle radius must be positive");

  ClayLayout lay;
  lay.n_rects = n;
  lay.l2 = inst.norm == ClayNorm::L2;
  const int n_vars = lay.total();

  GdpModel m;
  for (int i = 0; i < n; ++i)
    m.add_variable("x_" + std::to_string(i), inst.x_bounds[i].first,
                   inst.x_bounds[i].second);
  for (int i = 0; i < n; ++i)
    m.add_variable("y_" + std::to_string(i), inst.y_bounds[i].first,
                   inst.y_bounds[i].second);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const std::string sfx = "_" + std::to_string(i) + "_" + std::to_string(j);
      const double dx_ub =
          std::max({0.0, inst.x_bounds[i].second - inst.x_bounds[j].first,
                    inst.x_bounds[j].second - inst.x_bounds[i].first});
      const double dy_ub =
          std::max({0.0, inst.y_bounds[i].second - inst.y_bounds[j].first,
                    inst.y_bounds[j].second - inst.y_bounds[i].first});
      m.add_variable("dx" + sfx, 0.0, dx_ub);
      m.add_variable("dy" + sfx, 0.0, dy_ub);
      if (lay.l2)
        m.add_variable("tn" + sfx, 0.0, std::sqrt(dx_ub * dx_ub + dy_ub * dy_ub));
    }

  m.objective = QuadraticExpr(n_vars);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      auto it = inst.costs.find({i, j});
      const double cost = (it == inst.costs.end()) ? 0.0 : it->second;
      if (lay.l2) {
        m.objective.add_linear(lay.t(i, j), cost);
      } else {
        m.objective.add_linear(lay.dx(i, j), cost);
        m.objective.add_linear(lay.dy(i, j), cost);
      }
    }

  auto lin = [&](std::initializer_list<LinTerm> terms, double constant) {
    QuadraticExpr e(n_vars);
    for (const auto& t : terms) e.add_linear(t.var, t.coeff);
    e.add_constant(constant);
    return e;
  };

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      m.add_global(
          Expr{lin({{lay.x(i), 1.0}, {lay.x(j), -1.0}, {lay.dx(i, j), -1.0}}, 0.0)});
      m.add_global(
          Expr{lin({{lay.x(j), 1.0}, {lay.x(i), -1.0}, {lay.dx(i, j), -1.0}}, 0.0)});
      m.add_global(
          Expr{lin({{lay.y(i), 1.0}, {lay.y(j), -1.0}, {lay.dy(i, j), -1.0}}, 0.0)});
      m.add_global(
          Expr{lin({{lay.y(j), 1.0}, {lay.y(i), -1.0}, {lay.dy(i, j), -1.0}}, 0.0)});
      if (lay.l2) {
        QuadraticExpr cone(n_vars);
        cone.add_quadratic(lay.dx(i, j), lay.dx(i, j), 1.0);
        cone.add_quadratic(lay.dy(i, j), lay.dy(i, j), 1.0);
        cone.add_quadratic(lay.t(i, j), lay.t(i, j), -1.0);
        m.add_global(Expr{std::move(cone)});
      }
    }

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const std::string sfx = "_" + std::to_string(i) + "_" + std::to_string(j);
      const double li = inst.rectangles[i].length, lj = inst.rectangles[j].length;
      const double hi = inst.rectangles[i].height, hj = inst.rectangles[j].height;
      Disjunction dj;
      dj.id = "nooverlap" + sfx;
      dj.disjuncts.push_back(
          {"Y1" + sfx,
           {{Expr{lin({{lay.x(i), 1.0}, {lay.x(j), -1.0}}, 0.5 * (li + lj))},
             ConstraintOrigin::User}}});
      dj.disjuncts.push_back(
          {"Y2" + sfx,
           {{Expr{lin({{lay.x(j), 1.0}, {lay.x(i), -1.0}}, 0.5 * (li + lj))},
             ConstraintOrigin::User}}});
      dj.disjuncts.push_back(
          {"Y3" + sfx,
           {{Expr{lin({{lay.y(i), 1.0}, {lay.y(j), -1.0}}, 0.5 * (hi + hj))},
             ConstraintOrigin::User}}});
      dj.disjuncts.push_back(
          {"Y4" + sfx,
           {{Expr{lin({{lay.y(j), 1.0}, {lay.y(i), -1.0}}, 0.5 * (hi + hj))},
             ConstraintOrigin::User}}});
      m.disjunctions.push_back(std::move(dj));
    }

  for (int i = 0; i < n; ++i) {
    Disjunction dj;
    dj.id = "contain_" + std::to_string(i);
    for (std::size_t t = 0; t < inst.circles.size(); ++t) {
      const auto& circ = inst.circles[t];
      Disjunct d;
      d.indicator = "W_" + std::to_string(i) + "_" + std::to_string(t);
      for (int sx = -1; sx <= 1; sx += 2)
        for (int sy = -1; sy <= 1; sy += 2) {
          const double ax = sx * 0.5 * inst.rectangles[i].length - circ.x;
          const double ay = sy * 0.5 * inst.rectangles[i].height - circ.y;
          QuadraticExpr corner(n_vars);
          corner.add_quadratic(lay.x(i), lay.x(i), 1.0);
          corner.add_quadratic(lay.y(i), lay.y(i), 1.0);
          corner.add_linear(lay.x(i), 2.0 * ax);
          corner.add_linear(lay.y(i), 2.0 * ay);
          corner.add_constant(ax * ax + ay * ay - circ.r * circ.r);
          d.constraints.push_back({Expr{std::move(corner)}, ConstraintOrigin::User});
        }
      dj.disjuncts.push_back(std::move(d));
    }
    m.disjunctions.push_back(std::move(dj));
  }

  m.metadata["generator"] = "clay";
  m.metadata["instance"] = inst.name;
  m.metadata["norm"] = lay.l2 ? "l2" : "l1";
  if (lay.l2)
    m.metadata["l2_lift"] = "objective sqrt replaced by t >= 0 with dx^2+dy^2 <= t^2";
  return m;
}

}  // namespace gdpq
