#pragma once

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <future>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gdpq/format.hpp"
#include "gdpq/gen.hpp"
#include "gdpq/instances.hpp"
#include "gdpq/io.hpp"
#include "gdpq/lp.hpp"
#include "gdpq/oracle.hpp"
#include "gdpq/reform.hpp"
#include "gdpq/solver.hpp"

namespace gdpq {

// ---------------------------------------------------------------------------
// Tightness proxy

/// Monte-Carlo feasible fraction of the continuous relaxation's x-projection
/// over the variable box. Hull witnesses are searched over disjunct-supported
/// decompositions v_i = y_i x at sampled fractional y (vertices of the
/// simplex plus y_samples interior points); logic rows are not part of the
/// proxy. The estimate is a valid comparison device across transforms (the
/// same witness family is offered to each), not a volume measurement.
inline double tightness_proxy(const GdpModel& gdp, const MinlpModel& minlp,
                              long n_samples, std::uint64_t seed,
                              int y_samples = 32, double tol = 1e-8) {
  RandomStream rng(seed);
  const auto box = gdp.box();
  const int n = gdp.num_vars();
  const int n_disj = static_cast<int>(gdp.disjunctions.size());

  struct Group {
    std::vector<const LinearRow*> linear;
    std::vector<const NonlinearRow*> nonlinear;
    std::vector<int> binaries;                  // per disjunct
    std::vector<std::vector<int>> disagg;       // [disjunct] -> v vars
    std::vector<std::vector<int>> disagg_orig;  // [disjunct] -> source vars
  };
  std::vector<Group> groups(n_disj);
  for (int k = 0; k < n_disj; ++k) {
    const int dk = static_cast<int>(gdp.disjunctions[k].disjuncts.size());
    groups[k].binaries.resize(dk, -1);
    groups[k].disagg.resize(dk);
    groups[k].disagg_orig.resize(dk);
  }
  for (const auto& row : minlp.linear_rows)
    if (row.origin == RowOrigin::Disjunct && row.disjunction >= 0)
      groups[row.disjunction].linear.push_back(&row);
  for (const auto& row : minlp.nonlinear_rows) {
    const int k = nonlinear_row_disjunction(row);
    if (nonlinear_row_origin(row) == RowOrigin::Disjunct && k >= 0)
      groups[k].nonlinear.push_back(&row);
  }
  for (int v = 0; v < minlp.num_vars(); ++v) {
    const auto& role = minlp.variables[v].role;
    if (role.kind == VarRole::Kind::Indicator)
      groups[role.disjunction].binaries[role.disjunct] = v;
    if (role.kind == VarRole::Kind::Disaggregated) {
      groups[role.disjunction].disagg[role.disjunct].push_back(v);
      groups[role.disjunction].disagg_orig[role.disjunct].push_back(role.orig_var);
    }
  }

  // Candidate y vectors per disjunction: simplex vertices, then interior
  // samples shared across x draws (drawn once for determinism).
  std::vector<std::vector<std::vector<double>>> candidates(n_disj);
  for (int k = 0; k < n_disj; ++k) {
    const int dk = static_cast<int>(gdp.disjunctions[k].disjuncts.size());
    for (int i = 0; i < dk; ++i) {
      std::vector<double> y(dk, 0.0);
      y[i] = 1.0;
      candidates[k].push_back(std::move(y));
    }
    for (int s = 0; s < y_samples; ++s) {
      std::vector<double> y(dk);
      double total = 0.0;
      for (auto& yi : y) {
        yi = -std::log(1.0 - rng.uniform01());
        total += yi;
      }
      for (auto& yi : y) yi /= total;
      candidates[k].push_back(std::move(y));
    }
  }

  std::vector<double> x(n);
  std::vector<double> point(minlp.num_vars(), 0.0);
  long feasible = 0;
  for (long s = 0; s < n_samples; ++s) {
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(box[i].lo, box[i].hi);
    bool ok = true;
    for (const auto& c : gdp.global_constraints)
      if (eval_expr(c.body, x) > tol) {
        ok = false;
        break;
      }
    for (int i = 0; i < n && ok; ++i) point[i] = x[i];
    for (int k = 0; k < n_disj && ok; ++k) {
      const auto& group = groups[k];
      bool disjunction_ok = false;
      for (const auto& y : candidates[k]) {
        for (std::size_t i = 0; i < y.size(); ++i) {
          point[group.binaries[i]] = y[i];
          for (std::size_t j = 0; j < group.disagg[i].size(); ++j)
            point[group.disagg[i][j]] = y[i] * x[group.disagg_orig[i][j]];
        }
        bool cand_ok = true;
        for (const auto* row : group.linear)
          if (row->violation(point) > tol) {
            cand_ok = false;
            break;
          }
        if (cand_ok)
          for (const auto* row : group.nonlinear)
            if (row_value(*row, point) > tol) {
              cand_ok = false;
              break;
            }
        if (cand_ok) {
          disjunction_ok = true;
          break;
        }
      }
      // Reset this disjunction's entries before moving on.
      for (std::size_t i = 0; i < group.binaries.size(); ++i) {
        point[group.binaries[i]] = 0.0;
        for (int v : group.disagg[i]) point[v] = 0.0;
      }
      ok = disjunction_ok;
    }
    if (ok) ++feasible;
  }
  return static_cast<double>(feasible) / static_cast<double>(n_samples);
}

// ---------------------------------------------------------------------------
// Suite manifest

struct InstanceSpec {
  std::string id;
  GdpModel model;  // resolved at manifest load (fail fast)
};

struct MethodSpec {
  ReformConfig config;
  std::string label;
};

struct SuiteManifest {
  std::uint64_t seed = 0;
  long tightness_samples = 2000;
  int y_samples = 32;
  bool check_counts = false;
  bool check_binary_fix = false;
  bool check_tightness = false;
  std::vector<InstanceSpec> instances;
  std::vector<MethodSpec> methods;
  std::optional<SolverRun> solver;
};

namespace bench_detail {

inline GdpModel resolve_generator(const io_detail::Cursor& gen,
                                  const std::string& base_dir) {
  const std::string type = gen.child("type").text();
  if (type == "random") {
    gen.allow_only({"type", "n_dims", "n_disjunctions", "disjuncts_per",
                    "constraints_per", "n_feasible_points", "convex", "seed"});
    RandomGdpParams p;
    p.n_dims = static_cast<int>(gen.child("n_dims").integer());
    p.n_disjunctions = static_cast<int>(gen.child("n_disjunctions").integer());
    p.disjuncts_per = static_cast<int>(gen.child("disjuncts_per").integer());
    p.constraints_per = static_cast<int>(gen.child("constraints_per").integer());
    if (gen.self().contains("n_feasible_points"))
      p.n_feasible_points =
          static_cast<int>(gen.child("n_feasible_points").integer());
    if (gen.self().contains("convex"))
      p.convex = gen.child("convex").self().get<bool>();
    p.seed = static_cast<std::uint64_t>(gen.child("seed").integer());
    return gen_random(p);
  }
  if (type == "kmeans") {
    gen.allow_only({"type", "n_points", "n_dims", "clusters", "seed"});
    KmeansParams p;
    p.n_points = static_cast<int>(gen.child("n_points").integer());
    p.n_dims = static_cast<int>(gen.child("n_dims").integer());
    p.clusters = static_cast<int>(gen.child("clusters").integer());
    p.seed = static_cast<std::uint64_t>(gen.child("seed").integer());
    return gen_kmeans(p);
  }
  if (type == "cstr") {
    gen.allow_only({"type", "stages"});
    CstrParams p;
    p.stages = static_cast<int>(gen.child("stages").integer());
    return gen_cstr(p);
  }
  if (type == "clay") {
    gen.allow_only({"type", "instance", "norm"});
    const std::string rel = gen.child("instance").text();
    const std::string path =
        std::filesystem::path(rel).is_absolute()
            ? rel
            : (std::filesystem::path(base_dir) / rel).string();
    ClayInstance inst = read_clay_instance_file(path);
    if (gen.self().contains("norm")) {
      const std::string norm = gen.child("norm").text();
      inst.norm = (norm == "l2") ? ClayNorm::L2 : ClayNorm::L1;
    }
    return gen_clay(inst);
  }
  throw SchemaError(gen.path + "/type", "unknown generator '" + type + "'");
}

}  // namespace bench_detail

/// Parses and fully resolves a manifest: every generator runs and every model
/// path loads before the suite starts.
inline SuiteManifest read_manifest(const std::string& text,
                                   const std::string& base_dir) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("", std::string("not valid JSON: ") + e.what());
  }
  const io_detail::Cursor root{&parsed, ""};
  root.allow_only({"seed", "tightness_samples", "y_samples", "checks",
                   "instances", "methods", "solver"});
  SuiteManifest m;
  if (parsed.contains("seed"))
    m.seed = static_cast<std::uint64_t>(root.child("seed").integer());
  if (parsed.contains("tightness_samples"))
    m.tightness_samples = root.child("tightness_samples").integer();
  if (parsed.contains("y_samples"))
    m.y_samples = static_cast<int>(root.child("y_samples").integer());
  if (parsed.contains("checks")) {
    const io_detail::Cursor checks = root.child("checks");
    checks.require_array();
    for (std::size_t i = 0; i < checks.self().size(); ++i) {
      const std::string c = checks.at(i).text();
      if (c == "counts") {
        m.check_counts = true;
      } else if (c == "binary-fix") {
        m.check_binary_fix = true;
      } else if (c == "tightness") {
        m.check_tightness = true;
      } else {
        throw SchemaError(checks.at(i).path, "unknown check '" + c + "'");
      }
    }
  }
  const io_detail::Cursor instances = root.child("instances");
  instances.require_array();
  for (std::size_t i = 0; i < instances.self().size(); ++i) {
    const io_detail::Cursor inst = instances.at(i);
    inst.allow_only({"id", "model", "generator"});
    InstanceSpec spec;
    spec.id = inst.child("id").text();
    if (inst.self().contains("model")) {
      const std::string rel = inst.child("model").text();
      const std::string path =
          std::filesystem::path(rel).is_absolute()
              ? rel
              : (std::filesystem::path(base_dir) / rel).string();
      auto doc = read_model_file(path);
      if (!doc.is_gdp())
        throw SchemaError(inst.path + "/model", "expected a GDP document");
      spec.model = doc.gdp();
    } else {
      spec.model = bench_detail::resolve_generator(inst.child("generator"),
                                                   base_dir);
    }
    m.instances.push_back(std::move(spec));
  }
  const io_detail::Cursor methods = root.child("methods");
  methods.require_array();
  for (std::size_t i = 0; i < methods.self().size(); ++i) {
    const io_detail::Cursor jm = methods.at(i);
    jm.allow_only({"method", "eps", "s3"});
    MethodSpec spec;
    const std::string name = jm.child("method").text();
    const auto method = parse_method(name);
    if (!method) throw SchemaError(jm.path + "/method", "unknown method");
    spec.config.method = *method;
    if (jm.self().contains("eps")) spec.config.eps = jm.child("eps").number();
    if (jm.self().contains("s3"))
      spec.config.emit_s3 = jm.child("s3").self().get<bool>();
    spec.label = name;
    m.methods.push_back(std::move(spec));
  }
  if (parsed.contains("solver")) {
    const io_detail::Cursor js = root.child("solver");
    js.allow_only({"command", "time_limit", "objective_pattern", "bound_pattern"});
    SolverRun run;
    run.command_template = js.child("command").text();
    if (js.self().contains("time_limit"))
      run.time_limit_seconds = js.child("time_limit").number();
    if (js.self().contains("objective_pattern"))
      run.objective_pattern = js.child("objective_pattern").text();
    if (js.self().contains("bound_pattern"))
      run.bound_pattern = js.child("bound_pattern").text();
    m.solver = std::move(run);
  }
  return m;
}

inline SuiteManifest read_manifest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return read_manifest(buffer.str(),
                       std::filesystem::path(path).parent_path().string());
}

// ---------------------------------------------------------------------------
// Records

struct BenchRecord {
  std::string instance_id;
  std::string method;
  TransformCounts counts;
  long quad_nonzeros = 0;
  double reform_seconds = 0.0;
  double tightness = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> checks_passed;
  std::vector<std::string> checks_failed;
  std::optional<SolveStatus> solver_status;
  std::optional<double> solver_objective;
  std::optional<double> solver_bound;
  std::optional<double> solver_seconds;
  std::string error;
};

namespace bench_detail {

inline long count_quad_nonzeros(const MinlpModel& m) {
  long n = 0;
  for (const auto& row : m.nonlinear_rows) {
    if (const auto* q = std::get_if<QuadRow>(&row)) {
      n += static_cast<long>(q->expr.quad_terms().size());
    } else if (const auto* e = std::get_if<EpsQuadRow>(&row)) {
      n += static_cast<long>(e->quad.quad_terms().size());
    } else if (const auto* p = std::get_if<PolyRow>(&row)) {
      for (const auto& t : p->expr.terms())
        if (monomial_degree(t.mono) >= 2) ++n;
    } else if (const auto* ep = std::get_if<EpsPolyRow>(&row)) {
      for (const auto& t : ep->body.terms())
        if (monomial_degree(t.mono) >= 2) ++n;
    }
  }
  return n;
}

inline bool counts_check(const GdpModel& gdp, const MinlpModel& m,
                         const TransformReport& report, bool hull) {
  if (!(report.counts == make_counts(m))) return false;
  if (!hull) return m.num_disaggregated() == 0;
  int expected_disagg = 0, expected_bound = 0, expected_link = 0;
  for (const auto& dj : gdp.disjunctions) {
    const int nk = static_cast<int>(gdp.disjunction_variables(dj).size());
    const int dk = static_cast<int>(dj.disjuncts.size());
    expected_disagg += dk * nk;
    expected_bound += 2 * dk * nk;
    expected_link += nk;
  }
  int bound_rows = 0, link_rows = 0;
  for (const auto& row : m.linear_rows) {
    if (row.origin == RowOrigin::DisaggBound) ++bound_rows;
    if (row.origin == RowOrigin::Link) ++link_rows;
  }
  return m.num_disaggregated() == expected_disagg &&
         bound_rows == expected_bound && link_rows == expected_link;
}

inline bool binary_fix_check(const GdpModel& gdp, const MinlpModel& m,
                             std::uint64_t seed) {
  // All assignments when the product is small, a deterministic sample
  // otherwise (first/last disjunct everywhere plus a rotating choice).
  std::vector<std::vector<int>> assignments;
  long product = 1;
  for (const auto& dj : gdp.disjunctions) {
    product *= static_cast<long>(dj.disjuncts.size());
    if (product > 64) break;
  }
  const std::size_t n_disj = gdp.disjunctions.size();
  if (product <= 64 && n_disj > 0) {
    std::vector<int> assign(n_disj, 0);
    for (;;) {
      assignments.push_back(assign);
      std::size_t k = 0;
      for (; k < n_disj; ++k) {
        if (++assign[k] <
            static_cast<int>(gdp.disjunctions[k].disjuncts.size()))
          break;
        assign[k] = 0;
      }
      if (k == n_disj) break;
    }
  } else {
    for (int variant = 0; variant < 4; ++variant) {
      std::vector<int> assign(n_disj, 0);
      for (std::size_t k = 0; k < n_disj; ++k) {
        const int dk = static_cast<int>(gdp.disjunctions[k].disjuncts.size());
        assign[k] = (variant == 0)   ? 0
                    : (variant == 1) ? dk - 1
                                     : static_cast<int>((k + variant) % dk);
      }
      assignments.push_back(std::move(assign));
    }
  }
  for (const auto& assign : assignments) {
    if (!assignment_consistent(gdp, assign)) continue;
    if (!fixed_binary_check(gdp, m, assign, 200, seed).clean()) return false;
  }
  return true;
}

}  // namespace bench_detail

/// Runs every (instance, method) cell; failures are isolated per record in
/// the error column and never abort the suite. Records come back sorted by
/// (instance id, method).
inline std::vector<BenchRecord> run_suite(const SuiteManifest& manifest,
                                          int jobs = 1) {
  const std::size_t total = manifest.instances.size() * manifest.methods.size();
  std::vector<BenchRecord> records(total);
  auto run_cell = [&](std::size_t idx) {
    const auto& inst = manifest.instances[idx / manifest.methods.size()];
    const auto& method = manifest.methods[idx % manifest.methods.size()];
    BenchRecord rec;
    rec.instance_id = inst.id;
    rec.method = method.label;
    try {
      const auto start = std::chrono::steady_clock::now();
      auto [minlp, report] = reformulate(inst.model, method.config);
      rec.reform_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
              .count();
      rec.counts = report.counts;
      rec.quad_nonzeros = bench_detail::count_quad_nonzeros(minlp);
      const bool hull = method.config.method == Method::HullExact ||
                        method.config.method == Method::HullEps ||
                        method.config.method == Method::HullPoly;
      if (manifest.check_counts) {
        (bench_detail::counts_check(inst.model, minlp, report, hull)
             ? rec.checks_passed
             : rec.checks_failed)
            .push_back("counts");
      }
      if (manifest.check_binary_fix) {
        (bench_detail::binary_fix_check(inst.model, minlp, manifest.seed)
             ? rec.checks_passed
             : rec.checks_failed)
            .push_back("binary-fix");
      }
      if (manifest.check_tightness)
        rec.tightness = tightness_proxy(inst.model, minlp,
                                        manifest.tightness_samples,
                                        manifest.seed, manifest.y_samples);
      if (manifest.solver) {
        const std::string lp_path =
            (std::filesystem::temp_directory_path() /
             ("gdpq_bench_" + std::to_string(::getpid()) + "_" +
              std::to_string(idx) + ".lp"))
                .string();
        std::ofstream out(lp_path, std::ios::binary);
        out << export_lp(minlp);
        out.close();
        const SolveResult res = run_external_solver(lp_path, *manifest.solver);
        std::error_code ec;
        std::filesystem::remove(lp_path, ec);
        rec.solver_status = res.status;
        rec.solver_objective = res.objective;
        rec.solver_bound = res.bound;
        rec.solver_seconds = res.wall_seconds;
      }
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
    records[idx] = std::move(rec);
  };

  if (jobs <= 1) {
    for (std::size_t i = 0; i < total; ++i) run_cell(i);
  } else {
    std::vector<std::future<void>> futures;
    std::atomic<std::size_t> next{0};
    for (int j = 0; j < jobs; ++j)
      futures.push_back(std::async(std::launch::async, [&] {
        for (std::size_t i = next.fetch_add(1); i < total;
             i = next.fetch_add(1))
          run_cell(i);
      }));
    for (auto& f : futures) f.get();
  }
  std::sort(records.begin(), records.end(),
            [](const BenchRecord& a, const BenchRecord& b) {
              return std::tie(a.instance_id, a.method) <
                     std::tie(b.instance_id, b.method);
            });
  return records;
}

inline const char* kBenchCsvHeader =
    "instance,method,continuous_vars,binary_vars,disaggregated_vars,"
    "linear_rows,quadratic_rows,rational_rows,polynomial_rows,quad_nonzeros,"
    "reform_seconds,tightness,checks_passed,checks_failed,solver_status,"
    "solver_objective,solver_bound,solver_seconds,error";

inline std::string records_to_csv(const std::vector<BenchRecord>& records) {
  std::ostringstream os;
  os << kBenchCsvHeader << "\n";
  auto join = [](const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i)
      out += (i ? ";" : "") + parts[i];
    return out;
  };
  auto opt_num = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  for (const auto& r : records) {
    std::string error = r.error;
    for (auto& c : error)
      if (c == ',' || c == '\n') c = ';';
    os << r.instance_id << "," << r.method << "," << r.counts.continuous_vars
       << "," << r.counts.binary_vars << "," << r.counts.disaggregated_vars
       << "," << r.counts.linear_rows << "," << r.counts.quadratic_rows << ","
       << r.counts.rational_rows << "," << r.counts.polynomial_rows << ","
       << r.quad_nonzeros << "," << format_double(r.reform_seconds) << ","
       << (std::isnan(r.tightness) ? std::string() : format_double(r.tightness))
       << "," << join(r.checks_passed) << "," << join(r.checks_failed) << ","
       << (r.solver_status ? solve_status_name(*r.solver_status) : "") << ","
       << opt_num(r.solver_objective) << "," << opt_num(r.solver_bound) << ","
       << opt_num(r.solver_seconds) << "," << error << "\n";
  }
  return os.str();
}

inline std::string records_to_json_summary(const std::vector<BenchRecord>& records) {
  nlohmann::ordered_json doc;
  doc["records"] = nlohmann::ordered_json::array();
  std::map<std::string, int> per_method_ok;
  for (const auto& r : records) {
    nlohmann::ordered_json jr;
    jr["instance"] = r.instance_id;
    jr["method"] = r.method;
    jr["continuous_vars"] = r.counts.continuous_vars;
    jr["binary_vars"] = r.counts.binary_vars;
    jr["disaggregated_vars"] = r.counts.disaggregated_vars;
    jr["linear_rows"] = r.counts.linear_rows;
    jr["quadratic_rows"] = r.counts.quadratic_rows;
    jr["rational_rows"] = r.counts.rational_rows;
    jr["polynomial_rows"] = r.counts.polynomial_rows;
    jr["quad_nonzeros"] = r.quad_nonzeros;
    jr["reform_seconds"] = r.reform_seconds;
    if (!std::isnan(r.tightness)) jr["tightness"] = r.tightness;
    jr["checks_passed"] = r.checks_passed;
    jr["checks_failed"] = r.checks_failed;
    if (r.solver_status)
      jr["solver_status"] = solve_status_name(*r.solver_status);
    if (r.solver_objective) jr["solver_objective"] = *r.solver_objective;
    if (r.solver_bound) jr["solver_bound"] = *r.solver_bound;
    if (r.solver_seconds) jr["solver_seconds"] = *r.solver_seconds;
    if (!r.error.empty()) jr["error"] = r.error;
    doc["records"].push_back(std::move(jr));
    if (r.error.empty() && r.checks_failed.empty()) ++per_method_ok[r.method];
  }
  doc["clean_records_per_method"] = per_method_ok;
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Performance profile

struct ProfilePoint {
  double time = 0.0;
  int solved = 0;
};

/// Cumulative instances-versus-time step function per method. When solver
/// objectives are present, a record whose objective exceeds the per-instance
/// best by more than 1e-4 relative without hitting the time limit is wrong
/// and excluded. The timing column is solver time when available,
/// reformulation time otherwise.
inline std::map<std::string, std::vector<ProfilePoint>> performance_profile(
    const std::vector<BenchRecord>& records, double time_limit) {
  std::map<std::string, double> best;
  bool have_objectives = false;
  for (const auto& r : records) {
    if (!r.solver_objective) continue;
    have_objectives = true;
    auto it = best.find(r.instance_id);
    if (it == best.end() || *r.solver_objective < it->second)
      best[r.instance_id] = *r.solver_objective;
  }
  auto is_wrong = [&](const BenchRecord& r) {
    if (!have_objectives || !r.solver_objective) return false;
    if (r.solver_status == SolveStatus::TimeLimit) return false;
    const double b = best.at(r.instance_id);
    const double scale = std::abs(b) > 1e-12 ? std::abs(b) : 1.0;
    return (*r.solver_objective - b) / scale > 1e-4;
  };

  std::map<std::string, std::vector<double>> times;
  for (const auto& r : records) {
    if (!r.error.empty()) continue;
    if (is_wrong(r)) continue;
    double t = r.reform_seconds;
    if (r.solver_seconds) {
      if (r.solver_status != SolveStatus::Optimal) continue;
      t = *r.solver_seconds;
    }
    if (t > time_limit) continue;
    times[r.method].push_back(t);
  }
  std::map<std::string, std::vector<ProfilePoint>> profile;
  for (auto& [method, ts] : times) {
    std::sort(ts.begin(), ts.end());
    std::vector<ProfilePoint> pts;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (!pts.empty() && pts.back().time == ts[i]) {
        pts.back().solved = static_cast<int>(i + 1);
      } else {
        pts.push_back({ts[i], static_cast<int>(i + 1)});
      }
    }
    profile[method] = std::move(pts);
  }
  return profile;
}

}  // namespace gdpq
