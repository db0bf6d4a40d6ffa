// Command-line front end: instance generation, reformulation, sampling-based
// verification, benchmarking, and the external-solver adapter.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include "gdpq/bench.hpp"
#include "gdpq/checks.hpp"
#include "gdpq/format.hpp"
#include "gdpq/gen.hpp"
#include "gdpq/instances.hpp"
#include "gdpq/io.hpp"
#include "gdpq/lp.hpp"
#include "gdpq/oracle.hpp"
#include "gdpq/reform.hpp"
#include "gdpq/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitExternalTool = 4;

struct ExitWith {
  int code;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("GDPQ_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      std::cerr << "warning: ignoring unparseable GDPQ_SEED '" << env << "'\n";
    }
  }
  return 0;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void emit_model(const gdpq::GdpModel& m, const std::string& path) {
  write_text(path, gdpq::write_model(m));
}

nlohmann::ordered_json report_to_json(const gdpq::TransformReport& report) {
  nlohmann::ordered_json j;
  j["counts"] = {{"continuous_vars", report.counts.continuous_vars},
                 {"binary_vars", report.counts.binary_vars},
                 {"disaggregated_vars", report.counts.disaggregated_vars},
                 {"linear_rows", report.counts.linear_rows},
                 {"quadratic_rows", report.counts.quadratic_rows},
                 {"rational_rows", report.counts.rational_rows},
                 {"polynomial_rows", report.counts.polynomial_rows}};
  j["provenance"] = report.provenance;
  j["warnings"] = report.warnings;
  return j;
}

void print_outcome(const std::string& name, const gdpq::VerifyOutcome& out) {
  if (out.ok) {
    std::cout << "[PASS] " << name << "\n";
  } else {
    std::cout << "[FAIL] " << name << ": " << out.detail << "\n";
    throw ExitWith{kExitCheckFailure};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gdpq: quadratic GDP modeling and reformulation toolkit"};
  app.require_subcommand(1);

  // --- generate ------------------------------------------------------------
  auto* generate = app.add_subcommand("generate", "Generate a GDP instance");
  generate->require_subcommand(1);
  std::string gen_output = "-";
  std::uint64_t seed = default_seed();

  auto* gen_random_cmd = generate->add_subcommand("random", "Random QCQP GDP");
  gdpq::RandomGdpParams random_params;
  random_params.seed = seed;
  gen_random_cmd->add_option("--n-dims", random_params.n_dims, "dimension n");
  gen_random_cmd->add_option("--disjunctions", random_params.n_disjunctions,
                             "number of disjunctions |K|");
  gen_random_cmd->add_option("--disjuncts", random_params.disjuncts_per,
                             "disjuncts per disjunction |D_k|");
  gen_random_cmd->add_option("--constraints", random_params.constraints_per,
                             "constraints per disjunct |J_ik|");
  gen_random_cmd->add_option("--feasible-points", random_params.n_feasible_points,
                             "points made feasible by construction");
  gen_random_cmd->add_flag("--convex", random_params.convex,
                           "shift every Q to be positive semidefinite");
  gen_random_cmd->add_option("--seed", random_params.seed, "RNG seed");
  gen_random_cmd->add_option("-o,--output", gen_output, "output path or -");
  gen_random_cmd->callback([&] {
    for (const auto& w : gdpq::param_warnings(random_params))
      std::cerr << "warning: " << w << "\n";
    emit_model(gdpq::gen_random(random_params), gen_output);
  });

  auto* gen_kmeans_cmd =
      generate->add_subcommand("kmeans", "k-means clustering GDP");
  gdpq::KmeansParams kmeans_params;
  kmeans_params.seed = seed;
  gen_kmeans_cmd->add_option("--points", kmeans_params.n_points, "|N|")
      ->required();
  gen_kmeans_cmd->add_option("--dims", kmeans_params.n_dims, "|D|")->required();
  gen_kmeans_cmd->add_option("--clusters", kmeans_params.clusters, "|K|")
      ->required();
  gen_kmeans_cmd->add_option("--seed", kmeans_params.seed, "RNG seed");
  gen_kmeans_cmd->add_option("-o,--output", gen_output, "output path or -");
  gen_kmeans_cmd->callback(
      [&] { emit_model(gdpq::gen_kmeans(kmeans_params), gen_output); });

  auto* gen_cstr_cmd = generate->add_subcommand("cstr", "CSTR network GDP");
  gdpq::CstrParams cstr_params;
  gen_cstr_cmd->add_option("--stages", cstr_params.stages, "N_T")->required();
  gen_cstr_cmd->add_option("--k-rate", cstr_params.k_rate, "rate constant");
  gen_cstr_cmd->add_option("-o,--output", gen_output, "output path or -");
  gen_cstr_cmd->callback(
      [&] { emit_model(gdpq::gen_cstr(cstr_params), gen_output); });

  auto* gen_clay_cmd =
      generate->add_subcommand("clay", "constrained layout GDP");
  std::string clay_instance_path;
  std::string clay_norm;
  gen_clay_cmd->add_option("--instance", clay_instance_path, "instance JSON")
      ->required();
  gen_clay_cmd->add_option("--norm", clay_norm, "objective norm: l1 or l2")
      ->check(CLI::IsMember({"l1", "l2"}));
  gen_clay_cmd->add_option("-o,--output", gen_output, "output path or -");
  gen_clay_cmd->callback([&] {
    gdpq::ClayInstance inst = gdpq::read_clay_instance_file(clay_instance_path);
    if (clay_norm == "l1") inst.norm = gdpq::ClayNorm::L1;
    if (clay_norm == "l2") inst.norm = gdpq::ClayNorm::L2;
    emit_model(gdpq::gen_clay(inst), gen_output);
  });

  // --- reformulate -----------------------------------------------------------
  auto* reformulate = app.add_subcommand(
      "reformulate", "Transform a GDP model into a MINLP");
  std::string reform_input;
  std::string reform_output = "-";
  std::string reform_method;
  std::string reform_format = "json";
  double reform_eps = 1e-4;
  bool reform_s3 = false;
  reformulate->add_option("model", reform_input, "GDP model JSON")->required();
  reformulate
      ->add_option("--method", reform_method,
                   "bigm | hull-eps | hull-exact | hull-poly | binary-mult")
      ->required()
      ->check(CLI::IsMember(
          {"bigm", "hull-eps", "hull-exact", "hull-poly", "binary-mult"}));
  reformulate->add_option("--eps", reform_eps,
                          "epsilon for hull-eps (default 1e-4)");
  reformulate->add_flag("--s3", reform_s3,
                        "emit the Glover-linearized convex rows (hull-exact)");
  reformulate->add_option("--format", reform_format, "json | lp")
      ->check(CLI::IsMember({"json", "lp"}));
  reformulate->add_option("-o,--output", reform_output, "output path or -");
  reformulate->callback([&] {
    if (reform_method == "hull-eps" && !(reform_eps > 0.0)) {
      std::cerr << "eps must be > 0\n";
      throw ExitWith{kExitUsage};
    }
    const auto doc = gdpq::read_model_file(reform_input);
    if (!doc.is_gdp()) {
      std::cerr << "input is not a GDP document\n";
      throw ExitWith{kExitUsage};
    }
    gdpq::ReformConfig cfg;
    cfg.method = *gdpq::parse_method(reform_method);
    cfg.eps = reform_eps;
    cfg.emit_s3 = reform_s3;
    auto [minlp, report] = gdpq::reformulate(doc.gdp(), cfg);
    std::cerr << report_to_json(report).dump(2) << "\n";
    if (reform_format == "lp") {
      write_text(reform_output, gdpq::export_lp(minlp));
    } else {
      write_text(reform_output, gdpq::write_model(minlp));
    }
  });

  // --- verify ----------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "Sampling-based correctness checks");
  verify->require_subcommand(1);
  long verify_samples = 10000;
  std::uint64_t verify_seed = default_seed();
  int verify_count = 0;

  auto* verify_prop1_cmd = verify->add_subcommand(
      "prop1", "closure row vs quadratic row equivalence");
  verify_prop1_cmd->add_option("--samples", verify_samples, "samples per body");
  verify_prop1_cmd->add_option("--seed", verify_seed, "RNG seed");
  verify_prop1_cmd->add_option("--count", verify_count,
                               "number of random quadratics (default 100)");
  verify_prop1_cmd->callback([&] {
    const int count = verify_count > 0 ? verify_count : 100;
    print_outcome("prop1",
                  gdpq::verify_prop1(count, verify_samples, verify_seed));
  });

  auto* verify_prop2_cmd = verify->add_subcommand(
      "prop2", "degree-preserving polynomial hull equivalence");
  verify_prop2_cmd->add_option("--samples", verify_samples, "samples per body");
  verify_prop2_cmd->add_option("--seed", verify_seed, "RNG seed");
  verify_prop2_cmd->add_option("--count", verify_count,
                               "polynomials per degree (default 20)");
  verify_prop2_cmd->callback([&] {
    const int count = verify_count > 0 ? verify_count : 20;
    print_outcome("prop2",
                  gdpq::verify_prop2(count, verify_samples, verify_seed));
  });

  auto* verify_bf_cmd = verify->add_subcommand(
      "binary-fix", "all transforms agree with the GDP at binary assignments");
  long verify_bf_samples = 1000;
  int verify_bf_instances = 5;
  verify_bf_cmd->add_option("--samples", verify_bf_samples, "x samples");
  verify_bf_cmd->add_option("--instances", verify_bf_instances,
                            "random instances");
  verify_bf_cmd->add_option("--seed", verify_seed, "RNG seed");
  verify_bf_cmd->callback([&] {
    print_outcome("binary-fix",
                  gdpq::verify_binary_fix(verify_bf_instances,
                                          verify_bf_samples, verify_seed));
  });

  auto* verify_cont_cmd = verify->add_subcommand(
      "containment", "eps-enlargement and hull-inside-bigm containments");
  int verify_cont_instances = 10;
  verify_cont_cmd->add_option("--samples", verify_samples, "samples per set");
  verify_cont_cmd->add_option("--instances", verify_cont_instances,
                              "instances per containment");
  verify_cont_cmd->add_option("--seed", verify_seed, "RNG seed");
  verify_cont_cmd->callback([&] {
    print_outcome("containment/eps-enlargement",
                  gdpq::verify_eps_enlargement(verify_cont_instances,
                                               verify_samples, verify_seed));
    print_outcome("containment/hull-in-bigm",
                  gdpq::verify_hull_in_bigm(verify_cont_instances,
                                            verify_samples / 10, verify_seed));
  });

  // --- bench -----------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "Run a benchmark suite manifest");
  std::string bench_manifest;
  std::string bench_csv = "-";
  std::string bench_summary;
  int bench_jobs = 1;
  bench->add_option("--manifest", bench_manifest, "suite manifest JSON")
      ->required();
  bench->add_option("-o,--output", bench_csv, "CSV output path or -");
  bench->add_option("--summary", bench_summary, "JSON summary output path");
  bench->add_option("--jobs", bench_jobs, "parallel records (default 1)");
  bench->callback([&] {
    const auto manifest = gdpq::read_manifest_file(bench_manifest);
    const auto records = gdpq::run_suite(manifest, bench_jobs);
    write_text(bench_csv, gdpq::records_to_csv(records));
    if (!bench_summary.empty())
      write_text(bench_summary, gdpq::records_to_json_summary(records));
    bool clean = true;
    for (const auto& r : records)
      clean = clean && r.error.empty() && r.checks_failed.empty();
    if (!clean) throw ExitWith{kExitCheckFailure};
  });

  // --- solve-external ----------------------------------------------------------
  auto* solve = app.add_subcommand(
      "solve-external", "Run a user-provided solver command on an export");
  std::string solve_model;
  gdpq::SolverRun solver_run;
  if (const char* env = std::getenv("GDPQ_SOLVER_CMD"))
    solver_run.command_template = env;
  solve->add_option("model", solve_model, "exported model file")->required();
  solve->add_option("--command", solver_run.command_template,
                    "command template; {file} is replaced by the model path "
                    "(default: GDPQ_SOLVER_CMD)");
  solve->add_option("--time-limit", solver_run.time_limit_seconds, "seconds");
  solve->add_option("--objective-pattern", solver_run.objective_pattern,
                    "regex with one capture group");
  solve->add_option("--bound-pattern", solver_run.bound_pattern,
                    "regex with one capture group");
  solve->callback([&] {
    if (solver_run.command_template.empty()) {
      std::cerr << "no solver command: pass --command or set GDPQ_SOLVER_CMD\n";
      throw ExitWith{kExitUsage};
    }
    const auto res = gdpq::run_external_solver(solve_model, solver_run);
    nlohmann::ordered_json j;
    j["status"] = gdpq::solve_status_name(res.status);
    if (res.objective) j["objective"] = *res.objective;
    if (res.bound) j["bound"] = *res.bound;
    j["wall_seconds"] = res.wall_seconds;
    if (!res.detail.empty()) j["detail"] = res.detail;
    std::cout << j.dump(2) << "\n";
    if (res.status == gdpq::SolveStatus::SpawnFailure ||
        res.status == gdpq::SolveStatus::ParseFailure)
      throw ExitWith{kExitExternalTool};
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const ExitWith& e) {
    return e.code;
  } catch (const gdpq::SchemaError& e) {
    std::cerr << "schema error at " << e.path << ": " << e.what() << "\n";
    return kExitIo;
  } catch (const gdpq::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
