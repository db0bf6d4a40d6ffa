#pragma once

#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <thread>

namespace gdpq {

enum class SolveStatus {
  Optimal,
  FeasibleLimit,
  TimeLimit,
  Infeasible,
  Unbounded,
  SpawnFailure,
  ParseFailure,
};

inline const char* solve_status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::FeasibleLimit: return "feasible-limit";
    case SolveStatus::TimeLimit: return "time-limit";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::SpawnFailure: return "spawn-failure";
    case SolveStatus::ParseFailure: return "parse-failure";
  }
  return "?";
}

/// External-solver adapter configuration. The command template is run through
/// /bin/sh with "{file}" replaced by the exported model path; stdout+stderr
/// are captured and parsed with the regular expressions below (capture group
/// 1 carries the number).
struct SolverRun {
  std::string command_template;
  double time_limit_seconds = 60.0;
  double optimality_tolerance = 1e-6;  // recorded run parameter
  std::string objective_pattern =
      R"((?:objective|obj)\s*(?:value)?\s*[:=]?\s*([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?))";
  std::string bound_pattern =
      R"((?:bound|dual)\s*[:=]?\s*([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?))";
};

struct SolveResult {
  SolveStatus status = SolveStatus::ParseFailure;
  std::optional<double> objective;
  std::optional<double> bound;
  double wall_seconds = 0.0;
  std::string detail;  // offending line on parse failure, signal info, ...
};

namespace solver_detail {

inline std::optional<double> search_number(const std::string& log,
                                           const std::string& pattern) {
  const std::regex re(pattern, std::regex::icase);
  std::smatch match;
  if (std::regex_search(log, match, re) && match.size() >= 2)
    return std::stod(match[1].str());
  return std::nullopt;
}

inline std::optional<SolveStatus> search_status(const std::string& log) {
  auto contains = [&](const char* pattern) {
    return std::regex_search(log, std::regex(pattern, std::regex::icase));
  };
  // "infeasible" must be probed before "feasible".
  if (contains("time[ _-]?limit|timeout")) return SolveStatus::TimeLimit;
  if (contains("infeasible")) return SolveStatus::Infeasible;
  if (contains("unbounded")) return SolveStatus::Unbounded;
  if (contains("optimal")) return SolveStatus::Optimal;
  if (contains("feasible")) return SolveStatus::FeasibleLimit;
  return std::nullopt;
}

inline std::string first_line(const std::string& log) {
  std::istringstream in(log);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) return line;
  return "<empty log>";
}

}  // namespace solver_detail

/// Runs the adapter command on an exported model file and parses the log.
/// Absence of a recognizable solution is never interpreted as optimality.
inline SolveResult run_external_solver(const std::string& model_path,
                                       const SolverRun& run) {
  SolveResult result;
  std::string cmd = run.command_template;
  const std::string placeholder = "{file}";
  if (auto pos = cmd.find(placeholder); pos != std::string::npos) {
    while ((pos = cmd.find(placeholder)) != std::string::npos)
      cmd.replace(pos, placeholder.size(), model_path);
  } else {
    cmd += " " + model_path;
  }
  const std::string log_path =
      (std::filesystem::temp_directory_path() /
       ("gdpq_solver_" + std::to_string(::getpid()) + "_" +
        std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()) +
        ".log"))
          .string();
  cmd = "{ " + cmd + " ; } > " + log_path + " 2>&1";  // group: capture all stages

  const auto started = std::chrono::steady_clock::now();
  const pid_t pid = ::fork();
  if (pid < 0) {
    result.status = SolveStatus::SpawnFailure;
    result.detail = "fork failed";
    return result;
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }

  bool timed_out = false;
  int wait_status = 0;
  const auto deadline =
      started + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(run.time_limit_seconds));
  for (;;) {
    const pid_t done = ::waitpid(pid, &wait_status, WNOHANG);
    if (done == pid) break;
    if (done < 0) {
      result.status = SolveStatus::SpawnFailure;
      result.detail = "waitpid failed";
      return result;
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &wait_status, 0);
      timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();

  std::string log;
  {
    std::ifstream in(log_path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    log = buf.str();
  }
  std::error_code ec;
  std::filesystem::remove(log_path, ec);

  if (!timed_out && WIFEXITED(wait_status) && WEXITSTATUS(wait_status) == 127) {
    result.status = SolveStatus::SpawnFailure;
    result.detail = solver_detail::first_line(log);
    return result;
  }

  result.bound = solver_detail::search_number(log, run.bound_pattern);
  result.objective = solver_detail::search_number(log, run.objective_pattern);

  if (timed_out) {
    result.status = SolveStatus::TimeLimit;
  } else if (auto status = solver_detail::search_status(log)) {
    result.status = *status;
  } else {
    result.status = SolveStatus::ParseFailure;
    result.detail = solver_detail::first_line(log);
  }
  // Objective values are trusted only for conclusive statuses.
  if (result.status != SolveStatus::Optimal &&
      result.status != SolveStatus::FeasibleLimit)
    result.objective.reset();
  if (result.status == SolveStatus::ParseFailure ||
      result.status == SolveStatus::SpawnFailure)
    result.bound.reset();
  return result;
}

}  // namespace gdpq
