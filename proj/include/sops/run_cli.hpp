#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sops/solver.hpp"

namespace sops {

/// One batch run: problem file in, trace CSV and solution file out.
/// Command-line values override the file's schedule/params sections.
struct RunConfig {
  std::string problem_path;
  std::string variant = "weak";
  std::optional<std::string> policy;
  std::optional<int> P;
  std::optional<int> T;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> lag_policy;
  std::optional<double> sigma;
  std::optional<double> lambda;
  std::optional<double> eps_scale;
  double tol = 1e-8;
  long max_iter = 100000;
  std::string trace_path;
  std::string out_path;
  long record_every = 1;
};

// exit status: 0 tolerance reached, 2 iteration cap, 1 input/io error
int run_cli(const RunConfig& cfg);

// fixed-header CSV, 17 significant digits per real
void write_trace_csv(const std::string& path, const SolveReport& report);

void write_solution_file(const std::string& path, const ProblemSpec& spec,
                         const SolveReport& report);

}  // namespace sops
