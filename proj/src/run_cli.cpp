#include "sops/run_cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "sops/problem_io.hpp"

namespace sops {

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string join_indices(const std::vector<int>& v) {
  std::string out;
  for (size_t j = 0; j < v.size(); ++j) {
    if (j) out += ';';
    out += std::to_string(v[j]);
  }
  return out;
}

}  // namespace

void write_trace_csv(const std::string& path, const SolveReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open trace file '" + path + "'");
  out << "n,delta,theta_or_kappa_lambda,kt_residual,saddle_residual,"
         "active_I,active_K\n";
  for (const auto& row : report.trace) {
    std::string step = row.lambda != 0.0 && row.theta == 0.0
                           ? fmt17(row.kappa) + ";" + fmt17(row.lambda)
                           : fmt17(row.theta);
    out << row.n << ',' << fmt17(row.delta) << ',' << step << ','
        << fmt17(row.kt_res) << ',' << fmt17(row.saddle_res) << ','
        << join_indices(row.active_i) << ',' << join_indices(row.active_k)
        << '\n';
  }
}

void write_solution_file(const std::string& path, const ProblemSpec& spec,
                         const SolveReport& report) {
  nlohmann::json j;
  j["stop_reason"] = report.stop_reason;
  j["iterations"] = report.iterations;
  j["kt_residual"] = report.final_kt;
  j["saddle_residual"] = report.final_saddle;
  auto emit = [](const BlockVec& v, const SpaceLayout& l) {
    nlohmann::json out;
    for (int b = 0; b < l.block_count(); ++b) {
      nlohmann::json arr = nlohmann::json::array();
      Vec blk = v.block(b);
      for (int c = 0; c < blk.size(); ++c) arr.push_back(blk[c]);
      out[l.label(b)] = arr;
    }
    return out;
  };
  j["x"] = emit(report.state.x, *spec.h_layout);
  j["y"] = emit(report.state.y, *spec.g_layout);
  j["z"] = emit(report.state.z, *spec.g_layout);
  j["vstar"] = emit(report.state.vstar, *spec.g_layout);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open solution file '" + path + "'");
  }
  out << j.dump(2) << '\n';
}

int run_cli(const RunConfig& cfg) {
  try {
    if (!(cfg.tol > 0)) throw std::invalid_argument("tol must be > 0");
    if (cfg.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    if (cfg.record_every < 1) {
      throw std::invalid_argument("record_every must be >= 1");
    }
    if (cfg.variant != "weak" && cfg.variant != "strong") {
      throw std::invalid_argument("variant must be weak or strong");
    }

    ParsedProblem parsed = parse_problem_file(cfg.problem_path);
    ProblemSpec spec = parsed.to_spec();
    require_valid(spec);

    ScheduleConfig sc = parsed.schedule;
    if (cfg.policy) sc.policy = block_policy_from_string(*cfg.policy);
    if (cfg.P) sc.P = *cfg.P;
    if (cfg.T) sc.T = *cfg.T;
    if (cfg.seed) sc.seed = *cfg.seed;
    if (cfg.lag_policy) sc.lag_policy = lag_policy_from_string(*cfg.lag_policy);
    Schedule schedule(sc, spec.n_primal(), spec.n_dual());

    std::optional<double> sigma = cfg.sigma ? cfg.sigma : parsed.sigma;
    std::optional<double> lambda = cfg.lambda ? cfg.lambda : parsed.lambda;
    double eps_scale = cfg.eps_scale.value_or(parsed.eps_scale);
    StepParams params = make_default_params(spec, sigma, lambda, eps_scale);

    StateX init = StateX::zero(spec.h_layout, spec.g_layout);
    Variant variant =
        cfg.variant == "weak" ? Variant::kWeak : Variant::kStrong;
    Solver solver(spec, schedule, params, init, variant);
    StopRule stop{cfg.tol, cfg.max_iter};
    SolveReport report = solver.run(stop, cfg.record_every);

    if (!cfg.trace_path.empty()) write_trace_csv(cfg.trace_path, report);
    if (!cfg.out_path.empty()) {
      write_solution_file(cfg.out_path, spec, report);
    }
    std::cerr << "stop: " << report.stop_reason << " after "
              << report.iterations << " iterations, kt_residual "
              << report.final_kt << "\n";
    return report.stop_reason == "max_iter" ? 2 : 0;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace sops
