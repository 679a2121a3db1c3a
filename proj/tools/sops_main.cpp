#include <cstdint>
#include <string>

#include "CLI11.hpp"
#include "sops/run_cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"asynchronous block-iterative saddle-operator splitting"};

  sops::RunConfig cfg;
  std::string policy, lag_policy;
  int P = 0, T = 0;
  std::uint64_t seed = 0;
  double sigma = 0, lambda = 0, eps_scale = 0;

  app.add_option("--problem", cfg.problem_path, "problem file (json)")
      ->required();
  app.add_option("--variant", cfg.variant, "weak|strong");
  auto* opt_policy =
      app.add_option("--policy", policy, "full|round_robin|random_covering");
  auto* opt_p = app.add_option("--P", P, "coverage window");
  auto* opt_t = app.add_option("--T", T, "max lag");
  auto* opt_seed = app.add_option("--seed", seed, "schedule seed");
  auto* opt_lag =
      app.add_option("--lag-policy", lag_policy, "zero|fixed|random");
  auto* opt_sigma = app.add_option("--sigma", sigma, "sigma override");
  auto* opt_lambda = app.add_option("--lambda", lambda, "relaxation");
  auto* opt_eps = app.add_option("--eps-scale", eps_scale, "eps scaling");
  app.add_option("--tol", cfg.tol, "stopping tolerance");
  app.add_option("--max-iter", cfg.max_iter, "iteration cap");
  app.add_option("--trace", cfg.trace_path, "trace csv path");
  app.add_option("--out", cfg.out_path, "solution file path");
  app.add_option("--record-every", cfg.record_every, "trace stride");

  CLI11_PARSE(app, argc, argv);

  if (opt_policy->count()) cfg.policy = policy;
  if (opt_p->count()) cfg.P = P;
  if (opt_t->count()) cfg.T = T;
  if (opt_seed->count()) cfg.seed = seed;
  if (opt_lag->count()) cfg.lag_policy = lag_policy;
  if (opt_sigma->count()) cfg.sigma = sigma;
  if (opt_lambda->count()) cfg.lambda = lambda;
  if (opt_eps->count()) cfg.eps_scale = eps_scale;

  return sops::run_cli(cfg);
}
