#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sops/block_space.hpp"
#include "sops/problem.hpp"
#include "sops/saddle.hpp"
#include "sops/schedule.hpp"

namespace sops {

/// Scaling parameters of one run. Step sizes are per-block constants
/// chosen inside the admissible ranges
///   gamma_i in [eps, 1/(lip(Q_i)+chi+sigma)]
///   mu_k    in [eps, 1/(lip(B_k^l)+sigma)]
///   nu_k    in [eps, 1/(lip(D_k^l)+sigma)]
///   sig_k   in [eps, 1/eps],  lambda in [eps, 2-eps]
/// with sigma > 1/(4 alpha) and 1/eps above every range denominator.
struct StepParams {
  double alpha = 0.0;  // min cocoercivity constant
  double sigma = 0.0;
  double eps = 0.0;
  double lambda = 1.8;
  std::vector<double> gamma;       // per i
  std::vector<double> mu, nu, sig;  // per k
};

// Aggressive admissible defaults: sigma = 1/(2 alpha), step sizes at
// their upper bounds, sig_k = 1, lambda = 1.8. eps is scaled down when
// needed to keep lambda = 1.8 admissible.
StepParams make_default_params(const ProblemSpec& spec,
                               std::optional<double> sigma = std::nullopt,
                               std::optional<double> lambda = std::nullopt,
                               double eps_scale = 1.0);

std::vector<std::string> validate_params(const ProblemSpec& spec,
                                         const StepParams& p);

/// Per-iteration working data. Values of inactive blocks are carried from
/// the previous record; e is recomputed for every k each iteration.
struct IterationRecord {
  BlockVec a, astar, lstar, xsnap, pstar;  // primal layout
  std::vector<double> xi;
  BlockVec b, d, estar, qstar, tstar, e, ysnap, zsnap;  // dual layout
  std::vector<double> eta;
  std::vector<int> active_i, active_k;
  double delta = 0.0;
  double theta = 0.0;  // weak step length (0 when the state is held)
  double tau = 0.0, varsigma = 0.0, chi = 0.0;  // strong variant
  double kappa = 1.0, lambda = 0.0;
  bool moved = false;
  // diagnostics against the pre-update state
  double gap_x = 0, gap_y = 0, gap_z = 0, gap_v = 0, lag_gap = 0;
};

enum class Variant { kWeak, kStrong };

struct StopRule {
  double tol = 1e-8;
  long max_iter = 100000;
};

struct TraceRow {
  long n = 0;
  double delta = 0, theta = 0, kappa = 1, lambda = 0;
  double kt_res = 0, saddle_res = 0;
  std::vector<int> active_i, active_k;
};

struct SolveReport {
  StateX state;
  long iterations = 0;
  std::string stop_reason;  // "kt_tol" | "saddle_tol" | "max_iter"
  double final_kt = 0, final_saddle = 0;
  std::vector<TraceRow> trace;
};

// The three exact branches, rho = tau*varsigma - chi^2:
//   rho == 0                -> (1, delta/tau)
//   rho != 0, chi*delta>=rho -> (0, (delta+chi)/tau)
//   rho != 0, chi*delta<rho  -> (1 - chi*delta/rho, varsigma*delta/rho)
std::pair<double, double> xi_select(double delta, double tau, double varsigma,
                                    double chi);

// Exact projection of x0 onto H intersect G, H = {s : <s,tstar> <= eta},
// G = {s : <s - xn, x0 - xn> <= 0}; requires <xn,tstar> - eta > 0.
StateX haugazeau_project(const StateX& x0, const StateX& xn,
                         const StateX& tstar, double eta);

/// One-step driver over a validated problem. Blocks active at iteration n
/// are evaluated from immutable lagged snapshots and merged before the
/// delta reduction; reductions run in a fixed block order, so a given
/// (spec, schedule, params, init) replays bitwise.
class Solver {
 public:
  Solver(ProblemSpec spec, Schedule schedule, StepParams params, StateX init,
         Variant variant);

  void step();

  long n() const { return n_; }
  const StateX& state() const { return state_; }
  const StateX& anchor() const { return x0_; }
  const IterationRecord& record() const { return rec_; }
  const ProblemSpec& spec() const { return spec_; }
  const StepParams& params() const { return params_; }

  // graph point (p, p*) of the set-valued part realized by the last step,
  // and the point q where the cocoercive part was evaluated
  GraphPoint graph_point() const;
  StateX cut_reference() const;

  SolveReport run(const StopRule& stop, long record_every = 1);

 private:
  void compute_blocks(IterationRecord& rec);

  ProblemSpec spec_;
  Schedule schedule_;
  StepParams params_;
  Variant variant_;
  StateX state_;
  StateX x0_;
  HistoryBuffer history_;
  IterationRecord rec_;
  long n_ = 0;
};

}  // namespace sops
