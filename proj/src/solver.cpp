#include "sops/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sops {

StepParams make_default_params(const ProblemSpec& spec,
                               std::optional<double> sigma,
                               std::optional<double> lambda,
                               double eps_scale) {
  require_valid(spec);
  StepParams p;
  p.alpha = alpha_min(spec);
  p.sigma = sigma.value_or(1.0 / (2.0 * p.alpha));
  if (!(p.sigma > 1.0 / (4.0 * p.alpha))) {
    throw std::invalid_argument("params: sigma must exceed 1/(4 alpha)");
  }
  const double chi = spec.R->chi();
  double max_den = 0.0;
  for (int i = 0; i < spec.n_primal(); ++i) {
    double den = spec.Q[i]->lip() + chi;
    p.gamma.push_back(1.0 / (den + p.sigma));
    max_den = std::max(max_den, den);
  }
  for (int k = 0; k < spec.n_dual(); ++k) {
    p.mu.push_back(1.0 / (spec.Bl[k]->lip() + p.sigma));
    p.nu.push_back(1.0 / (spec.Dl[k]->lip() + p.sigma));
    p.sig.push_back(1.0);
    max_den = std::max(max_den, std::max(spec.Bl[k]->lip(),
                                         spec.Dl[k]->lip()));
  }
  // cap at 0.2 so the default lambda = 1.8 stays inside [eps, 2 - eps]
  double base = 0.9 * std::min(1.0, 1.0 / (max_den + p.sigma));
  if (!(eps_scale > 0.0) || eps_scale > 1.0) {
    throw std::invalid_argument("params: eps_scale must lie in ]0, 1]");
  }
  p.eps = eps_scale * std::min(base, 0.2);
  p.lambda = lambda.value_or(1.8);
  auto bad = validate_params(spec, p);
  if (!bad.empty()) {
    std::string msg = "params: invalid overrides:";
    for (const auto& b : bad) msg += "\n  " + b;
    throw std::invalid_argument(msg);
  }
  return p;
}

std::vector<std::string> validate_params(const ProblemSpec& spec,
                                         const StepParams& p) {
  std::vector<std::string> out;
  double amin = alpha_min(spec);
  if (p.alpha != amin) {
    out.push_back("alpha != min cocoercivity constant");
  }
  if (!(p.sigma > 1.0 / (4.0 * amin))) {
    out.push_back("sigma must exceed 1/(4 alpha)");
  }
  if (!(p.eps > 0.0) || !(p.eps < 1.0)) {
    out.push_back("eps must lie in ]0, 1[");
  }
  const double chi = spec.R->chi();
  double max_den = 0.0;
  for (int i = 0; i < spec.n_primal(); ++i) {
    max_den = std::max(max_den, spec.Q[i]->lip() + chi);
  }
  for (int k = 0; k < spec.n_dual(); ++k) {
    max_den = std::max(max_den,
                       std::max(spec.Bl[k]->lip(), spec.Dl[k]->lip()));
  }
  if (!(1.0 / p.eps > max_den + p.sigma)) {
    out.push_back("1/eps must exceed every step-size denominator");
  }
  if (static_cast<int>(p.gamma.size()) != spec.n_primal()) {
    out.push_back("gamma: wrong length");
  } else {
    for (int i = 0; i < spec.n_primal(); ++i) {
      double hi = 1.0 / (spec.Q[i]->lip() + chi + p.sigma);
      if (!(p.gamma[i] >= p.eps && p.gamma[i] <= hi)) {
        out.push_back("gamma[" + std::to_string(i) + "] outside [eps, " +
                      std::to_string(hi) + "]");
      }
    }
  }
  auto check_dual = [&](const std::vector<double>& v, const char* name,
                        auto upper) {
    if (static_cast<int>(v.size()) != spec.n_dual()) {
      out.push_back(std::string(name) + ": wrong length");
      return;
    }
    for (int k = 0; k < spec.n_dual(); ++k) {
      double hi = upper(k);
      if (!(v[k] >= p.eps && v[k] <= hi)) {
        out.push_back(std::string(name) + "[" + std::to_string(k) +
                      "] outside [eps, " + std::to_string(hi) + "]");
      }
    }
  };
  check_dual(p.mu, "mu",
             [&](int k) { return 1.0 / (spec.Bl[k]->lip() + p.sigma); });
  check_dual(p.nu, "nu",
             [&](int k) { return 1.0 / (spec.Dl[k]->lip() + p.sigma); });
  check_dual(p.sig, "sig", [&](int) { return 1.0 / p.eps; });
  if (!(p.lambda >= p.eps && p.lambda <= 2.0 - p.eps)) {
    out.push_back("lambda outside [eps, 2 - eps]");
  }
  return out;
}

std::pair<double, double> xi_select(double delta, double tau, double varsigma,
                                    double chi) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("xi_select: delta must be positive");
  }
  if (!(tau > 0.0)) {
    throw std::invalid_argument("xi_select: tau must be positive");
  }
  if (varsigma < 0.0) {
    throw std::invalid_argument("xi_select: varsigma must be >= 0");
  }
  const double rho = tau * varsigma - chi * chi;
  if (rho == 0.0) {
    return {1.0, delta / tau};
  }
  if (chi * delta >= rho) {
    return {0.0, (delta + chi) / tau};
  }
  return {1.0 - chi * delta / rho, varsigma * delta / rho};
}

StateX haugazeau_project(const StateX& x0, const StateX& xn,
                         const StateX& tstar, double eta) {
  const double delta = inner(xn, tstar) - eta;
  if (!(delta > 0.0)) {
    throw std::invalid_argument("haugazeau_project: requires "
                                "<xn,tstar> - eta > 0");
  }
  const double tau = norm_sq(tstar);
  StateX diff = axpy(x0, -1.0, xn);
  const double varsigma = norm_sq(diff);
  const double chi = inner(diff, tstar);
  auto [kappa, lambda] = xi_select(delta, tau, varsigma, chi);
  StateX out = x0;
  out.x.data() = (1.0 - kappa) * x0.x.data() + kappa * xn.x.data() -
                 lambda * tstar.x.data();
  out.y.data() = (1.0 - kappa) * x0.y.data() + kappa * xn.y.data() -
                 lambda * tstar.y.data();
  out.z.data() = (1.0 - kappa) * x0.z.data() + kappa * xn.z.data() -
                 lambda * tstar.z.data();
  out.vstar.data() = (1.0 - kappa) * x0.vstar.data() +
                     kappa * xn.vstar.data() - lambda * tstar.vstar.data();
  return out;
}

Solver::Solver(ProblemSpec spec, Schedule schedule, StepParams params,
               StateX init, Variant variant)
    : spec_(std::move(spec)),
      schedule_(std::move(schedule)),
      params_(std::move(params)),
      variant_(variant),
      state_(std::move(init)),
      x0_(state_),
      history_(schedule_.T()) {
  require_valid(spec_);
  auto bad = validate_params(spec_, params_);
  if (!bad.empty()) {
    std::string msg = "solver: invalid params:";
    for (const auto& b : bad) msg += "\n  " + b;
    throw std::invalid_argument(msg);
  }
  require_same_layout(state_.x, spec_.sstar, "solver init x");
  require_same_layout(state_.y, spec_.r, "solver init y");
  require_same_layout(state_.z, spec_.r, "solver init z");
  require_same_layout(state_.vstar, spec_.r, "solver init vstar");
  auto [i0, k0] = schedule_.blocks_at(0);
  if (static_cast<int>(i0.size()) != spec_.n_primal() ||
      static_cast<int>(k0.size()) != spec_.n_dual()) {
    throw std::invalid_argument("solver: schedule must activate every "
                                "block at iteration 0");
  }

  rec_.a = BlockVec(spec_.h_layout);
  rec_.astar = BlockVec(spec_.h_layout);
  rec_.lstar = BlockVec(spec_.h_layout);
  rec_.xsnap = BlockVec(spec_.h_layout);
  rec_.pstar = BlockVec(spec_.h_layout);
  rec_.xi.assign(spec_.n_primal(), 0.0);
  rec_.b = BlockVec(spec_.g_layout);
  rec_.d = BlockVec(spec_.g_layout);
  rec_.estar = BlockVec(spec_.g_layout);
  rec_.qstar = BlockVec(spec_.g_layout);
  rec_.tstar = BlockVec(spec_.g_layout);
  rec_.e = BlockVec(spec_.g_layout);
  rec_.ysnap = BlockVec(spec_.g_layout);
  rec_.zsnap = BlockVec(spec_.g_layout);
  rec_.eta.assign(spec_.n_dual(), 0.0);
}

void Solver::compute_blocks(IterationRecord& rec) {
  const long n = n_;
  auto [active_i, active_k] = schedule_.blocks_at(n);
  rec.active_i = active_i;
  rec.active_k = active_k;

  for (int i : active_i) {
    const long m = schedule_.lag_primal(i, n);
    const StateX& sm = history_.get(m);
    Vec xm = sm.x.block(i);
    Vec lst = spec_.Q[i]->apply(xm);
    lst += spec_.R->apply(sm.x).block(i);
    for (int k = 0; k < spec_.n_dual(); ++k) {
      if (const LinearOp* l = spec_.coupling(k, i)) {
        lst += l->adjoint_apply(sm.vstar.block(k));
      }
    }
    const double g = params_.gamma[i];
    const double ginv = 1.0 / g;
    Vec drive = spec_.sstar.block(i) - lst - spec_.C[i]->apply(xm);
    Vec ai = spec_.A[i]->resolvent(g, xm + g * drive);
    rec.a.block(i) = ai;
    rec.astar.block(i) =
        ginv * (xm - ai) - lst + spec_.Q[i]->apply(ai);
    rec.lstar.block(i) = lst;
    rec.xi[i] = (ai - xm).squaredNorm();
    rec.xsnap.block(i) = xm;
  }

  for (int k : active_k) {
    const long m = schedule_.lag_dual(k, n);
    const StateX& sm = history_.get(m);
    Vec ym = sm.y.block(k);
    Vec zm = sm.z.block(k);
    Vec vm = sm.vstar.block(k);
    Vec ustar = vm - spec_.Bl[k]->apply(ym);
    Vec wstar = vm - spec_.Dl[k]->apply(zm);
    const double mu = params_.mu[k];
    const double nu = params_.nu[k];
    Vec bk = spec_.Bm[k]->resolvent(
        mu, ym + mu * (ustar - spec_.Bc[k]->apply(ym)));
    Vec dk = spec_.Dm[k]->resolvent(
        nu, zm + nu * (wstar - spec_.Dc[k]->apply(zm)));
    Vec lx = Vec::Zero(spec_.g_layout->dim(k));
    for (int i = 0; i < spec_.n_primal(); ++i) {
      if (const LinearOp* l = spec_.coupling(k, i)) {
        lx += l->apply(sm.x.block(i));
      }
    }
    Vec estar = params_.sig[k] * (lx - ym - zm - spec_.r.block(k)) + vm;
    rec.b.block(k) = bk;
    rec.d.block(k) = dk;
    rec.estar.block(k) = estar;
    rec.qstar.block(k) =
        (1.0 / mu) * (ym - bk) + ustar + spec_.Bl[k]->apply(bk) - estar;
    rec.tstar.block(k) =
        (1.0 / nu) * (zm - dk) + wstar + spec_.Dl[k]->apply(dk) - estar;
    rec.eta[k] = (bk - ym).squaredNorm() + (dk - zm).squaredNorm();
    rec.ysnap.block(k) = ym;
    rec.zsnap.block(k) = zm;
  }

  // e is refreshed for every k because a may have moved
  for (int k = 0; k < spec_.n_dual(); ++k) {
    Vec la = Vec::Zero(spec_.g_layout->dim(k));
    for (int i = 0; i < spec_.n_primal(); ++i) {
      if (const LinearOp* l = spec_.coupling(k, i)) {
        la += l->apply(rec.a.block(i));
      }
    }
    rec.e.block(k) = spec_.r.block(k) + rec.b.block(k) + rec.d.block(k) - la;
  }

  BlockVec ra = spec_.R->apply(rec.a);
  for (int i = 0; i < spec_.n_primal(); ++i) {
    Vec p = rec.astar.block(i);
    p += ra.block(i);
    for (int k = 0; k < spec_.n_dual(); ++k) {
      if (const LinearOp* l = spec_.coupling(k, i)) {
        p += l->adjoint_apply(rec.estar.block(k));
      }
    }
    rec.pstar.block(i) = p;
  }

  double quad = 0.0;
  for (int i = 0; i < spec_.n_primal(); ++i) quad += rec.xi[i];
  for (int k = 0; k < spec_.n_dual(); ++k) quad += rec.eta[k];
  double delta = -quad / (4.0 * params_.alpha);
  for (int i = 0; i < spec_.n_primal(); ++i) {
    delta += (state_.x.block(i) - rec.a.block(i)).dot(rec.pstar.block(i));
  }
  for (int k = 0; k < spec_.n_dual(); ++k) {
    delta += (state_.y.block(k) - rec.b.block(k)).dot(rec.qstar.block(k));
    delta += (state_.z.block(k) - rec.d.block(k)).dot(rec.tstar.block(k));
    delta += rec.e.block(k).dot(state_.vstar.block(k) - rec.estar.block(k));
  }
  rec.delta = delta;

  // diagnostics against the pre-update state
  double gx = 0, gy = 0, gz = 0, gv = 0, lg = 0;
  for (int i = 0; i < spec_.n_primal(); ++i) {
    gx = std::max(gx, (state_.x.block(i) - rec.a.block(i)).norm());
    lg = std::max(lg, (rec.xsnap.block(i) - state_.x.block(i)).norm());
  }
  for (int k = 0; k < spec_.n_dual(); ++k) {
    gy = std::max(gy, (state_.y.block(k) - rec.b.block(k)).norm());
    gz = std::max(gz, (state_.z.block(k) - rec.d.block(k)).norm());
    gv = std::max(gv,
                  (state_.vstar.block(k) - rec.estar.block(k)).norm());
    lg = std::max(lg, (rec.ysnap.block(k) - state_.y.block(k)).norm());
    lg = std::max(lg, (rec.zsnap.block(k) - state_.z.block(k)).norm());
  }
  rec.gap_x = gx;
  rec.gap_y = gy;
  rec.gap_z = gz;
  rec.gap_v = gv;
  rec.lag_gap = lg;
}

void Solver::step() {
  history_.push(n_, state_);
  IterationRecord rec = rec_;  // carried values for inactive blocks
  compute_blocks(rec);

  rec.theta = 0.0;
  rec.kappa = 1.0;
  rec.lambda = 0.0;
  rec.moved = false;
  if (rec.delta > 0.0) {
    double tau = 0.0;
    for (int i = 0; i < spec_.n_primal(); ++i) {
      tau += rec.pstar.block(i).squaredNorm();
    }
    for (int k = 0; k < spec_.n_dual(); ++k) {
      tau += rec.qstar.block(k).squaredNorm();
      tau += rec.tstar.block(k).squaredNorm();
      tau += rec.e.block(k).squaredNorm();
    }
    if (!(tau > 0.0)) {
      throw std::logic_error("solver: delta > 0 with a zero direction; "
                             "the problem data violate the outer "
                             "approximation premise");
    }
    rec.tau = tau;
    if (variant_ == Variant::kWeak) {
      const double theta = params_.lambda * rec.delta / tau;
      rec.theta = theta;
      state_.x.data() -= theta * rec.pstar.data();
      state_.y.data() -= theta * rec.qstar.data();
      state_.z.data() -= theta * rec.tstar.data();
      state_.vstar.data() -= theta * rec.e.data();
    } else {
      double varsigma = 0.0;
      for (int i = 0; i < spec_.n_primal(); ++i) {
        varsigma += (x0_.x.block(i) - state_.x.block(i)).squaredNorm();
      }
      for (int k = 0; k < spec_.n_dual(); ++k) {
        varsigma += (x0_.y.block(k) - state_.y.block(k)).squaredNorm();
        varsigma += (x0_.z.block(k) - state_.z.block(k)).squaredNorm();
        varsigma +=
            (x0_.vstar.block(k) - state_.vstar.block(k)).squaredNorm();
      }
      double chi = 0.0;
      for (int i = 0; i < spec_.n_primal(); ++i) {
        chi += (x0_.x.block(i) - state_.x.block(i)).dot(rec.pstar.block(i));
      }
      for (int k = 0; k < spec_.n_dual(); ++k) {
        chi += (x0_.y.block(k) - state_.y.block(k)).dot(rec.qstar.block(k));
        chi += (x0_.z.block(k) - state_.z.block(k)).dot(rec.tstar.block(k));
        chi += rec.e.block(k).dot(x0_.vstar.block(k) -
                                  state_.vstar.block(k));
      }
      rec.varsigma = varsigma;
      rec.chi = chi;
      auto [kappa, lambda] = xi_select(rec.delta, tau, varsigma, chi);
      rec.kappa = kappa;
      rec.lambda = lambda;
      state_.x.data() = (1.0 - kappa) * x0_.x.data() +
                        kappa * state_.x.data() - lambda * rec.pstar.data();
      state_.y.data() = (1.0 - kappa) * x0_.y.data() +
                        kappa * state_.y.data() - lambda * rec.qstar.data();
      state_.z.data() = (1.0 - kappa) * x0_.z.data() +
                        kappa * state_.z.data() - lambda * rec.tstar.data();
      state_.vstar.data() = (1.0 - kappa) * x0_.vstar.data() +
                            kappa * state_.vstar.data() -
                            lambda * rec.e.data();
    }
    rec.moved = true;
  }
  rec_ = std::move(rec);
  ++n_;
}

GraphPoint Solver::graph_point() const {
  GraphPoint gp;
  gp.p.x = rec_.a;
  gp.p.y = rec_.b;
  gp.p.z = rec_.d;
  gp.p.vstar = rec_.estar;
  StateX t;
  t.x = rec_.pstar;
  t.y = rec_.qstar;
  t.z = rec_.tstar;
  t.vstar = rec_.e;
  gp.pstar = axpy(t, -1.0, apply_C(spec_, cut_reference()));
  return gp;
}

StateX Solver::cut_reference() const {
  StateX q;
  q.x = rec_.xsnap;
  q.y = rec_.ysnap;
  q.z = rec_.zsnap;
  q.vstar = rec_.estar;
  return q;
}

SolveReport Solver::run(const StopRule& stop, long record_every) {
  if (record_every < 1) {
    throw std::invalid_argument("run: record_every must be >= 1");
  }
  SolveReport report;
  std::string reason = "max_iter";
  long used = 0;
  for (long it = 0; it < stop.max_iter; ++it) {
    step();
    used = it + 1;
    double kt = kt_residual(spec_, {state_.x, state_.vstar}, 1.0, state_.y,
                            state_.z);
    double sr = saddle_residual(spec_, state_, 1.0);
    bool done = false;
    if (kt < stop.tol) {
      reason = "kt_tol";
      done = true;
    } else if (sr < stop.tol) {
      reason = "saddle_tol";
      done = true;
    } else if (it + 1 == stop.max_iter) {
      done = true;
    }
    if (it % record_every == 0 || done) {
      TraceRow row;
      row.n = it;
      row.delta = rec_.delta;
      row.theta = rec_.theta;
      row.kappa = rec_.kappa;
      row.lambda = rec_.lambda;
      row.kt_res = kt;
      row.saddle_res = sr;
      row.active_i = rec_.active_i;
      row.active_k = rec_.active_k;
      report.trace.push_back(std::move(row));
    }
    if (done) {
      report.final_kt = kt;
      report.final_saddle = sr;
      break;
    }
  }
  report.state = state_;
  report.iterations = used;
  report.stop_reason = reason;
  return report;
}

}  // namespace sops
