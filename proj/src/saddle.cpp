#include "sops/saddle.hpp"

#include <stdexcept>

namespace sops {

StateX apply_C(const ProblemSpec& spec, const StateX& state) {
  require_same_layout(state.x, spec.sstar, "apply_C x");
  require_same_layout(state.y, spec.r, "apply_C y");
  StateX out = StateX::zero(spec.h_layout, spec.g_layout);
  for (int i = 0; i < spec.n_primal(); ++i) {
    out.x.block(i) = spec.C[i]->apply(state.x.block(i));
  }
  for (int k = 0; k < spec.n_dual(); ++k) {
    out.y.block(k) = spec.Bc[k]->apply(state.y.block(k));
    out.z.block(k) = spec.Dc[k]->apply(state.z.block(k));
  }
  // vstar slot of the cocoercive part is identically zero
  return out;
}

HalfSpaceCut build_cut(const ProblemSpec& spec, const GraphPoint& gp,
                       const StateX& q, double alpha) {
  if (!(alpha > 0)) {
    throw std::invalid_argument("build_cut: alpha must be positive");
  }
  HalfSpaceCut cut;
  cut.tstar = axpy(gp.pstar, 1.0, apply_C(spec, q));
  StateX pq = axpy(gp.p, -1.0, q);
  cut.eta = norm_sq(pq) / (4.0 * alpha) + inner(gp.p, cut.tstar);
  return cut;
}

double saddle_residual(const ProblemSpec& spec, const StateX& state,
                       double gamma_probe) {
  if (!(gamma_probe > 0)) {
    throw std::invalid_argument(
        "saddle_residual: gamma_probe must be positive");
  }
  require_same_layout(state.x, spec.sstar, "saddle_residual x");
  require_same_layout(state.y, spec.r, "saddle_residual y");

  const double g = gamma_probe;
  BlockVec lt = spec.apply_L_adjoint(state.vstar);
  BlockVec rx = spec.R->apply(state.x);
  double total = 0.0;
  for (int i = 0; i < spec.n_primal(); ++i) {
    Vec xi = state.x.block(i);
    Vec drive = spec.sstar.block(i) - spec.C[i]->apply(xi) -
                spec.Q[i]->apply(xi) - rx.block(i) - lt.block(i);
    total += (xi - spec.A[i]->resolvent(g, xi + g * drive)).norm();
  }
  for (int k = 0; k < spec.n_dual(); ++k) {
    Vec yk = state.y.block(k);
    Vec zk = state.z.block(k);
    Vec vk = state.vstar.block(k);
    Vec by = yk + g * (vk - spec.Bc[k]->apply(yk) - spec.Bl[k]->apply(yk));
    total += (yk - spec.Bm[k]->resolvent(g, by)).norm();
    Vec dz = zk + g * (vk - spec.Dc[k]->apply(zk) - spec.Dl[k]->apply(zk));
    total += (zk - spec.Dm[k]->resolvent(g, dz)).norm();
  }
  BlockVec lx = spec.apply_L(state.x);
  total += (spec.r.data() - lx.data() + state.y.data() + state.z.data())
               .norm();
  return total;
}

}  // namespace sops
