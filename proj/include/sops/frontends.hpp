#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "sops/operators.hpp"
#include "sops/problem.hpp"

namespace sops {

/// Variational inequality over a transformed intersection: find ybar in
/// sum_i L_i(E_i cap F_i) with <ybar - y, B ybar> <= 0 for all such y,
/// where B = Bm + Bc + Bl acts on the image space.
struct VISpec {
  LayoutPtr h_layout;             // one block per i
  std::vector<Descriptor> E, F;   // projection descriptors per i
  std::vector<LinearOp> L;        // H_i -> G, per i
  int g_dim = 0;
  std::shared_ptr<const ResolventOp> Bm;
  std::shared_ptr<const CocoerciveOp> Bc;   // carries beta^c
  std::shared_ptr<const LipMonotoneOp> Bl;  // carries beta^l
};

struct MinPrimalBlock {
  std::string label;
  int dim = 0;
  std::shared_ptr<const ResolventOp> f;     // prox of f_i
  std::shared_ptr<const CocoerciveOp> phi;  // gradient of phi_i
};

struct MinDualBlock {
  std::string label;
  int dim = 0;
  std::shared_ptr<const ResolventOp> g;     // prox of g_k
  std::shared_ptr<const CocoerciveOp> psi;  // gradient of psi_k
  std::shared_ptr<const ResolventOp> h;     // prox of h_k
};

/// Composite multivariate minimization:
/// min Theta(x) + sum_i (f_i + phi_i)(x_i)
///            + sum_k ((g_k + psi_k) box h_k)(sum_j L_kj x_j)
struct MinSpec {
  std::vector<MinPrimalBlock> primal;
  std::vector<MinDualBlock> dual;
  std::map<std::pair<int, int>, LinearOp> L;  // (k, i)
  std::shared_ptr<const CouplingOp> theta;    // nullptr means zero
};

// Embedding with K = I + one aggregate block: A_i = N_{E_i}, dual blocks
// carry N_{F_k} for k in I and the B operators on the aggregate block,
// D_k^m = {0}^{-1} throughout, identity/zero/L_i coupling pattern. The
// designated zero cocoercive slots carry beta^c so the embedded problem
// keeps alpha = beta^c.
ProblemSpec vi_to_problem(const VISpec& vi);

// A_i = prox-backed subdifferential of f_i, C_i = grad phi_i, R = grad
// Theta, B_k^m = prox g_k, B_k^c = grad psi_k, D_k^m = prox h_k; the
// designated zero slots D_k^c carry beta_k.
ProblemSpec min_to_problem(const MinSpec& m);

}  // namespace sops
