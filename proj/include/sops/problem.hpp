#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sops/block_space.hpp"
#include "sops/operators.hpp"

namespace sops {

/// Full data of the structured inclusion problem: one operator family per
/// primal block i, three two-letter families per dual block k, the sparse
/// linear couplings L_{ki}, the coupling R, and the offsets s*, r.
/// Absent L entries are zero maps.
struct ProblemSpec {
  LayoutPtr h_layout;
  LayoutPtr g_layout;

  std::vector<std::shared_ptr<const ResolventOp>> A;     // per i
  std::vector<std::shared_ptr<const CocoerciveOp>> C;    // per i
  std::vector<std::shared_ptr<const LipMonotoneOp>> Q;   // per i
  std::shared_ptr<const CouplingOp> R;

  std::vector<std::shared_ptr<const ResolventOp>> Bm, Dm;    // per k
  std::vector<std::shared_ptr<const CocoerciveOp>> Bc, Dc;   // per k
  std::vector<std::shared_ptr<const LipMonotoneOp>> Bl, Dl;  // per k

  std::map<std::pair<int, int>, LinearOp> L;  // (k, i) -> map H_i -> G_k

  BlockVec sstar;  // over h_layout
  BlockVec r;      // over g_layout

  int n_primal() const { return h_layout->block_count(); }
  int n_dual() const { return g_layout->block_count(); }

  const LinearOp* coupling(int k, int i) const;

  // (sum_i L_{ki} x_i)_k over all k
  BlockVec apply_L(const BlockVec& x) const;
  // (sum_k L*_{ki} v_k)_i over all i
  BlockVec apply_L_adjoint(const BlockVec& v) const;
};

/// Primal-dual pair submitted to the Kuhn-Tucker residual.
struct KTCandidate {
  BlockVec x;      // over h_layout
  BlockVec vstar;  // over g_layout
};

// Every dimensional or constant-range violation, one message each;
// empty result means the solver may run.
std::vector<std::string> validate(const ProblemSpec& spec);

// throws std::invalid_argument listing the violations
void require_valid(const ProblemSpec& spec);

// min over all cocoercivity constants {alpha_i^c, beta_k^c, delta_k^c}
double alpha_min(const ProblemSpec& spec);

// Resolvent fixed-point residual of the Kuhn-Tucker inclusions at probe
// parameter gamma. The parallel-sum inclusion needs auxiliary (y, z) with
// y + z = Lx - r; when the caller has them (solver state) they are used,
// otherwise y is a single resolvent step from Lx - r and z its complement.
// Zero exactly on Kuhn-Tucker points extended with consistent (y, z).
double kt_residual(const ProblemSpec& spec, const KTCandidate& cand,
                   double gamma_probe);
double kt_residual(const ProblemSpec& spec, const KTCandidate& cand,
                   double gamma_probe, const BlockVec& y, const BlockVec& z);

}  // namespace sops
