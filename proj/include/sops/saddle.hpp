#pragma once

#include "sops/block_space.hpp"
#include "sops/problem.hpp"

namespace sops {

/// A point of the graph of the set-valued part M of the saddle operator,
/// as produced by the solver's resolvent steps (never by forward
/// evaluation of M).
struct GraphPoint {
  StateX p;
  StateX pstar;
};

/// Outer half-space {s : <s, tstar> <= eta} containing every zero of the
/// saddle operator when built from a graph point of M.
struct HalfSpaceCut {
  StateX tstar;
  double eta = 0.0;

  double delta_at(const StateX& s) const { return inner(s, tstar) - eta; }
};

// cocoercive part of the saddle operator:
// (C_i x_i, B_k^c y_k, D_k^c z_k, 0)
StateX apply_C(const ProblemSpec& spec, const StateX& state);

// tstar = pstar + C(q); eta = (4 alpha)^{-1} ||p - q||^2 + <p, tstar>
HalfSpaceCut build_cut(const ProblemSpec& spec, const GraphPoint& gp,
                       const StateX& q, double alpha);

// Resolvent fixed-point residual of 0 in S(state): per-row resolvent
// residuals for the A/B/D rows plus || r - Lx + y + z || for the last
// row. Zero exactly at zeros of the saddle operator.
double saddle_residual(const ProblemSpec& spec, const StateX& state,
                       double gamma_probe);

}  // namespace sops
