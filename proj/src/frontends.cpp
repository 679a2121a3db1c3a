#include "sops/frontends.hpp"

#include <set>
#include <stdexcept>

namespace sops {

namespace {

void require_projection_kind(const Descriptor& d, const char* which) {
  if (d.kind != "normal_cone_box" && d.kind != "normal_cone_affine" &&
      d.kind != "normal_cone_halfspace") {
    throw std::invalid_argument(std::string(which) +
                                ": expected a projection descriptor, got '" +
                                d.kind + "'");
  }
}

Descriptor zero_cocoercive(double alpha) {
  Descriptor d;
  d.kind = "zero";
  d.alpha = alpha;
  return d;
}

Descriptor plain(const char* kind) {
  Descriptor d;
  d.kind = kind;
  return d;
}

}  // namespace

ProblemSpec vi_to_problem(const VISpec& vi) {
  if (!vi.h_layout) throw std::invalid_argument("vi_to_problem: no layout");
  const int ni = vi.h_layout->block_count();
  if (static_cast<int>(vi.E.size()) != ni ||
      static_cast<int>(vi.F.size()) != ni ||
      static_cast<int>(vi.L.size()) != ni) {
    throw std::invalid_argument("vi_to_problem: per-block lists must match "
                                "the layout");
  }
  if (!vi.Bm || !vi.Bc || !vi.Bl) {
    throw std::invalid_argument("vi_to_problem: missing B operators");
  }
  if (vi.Bm->dim() != vi.g_dim || vi.Bc->dim() != vi.g_dim ||
      vi.Bl->dim() != vi.g_dim) {
    throw std::invalid_argument("vi_to_problem: B dims != g_dim");
  }
  const double beta_c = vi.Bc->alpha();

  ProblemSpec spec;
  spec.h_layout = vi.h_layout;
  std::vector<std::pair<std::string, int>> gblocks;
  std::set<std::string> used;
  for (int i = 0; i < ni; ++i) {
    gblocks.emplace_back(vi.h_layout->label(i), vi.h_layout->dim(i));
    used.insert(vi.h_layout->label(i));
  }
  std::string agg = "kbar";
  while (used.count(agg)) agg += "_";
  gblocks.emplace_back(agg, vi.g_dim);
  spec.g_layout = SpaceLayout::make(gblocks);

  for (int i = 0; i < ni; ++i) {
    const int dim = vi.h_layout->dim(i);
    require_projection_kind(vi.E[i], "E");
    require_projection_kind(vi.F[i], "F");
    spec.A.push_back(make_resolvent(vi.E[i], dim));
    spec.C.push_back(make_cocoercive(zero_cocoercive(beta_c), dim));
    spec.Q.push_back(make_lipschitz(plain("zero"), dim));
    if (vi.L[i].in_dim() != dim || vi.L[i].out_dim() != vi.g_dim) {
      throw std::invalid_argument("vi_to_problem: L[" +
                                  vi.h_layout->label(i) + "] has wrong "
                                  "shape");
    }
  }
  spec.R = make_coupling(plain("zero"), vi.h_layout);

  const int nk = ni + 1;
  for (int k = 0; k < nk; ++k) {
    const int dim = spec.g_layout->dim(k);
    if (k < ni) {
      spec.Bm.push_back(make_resolvent(vi.F[k], dim));
      spec.Bc.push_back(make_cocoercive(zero_cocoercive(beta_c), dim));
      spec.Bl.push_back(make_lipschitz(plain("zero"), dim));
      spec.L.emplace(std::make_pair(k, k), LinearOp::identity(dim));
    } else {
      spec.Bm.push_back(vi.Bm);
      spec.Bc.push_back(vi.Bc);
      spec.Bl.push_back(vi.Bl);
      for (int i = 0; i < ni; ++i) {
        spec.L.emplace(std::make_pair(k, i), vi.L[i]);
      }
    }
    spec.Dm.push_back(make_resolvent(plain("zero_inverse"), dim));
    spec.Dc.push_back(make_cocoercive(zero_cocoercive(beta_c), dim));
    spec.Dl.push_back(make_lipschitz(plain("zero"), dim));
  }

  spec.sstar = BlockVec(spec.h_layout);
  spec.r = BlockVec(spec.g_layout);
  return spec;
}

ProblemSpec min_to_problem(const MinSpec& m) {
  if (m.primal.empty() || m.dual.empty()) {
    throw std::invalid_argument("min_to_problem: empty block lists");
  }
  ProblemSpec spec;
  std::vector<std::pair<std::string, int>> hb, gb;
  for (const auto& p : m.primal) hb.emplace_back(p.label, p.dim);
  for (const auto& d : m.dual) gb.emplace_back(d.label, d.dim);
  spec.h_layout = SpaceLayout::make(hb);
  spec.g_layout = SpaceLayout::make(gb);

  for (const auto& p : m.primal) {
    if (!p.f || !p.phi) {
      throw std::invalid_argument("min_to_problem: block '" + p.label +
                                  "' is missing f or phi");
    }
    spec.A.push_back(p.f);
    spec.C.push_back(p.phi);
    spec.Q.push_back(make_lipschitz(plain("zero"), p.dim));
  }
  spec.R = m.theta ? m.theta : make_coupling(plain("zero"), spec.h_layout);

  for (const auto& d : m.dual) {
    if (!d.g || !d.psi || !d.h) {
      throw std::invalid_argument("min_to_problem: block '" + d.label +
                                  "' is missing g, psi, or h");
    }
    spec.Bm.push_back(d.g);
    spec.Bc.push_back(d.psi);
    spec.Bl.push_back(make_lipschitz(plain("zero"), d.dim));
    spec.Dm.push_back(d.h);
    spec.Dc.push_back(
        make_cocoercive(zero_cocoercive(d.psi->alpha()), d.dim));
    spec.Dl.push_back(make_lipschitz(plain("zero"), d.dim));
  }
  spec.L = m.L;
  spec.sstar = BlockVec(spec.h_layout);
  spec.r = BlockVec(spec.g_layout);
  return spec;
}

}  // namespace sops
