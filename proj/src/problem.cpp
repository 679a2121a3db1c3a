#include "sops/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace sops {

const LinearOp* ProblemSpec::coupling(int k, int i) const {
  auto it = L.find({k, i});
  return it == L.end() ? nullptr : &it->second;
}

BlockVec ProblemSpec::apply_L(const BlockVec& x) const {
  BlockVec out(g_layout);
  for (int k = 0; k < n_dual(); ++k) {
    auto acc = out.block(k);
    for (int i = 0; i < n_primal(); ++i) {
      if (const LinearOp* l = coupling(k, i)) {
        acc += l->apply(x.block(i));
      }
    }
  }
  return out;
}

BlockVec ProblemSpec::apply_L_adjoint(const BlockVec& v) const {
  BlockVec out(h_layout);
  for (int i = 0; i < n_primal(); ++i) {
    auto acc = out.block(i);
    for (int k = 0; k < n_dual(); ++k) {
      if (const LinearOp* l = coupling(k, i)) {
        acc += l->adjoint_apply(v.block(k));
      }
    }
  }
  return out;
}

namespace {

template <class OpPtr>
void check_family(const std::vector<OpPtr>& ops, const SpaceLayout& layout,
                  const char* name, std::vector<std::string>& out) {
  if (static_cast<int>(ops.size()) != layout.block_count()) {
    out.push_back(std::string(name) + ": expected " +
                  std::to_string(layout.block_count()) + " operators, got " +
                  std::to_string(ops.size()));
    return;
  }
  for (int b = 0; b < layout.block_count(); ++b) {
    if (!ops[b]) {
      out.push_back(std::string(name) + "[" + layout.label(b) + "]: missing");
    } else if (ops[b]->dim() != layout.dim(b)) {
      out.push_back(std::string(name) + "[" + layout.label(b) +
                    "]: operator dim " + std::to_string(ops[b]->dim()) +
                    " != block dim " + std::to_string(layout.dim(b)));
    }
  }
}

}  // namespace

std::vector<std::string> validate(const ProblemSpec& spec) {
  std::vector<std::string> out;
  if (!spec.h_layout || !spec.g_layout) {
    out.push_back("missing space layouts");
    return out;
  }
  const SpaceLayout& h = *spec.h_layout;
  const SpaceLayout& g = *spec.g_layout;

  check_family(spec.A, h, "A", out);
  check_family(spec.C, h, "C", out);
  check_family(spec.Q, h, "Q", out);
  check_family(spec.Bm, g, "Bm", out);
  check_family(spec.Bc, g, "Bc", out);
  check_family(spec.Bl, g, "Bl", out);
  check_family(spec.Dm, g, "Dm", out);
  check_family(spec.Dc, g, "Dc", out);
  check_family(spec.Dl, g, "Dl", out);

  if (!spec.R) {
    out.push_back("R: missing coupling operator");
  } else if (!spec.R->layout()->same_as(h)) {
    out.push_back("R: coupling layout does not match the primal layout");
  } else if (spec.R->chi() < 0) {
    out.push_back("R: chi must be >= 0");
  }

  for (const auto& [ki, l] : spec.L) {
    auto [k, i] = ki;
    if (k < 0 || k >= g.block_count() || i < 0 || i >= h.block_count()) {
      out.push_back("L[" + std::to_string(k) + "," + std::to_string(i) +
                    "]: index out of range");
      continue;
    }
    if (l.in_dim() != h.dim(i) || l.out_dim() != g.dim(k)) {
      out.push_back("L[" + g.label(k) + "," + h.label(i) + "]: shape " +
                    std::to_string(l.out_dim()) + "x" +
                    std::to_string(l.in_dim()) + " != " +
                    std::to_string(g.dim(k)) + "x" + std::to_string(h.dim(i)));
    }
  }

  auto check_alpha = [&](const auto& ops, const SpaceLayout& layout,
                         const char* name) {
    if (static_cast<int>(ops.size()) != layout.block_count()) return;
    for (int b = 0; b < layout.block_count(); ++b) {
      if (ops[b] && !(ops[b]->alpha() > 0)) {
        out.push_back(std::string(name) + "[" + layout.label(b) +
                      "]: cocoercivity constant must be > 0");
      }
    }
  };
  check_alpha(spec.C, h, "C");
  check_alpha(spec.Bc, g, "Bc");
  check_alpha(spec.Dc, g, "Dc");

  auto check_lip = [&](const auto& ops, const SpaceLayout& layout,
                       const char* name) {
    if (static_cast<int>(ops.size()) != layout.block_count()) return;
    for (int b = 0; b < layout.block_count(); ++b) {
      if (ops[b] && ops[b]->lip() < 0) {
        out.push_back(std::string(name) + "[" + layout.label(b) +
                      "]: Lipschitz constant must be >= 0");
      }
    }
  };
  check_lip(spec.Q, h, "Q");
  check_lip(spec.Bl, g, "Bl");
  check_lip(spec.Dl, g, "Dl");

  if (!spec.sstar.layout() || !spec.sstar.layout()->same_as(h)) {
    out.push_back("sstar: wrong or missing layout");
  }
  if (!spec.r.layout() || !spec.r.layout()->same_as(g)) {
    out.push_back("r: wrong or missing layout");
  }
  return out;
}

void require_valid(const ProblemSpec& spec) {
  auto violations = validate(spec);
  if (violations.empty()) return;
  std::string msg = "invalid problem:";
  for (const auto& v : violations) msg += "\n  " + v;
  throw std::invalid_argument(msg);
}

double alpha_min(const ProblemSpec& spec) {
  double a = std::numeric_limits<double>::infinity();
  for (const auto& c : spec.C) a = std::min(a, c->alpha());
  for (const auto& c : spec.Bc) a = std::min(a, c->alpha());
  for (const auto& c : spec.Dc) a = std::min(a, c->alpha());
  if (!(a > 0) || !std::isfinite(a)) {
    throw std::invalid_argument("alpha_min: no positive cocoercivity "
                                "constants");
  }
  return a;
}

namespace {

// residual of x_i = J_{gamma A_i}(x_i + gamma (s_i* - (L* v*)_i - C_i x_i
//                                 - Q_i x_i - R_i x))
double primal_rows_residual(const ProblemSpec& spec, const BlockVec& x,
                            const BlockVec& vstar, double gamma) {
  BlockVec lt = spec.apply_L_adjoint(vstar);
  BlockVec rx = spec.R->apply(x);
  double total = 0.0;
  for (int i = 0; i < spec.n_primal(); ++i) {
    Vec xi = x.block(i);
    Vec drive = spec.sstar.block(i) - lt.block(i) - spec.C[i]->apply(xi) -
                spec.Q[i]->apply(xi) - rx.block(i);
    Vec ji = spec.A[i]->resolvent(gamma, xi + gamma * drive);
    total += (xi - ji).norm();
  }
  return total;
}

double dual_rows_residual(const ProblemSpec& spec, const BlockVec& x,
                          const BlockVec& vstar, const BlockVec& y,
                          const BlockVec& z, double gamma) {
  BlockVec lx = spec.apply_L(x);
  double total = 0.0;
  for (int k = 0; k < spec.n_dual(); ++k) {
    Vec yk = y.block(k);
    Vec zk = z.block(k);
    Vec vk = vstar.block(k);
    total += (yk + zk - (lx.block(k) - spec.r.block(k))).norm();
    Vec by = yk + gamma * (vk - spec.Bc[k]->apply(yk) -
                           spec.Bl[k]->apply(yk));
    total += (yk - spec.Bm[k]->resolvent(gamma, by)).norm();
    Vec dz = zk + gamma * (vk - spec.Dc[k]->apply(zk) -
                           spec.Dl[k]->apply(zk));
    total += (zk - spec.Dm[k]->resolvent(gamma, dz)).norm();
  }
  return total;
}

}  // namespace

double kt_residual(const ProblemSpec& spec, const KTCandidate& cand,
                   double gamma_probe, const BlockVec& y, const BlockVec& z) {
  if (!(gamma_probe > 0)) {
    throw std::invalid_argument("kt_residual: gamma_probe must be positive");
  }
  require_same_layout(cand.x, spec.sstar, "kt_residual x");
  require_same_layout(cand.vstar, spec.r, "kt_residual vstar");
  require_same_layout(y, spec.r, "kt_residual y");
  require_same_layout(z, spec.r, "kt_residual z");
  return primal_rows_residual(spec, cand.x, cand.vstar, gamma_probe) +
         dual_rows_residual(spec, cand.x, cand.vstar, y, z, gamma_probe);
}

double kt_residual(const ProblemSpec& spec, const KTCandidate& cand,
                   double gamma_probe) {
  if (!(gamma_probe > 0)) {
    throw std::invalid_argument("kt_residual: gamma_probe must be positive");
  }
  // split Lx - r into y + z by one B-resolvent step from the target sum
  BlockVec w = spec.apply_L(cand.x);
  w.data() -= spec.r.data();
  BlockVec y(spec.g_layout);
  BlockVec z(spec.g_layout);
  for (int k = 0; k < spec.n_dual(); ++k) {
    Vec wk = w.block(k);
    Vec vk = cand.vstar.block(k);
    Vec arg = wk + gamma_probe * (vk - spec.Bc[k]->apply(wk) -
                                  spec.Bl[k]->apply(wk));
    Vec yk = spec.Bm[k]->resolvent(gamma_probe, arg);
    y.block(k) = yk;
    z.block(k) = wk - yk;
  }
  return kt_residual(spec, cand, gamma_probe, y, z);
}

}  // namespace sops
