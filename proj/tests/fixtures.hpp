#pragma once

#include <Eigen/Dense>

#include "sops/frontends.hpp"
#include "sops/problem.hpp"

// Shared desk-scale problem instances. Each Known fixture carries a zero
// of its saddle operator computed by hand or by an independent dense
// solve, never by the iterative solver under test.
namespace fixtures {

using sops::BlockVec;
using sops::Descriptor;
using sops::LinearOp;
using sops::Mat;
using sops::ProblemSpec;
using sops::SpaceLayout;
using sops::StateX;
using sops::Vec;

struct Known {
  ProblemSpec spec;
  StateX zero;
};

inline Descriptor box(const Vec& lo, const Vec& hi) {
  Descriptor d;
  d.kind = "normal_cone_box";
  d.lo = lo;
  d.hi = hi;
  return d;
}

inline Descriptor affine_set(const Mat& m, const Vec& rhs) {
  Descriptor d;
  d.kind = "normal_cone_affine";
  d.M = m;
  d.v = rhs;
  return d;
}

inline Descriptor halfspace(const Vec& a, double b) {
  Descriptor d;
  d.kind = "normal_cone_halfspace";
  d.v = a;
  d.weight = b;
  return d;
}

inline Descriptor grad_quad(const Mat& p, const Vec& c) {
  Descriptor d;
  d.kind = "gradient_quadratic";
  d.M = p;
  d.v = c;
  return d;
}

inline Descriptor prox_quad(const Mat& p, const Vec& c) {
  Descriptor d;
  d.kind = "prox_quadratic";
  d.M = p;
  d.v = c;
  return d;
}

inline Descriptor l1(double weight) {
  Descriptor d;
  d.kind = "subdiff_l1";
  d.weight = weight;
  return d;
}

inline Descriptor zero_desc(double alpha = 0.0) {
  Descriptor d;
  d.kind = "zero";
  d.alpha = alpha;
  return d;
}

inline Descriptor zero_inverse_desc() {
  Descriptor d;
  d.kind = "zero_inverse";
  return d;
}

inline Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

// Box-constrained strongly convex two-term problem on R^2:
// min over [0,1]^2 of 0.5||x - c||^2 + 0.5||x||^2, c = (2, 0.6).
// Solution x = proj_box(c/2) = (1, 0.3); the saddle zero is
// (x, x, 0, x).
inline Known dp1() {
  Known out;
  ProblemSpec& s = out.spec;
  s.h_layout = SpaceLayout::make({{"x1", 2}});
  s.g_layout = SpaceLayout::make({{"y1", 2}});
  Mat id2 = Mat::Identity(2, 2);
  s.A.push_back(sops::make_resolvent(box(v2(0, 0), v2(1, 1)), 2));
  s.C.push_back(sops::make_cocoercive(grad_quad(id2, v2(2, 0.6)), 2));
  s.Q.push_back(sops::make_lipschitz(zero_desc(), 2));
  s.R = sops::make_coupling(zero_desc(), s.h_layout);
  s.Bm.push_back(sops::make_resolvent(zero_desc(), 2));
  s.Bc.push_back(sops::make_cocoercive(grad_quad(id2, Vec::Zero(2)), 2));
  s.Bl.push_back(sops::make_lipschitz(zero_desc(), 2));
  s.Dm.push_back(sops::make_resolvent(zero_inverse_desc(), 2));
  s.Dc.push_back(sops::make_cocoercive(zero_desc(1.0), 2));
  s.Dl.push_back(sops::make_lipschitz(zero_desc(), 2));
  s.L.emplace(std::make_pair(0, 0), LinearOp::identity(2));
  s.sstar = BlockVec(s.h_layout);
  s.r = BlockVec(s.g_layout);

  out.zero = StateX::zero(s.h_layout, s.g_layout);
  out.zero.x.block(0) = v2(1, 0.3);
  out.zero.y.block(0) = v2(1, 0.3);
  out.zero.vstar.block(0) = v2(1, 0.3);
  return out;
}

// Coupled two-block quadratic on R^2 x R^2 with a single dual block:
// rows x1 - c1 + v = 0, x2 - c2 + M^T v = 0, v = x1 + M x2. The zero is
// obtained from the dense 2x2 system (2I + M M^T) v = c1 + M c2.
inline Known qp2() {
  Known out;
  ProblemSpec& s = out.spec;
  s.h_layout = SpaceLayout::make({{"x1", 2}, {"x2", 2}});
  s.g_layout = SpaceLayout::make({{"g1", 2}});
  Mat id2 = Mat::Identity(2, 2);
  Mat m(2, 2);
  m << 0.5, -0.3, 0.2, 0.8;
  Vec c1 = v2(1, 2);
  Vec c2 = v2(-1, 0.5);
  for (int i = 0; i < 2; ++i) {
    s.A.push_back(sops::make_resolvent(zero_desc(), 2));
    s.Q.push_back(sops::make_lipschitz(zero_desc(), 2));
  }
  s.C.push_back(sops::make_cocoercive(grad_quad(id2, c1), 2));
  s.C.push_back(sops::make_cocoercive(grad_quad(id2, c2), 2));
  s.R = sops::make_coupling(zero_desc(), s.h_layout);
  s.Bm.push_back(sops::make_resolvent(zero_desc(), 2));
  s.Bc.push_back(sops::make_cocoercive(grad_quad(id2, Vec::Zero(2)), 2));
  s.Bl.push_back(sops::make_lipschitz(zero_desc(), 2));
  s.Dm.push_back(sops::make_resolvent(zero_inverse_desc(), 2));
  s.Dc.push_back(sops::make_cocoercive(zero_desc(1.0), 2));
  s.Dl.push_back(sops::make_lipschitz(zero_desc(), 2));
  s.L.emplace(std::make_pair(0, 0), LinearOp::identity(2));
  s.L.emplace(std::make_pair(0, 1), LinearOp(m));
  s.sstar = BlockVec(s.h_layout);
  s.r = BlockVec(s.g_layout);

  Mat lhs = 2.0 * id2 + m * m.transpose();
  Vec v = lhs.ldlt().solve(c1 + m * c2);
  out.zero = StateX::zero(s.h_layout, s.g_layout);
  out.zero.x.block(0) = c1 - v;
  out.zero.x.block(1) = c2 - m.transpose() * v;
  out.zero.y.block(0) = v;
  out.zero.vstar.block(0) = v;
  return out;
}

// l1 + box fixture on R^2: min 0.25||x||_1 + 0.5||x - c||^2 + 0.5||x||^2
// over x with the quadratic dual block constrained to [-1,1]^2. The
// componentwise solution soft-thresholds c and halves it; parameters are
// chosen to keep it strictly inside the box and away from kinks.
inline Known lbox() {
  Known out;
  ProblemSpec& s = out.spec;
  s.h_layout = SpaceLayout::make({{"x1", 2}});
  s.g_layout = SpaceLayout::make({{"g1", 2}});
  Mat id2 = Mat::Identity(2, 2);
  Vec c = v2(1.5, -0.8);
  s.A.push_back(sops::make_resolvent(l1(0.25), 2));
  s.C.push_back(sops::make_cocoercive(grad_quad(id2, c), 2));
  s.Q.push_back(sops::make_lipschitz(zero_desc(), 2));
  s.R = sops::make_coupling(zero_desc(), s.h_layout);
  s.Bm.push_back(sops::make_resolvent(box(v2(-1, -1), v2(1, 1)), 2));
  s.Bc.push_back(sops::make_cocoercive(grad_quad(id2, Vec::Zero(2)), 2));
  s.Bl.push_back(sops::make_lipschitz(zero_desc(), 2));
  s.Dm.push_back(sops::make_resolvent(zero_inverse_desc(), 2));
  s.Dc.push_back(sops::make_cocoercive(zero_desc(1.0), 2));
  s.Dl.push_back(sops::make_lipschitz(zero_desc(), 2));
  s.L.emplace(std::make_pair(0, 0), LinearOp::identity(2));
  s.sstar = BlockVec(s.h_layout);
  s.r = BlockVec(s.g_layout);

  // componentwise: argmin 0.25|t| + 0.5(t - c_j)^2 + 0.5 t^2
  auto solve1 = [](double cj) {
    double m = std::abs(cj) - 0.25;
    return m > 0 ? (cj > 0 ? m : -m) / 2.0 : 0.0;
  };
  out.zero = StateX::zero(s.h_layout, s.g_layout);
  out.zero.x.block(0) = v2(solve1(c[0]), solve1(c[1]));
  out.zero.y.block(0) = out.zero.x.block(0);
  out.zero.vstar.block(0) = out.zero.x.block(0);
  return out;
}

// Two coupled scalar rows whose primal solutions exist while no
// Kuhn-Tucker point does: the second dual operator is the constant 1, so
// its inverse at the forced multiplier 0 is empty.
inline ProblemSpec remark26() {
  ProblemSpec s;
  s.h_layout = SpaceLayout::make({{"x1", 1}, {"x2", 1}});
  s.g_layout = SpaceLayout::make({{"g1", 1}, {"g2", 1}});
  for (int i = 0; i < 2; ++i) {
    s.A.push_back(sops::make_resolvent(zero_desc(), 1));
    s.C.push_back(sops::make_cocoercive(zero_desc(1.0), 1));
    s.Q.push_back(sops::make_lipschitz(zero_desc(), 1));
  }
  s.R = sops::make_coupling(zero_desc(), s.h_layout);

  s.Bm.push_back(sops::make_resolvent(zero_inverse_desc(), 1));
  Descriptor const_one;
  const_one.kind = "affine_monotone";
  const_one.M = Mat::Zero(1, 1);
  const_one.v = Vec::Ones(1);
  s.Bm.push_back(sops::make_resolvent(const_one, 1));
  for (int k = 0; k < 2; ++k) {
    s.Bc.push_back(sops::make_cocoercive(zero_desc(1.0), 1));
    s.Bl.push_back(sops::make_lipschitz(zero_desc(), 1));
    s.Dm.push_back(sops::make_resolvent(zero_inverse_desc(), 1));
    s.Dc.push_back(sops::make_cocoercive(zero_desc(1.0), 1));
    s.Dl.push_back(sops::make_lipschitz(zero_desc(), 1));
  }
  Mat one(1, 1), minus_one(1, 1);
  one << 1;
  minus_one << -1;
  s.L.emplace(std::make_pair(0, 0), LinearOp(one));
  s.L.emplace(std::make_pair(0, 1), LinearOp(one));
  s.L.emplace(std::make_pair(1, 0), LinearOp(one));
  s.L.emplace(std::make_pair(1, 1), LinearOp(minus_one));
  s.sstar = BlockVec(s.h_layout);
  s.r = BlockVec(s.g_layout);
  return s;
}

// Variational inequality over the Minkowski sum of a segment
// (affine cap box) and a box (box cap halfspace), driven by the strongly
// monotone B y = (y - w) + S y with a skew part.
inline sops::VISpec vi2() {
  sops::VISpec vi;
  vi.h_layout = SpaceLayout::make({{"x1", 2}, {"x2", 2}});
  vi.g_dim = 2;
  Mat row(1, 2);
  row << 1, 1;
  Vec one1 = Vec::Ones(1);
  vi.E.push_back(affine_set(row, one1));
  vi.F.push_back(box(v2(0, 0), v2(1, 1)));
  vi.E.push_back(box(v2(-0.5, -0.5), v2(0.5, 0.5)));
  vi.F.push_back(halfspace(v2(1, 0), 0.3));
  vi.L.push_back(LinearOp::identity(2));
  vi.L.push_back(LinearOp::identity(2));
  vi.Bm = sops::make_resolvent(zero_desc(), 2);
  vi.Bc = sops::make_cocoercive(grad_quad(Mat::Identity(2, 2),
                                          v2(2.5, 1.0)), 2);
  Descriptor rot;
  rot.kind = "rotation_monotone";
  rot.M = Mat(2, 2);
  rot.M << 0, 0.3, -0.3, 0;
  vi.Bl = sops::make_lipschitz(rot, 2);
  return vi;
}

// lasso-style composite: min 0.5||Mx - b||^2 + 0.1||x||_1 with a tall M.
inline sops::MinSpec lasso() {
  sops::MinSpec m;
  Mat mat(3, 2);
  mat << 1, 0.5, 0.2, 1, 0.3, -0.4;
  Vec b(3);
  b << 1, -0.5, 0.3;
  sops::MinPrimalBlock p;
  p.label = "x1";
  p.dim = 2;
  p.f = sops::make_resolvent(l1(0.1), 2);
  p.phi = sops::make_cocoercive(zero_desc(1.0), 2);
  m.primal.push_back(std::move(p));
  sops::MinDualBlock d;
  d.label = "g1";
  d.dim = 3;
  d.g = sops::make_resolvent(prox_quad(Mat::Identity(3, 3), b), 3);
  d.psi = sops::make_cocoercive(zero_desc(1.0), 3);
  d.h = sops::make_resolvent(zero_inverse_desc(), 3);
  m.dual.push_back(std::move(d));
  m.L.emplace(std::make_pair(0, 0), LinearOp(mat));
  return m;
}

inline Mat m1(double v) {
  Mat m(1, 1);
  m << v;
  return m;
}

// scalar infimal-convolution fixture: min over x of
// 0.5 x^2 - x + ((g + psi) box h)(1.5 x) with g = 0.5 y^2,
// psi = 0.25 y^2, h = z^2; the convolution is quadratic with curvature
// (1.5 * 2) / 3.5 and the minimizer is 14/41.
inline sops::MinSpec iconv() {
  sops::MinSpec m;
  sops::MinPrimalBlock p;
  p.label = "x1";
  p.dim = 1;
  p.f = sops::make_resolvent(zero_desc(), 1);
  p.phi = sops::make_cocoercive(grad_quad(m1(1.0), Vec::Ones(1)), 1);
  m.primal.push_back(std::move(p));
  sops::MinDualBlock d;
  d.label = "g1";
  d.dim = 1;
  d.g = sops::make_resolvent(prox_quad(m1(1.0), Vec::Zero(1)), 1);
  d.psi = sops::make_cocoercive(grad_quad(m1(0.5), Vec::Zero(1)), 1);
  d.h = sops::make_resolvent(prox_quad(m1(2.0), Vec::Zero(1)), 1);
  m.dual.push_back(std::move(d));
  m.L.emplace(std::make_pair(0, 0), LinearOp(m1(1.5)));
  return m;
}

inline double iconv_solution() { return 14.0 / 41.0; }

}  // namespace fixtures
