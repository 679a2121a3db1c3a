#pragma once

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "sops/solver.hpp"

// Independent reference computations used by the verification suites.
// Everything here is deliberately primitive: closed forms, bisection,
// contraction iterations, and explicit active-set enumeration.
namespace oracles {

using namespace sops;

inline StateX random_state(const ProblemSpec& spec, std::mt19937_64& rng,
                           double scale = 1.5) {
  std::normal_distribution<double> dist(0.0, scale);
  StateX s = StateX::zero(spec.h_layout, spec.g_layout);
  for (int j = 0; j < s.x.total_dim(); ++j) s.x.data()[j] = dist(rng);
  for (int j = 0; j < s.y.total_dim(); ++j) {
    s.y.data()[j] = dist(rng);
    s.z.data()[j] = dist(rng);
    s.vstar.data()[j] = dist(rng);
  }
  return s;
}

inline StateX flat_to_state(const Vec& flat, const LayoutPtr& h,
                            const LayoutPtr& g) {
  StateX s = StateX::zero(h, g);
  int off = 0;
  s.x.data() = flat.segment(off, h->total_dim());
  off += h->total_dim();
  s.y.data() = flat.segment(off, g->total_dim());
  off += g->total_dim();
  s.z.data() = flat.segment(off, g->total_dim());
  off += g->total_dim();
  s.vstar.data() = flat.segment(off, g->total_dim());
  return s;
}

inline Vec state_to_flat(const StateX& s) {
  Vec flat(s.x.total_dim() + 3 * s.y.total_dim());
  int off = 0;
  flat.segment(off, s.x.total_dim()) = s.x.data();
  off += s.x.total_dim();
  flat.segment(off, s.y.total_dim()) = s.y.data();
  off += s.y.total_dim();
  flat.segment(off, s.z.total_dim()) = s.z.data();
  off += s.z.total_dim();
  flat.segment(off, s.vstar.total_dim()) = s.vstar.data();
  return flat;
}

// projection of x0 onto {<s,t> <= eta} cap {<s,g> <= b2} by active-set
// enumeration over the two constraints; returns false when no candidate
// satisfies the KKT screen (non-intersecting data)
inline bool two_halfspace_qp(const Vec& x0, const Vec& t, double eta,
                             const Vec& g, double b2, Vec& out) {
  const double tol = 1e-9;
  auto feasible = [&](const Vec& s) {
    return t.dot(s) <= eta + tol && g.dot(s) <= b2 + tol;
  };
  if (feasible(x0)) {
    out = x0;
    return true;
  }
  double best_d = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vec& s, bool kkt_ok) {
    if (!kkt_ok || !feasible(s)) return;
    double d = (s - x0).squaredNorm();
    if (d < best_d) {
      best_d = d;
      out = s;
    }
  };
  if (t.squaredNorm() > 0) {
    double mu = (t.dot(x0) - eta) / t.squaredNorm();
    consider(x0 - mu * t, mu >= -tol);
  }
  if (g.squaredNorm() > 0) {
    double nu = (g.dot(x0) - b2) / g.squaredNorm();
    consider(x0 - nu * g, nu >= -tol);
  }
  Mat gram(2, 2);
  gram << t.squaredNorm(), t.dot(g), g.dot(t), g.squaredNorm();
  if (std::abs(gram.determinant()) > 1e-12) {
    Vec rhs(2);
    rhs << t.dot(x0) - eta, g.dot(x0) - b2;
    Vec mult = gram.fullPivLu().solve(rhs);
    consider(x0 - mult[0] * t - mult[1] * g,
             mult[0] >= -tol && mult[1] >= -tol);
  }
  return best_d < std::numeric_limits<double>::infinity();
}

// ---- vi2 fixture oracle ------------------------------------------------

inline Vec proj_box2(const Vec& q) {
  return fixtures::v2(std::clamp(q[0], -0.5, 0.3),
                      std::clamp(q[1], -0.5, 0.5));
}

// projection onto the Minkowski sum of the segment {(t, 1-t): t in [0,1]}
// and the box [-0.5,0.3] x [-0.5,0.5]; the inner box minimizer is closed
// form and the outer 1-d problem is convex, so bisect its derivative
inline Vec proj_sum(const Vec& q) {
  auto vstar = [&](double t) {
    return proj_box2(fixtures::v2(q[0] - t, q[1] - (1.0 - t)));
  };
  auto dphi = [&](double t) {
    Vec p = fixtures::v2(t, 1.0 - t);
    Vec s = p + vstar(t) - q;
    return s[0] - s[1];
  };
  double lo = 0.0, hi = 1.0;
  if (dphi(lo) >= 0.0) return fixtures::v2(lo, 1.0) + vstar(lo);
  if (dphi(hi) <= 0.0) return fixtures::v2(hi, 0.0) + vstar(hi);
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (dphi(mid) > 0.0 ? hi : lo) = mid;
  }
  double t = 0.5 * (lo + hi);
  return fixtures::v2(t, 1.0 - t) + vstar(t);
}

// forward-backward contraction on the image-space inequality of vi2
inline Vec vi_image_solution() {
  Vec w = fixtures::v2(2.5, 1.0);
  Mat s(2, 2);
  s << 0, 0.3, -0.3, 0;
  Vec y = fixtures::v2(0, 0);
  for (int it = 0; it < 200; ++it) {
    Vec by = (y - w) + s * y;
    y = proj_sum(y - 0.9 * by);
  }
  return y;
}

// proximal gradient on the lasso fixture at step 1/||M||^2
inline Vec lasso_solution(long iters = 100000) {
  Mat m(3, 2);
  m << 1, 0.5, 0.2, 1, 0.3, -0.4;
  Vec b(3);
  b << 1, -0.5, 0.3;
  const double tau = 0.1;
  const double lip = spectral_norm(m) * spectral_norm(m);
  Vec x = Vec::Zero(2);
  for (long it = 0; it < iters; ++it) {
    Vec grad = m.transpose() * (m * x - b);
    Vec step = x - grad / lip;
    for (int j = 0; j < 2; ++j) {
      double mth = std::abs(step[j]) - tau / lip;
      x[j] = mth > 0 ? (step[j] > 0 ? mth : -mth) : 0.0;
    }
  }
  return x;
}

}  // namespace oracles
