#include "sops/operators.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sops {

namespace {

void require_dim(int got, int want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": dimension " +
                                std::to_string(got) + " != " +
                                std::to_string(want));
  }
}

void require_square(const Mat& m, int dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim) {
    throw std::invalid_argument(std::string(what) + ": matrix must be " +
                                std::to_string(dim) + "x" +
                                std::to_string(dim));
  }
}

double min_symmetric_eigenvalue(const Mat& m) {
  Mat s = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(s);
  return es.eigenvalues().minCoeff();
}

void require_monotone(const Mat& m, const char* what) {
  if (min_symmetric_eigenvalue(m) < -1e-10) {
    throw std::invalid_argument(std::string(what) +
                                ": matrix is not monotone (M + M^T "
                                "indefinite)");
  }
}

void require_symmetric_psd(const Mat& p, const char* what) {
  if ((p - p.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument(std::string(what) + ": P is not symmetric");
  }
  if (min_symmetric_eigenvalue(p) < -1e-10) {
    throw std::invalid_argument(std::string(what) +
                                ": indefinite quadratic");
  }
}

// ---- resolvent kinds -------------------------------------------------

class BoxProjection final : public ResolventOp {
 public:
  BoxProjection(int dim, Descriptor d) : ResolventOp(dim, std::move(d)) {
    const Descriptor& dd = descriptor();
    require_dim(static_cast<int>(dd.lo.size()), dim, "normal_cone_box lo");
    require_dim(static_cast<int>(dd.hi.size()), dim, "normal_cone_box hi");
    for (int j = 0; j < dim; ++j) {
      if (!(dd.lo[j] <= dd.hi[j])) {
        throw std::invalid_argument("normal_cone_box: lo > hi");
      }
    }
  }

 protected:
  Vec eval(double, const Vec& x) const override {
    return x.cwiseMax(descriptor().lo).cwiseMin(descriptor().hi);
  }
};

class AffineProjection final : public ResolventOp {
 public:
  AffineProjection(int dim, Descriptor d) : ResolventOp(dim, std::move(d)) {
    const Descriptor& dd = descriptor();
    if (dd.M.cols() != dim) {
      throw std::invalid_argument("normal_cone_affine: M has wrong column "
                                  "count");
    }
    require_dim(static_cast<int>(dd.v.size()),
                static_cast<int>(dd.M.rows()), "normal_cone_affine d");
    Eigen::ColPivHouseholderQR<Mat> qr(dd.M);
    if (qr.rank() != dd.M.rows()) {
      throw std::invalid_argument("normal_cone_affine: M is row-rank "
                                  "deficient");
    }
    gram_.compute(dd.M * dd.M.transpose());
  }

 protected:
  Vec eval(double, const Vec& x) const override {
    const Descriptor& dd = descriptor();
    Vec residual = dd.M * x - dd.v;
    return x - dd.M.transpose() * gram_.solve(residual);
  }

 private:
  Eigen::LDLT<Mat> gram_;
};

class HalfspaceProjection final : public ResolventOp {
 public:
  HalfspaceProjection(int dim, Descriptor d) : ResolventOp(dim, std::move(d)) {
    const Descriptor& dd = descriptor();
    require_dim(static_cast<int>(dd.v.size()), dim,
                "normal_cone_halfspace a");
    nsq_ = dd.v.squaredNorm();
    if (nsq_ == 0.0) {
      throw std::invalid_argument("normal_cone_halfspace: zero normal");
    }
  }

 protected:
  Vec eval(double, const Vec& x) const override {
    const Descriptor& dd = descriptor();
    double excess = dd.v.dot(x) - dd.weight;
    if (excess <= 0.0) return x;
    return x - (excess / nsq_) * dd.v;
  }

 private:
  double nsq_ = 0.0;
};

class ZeroInverseResolvent final : public ResolventOp {
 public:
  ZeroInverseResolvent(int dim, Descriptor d)
      : ResolventOp(dim, std::move(d)) {}

 protected:
  Vec eval(double, const Vec& x) const override { return Vec::Zero(x.size()); }
};

class IdentityResolvent final : public ResolventOp {
 public:
  IdentityResolvent(int dim, Descriptor d) : ResolventOp(dim, std::move(d)) {}

 protected:
  Vec eval(double, const Vec& x) const override { return x; }
};

class SoftThreshold final : public ResolventOp {
 public:
  SoftThreshold(int dim, Descriptor d) : ResolventOp(dim, std::move(d)) {
    if (descriptor().weight <= 0) {
      throw std::invalid_argument("subdiff_l1: weight must be positive");
    }
  }

 protected:
  Vec eval(double gamma, const Vec& x) const override {
    double t = gamma * descriptor().weight;
    Vec out(x.size());
    for (int j = 0; j < x.size(); ++j) {
      double m = std::abs(x[j]) - t;
      out[j] = m > 0 ? (x[j] > 0 ? m : -m) : 0.0;
    }
    return out;
  }
};

class QuadraticProx final : public ResolventOp {
 public:
  QuadraticProx(int dim, Descriptor d) : ResolventOp(dim, std::move(d)) {
    const Descriptor& dd = descriptor();
    require_square(dd.M, dim, "prox_quadratic P");
    require_dim(static_cast<int>(dd.v.size()), dim, "prox_quadratic c");
    require_symmetric_psd(dd.M, "prox_quadratic");
  }

 protected:
  Vec eval(double gamma, const Vec& x) const override {
    const Descriptor& dd = descriptor();
    Mat lhs = Mat::Identity(dim(), dim()) + gamma * dd.M;
    return Eigen::LDLT<Mat>(lhs).solve(x + gamma * dd.v);
  }
};

class AffineResolvent final : public ResolventOp {
 public:
  AffineResolvent(int dim, Descriptor d) : ResolventOp(dim, std::move(d)) {
    const Descriptor& dd = descriptor();
    require_square(dd.M, dim, "affine_monotone M");
    require_dim(static_cast<int>(dd.v.size()), dim, "affine_monotone b");
    require_monotone(dd.M, "affine_monotone");
  }

 protected:
  Vec eval(double gamma, const Vec& x) const override {
    const Descriptor& dd = descriptor();
    Mat lhs = Mat::Identity(dim(), dim()) + gamma * dd.M;
    return Eigen::PartialPivLU<Mat>(lhs).solve(x - gamma * dd.v);
  }
};

// ---- cocoercive kinds ------------------------------------------------

class ZeroCocoercive final : public CocoerciveOp {
 public:
  ZeroCocoercive(int dim, double alpha, Descriptor d)
      : CocoerciveOp(dim, alpha, std::move(d)) {}

 protected:
  Vec eval(const Vec& x) const override { return Vec::Zero(x.size()); }
};

class QuadraticGradient final : public CocoerciveOp {
 public:
  QuadraticGradient(int dim, double alpha, Descriptor d)
      : CocoerciveOp(dim, alpha, std::move(d)) {}

 protected:
  Vec eval(const Vec& x) const override {
    const Descriptor& dd = descriptor();
    return dd.M * x - dd.v;
  }
};

// ---- Lipschitz monotone kinds ----------------------------------------

class ZeroLip final : public LipMonotoneOp {
 public:
  ZeroLip(int dim, Descriptor d) : LipMonotoneOp(dim, 0.0, std::move(d)) {}

 protected:
  Vec eval(const Vec& x) const override { return Vec::Zero(x.size()); }
};

class AffineLip final : public LipMonotoneOp {
 public:
  AffineLip(int dim, double lip, Descriptor d)
      : LipMonotoneOp(dim, lip, std::move(d)) {}

 protected:
  Vec eval(const Vec& x) const override {
    const Descriptor& dd = descriptor();
    return dd.M * x + dd.v;
  }
};

// ---- coupling kinds ---------------------------------------------------

class ZeroCoupling final : public CouplingOp {
 public:
  ZeroCoupling(LayoutPtr layout, Descriptor d)
      : CouplingOp(std::move(layout), 0.0, std::move(d)) {}

 protected:
  Vec eval(const Vec& x) const override { return Vec::Zero(x.size()); }
};

class LinearCoupling final : public CouplingOp {
 public:
  LinearCoupling(LayoutPtr layout, double chi, Descriptor d)
      : CouplingOp(std::move(layout), chi, std::move(d)) {}

 protected:
  Vec eval(const Vec& x) const override {
    const Descriptor& dd = descriptor();
    if (dd.v.size() > 0) return dd.M * x + dd.v;
    return dd.M * x;
  }
};

}  // namespace

// ---- base-class wrappers ----------------------------------------------

Vec ResolventOp::resolvent(double gamma, const Vec& x) const {
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("resolvent: gamma must be positive");
  }
  require_dim(static_cast<int>(x.size()), dim_, "resolvent argument");
  return eval(gamma, x);
}

Vec CocoerciveOp::apply(const Vec& x) const {
  require_dim(static_cast<int>(x.size()), dim_, "cocoercive argument");
  return eval(x);
}

Vec LipMonotoneOp::apply(const Vec& x) const {
  require_dim(static_cast<int>(x.size()), dim_, "lipschitz argument");
  return eval(x);
}

BlockVec CouplingOp::apply(const BlockVec& x) const {
  if (!x.layout()->same_as(*layout_)) {
    throw std::invalid_argument("coupling: layout mismatch");
  }
  return BlockVec(x.layout(), eval(x.data()));
}

LinearOp::LinearOp(Mat m) : m_(std::move(m)) {
  if (m_.size() == 0) {
    throw std::invalid_argument("LinearOp: empty matrix");
  }
}

LinearOp LinearOp::identity(int n) { return LinearOp(Mat::Identity(n, n)); }

Vec LinearOp::apply(const Vec& x) const {
  require_dim(static_cast<int>(x.size()), in_dim(), "LinearOp::apply");
  return m_ * x;
}

Vec LinearOp::adjoint_apply(const Vec& v) const {
  require_dim(static_cast<int>(v.size()), out_dim(),
              "LinearOp::adjoint_apply");
  return m_.transpose() * v;
}

double spectral_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  if (m.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  const int n = static_cast<int>(m.cols());
  const int cap = 10 * static_cast<int>(std::max(m.rows(), m.cols()));
  Vec v(n);
  for (int j = 0; j < n; ++j) v[j] = 1.0 + 0.25 * std::sin(j + 1.0);
  v.normalize();
  double est = 0.0;
  for (int it = 0; it < cap; ++it) {
    Vec w = m.transpose() * (m * v);
    double nw = w.norm();
    if (nw == 0.0) return 0.0;
    double next = v.dot(w);  // Rayleigh quotient for M^T M, ||v|| = 1
    v = w / nw;
    if (it > 0 && std::abs(next - est) <= 1e-10 * std::max(1.0, next)) {
      est = next;
      break;
    }
    est = next;
  }
  return std::sqrt(std::max(est, 0.0));
}

// ---- factories ----------------------------------------------------------

std::shared_ptr<const ResolventOp> make_resolvent(const Descriptor& d,
                                                  int dim) {
  if (d.kind == "normal_cone_box") {
    return std::make_shared<BoxProjection>(dim, d);
  }
  if (d.kind == "normal_cone_affine") {
    return std::make_shared<AffineProjection>(dim, d);
  }
  if (d.kind == "normal_cone_halfspace") {
    return std::make_shared<HalfspaceProjection>(dim, d);
  }
  if (d.kind == "zero_inverse") {
    return std::make_shared<ZeroInverseResolvent>(dim, d);
  }
  if (d.kind == "zero") {
    return std::make_shared<IdentityResolvent>(dim, d);
  }
  if (d.kind == "subdiff_l1") {
    return std::make_shared<SoftThreshold>(dim, d);
  }
  if (d.kind == "prox_quadratic") {
    return std::make_shared<QuadraticProx>(dim, d);
  }
  if (d.kind == "affine_monotone") {
    return std::make_shared<AffineResolvent>(dim, d);
  }
  throw std::invalid_argument("unknown resolvent descriptor '" + d.kind + "'");
}

std::shared_ptr<const CocoerciveOp> make_cocoercive(const Descriptor& d,
                                                    int dim) {
  if (d.kind == "zero") {
    Descriptor dd = d;
    if (dd.alpha == 0.0) dd.alpha = 1.0;
    if (dd.alpha < 0.0) {
      throw std::invalid_argument("zero cocoercive: alpha must be positive");
    }
    return std::make_shared<ZeroCocoercive>(dim, dd.alpha, dd);
  }
  if (d.kind == "gradient_quadratic") {
    Descriptor dd = d;
    require_square(dd.M, dim, "gradient_quadratic P");
    if (dd.v.size() == 0) dd.v = Vec::Zero(dim);
    require_dim(static_cast<int>(dd.v.size()), dim, "gradient_quadratic c");
    require_symmetric_psd(dd.M, "gradient_quadratic");
    double lmax = spectral_norm(dd.M);
    double alpha;
    if (lmax > 1e-14) {
      alpha = 1.0 / lmax;
    } else {
      // constant map: cocoercive for every constant, take the declared one
      alpha = dd.alpha > 0 ? dd.alpha : 1.0;
    }
    dd.alpha = alpha;
    return std::make_shared<QuadraticGradient>(dim, alpha, dd);
  }
  throw std::invalid_argument("unknown cocoercive descriptor '" + d.kind +
                              "'");
}

std::shared_ptr<const LipMonotoneOp> make_lipschitz(const Descriptor& d,
                                                    int dim) {
  if (d.kind == "zero") {
    return std::make_shared<ZeroLip>(dim, d);
  }
  if (d.kind == "affine_monotone" || d.kind == "rotation_monotone") {
    Descriptor dd = d;
    require_square(dd.M, dim, (dd.kind + " M").c_str());
    if (dd.v.size() == 0) dd.v = Vec::Zero(dim);
    require_dim(static_cast<int>(dd.v.size()), dim,
                (dd.kind + " b").c_str());
    if (dd.kind == "rotation_monotone") {
      if ((dd.M + dd.M.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw std::invalid_argument("rotation_monotone: M is not skew");
      }
    } else {
      require_monotone(dd.M, "affine_monotone");
    }
    double lip = spectral_norm(dd.M);
    return std::make_shared<AffineLip>(dim, lip, dd);
  }
  throw std::invalid_argument("unknown lipschitz descriptor '" + d.kind +
                              "'");
}

std::shared_ptr<const CouplingOp> make_coupling(const Descriptor& d,
                                                LayoutPtr h_layout) {
  const int n = h_layout->total_dim();
  if (d.kind == "zero") {
    return std::make_shared<ZeroCoupling>(std::move(h_layout), d);
  }
  if (d.kind == "linear_monotone") {
    Descriptor dd = d;
    require_square(dd.M, n, "linear_monotone M");
    if (dd.v.size() > 0) {
      require_dim(static_cast<int>(dd.v.size()), n, "linear_monotone b");
    }
    require_monotone(dd.M, "linear_monotone");
    double chi = spectral_norm(dd.M);
    return std::make_shared<LinearCoupling>(std::move(h_layout), chi, dd);
  }
  throw std::invalid_argument("unknown coupling descriptor '" + d.kind + "'");
}

}  // namespace sops
