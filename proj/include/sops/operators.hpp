#pragma once

#include <memory>
#include <string>

#include "sops/block_space.hpp"

namespace sops {

/// Parameters of a catalog entry, kept alongside every built operator so
/// problem files can round-trip. Which fields are meaningful depends on
/// `kind`:
///   normal_cone_box        lo, hi (entries may be +-inf)
///   normal_cone_affine     M, v (the set {x : Mx = v})
///   normal_cone_halfspace  v (normal a), weight (offset b)
///   zero_inverse           -
///   zero                   alpha (cocoercive role only, default 1)
///   subdiff_l1             weight (l1 scale, > 0)
///   prox_quadratic         M (P, sym psd), v (c)
///   gradient_quadratic     M (P, sym psd), v (c), alpha (override when P=0)
///   affine_monotone        M (M + M^T psd), v (b)
///   rotation_monotone      M (skew)
///   linear_monotone        M (coupling matrix), v (offset, optional)
struct Descriptor {
  std::string kind;
  Mat M;
  Vec v;
  Vec lo, hi;
  double weight = 0.0;
  double alpha = 0.0;
};

/// Set-valued maximally monotone operator, accessed only through its
/// resolvent J_{gamma A} = (Id + gamma A)^{-1}.
class ResolventOp {
 public:
  virtual ~ResolventOp() = default;
  int dim() const { return dim_; }
  const Descriptor& descriptor() const { return desc_; }

  // throws std::invalid_argument on gamma <= 0 or dimension mismatch
  Vec resolvent(double gamma, const Vec& x) const;

 protected:
  ResolventOp(int dim, Descriptor desc) : dim_(dim), desc_(std::move(desc)) {}
  virtual Vec eval(double gamma, const Vec& x) const = 0;

 private:
  int dim_;
  Descriptor desc_;
};

/// Single-valued operator satisfying <x-y, Cx-Cy> >= alpha ||Cx-Cy||^2.
class CocoerciveOp {
 public:
  virtual ~CocoerciveOp() = default;
  int dim() const { return dim_; }
  double alpha() const { return alpha_; }
  const Descriptor& descriptor() const { return desc_; }

  Vec apply(const Vec& x) const;

 protected:
  CocoerciveOp(int dim, double alpha, Descriptor desc)
      : dim_(dim), alpha_(alpha), desc_(std::move(desc)) {}
  virtual Vec eval(const Vec& x) const = 0;

 private:
  int dim_;
  double alpha_;
  Descriptor desc_;
};

/// Single-valued monotone operator, Lipschitz with constant lip >= 0.
class LipMonotoneOp {
 public:
  virtual ~LipMonotoneOp() = default;
  int dim() const { return dim_; }
  double lip() const { return lip_; }
  const Descriptor& descriptor() const { return desc_; }

  Vec apply(const Vec& x) const;

 protected:
  LipMonotoneOp(int dim, double lip, Descriptor desc)
      : dim_(dim), lip_(lip), desc_(std::move(desc)) {}
  virtual Vec eval(const Vec& x) const = 0;

 private:
  int dim_;
  double lip_;
  Descriptor desc_;
};

/// Dense linear map with its adjoint (transpose action).
class LinearOp {
 public:
  explicit LinearOp(Mat m);
  static LinearOp identity(int n);

  int in_dim() const { return static_cast<int>(m_.cols()); }
  int out_dim() const { return static_cast<int>(m_.rows()); }
  const Mat& matrix() const { return m_; }

  Vec apply(const Vec& x) const;
  Vec adjoint_apply(const Vec& v) const;

 private:
  Mat m_;
};

/// Joint coupling over the whole primal space: x -> (R_i x)_i, monotone
/// and chi-Lipschitz.
class CouplingOp {
 public:
  virtual ~CouplingOp() = default;
  double chi() const { return chi_; }
  const LayoutPtr& layout() const { return layout_; }
  const Descriptor& descriptor() const { return desc_; }

  BlockVec apply(const BlockVec& x) const;

 protected:
  CouplingOp(LayoutPtr layout, double chi, Descriptor desc)
      : layout_(std::move(layout)), chi_(chi), desc_(std::move(desc)) {}
  virtual Vec eval(const Vec& x) const = 0;

 private:
  LayoutPtr layout_;
  double chi_;
  Descriptor desc_;
};

// Catalog builders. Each validates the descriptor for the requested role
// and derives the operator constants (spectral norms by power iteration).
// Unknown or ill-suited kinds throw std::invalid_argument.
std::shared_ptr<const ResolventOp> make_resolvent(const Descriptor& d,
                                                  int dim);
std::shared_ptr<const CocoerciveOp> make_cocoercive(const Descriptor& d,
                                                    int dim);
std::shared_ptr<const LipMonotoneOp> make_lipschitz(const Descriptor& d,
                                                    int dim);
std::shared_ptr<const CouplingOp> make_coupling(const Descriptor& d,
                                                LayoutPtr h_layout);

// Largest singular value by power iteration on M^T M; tolerance 1e-10,
// iteration cap 10 * max(rows, cols).
double spectral_norm(const Mat& m);

}  // namespace sops
