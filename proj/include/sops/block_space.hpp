#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace sops {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Ordered family of labelled finite-dimensional real coordinate spaces.
/// A layout describes the block structure of a direct sum; it never owns
/// vector data itself.
class SpaceLayout {
 public:
  static std::shared_ptr<const SpaceLayout> make(
      std::vector<std::pair<std::string, int>> blocks);

  int block_count() const { return static_cast<int>(dims_.size()); }
  int dim(int b) const { return dims_[b]; }
  int offset(int b) const { return offsets_[b]; }
  int total_dim() const { return total_; }
  const std::string& label(int b) const { return labels_[b]; }
  int index_of(const std::string& label) const;  // -1 if absent

  bool same_as(const SpaceLayout& other) const;

 private:
  SpaceLayout() = default;
  std::vector<std::string> labels_;
  std::vector<int> dims_;
  std::vector<int> offsets_;
  int total_ = 0;
};

using LayoutPtr = std::shared_ptr<const SpaceLayout>;

/// Element of a direct sum of coordinate spaces: flat contiguous storage
/// plus a layout table. Block accessors give contiguous views.
class BlockVec {
 public:
  BlockVec() = default;
  explicit BlockVec(LayoutPtr layout);
  BlockVec(LayoutPtr layout, Vec data);

  const LayoutPtr& layout() const { return layout_; }
  int total_dim() const { return static_cast<int>(data_.size()); }

  Vec& data() { return data_; }
  const Vec& data() const { return data_; }

  Eigen::VectorBlock<Vec> block(int b);
  Eigen::VectorBlock<const Vec> block(int b) const;
  Eigen::VectorBlock<Vec> block(const std::string& label);
  Eigen::VectorBlock<const Vec> block(const std::string& label) const;

  void set_zero() { data_.setZero(); }

 private:
  LayoutPtr layout_;
  Vec data_;
};

// throws std::invalid_argument on layout mismatch
double inner(const BlockVec& u, const BlockVec& v);
double norm_sq(const BlockVec& u);

// componentwise sum of coeffs[j] * vecs[j]; throws on empty input or
// layout mismatch
BlockVec lincomb(const std::vector<double>& coeffs,
                 const std::vector<const BlockVec*>& vecs);

/// Iterate of the saddle-space solvers: x over the primal layout, and
/// y, z, vstar over one shared dual layout.
struct StateX {
  BlockVec x;
  BlockVec y;
  BlockVec z;
  BlockVec vstar;

  static StateX zero(LayoutPtr h, LayoutPtr g);
};

double inner(const StateX& a, const StateX& b);
double norm_sq(const StateX& a);

// a + s*b, blockwise over all four members
StateX axpy(const StateX& a, double s, const StateX& b);

void require_same_layout(const BlockVec& u, const BlockVec& v,
                         const char* where);

}  // namespace sops
