#include "sops/block_space.hpp"

#include <set>
#include <stdexcept>

namespace sops {

std::shared_ptr<const SpaceLayout> SpaceLayout::make(
    std::vector<std::pair<std::string, int>> blocks) {
  if (blocks.empty()) {
    throw std::invalid_argument("SpaceLayout: no blocks");
  }
  auto layout = std::shared_ptr<SpaceLayout>(new SpaceLayout());
  std::set<std::string> seen;
  int off = 0;
  for (auto& [label, dim] : blocks) {
    if (dim < 1) {
      throw std::invalid_argument("SpaceLayout: block '" + label +
                                  "' has dim < 1");
    }
    if (!seen.insert(label).second) {
      throw std::invalid_argument("SpaceLayout: duplicate label '" + label +
                                  "'");
    }
    layout->labels_.push_back(label);
    layout->dims_.push_back(dim);
    layout->offsets_.push_back(off);
    off += dim;
  }
  layout->total_ = off;
  return layout;
}

int SpaceLayout::index_of(const std::string& label) const {
  for (int b = 0; b < block_count(); ++b) {
    if (labels_[b] == label) return b;
  }
  return -1;
}

bool SpaceLayout::same_as(const SpaceLayout& other) const {
  if (this == &other) return true;
  return labels_ == other.labels_ && dims_ == other.dims_;
}

BlockVec::BlockVec(LayoutPtr layout)
    : layout_(std::move(layout)), data_(Vec::Zero(layout_->total_dim())) {}

BlockVec::BlockVec(LayoutPtr layout, Vec data)
    : layout_(std::move(layout)), data_(std::move(data)) {
  if (data_.size() != layout_->total_dim()) {
    throw std::invalid_argument("BlockVec: data length " +
                                std::to_string(data_.size()) +
                                " != layout total_dim " +
                                std::to_string(layout_->total_dim()));
  }
}

Eigen::VectorBlock<Vec> BlockVec::block(int b) {
  return data_.segment(layout_->offset(b), layout_->dim(b));
}

Eigen::VectorBlock<const Vec> BlockVec::block(int b) const {
  return data_.segment(layout_->offset(b), layout_->dim(b));
}

Eigen::VectorBlock<Vec> BlockVec::block(const std::string& label) {
  int b = layout_->index_of(label);
  if (b < 0) throw std::invalid_argument("BlockVec: no block '" + label + "'");
  return block(b);
}

Eigen::VectorBlock<const Vec> BlockVec::block(const std::string& label) const {
  int b = layout_->index_of(label);
  if (b < 0) throw std::invalid_argument("BlockVec: no block '" + label + "'");
  return block(b);
}

void require_same_layout(const BlockVec& u, const BlockVec& v,
                         const char* where) {
  if (!u.layout() || !v.layout()) {
    throw std::invalid_argument(std::string(where) + ": unset layout");
  }
  if (u.layout().get() == v.layout().get()) return;
  if (!u.layout()->same_as(*v.layout())) {
    throw std::invalid_argument(std::string(where) + ": layout mismatch");
  }
}

double inner(const BlockVec& u, const BlockVec& v) {
  require_same_layout(u, v, "inner");
  return u.data().dot(v.data());
}

double norm_sq(const BlockVec& u) { return u.data().squaredNorm(); }

BlockVec lincomb(const std::vector<double>& coeffs,
                 const std::vector<const BlockVec*>& vecs) {
  if (coeffs.empty() || vecs.empty()) {
    throw std::invalid_argument("lincomb: empty input");
  }
  if (coeffs.size() != vecs.size()) {
    throw std::invalid_argument("lincomb: list length mismatch");
  }
  for (size_t j = 1; j < vecs.size(); ++j) {
    require_same_layout(*vecs[0], *vecs[j], "lincomb");
  }
  BlockVec out(vecs[0]->layout());
  for (size_t j = 0; j < vecs.size(); ++j) {
    out.data() += coeffs[j] * vecs[j]->data();
  }
  return out;
}

StateX StateX::zero(LayoutPtr h, LayoutPtr g) {
  StateX s;
  s.x = BlockVec(h);
  s.y = BlockVec(g);
  s.z = BlockVec(g);
  s.vstar = BlockVec(g);
  return s;
}

double inner(const StateX& a, const StateX& b) {
  return inner(a.x, b.x) + inner(a.y, b.y) + inner(a.z, b.z) +
         inner(a.vstar, b.vstar);
}

double norm_sq(const StateX& a) {
  return norm_sq(a.x) + norm_sq(a.y) + norm_sq(a.z) + norm_sq(a.vstar);
}

StateX axpy(const StateX& a, double s, const StateX& b) {
  StateX out = a;
  out.x.data() += s * b.x.data();
  out.y.data() += s * b.y.data();
  out.z.data() += s * b.z.data();
  out.vstar.data() += s * b.vstar.data();
  return out;
}

}  // namespace sops
