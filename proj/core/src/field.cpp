#include "pmlwave/field.hpp"

namespace pmlwave {

BlockField::BlockField(int ncomp, const std::array<AxisClasses, 3>& axes,
                       int min_active)
    : ncomp_(ncomp), axes_(axes) {
  block_of_.fill(-1);
  for (int c1 = 0; c1 < 3; ++c1) {
    for (int c2 = 0; c2 < 3; ++c2) {
      for (int c3 = 0; c3 < 3; ++c3) {
        int active = (c1 != 1) + (c2 != 1) + (c3 != 1);
        if (active < min_active) continue;
        Box box;
        box.lo = {axes_[0].range_lo(c1), axes_[1].range_lo(c2),
                  axes_[2].range_lo(c3)};
        box.hi = {axes_[0].range_hi(c1), axes_[1].range_hi(c2),
                  axes_[2].range_hi(c3)};
        if (box.empty()) continue;
        Block b;
        b.box = box;
        b.n1 = box.hi[0] - box.lo[0] + 1;
        b.n2 = box.hi[1] - box.lo[1] + 1;
        b.n3 = box.hi[2] - box.lo[2] + 1;
        b.comp_stride = static_cast<std::size_t>(b.n1) * b.n2 * b.n3;
        b.data.assign(b.comp_stride * ncomp_, 0.0);
        block_of_[9 * c1 + 3 * c2 + c3] = static_cast<int>(blocks_.size());
        blocks_.push_back(std::move(b));
      }
    }
  }
}

std::size_t BlockField::scalar_count() const {
  std::size_t total = 0;
  for (const auto& b : blocks_) total += b.data.size();
  return total;
}

long BlockField::cell_count() const {
  long total = 0;
  for (const auto& b : blocks_) total += b.box.volume();
  return total;
}

void BlockField::fill(double v) {
  for (auto& b : blocks_) b.data.assign(b.data.size(), v);
}

} // namespace pmlwave
