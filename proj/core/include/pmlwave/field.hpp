#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace pmlwave {

/// Dense scalar field on the full node (or cell) mesh.
/// Storage: x1 contiguous, x2 next, x3 outermost. 2D fields use n3 = 1.
struct ScalarField {
  int n1 = 0, n2 = 0, n3 = 1;
  std::vector<double> data;

  ScalarField() = default;
  ScalarField(int nx1, int nx2, int nx3 = 1)
      : n1(nx1), n2(nx2), n3(nx3),
        data(static_cast<std::size_t>(nx1) * nx2 * nx3, 0.0) {}

  std::size_t size() const { return data.size(); }
  std::size_t idx(int i, int j, int k = 0) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(n1) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(n2) * k);
  }
  double& operator()(int i, int j, int k = 0) { return data[idx(i, j, k)]; }
  double operator()(int i, int j, int k = 0) const { return data[idx(i, j, k)]; }
  void fill(double v) { data.assign(data.size(), v); }
};

/// Inclusive index box, per axis. Unused axes carry [0, 0].
struct Box {
  std::array<int, 3> lo{0, 0, 0};
  std::array<int, 3> hi{0, 0, 0};

  bool empty() const {
    return lo[0] > hi[0] || lo[1] > hi[1] || lo[2] > hi[2];
  }
  long volume() const {
    if (empty()) return 0;
    return static_cast<long>(hi[0] - lo[0] + 1) * (hi[1] - lo[1] + 1) *
           (hi[2] - lo[2] + 1);
  }
  bool contains(int i, int j, int k) const {
    return i >= lo[0] && i <= hi[0] && j >= lo[1] && j <= hi[1] && k >= lo[2] &&
           k <= hi[2];
  }
};

/// Per-axis partition of an index range into up to three contiguous classes:
/// low active run, middle (inactive), high active run. Used to build the
/// block decomposition of the layer-affected region.
struct AxisClasses {
  int n = 0;          // number of indices on this axis
  int lo_end = -1;    // active prefix is [0, lo_end]
  int hi_start = 0;   // active suffix is [hi_start, n-1]; == n when empty

  // class codes: 0 = low, 1 = mid, 2 = high
  int cls(int i) const { return i <= lo_end ? 0 : (i >= hi_start ? 2 : 1); }
  int range_lo(int c) const {
    return c == 0 ? 0 : (c == 1 ? lo_end + 1 : hi_start);
  }
  int range_hi(int c) const {
    return c == 0 ? lo_end : (c == 1 ? hi_start - 1 : n - 1);
  }
};

/// Multi-component field stored only on a union of disjoint index boxes
/// (the blocks). Lookups outside every block return 0. Blocks are the
/// nonempty class-combination boxes whose number of non-middle axes is at
/// least `min_active`; this keeps auxiliary storage confined to the
/// damping-layer region (min_active = 1) or to layer overlaps (2).
class BlockField {
public:
  struct Block {
    Box box;
    int n1, n2, n3;              // box extents
    std::size_t comp_stride;     // scalars per component
    std::vector<double> data;    // ncomp * comp_stride

    std::size_t at(int c, int i, int j, int k) const {
      return static_cast<std::size_t>(c) * comp_stride +
             static_cast<std::size_t>(i - box.lo[0]) +
             static_cast<std::size_t>(n1) *
                 (static_cast<std::size_t>(j - box.lo[1]) +
                  static_cast<std::size_t>(n2) * (k - box.lo[2]));
    }
  };

  BlockField() = default;
  BlockField(int ncomp, const std::array<AxisClasses, 3>& axes, int min_active);

  int ncomp() const { return ncomp_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  std::vector<Block>& blocks() { return blocks_; }

  /// Value lookup with zero default outside all blocks.
  double value(int c, int i, int j, int k) const {
    int b = block_of_[combo_code(i, j, k)];
    if (b < 0) return 0.0;
    return blocks_[b].data[blocks_[b].at(c, i, j, k)];
  }

  /// Mutable access; (i,j,k) must lie inside a block.
  double& ref(int c, int i, int j, int k) {
    int b = block_of_[combo_code(i, j, k)];
    return blocks_[b].data[blocks_[b].at(c, i, j, k)];
  }

  bool covers(int i, int j, int k) const {
    return block_of_[combo_code(i, j, k)] >= 0;
  }

  /// Total number of stored scalars (all components, all blocks).
  std::size_t scalar_count() const;
  /// Number of distinct index tuples covered by the blocks.
  long cell_count() const;
  void fill(double v);

private:
  int combo_code(int i, int j, int k) const {
    return 9 * axes_[0].cls(i) + 3 * axes_[1].cls(j) + axes_[2].cls(k);
  }

  int ncomp_ = 0;
  std::array<AxisClasses, 3> axes_{};
  std::array<int, 27> block_of_{}; // combo code -> block index or -1
  std::vector<Block> blocks_;
};

} // namespace pmlwave
