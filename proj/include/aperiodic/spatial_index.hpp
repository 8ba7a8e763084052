#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace aperiodic {

/// Uniform-grid bucketing of a flat coordinate array (row-major, `dim`
/// values per point). Supports up to six dimensions so it can index points
/// lifted onto the sphere S^d.
class SpatialIndex {
 public:
  static constexpr std::size_t kMaxIndexDim = 6;
  using CellKey = std::array<std::int64_t, kMaxIndexDim>;

  SpatialIndex(std::span<const double> coords, std::size_t dim, double cell);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return n_; }
  double cell() const { return cell_; }
  std::span<const double> point(std::size_t i) const { return coords_.subspan(i * dim_, dim_); }

  /// Calls f(index, squared distance) for every indexed point within
  /// `radius` (inclusive) of q.
  template <class F>
  void for_each_within(std::span<const double> q, double radius, F&& f) const;

  /// Nearest indexed point to q, if any lies within max_radius.
  std::optional<std::pair<std::size_t, double>> nearest(
      std::span<const double> q,
      double max_radius = std::numeric_limits<double>::infinity()) const;

 private:
  struct KeyHash {
    std::size_t operator()(std::uint64_t k) const noexcept;
  };
  struct Range {
    std::uint32_t begin, end;
  };

  CellKey key_of(std::span<const double> q) const;
  const Range* find(const CellKey& k) const;

  std::span<const double> coords_;
  std::size_t dim_;
  std::size_t n_;
  double cell_;
  std::vector<std::uint32_t> order_;
  // cells keyed by their row-major offset inside the occupied key box
  std::unordered_map<std::uint64_t, Range, KeyHash> cells_;
  CellKey lo_{}, hi_{};
  std::array<std::uint64_t, kMaxIndexDim> stride_{};
};

template <class F>
void SpatialIndex::for_each_within(std::span<const double> q, double radius, F&& f) const {
  if (n_ == 0) return;
  CellKey lo{}, hi{};
  for (std::size_t i = 0; i < dim_; ++i) {
    lo[i] = std::max(lo_[i], static_cast<std::int64_t>(std::floor((q[i] - radius) / cell_)));
    hi[i] = std::min(hi_[i], static_cast<std::int64_t>(std::floor((q[i] + radius) / cell_)));
    if (lo[i] > hi[i]) return;
  }
  const double r2 = radius * radius;
  CellKey cur = lo;
  while (true) {
    if (const Range* r = find(cur)) {
      for (std::uint32_t k = r->begin; k < r->end; ++k) {
        const std::uint32_t idx = order_[k];
        const double* p = coords_.data() + static_cast<std::size_t>(idx) * dim_;
        double d2 = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
          const double t = p[i] - q[i];
          d2 += t * t;
        }
        if (d2 <= r2) f(static_cast<std::size_t>(idx), d2);
      }
    }
    std::size_t i = 0;
    for (; i < dim_; ++i) {
      if (cur[i] < hi[i]) {
        ++cur[i];
        break;
      }
      cur[i] = lo[i];
    }
    if (i == dim_) break;
  }
}

}  // namespace aperiodic
