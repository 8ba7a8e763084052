#include "aperiodic/spatial_index.hpp"

#include <algorithm>
#include <numeric>

#include "aperiodic/error.hpp"

namespace aperiodic {

std::size_t SpatialIndex::KeyHash::operator()(std::uint64_t k) const noexcept {
  k ^= k >> 33;
  k *= 0xff51afd7ed558ccdULL;
  k ^= k >> 33;
  return static_cast<std::size_t>(k);
}

SpatialIndex::SpatialIndex(std::span<const double> coords, std::size_t dim, double cell)
    : coords_(coords), dim_(dim), n_(dim ? coords.size() / dim : 0), cell_(cell) {
  if (dim == 0 || dim > kMaxIndexDim) {
    fail(ErrorKind::kDimensionMismatch, "spatial index supports 1..6 dimensions");
  }
  if (!(cell > 0.0) || !std::isfinite(cell)) {
    fail(ErrorKind::kInvalidArgument, "spatial index cell size must be positive");
  }
  if (n_ == 0) return;
  std::array<double, kMaxIndexDim> cmin{}, cmax{};
  cmin.fill(std::numeric_limits<double>::infinity());
  cmax.fill(-std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = 0; k < dim_; ++k) {
      cmin[k] = std::min(cmin[k], coords_[i * dim_ + k]);
      cmax[k] = std::max(cmax[k], coords_[i * dim_ + k]);
    }
  }
  // Coarsen the grid until the occupied key box has at most 2^60 cells.
  while (true) {
    double cells = 1.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      cells *= std::floor(cmax[k] / cell_) - std::floor(cmin[k] / cell_) + 1.0;
    }
    if (cells <= 0x1p60) break;
    cell_ *= 2.0;
  }
  lo_.fill(0);
  hi_.fill(0);
  std::uint64_t stride = 1;
  for (std::size_t k = dim_; k-- > 0;) {
    lo_[k] = static_cast<std::int64_t>(std::floor(cmin[k] / cell_));
    hi_[k] = static_cast<std::int64_t>(std::floor(cmax[k] / cell_));
    stride_[k] = stride;
    stride *= static_cast<std::uint64_t>(hi_[k] - lo_[k] + 1);
  }

  std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const CellKey key = key_of(point(i));
    std::uint64_t lin = 0;
    for (std::size_t k = 0; k < dim_; ++k) lin += static_cast<std::uint64_t>(key[k] - lo_[k]) * stride_[k];
    keyed[i] = {lin, static_cast<std::uint32_t>(i)};
  }
  std::sort(keyed.begin(), keyed.end());
  order_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) order_[i] = keyed[i].second;
  cells_.reserve(n_);
  for (std::size_t k = 0; k < n_;) {
    std::size_t e = k;
    while (e < n_ && keyed[e].first == keyed[k].first) ++e;
    cells_.emplace(keyed[k].first, Range{static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(e)});
    k = e;
  }
}

SpatialIndex::CellKey SpatialIndex::key_of(std::span<const double> q) const {
  CellKey k{};
  for (std::size_t i = 0; i < dim_; ++i) {
    k[i] = static_cast<std::int64_t>(std::floor(q[i] / cell_));
  }
  return k;
}

const SpatialIndex::Range* SpatialIndex::find(const CellKey& k) const {
  std::uint64_t lin = 0;
  for (std::size_t i = 0; i < dim_; ++i) {
    if (k[i] < lo_[i] || k[i] > hi_[i]) return nullptr;
    lin += static_cast<std::uint64_t>(k[i] - lo_[i]) * stride_[i];
  }
  auto it = cells_.find(lin);
  return it == cells_.end() ? nullptr : &it->second;
}

std::optional<std::pair<std::size_t, double>> SpatialIndex::nearest(std::span<const double> q,
                                                                    double max_radius) const {
  if (n_ == 0) return std::nullopt;
  const CellKey center = key_of(q);
  std::int64_t max_ring = 0;
  for (std::size_t i = 0; i < dim_; ++i) {
    max_ring = std::max({max_ring, center[i] - lo_[i], hi_[i] - center[i]});
  }
  double best2 = max_radius * max_radius;
  std::optional<std::size_t> best;

  CellKey off{};
  for (std::int64_t ring = 0; ring <= max_ring; ++ring) {
    // visit cells at Chebyshev distance exactly `ring` from the query cell
    for (std::size_t i = 0; i < dim_; ++i) off[i] = -ring;
    while (true) {
      std::int64_t cheb = 0;
      for (std::size_t i = 0; i < dim_; ++i) cheb = std::max(cheb, std::abs(off[i]));
      if (cheb == ring) {
        CellKey cur{};
        for (std::size_t i = 0; i < dim_; ++i) cur[i] = center[i] + off[i];
        if (const Range* r = find(cur)) {
          for (std::uint32_t k = r->begin; k < r->end; ++k) {
            const std::uint32_t idx = order_[k];
            auto p = point(idx);
            double d2 = 0.0;
            for (std::size_t i = 0; i < dim_; ++i) d2 += (p[i] - q[i]) * (p[i] - q[i]);
            if (d2 < best2 || (d2 == best2 && best && idx < *best)) {
              best2 = d2;
              best = idx;
            }
          }
        }
      }
      std::size_t i = 0;
      for (; i < dim_; ++i) {
        if (off[i] < ring) {
          ++off[i];
          break;
        }
        off[i] = -ring;
      }
      if (i == dim_) break;
    }
    const double reach = static_cast<double>(ring) * cell_;
    if (best && best2 <= reach * reach) break;
    if (!best && reach > max_radius) break;
  }
  if (!best) return std::nullopt;
  return std::make_pair(*best, std::sqrt(best2));
}

}  // namespace aperiodic
