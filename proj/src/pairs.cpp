#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "aperiodic/detail/pairs.hpp"
#include "aperiodic/error.hpp"
#include "aperiodic/numeric.hpp"
#include "aperiodic/parallel.hpp"
#include "aperiodic/spatial_index.hpp"

namespace aperiodic::detail {
namespace {

using Key = std::array<std::int64_t, kMaxDim>;

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto v : k) {
      h ^= static_cast<std::uint64_t>(v);
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

struct Acc {
  CompensatedSum sum;
  std::array<double, kMaxDim> zsum{};
  std::uint64_t count = 0;

  void merge(const Acc& o) {
    sum.add(o.sum);
    for (std::size_t i = 0; i < kMaxDim; ++i) zsum[i] += o.zsum[i];
    count += o.count;
  }
};

// Union-find over the sorted cell list.
std::size_t root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

std::vector<WeightedAtom> pair_sums(std::span<const Point> points,
                                    std::span<const std::complex<double>> left,
                                    std::span<const std::complex<double>> right,
                                    double zmax, double eps, bool keep_zero) {
  if (points.empty()) return {};
  if (!(zmax > 0.0)) fail(ErrorKind::kInvalidArgument, "zmax must be positive");
  const std::size_t dim = points.front().dim();
  const std::size_t n = points.size();

  std::vector<double> flat(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < dim; ++k) flat[i * dim + k] = points[i][k];
  }
  const SpatialIndex index(flat, dim, zmax);

  const std::size_t blocks = (n + kBlockSize - 1) / kBlockSize;
  using Table = std::vector<std::pair<Key, Acc>>;
  auto tables = parallel_map<Table>(blocks, [&](std::size_t b) {
    std::unordered_map<Key, Acc, KeyHash> local;
    const std::size_t end = std::min(n, (b + 1) * kBlockSize);
    for (std::size_t i = b * kBlockSize; i < end; ++i) {
      if (left[i] == std::complex<double>(0.0)) continue;
      index.for_each_within(index.point(i), zmax + eps, [&](std::size_t j, double) {
        if (right[j] == std::complex<double>(0.0)) return;
        Key key{};
        std::array<double, kMaxDim> z{};
        for (std::size_t k = 0; k < dim; ++k) {
          z[k] = points[i][k] - points[j][k];
          key[k] = std::llround(z[k] / eps);
        }
        Acc& a = local[key];
        a.sum.add(left[i] * std::conj(right[j]));
        for (std::size_t k = 0; k < dim; ++k) a.zsum[k] += z[k];
        ++a.count;
      });
    }
    Table t(local.begin(), local.end());
    std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return t;
  });

  std::map<Key, Acc> merged;
  for (const Table& t : tables) {
    for (const auto& [key, acc] : t) merged[key].merge(acc);
  }

  // Merge adjacent occupied cells: a difference vector whose rounding
  // straddles a cell boundary must not split into two atoms.
  std::vector<Key> keys;
  std::vector<Acc> accs;
  keys.reserve(merged.size());
  accs.reserve(merged.size());
  for (auto& [k, a] : merged) {
    keys.push_back(k);
    accs.push_back(a);
  }
  std::vector<std::size_t> parent(keys.size());
  std::iota(parent.begin(), parent.end(), 0);
  const std::size_t stencil = static_cast<std::size_t>(std::pow(3, dim));
  for (std::size_t a = 0; a < keys.size(); ++a) {
    for (std::size_t s = 0; s < stencil; ++s) {
      Key nb = keys[a];
      std::size_t code = s;
      bool self = true;
      for (std::size_t k = 0; k < dim; ++k) {
        const int off = static_cast<int>(code % 3) - 1;
        code /= 3;
        nb[k] += off;
        if (off) self = false;
      }
      if (self || !(keys[a] < nb)) continue;
      auto it = std::lower_bound(keys.begin(), keys.end(), nb);
      if (it != keys.end() && *it == nb) {
        const std::size_t b = static_cast<std::size_t>(it - keys.begin());
        const std::size_t ra = root(parent, a), rb = root(parent, b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      }
    }
  }

  std::map<std::size_t, Acc> clusters;
  for (std::size_t a = 0; a < keys.size(); ++a) clusters[root(parent, a)].merge(accs[a]);

  std::vector<WeightedAtom> out;
  out.reserve(clusters.size());
  for (const auto& [r, acc] : clusters) {
    const std::complex<double> w = acc.sum.value();
    if (!keep_zero && w == std::complex<double>(0.0)) continue;
    Point z(dim);
    for (std::size_t k = 0; k < dim; ++k) z[k] = acc.zsum[k] / static_cast<double>(acc.count);
    out.push_back({z, w});
  }
  std::sort(out.begin(), out.end(),
            [](const WeightedAtom& a, const WeightedAtom& b) { return lex_less(a.x, b.x); });
  return out;
}

}  // namespace aperiodic::detail
