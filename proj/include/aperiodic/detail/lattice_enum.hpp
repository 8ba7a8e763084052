#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aperiodic/error.hpp"
#include "aperiodic/parallel.hpp"

namespace aperiodic::detail {

using IntCoords = std::vector<std::int64_t>;

// Enumerates integer vectors c with y = G c inside the box [lo, hi]. Leading
// coordinates range over the box preimage (inflated by one cell); the last
// coordinate is solved for directly from the box constraints. Slabs of the
// leading coordinate run in parallel and are concatenated in order, so the
// result order does not depend on the thread count. accept(c, y) returns the
// item to keep, or nullopt.
template <class T, class Accept>
std::vector<T> enumerate_lattice(const Eigen::MatrixXd& G, const Eigen::VectorXd& lo,
                                 const Eigen::VectorXd& hi, Accept&& accept, std::size_t cap) {
  const Eigen::Index n = G.cols();
  if (G.rows() != n || lo.size() != n || hi.size() != n) {
    fail(ErrorKind::kDimensionMismatch, "enumerate_lattice: shape mismatch");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lo[i] > hi[i]) return {};
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
  if (!lu.isInvertible()) fail(ErrorKind::kSingularBasis, "lattice generator matrix is singular");
  const Eigen::MatrixXd inv = lu.inverse();

  std::vector<std::int64_t> cmin(n), cmax(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double a = 0.0, b = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double u = inv(i, j) * lo[j], v = inv(i, j) * hi[j];
      a += std::min(u, v);
      b += std::max(u, v);
    }
    cmin[i] = static_cast<std::int64_t>(std::floor(a)) - 1;
    cmax[i] = static_cast<std::int64_t>(std::ceil(b)) + 1;
  }

  const Eigen::VectorXd last = G.col(n - 1);
  auto solve_last = [&](const Eigen::VectorXd& base, std::int64_t& from, std::int64_t& to) {
    double a = static_cast<double>(cmin[n - 1]), b = static_cast<double>(cmax[n - 1]);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double g = last[i];
      if (g == 0.0) {
        if (base[i] < lo[i] - 1e-9 * (1.0 + std::abs(lo[i])) ||
            base[i] > hi[i] + 1e-9 * (1.0 + std::abs(hi[i]))) {
          return false;
        }
        continue;
      }
      double u = (lo[i] - base[i]) / g, v = (hi[i] - base[i]) / g;
      if (u > v) std::swap(u, v);
      a = std::max(a, u);
      b = std::min(b, v);
    }
    if (a > b + 1.0) return false;
    from = static_cast<std::int64_t>(std::floor(a)) - 1;
    to = static_cast<std::int64_t>(std::ceil(b)) + 1;
    return true;
  };

  auto run_slab = [&](std::int64_t c0_from, std::int64_t c0_to) {
    std::vector<T> out;
    IntCoords c(n, 0);
    Eigen::VectorXd base(n), y(n);
    // odometer over coordinates 0 .. n-2, the first restricted to the slab
    std::vector<std::int64_t> from(cmin), to(cmax);
    if (n >= 2) {
      from[0] = c0_from;
      to[0] = c0_to;
    }
    for (Eigen::Index i = 0; i + 1 < n; ++i) c[i] = from[i];
    while (true) {
      base.setZero();
      for (Eigen::Index i = 0; i + 1 < n; ++i) base += G.col(i) * static_cast<double>(c[i]);
      std::int64_t a = 0, b = -1;
      if (solve_last(base, a, b)) {
        for (std::int64_t t = a; t <= b; ++t) {
          c[n - 1] = t;
          y.noalias() = base + last * static_cast<double>(t);
          if (auto item = accept(c, y)) {
            out.push_back(std::move(*item));
            if (out.size() > cap) {
              fail(ErrorKind::kCapExceeded, "lattice enumeration exceeds point cap " + std::to_string(cap));
            }
          }
        }
      }
      Eigen::Index i = 0;
      for (; i + 1 < n; ++i) {
        if (c[i] < to[i]) {
          ++c[i];
          break;
        }
        c[i] = from[i];
      }
      if (i + 1 >= n) break;
    }
    return out;
  };

  if (n == 1) return run_slab(0, 0);

  constexpr std::int64_t kSlab = 16;
  const std::int64_t span = cmax[0] - cmin[0] + 1;
  const auto slabs = static_cast<std::size_t>((span + kSlab - 1) / kSlab);
  auto parts = parallel_map<std::vector<T>>(slabs, [&](std::size_t s) {
    const std::int64_t a = cmin[0] + static_cast<std::int64_t>(s) * kSlab;
    return run_slab(a, std::min(cmax[0], a + kSlab - 1));
  });
  std::vector<T> out;
  for (auto& p : parts) {
    out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    if (out.size() > cap) {
      fail(ErrorKind::kCapExceeded, "lattice enumeration exceeds point cap " + std::to_string(cap));
    }
  }
  return out;
}

}  // namespace aperiodic::detail
