#pragma once

#include <complex>
#include <span>
#include <vector>

#include "aperiodic/pointset.hpp"

namespace aperiodic::detail {

// Sums left[i] * conj(right[j]) over all pairs with |x_i - x_j| <= zmax,
// binned by difference vector. Differences are rounded to a grid of pitch
// eps and adjacent occupied cells are merged. Atoms with zero total weight
// are dropped unless keep_zero is set. Output is sorted lexicographically.
std::vector<WeightedAtom> pair_sums(std::span<const Point> points,
                                    std::span<const std::complex<double>> left,
                                    std::span<const std::complex<double>> right,
                                    double zmax, double eps, bool keep_zero = false);

}  // namespace aperiodic::detail
