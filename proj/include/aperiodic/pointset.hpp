#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aperiodic/point.hpp"

namespace aperiodic {

/// Relative matching tolerance: epsilon = kRelativeTolerance * scale, where
/// scale is the mean point spacing (vol(B_R) / N)^(1/d).
inline constexpr double kRelativeTolerance = 1e-9;

/// Finite restriction of a point set to the closed ball B_R(0).
class PointSample {
 public:
  PointSample() = default;
  PointSample(std::size_t dim, double radius, std::vector<Point> points,
              std::string provenance = {});

  std::size_t dim() const { return dim_; }
  double radius() const { return radius_; }
  std::span<const Point> points() const { return points_; }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::string& provenance() const { return provenance_; }

  /// Mean spacing (vol(B_R) / N)^(1/d); the radius for empty samples.
  double scale() const;
  double tolerance() const { return kRelativeTolerance * scale(); }

  /// Row-major coordinate copy, dim() values per point.
  std::vector<double> flat() const;

 private:
  std::size_t dim_ = 1;
  double radius_ = 0.0;
  std::vector<Point> points_;
  std::string provenance_;
};

struct WeightedAtom {
  Point x;
  std::complex<double> w;
};

/// Finite list of (point, complex weight) pairs: Dirac combs, autocorrelation
/// estimates and diffraction atom lists.
class WeightedComb {
 public:
  WeightedComb() = default;
  WeightedComb(std::size_t dim, double radius, std::vector<WeightedAtom> atoms,
               std::string provenance = {});

  std::size_t dim() const { return dim_; }
  double radius() const { return radius_; }
  std::span<const WeightedAtom> atoms() const { return atoms_; }
  const WeightedAtom& operator[](std::size_t i) const { return atoms_[i]; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const std::string& provenance() const { return provenance_; }

  double scale() const;
  double tolerance() const { return kRelativeTolerance * scale(); }

  /// Weight of the atom within `tol` of z (0 when absent). Atoms are kept
  /// sorted lexicographically, so this is a binary search on the first axis.
  std::complex<double> weight_at(const Point& z, double tol) const;
  std::complex<double> weight_at(const Point& z) const { return weight_at(z, tolerance()); }

 private:
  std::size_t dim_ = 1;
  double radius_ = 0.0;
  std::vector<WeightedAtom> atoms_;
  std::string provenance_;
};

/// Unit-weight comb of a sample.
WeightedComb as_comb(const PointSample& sample);

/// Lambda intersected with the closed ball of radius r.
PointSample restrict(const PointSample& sample, double r);

/// t + Lambda; the radius grows by |t| so every point stays inside the ball.
PointSample translate(const PointSample& sample, const Point& t);

struct DifferenceWitness {
  Point z1, z2;
  std::array<std::size_t, 2> pair1{}, pair2{};  // sample indices realizing z1 = x_i - x_j
  double separation = 0.0;
};

struct StructureReport {
  double packing_radius = 0.0;
  /// Largest probe-to-nearest-point distance on a grid of pitch r/4 inside
  /// the margin-shrunk ball.
  double covering_radius = 0.0;
  /// covering_radius plus the probe-cell half-diagonal: a guaranteed bound
  /// for the interior region.
  double covering_upper_bound = 0.0;
  std::size_t probes = 0;
  std::size_t distinct_differences = 0;
  /// Minimal distance between distinct difference vectors with |z| <= margin.
  double difference_separation = 0.0;
  std::optional<DifferenceWitness> flc_witness;
  std::optional<DifferenceWitness> meyer_witness;
};

struct StructureOptions {
  /// Distinct difference vectors closer than this (relative to the sample
  /// scale) indicate an accumulation of Lambda - Lambda.
  double flc_tolerance = 1e-6;
  /// Distinct difference vectors closer than this (relative) indicate that
  /// Lambda - Lambda fails to be uniformly discrete at the probed scale.
  double meyer_tolerance = 1e-2;
};

StructureReport structure_report(const PointSample& sample, double margin,
                                 const StructureOptions& options = {});

/// All distinct z = x - y with |z| <= zmax, weighted by the number of
/// realizing pairs.
WeightedComb difference_vectors(const PointSample& sample, double zmax);

/// Hausdorff distance of the inverse stereographic images of the two samples,
/// each completed by the north pole.
double hull_distance(const PointSample& s1, const PointSample& s2);

/// Inverse stereographic projection R^d -> S^d subset R^(d+1).
std::array<double, kMaxDim + 1> to_sphere(const Point& x);

}  // namespace aperiodic
