#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aperiodic/generators.hpp"
#include "aperiodic/point.hpp"
#include "aperiodic/pointset.hpp"

namespace aperiodic {

/// Internal-space window: an interval (d_int = 1) or a convex polygon
/// (d_int = 2, vertices counter-clockwise).
///
/// Half-open sets use the convention that a face belongs to the window iff
/// its outward normal is lexicographically negative (the "min" faces), so
/// [lo, hi) for intervals. Closed windows contain their whole boundary.
struct Window {
  enum class Kind { kInterval, kPolygon, kOctagon };

  Kind kind = Kind::kInterval;
  std::vector<Point> vertices;  // interval: {lo, hi}
  bool closed = false;

  static Window interval(double lo, double hi, bool closed = false);
  static Window polygon(std::vector<Point> vertices, bool closed = false);
  /// Regular octagon centred at the origin with vertices at angles
  /// phase + j pi / 4.
  static Window octagon(double circumradius, double phase, bool closed = false);

  std::size_t dim() const { return kind == Kind::kInterval ? 1 : 2; }
  bool empty() const { return !(volume() > 0.0); }
  double volume() const;
  bool contains(const Point& y) const;
  double boundary_distance(const Point& y) const;
  /// Axis-aligned bounding box.
  std::pair<Point, Point> bounds() const;
  /// W - W as a closed window.
  Window difference() const;
  void validate() const;
};

struct CutProjectScheme {
  std::size_t d_phys = 1;
  std::size_t d_int = 1;
  Eigen::MatrixXd basis;      // (d_phys + d_int) square, columns generate L
  Eigen::MatrixXd proj_phys;  // d_phys x (d_phys + d_int)
  Eigen::MatrixXd proj_int;   // d_int x (d_phys + d_int)

  /// Generator matrix of L in (physical, internal) coordinates: [P; Q] * B.
  Eigen::MatrixXd embedded() const;
  Point physical(const std::vector<std::int64_t>& coords) const;
  Point star(const std::vector<std::int64_t>& coords) const;
  void validate() const;
};

struct ModelSetSpec {
  CutProjectScheme scheme;
  Window window;
  Point shift{0.0};
  /// Reject samples with an internal image this close to the window boundary.
  double genericity_tolerance = 1e-9;
  bool check_genericity = true;

  void validate() const;
};

/// Point of a model-set sample together with its lattice coordinates.
struct LiftedPoint {
  Point x;
  Point x_star;  // internal image, shift included
  std::vector<std::int64_t> coords;
};

/// Lambda = { pi(x) : x in L, pi_int(x) + shift in W } within the closed
/// ball of radius R, sorted lexicographically.
PointSample model_set_sample(const ModelSetSpec& spec, double radius,
                             std::size_t cap = kDefaultPointCap);
std::vector<LiftedPoint> model_set_lift(const ModelSetSpec& spec, double radius,
                                        std::size_t cap = kDefaultPointCap);

/// Internal image of the lattice point with the given coordinates.
Point star_map(const ModelSetSpec& spec, const std::vector<std::int64_t>& coords);

/// card(sample) / vol(B_R).
double model_set_density(const ModelSetSpec& spec, double radius);

/// vol(W) / |det [P; Q] B|, the limit of model_set_density.
double model_set_density_limit(const ModelSetSpec& spec);

struct DualCandidate {
  Point k;       // physical projection of the dual lattice vector
  Point k_star;  // internal companion
  std::vector<std::int64_t> coords;
};

/// Physical projections k of dual-lattice vectors with |k| <= kmax and
/// |k_star| <= kint, sorted by |k| then lexicographically.
std::vector<DualCandidate> dual_candidates(const CutProjectScheme& scheme, double kmax,
                                           double kint, std::size_t cap = kDefaultPointCap);

/// Dual-lattice vector whose physical projection is within tol of k and
/// whose internal companion has norm <= kint, if one exists.
std::optional<DualCandidate> dual_lift(const CutProjectScheme& scheme, const Point& k,
                                       double kint, double tol);

struct MeyerContainment {
  std::size_t differences = 0;
  std::size_t contained = 0;
  /// Largest distance from a difference vector to the W - W model set.
  double max_miss = 0.0;
  bool holds() const { return differences == contained; }
};

/// Checks that the difference vectors of the sample with |z| <= zmax lie in
/// the model set with window W - W and zero shift.
MeyerContainment meyer_containment(const ModelSetSpec& spec, double radius, double zmax);

/// "fibonacci-cps" or "ammann-beenker".
ModelSetSpec model_set_preset(std::string_view name);

}  // namespace aperiodic
