#pragma once

#include <map>
#include <string>
#include <vector>

#include "aperiodic/diffraction.hpp"
#include "aperiodic/generators.hpp"
#include "aperiodic/pointset.hpp"

namespace aperiodic {

/// A K-cluster: compact K (closed interval, ball or box) and a nonempty
/// finite P inside K. Occurrence at t means (Lambda - t) cap K = P.
struct ClusterPattern {
  enum class Shape { kInterval, kBall, kBox };

  Shape shape = Shape::kInterval;
  double lo = 0.0, hi = 0.0;  // interval
  double radius = 0.0;        // ball radius or box half-width
  std::size_t dim = 1;
  std::vector<Point> points;

  static ClusterPattern interval(double lo, double hi, std::vector<Point> points);
  static ClusterPattern ball(std::size_t dim, double radius, std::vector<Point> points);
  static ClusterPattern box(std::size_t dim, double half_width, std::vector<Point> points);

  /// Closed membership with slack tol.
  bool in_window(const Point& x, double tol = 0.0) const;
  /// max |x| over K.
  double extent() const;
  void validate() const;
};

/// T_{K,P} = { t in Lambda : (Lambda - t) cap K = P }, reported for
/// |t| <= R - extent(K); the output radius records the shrink.
PointSample locator_set(const PointSample& sample, const ClusterPattern& pattern);

/// locator_set tagged as the derived factor Y_{K,P}.
PointSample derived_factor_sample(const PointSample& sample, const ClusterPattern& pattern);

/// Distinct patterns (Lambda - t) cap K over the interior points, in order
/// of first occurrence, each with P set to the observed cluster.
std::vector<ClusterPattern> occurring_patterns(const PointSample& sample, const ClusterPattern& window);

/// Sliding-block code on words of length w.
struct BlockMap {
  std::size_t w = 1;
  std::map<std::vector<std::string>, std::string> rule;

  /// Keys given as strings of single-character letters: {"ab": "a", ...}.
  static BlockMap from_strings(std::size_t w, const std::map<std::string, std::string>& rule);
  /// xy -> a if x != y, b if x == y.
  static BlockMap thue_morse_difference();
  static BlockMap identity(const std::vector<std::string>& alphabet);
  static BlockMap constant(const std::vector<std::string>& alphabet, std::size_t w, const std::string& letter);

  /// Output letters in sorted order.
  std::vector<std::string> output_alphabet() const;
};

/// Applies the map to every window; the result is w - 1 letters shorter.
std::vector<std::string> sliding_block(const std::vector<std::string>& word, const BlockMap& map);

/// Recodes the chain on the same left endpoints. The last w - 1 letters have
/// no complete window; the output is restricted to the symmetric ball that
/// excludes them.
ChainSample sliding_block(const ChainSample& chain, const BlockMap& map);

std::vector<std::string> chain_letters(const ChainSample& chain);

struct FactorGainReport {
  BraggList source;
  BraggList factor;
  /// Candidates detected in the factor but not in the source.
  std::vector<BraggPeak> gain;
};

FactorGainReport factor_diffraction_gain(const PointSample& source, const PointSample& factor,
                                         std::span<const Point> candidates, double threshold = 1e-3,
                                         const AveragingRegion& region = {});

}  // namespace aperiodic
