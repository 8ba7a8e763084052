#pragma once

#include <functional>
#include <vector>

#include "aperiodic/numeric.hpp"
#include "aperiodic/pointset.hpp"

namespace aperiodic {

enum class Normalization {
  /// Both points of a pair inside the averaging region, divided by its volume.
  kBothInBall,
  /// Only the left point restricted, to the region shrunk by zmax; the
  /// partner is taken from the full sample.
  kOneSided,
};

struct AutocorrOptions {
  Normalization normalization = Normalization::kBothInBall;
  /// Box regions default to the largest cube inside the sample ball.
  AveragingRegion region;
};

/// gamma^R = sum_z eta_R(z) delta_z for |z| <= zmax.
struct AutocorrEstimate {
  double radius = 0.0;  // averaging radius actually used
  double zmax = 0.0;
  Normalization normalization = Normalization::kBothInBall;
  WeightedComb comb;

  std::complex<double> eta(const Point& z) const { return comb.weight_at(z); }
};

AutocorrEstimate autocorrelation(const PointSample& sample, double zmax,
                                 const AutocorrOptions& options = {});

/// Weights sum w(x) conj(w(y)) over pairs x - y = z, divided by the volume.
AutocorrEstimate weighted_autocorrelation(const WeightedComb& comb, double zmax,
                                          const AutocorrOptions& options = {});

/// Largest |w_a(z) - w_b(z)| over the union of atoms (missing atoms count as 0).
double comb_deviation(const WeightedComb& a, const WeightedComb& b, double tol);

struct AtomDeviation {
  Point z;
  double deviation = 0.0;
};

struct ConvergenceLadder {
  std::vector<double> radii;
  std::vector<AutocorrEstimate> estimates;
  /// deviations[i]: largest per-atom change between rungs i and i + 1.
  std::vector<double> deviations;
  std::vector<std::vector<AtomDeviation>> table;
  double tolerance = 0.0;

  bool converged() const { return !deviations.empty() && deviations.back() < tolerance; }
};

using SampleGenerator = std::function<PointSample(double radius)>;

ConvergenceLadder eberlein_ladder(const SampleGenerator& generate, const std::vector<double>& radii,
                                  double zmax, double tolerance = 1e-2,
                                  const AutocorrOptions& options = {});

}  // namespace aperiodic
