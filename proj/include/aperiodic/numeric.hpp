#pragma once

#include <complex>
#include <cstddef>

#include "aperiodic/point.hpp"

namespace aperiodic {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kGolden = 1.61803398874989484820;  // (1 + sqrt 5) / 2

using cplx = std::complex<double>;

/// Neumaier-compensated accumulator for complex sums.
class CompensatedSum {
 public:
  void add(cplx v);
  void add(const CompensatedSum& other);
  cplx value() const { return {re_ + cre_, im_ + cim_}; }

 private:
  static void step(double& sum, double& comp, double v);
  double re_ = 0.0, cre_ = 0.0, im_ = 0.0, cim_ = 0.0;
};

/// exp(2 pi i t), with t reduced to [-1/2, 1/2] before the trig call.
cplx unit_phase(double t);

/// cos(2 pi t) with the same argument reduction.
double cos_turns(double t);

double ball_volume(std::size_t dim, double radius);

/// Mean of exp(2 pi i q.x) over the ball of radius R in R^dim, as a function
/// of |q|: sin(t)/t in d = 1 and Gamma(nu+1) (2/t)^nu J_nu(t) in general,
/// with t = 2 pi |q| R and nu = d/2.
double ball_average_plane_wave(double q_norm, std::size_t dim, double radius);

/// Upper bound on |ball_average_plane_wave|: min(1, 1/t) in d = 1, Landau's
/// |J_nu(t)| <= 0.6749 t^{-1/3} otherwise.
double ball_average_bound(double q_norm, std::size_t dim, double radius);

/// Averaging region: centred closed ball (default) or axis-aligned cube.
struct AveragingRegion {
  enum class Shape { kBall, kBox };
  Shape shape = Shape::kBall;
  /// Ball radius or cube half-width; 0 means "derive from the sample".
  double radius = 0.0;

  bool contains(const Point& x, double r) const;
  double volume(std::size_t dim, double r) const;
};

}  // namespace aperiodic
