#include "aperiodic/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace aperiodic {

void CompensatedSum::step(double& sum, double& comp, double v) {
  const double t = sum + v;
  if (std::abs(sum) >= std::abs(v)) {
    comp += (sum - t) + v;
  } else {
    comp += (v - t) + sum;
  }
  sum = t;
}

void CompensatedSum::add(cplx v) {
  step(re_, cre_, v.real());
  step(im_, cim_, v.imag());
}

void CompensatedSum::add(const CompensatedSum& other) {
  step(re_, cre_, other.re_);
  step(im_, cim_, other.im_);
  cre_ += other.cre_;
  cim_ += other.cim_;
}

cplx unit_phase(double t) {
  const double r = t - std::nearbyint(t);
  const double a = kTwoPi * r;
  return {std::cos(a), std::sin(a)};
}

double cos_turns(double t) {
  const double r = t - std::nearbyint(t);
  return std::cos(kTwoPi * r);
}

double ball_volume(std::size_t dim, double radius) {
  const double d = static_cast<double>(dim);
  return std::pow(kPi, d / 2.0) / std::tgamma(d / 2.0 + 1.0) * std::pow(radius, d);
}

double ball_average_plane_wave(double q_norm, std::size_t dim, double radius) {
  const double t = kTwoPi * q_norm * radius;
  if (t == 0.0) return 1.0;
  switch (dim) {
    case 1:
      return std::sin(t) / t;
    case 3:
      return 3.0 * (std::sin(t) - t * std::cos(t)) / (t * t * t);
    default: {
      const double nu = static_cast<double>(dim) / 2.0;
      return std::tgamma(nu + 1.0) * std::pow(2.0 / t, nu) * std::cyl_bessel_j(nu, t);
    }
  }
}

double ball_average_bound(double q_norm, std::size_t dim, double radius) {
  const double t = kTwoPi * q_norm * radius;
  if (t == 0.0) return 1.0;
  if (dim == 1) return std::min(1.0, 1.0 / t);
  const double nu = static_cast<double>(dim) / 2.0;
  const double landau = 0.6749 * std::pow(t, -1.0 / 3.0);
  return std::min(1.0, std::tgamma(nu + 1.0) * std::pow(2.0 / t, nu) * landau);
}

bool AveragingRegion::contains(const Point& x, double r) const {
  if (shape == Shape::kBall) return x.norm2() <= r * r;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (std::abs(x[i]) > r) return false;
  }
  return true;
}

double AveragingRegion::volume(std::size_t dim, double r) const {
  if (shape == Shape::kBall) return ball_volume(dim, r);
  return std::pow(2.0 * r, static_cast<double>(dim));
}

}  // namespace aperiodic
