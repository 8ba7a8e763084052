#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Everything here is deliberately naive: quadratic loops, direct string
// rewriting, dense eigen-decomposition, quadrature.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "aperiodic/error.hpp"
#include "aperiodic/numeric.hpp"
#include "aperiodic/point.hpp"
#include "aperiodic/pointset.hpp"

namespace oracle {

using aperiodic::Point;
using aperiodic::PointSample;
using cplx = std::complex<double>;

inline constexpr double kTau = 1.61803398874989484820;

/// Kind of the aperiodic::Error thrown by f; throws std::logic_error when f
/// returns normally.
inline aperiodic::ErrorKind error_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const aperiodic::Error& e) {
    return e.kind();
  }
  throw std::logic_error("expected an aperiodic::Error");
}

/// Difference counts by a full double loop, merged with a tolerance.
inline std::vector<std::pair<Point, double>> brute_differences(const PointSample& s, double zmax,
                                                                double tol) {
  std::vector<std::pair<Point, double>> out;
  for (const Point& x : s.points()) {
    for (const Point& y : s.points()) {
      const Point z = x - y;
      if (z.norm() > zmax) continue;
      bool merged = false;
      for (auto& [p, c] : out) {
        if (aperiodic::distance(p, z) <= tol) {
          c += 1.0;
          merged = true;
          break;
        }
      }
      if (!merged) out.push_back({z, 1.0});
    }
  }
  return out;
}

/// Weighted pair sums sum w(x) conj(w(y)) over x - y = z, by a double loop.
inline std::vector<std::pair<Point, cplx>> brute_weighted_pairs(const aperiodic::WeightedComb& c,
                                                                 double zmax, double tol) {
  std::vector<std::pair<Point, cplx>> out;
  for (const auto& a : c.atoms()) {
    for (const auto& b : c.atoms()) {
      const Point z = a.x - b.x;
      if (z.norm() > zmax) continue;
      const cplx v = a.w * std::conj(b.w);
      bool merged = false;
      for (auto& [p, w] : out) {
        if (aperiodic::distance(p, z) <= tol) {
          w += v;
          merged = true;
          break;
        }
      }
      if (!merged) out.push_back({z, v});
    }
  }
  return out;
}

inline std::vector<double> sphere_point(const Point& x) {
  const double r2 = x.norm2();
  std::vector<double> s(x.dim() + 1);
  for (std::size_t k = 0; k < x.dim(); ++k) s[k] = 2.0 * x[k] / (1.0 + r2);
  s[x.dim()] = (r2 - 1.0) / (r2 + 1.0);
  return s;
}

/// All-pairs Hausdorff distance of the stereographic images plus the pole.
inline double brute_hull_distance(const PointSample& a, const PointSample& b) {
  auto lift = [](const PointSample& s) {
    std::vector<std::vector<double>> out;
    for (const Point& p : s.points()) out.push_back(sphere_point(p));
    std::vector<double> pole(s.dim() + 1, 0.0);
    pole.back() = 1.0;
    out.push_back(pole);
    return out;
  };
  auto dist = [](const std::vector<double>& u, const std::vector<double>& v) {
    double t = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) t += (u[i] - v[i]) * (u[i] - v[i]);
    return std::sqrt(t);
  };
  auto directed = [&](const auto& u, const auto& v) {
    double h = 0.0;
    for (const auto& p : u) {
      double m = INFINITY;
      for (const auto& q : v) m = std::min(m, dist(p, q));
      h = std::max(h, m);
    }
    return h;
  };
  const auto la = lift(a), lb = lift(b);
  return std::max(directed(la, lb), directed(lb, la));
}

/// Letter-by-letter rewriting on std::string.
inline std::string rewrite(const std::string& w, const std::map<char, std::string>& rules, int n) {
  std::string cur = w;
  for (int i = 0; i < n; ++i) {
    std::string next;
    for (char c : cur) next += rules.at(c);
    cur = std::move(next);
  }
  return cur;
}

/// Perron-Frobenius eigenvector from a dense eigen-decomposition, positive
/// and normalized to sum 1.
inline std::vector<double> perron_vector(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < m.rows(); ++i) {
    if (es.eigenvalues()[i].real() > es.eigenvalues()[best].real()) best = i;
  }
  Eigen::VectorXd v = es.eigenvectors().col(best).real();
  if (v.sum() < 0) v = -v;
  v /= v.sum();
  return {v.data(), v.data() + v.size()};
}

inline double perron_value(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  double best = -INFINITY;
  for (Eigen::Index i = 0; i < m.rows(); ++i) best = std::max(best, es.eigenvalues()[i].real());
  return best;
}

/// Composite Simpson rule on [a, b] with n (even) panels.
inline cplx simpson(const std::function<cplx(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  cplx s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
  return s * (h / 3.0);
}

/// Direct exponential sum (1 / vol B_R) sum w(x) exp(2 pi i k.x), no compensation.
inline cplx direct_amplitude(const std::vector<Point>& pts, const std::vector<cplx>& w, const Point& k,
                             double radius) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double ph = aperiodic::kTwoPi * k.dot(pts[i]);
    s += w[i] * cplx(std::cos(ph), std::sin(ph));
  }
  return s / aperiodic::ball_volume(pts.empty() ? k.dim() : pts[0].dim(), radius);
}

/// Seeded generators for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::mt19937_64& engine() { return rng_; }

  /// Random 1-d Delone sample: gaps drawn from [gmin, gmax], origin inside.
  PointSample delone_1d(double radius, double gmin, double gmax) {
    std::vector<Point> pts;
    double x = -radius + uniform(0.0, gmin);
    while (x <= radius) {
      pts.push_back(Point{x});
      x += uniform(gmin, gmax);
    }
    return PointSample(1, radius, std::move(pts), "random delone");
  }

  /// Random 2-d sample by jittering Z^2 inside the ball.
  PointSample jittered_2d(double radius, double jitter) {
    std::vector<Point> pts;
    const int n = static_cast<int>(std::ceil(radius));
    for (int i = -n; i <= n; ++i) {
      for (int j = -n; j <= n; ++j) {
        Point p{i + uniform(-jitter, jitter), j + uniform(-jitter, jitter)};
        if (p.norm() <= radius) pts.push_back(p);
      }
    }
    return PointSample(2, radius, std::move(pts), "jittered lattice");
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
