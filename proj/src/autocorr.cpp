#include "aperiodic/autocorr.hpp"

#include <algorithm>
#include <cmath>

#include "aperiodic/detail/pairs.hpp"
#include "aperiodic/error.hpp"

namespace aperiodic {
namespace {

struct Region {
  double outer;  // region containing both points
  double inner;  // region for the left point
  double volume;
};

Region averaging_region(std::size_t dim, double sample_radius, double zmax, const AutocorrOptions& opt) {
  AveragingRegion reg = opt.region;
  double r = reg.radius;
  if (r == 0.0) {
    r = reg.shape == AveragingRegion::Shape::kBall ? sample_radius
                                                   : sample_radius / std::sqrt(static_cast<double>(dim));
  }
  const double reach = reg.shape == AveragingRegion::Shape::kBall ? r : r * std::sqrt(static_cast<double>(dim));
  if (!(r > 0.0) || reach > sample_radius * (1.0 + 1e-12)) {
    fail(ErrorKind::kInvalidArgument, "averaging region must lie inside the sample ball");
  }
  if (zmax > r * (1.0 + 1e-12)) fail(ErrorKind::kInvalidArgument, "zmax exceeds the averaging radius");
  if (opt.normalization == Normalization::kBothInBall) return {r, r, reg.volume(dim, r)};
  const double inner = r - zmax;
  if (!(inner > 0.0)) fail(ErrorKind::kInvalidArgument, "one-sided normalization needs zmax < radius");
  // partners come from the whole region of radius r
  return {r, inner, reg.volume(dim, inner)};
}

AutocorrEstimate estimate(std::size_t dim, double sample_radius, std::span<const Point> points,
                          std::span<const std::complex<double>> weights, double eps, double zmax,
                          const AutocorrOptions& opt, const std::string& provenance) {
  if (!(zmax > 0.0)) fail(ErrorKind::kInvalidArgument, "autocorrelation: zmax must be positive");
  const Region reg = averaging_region(dim, sample_radius, zmax, opt);
  std::vector<Point> pts;
  std::vector<std::complex<double>> left, right;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!opt.region.contains(points[i], reg.outer)) continue;
    pts.push_back(points[i]);
    right.push_back(weights[i]);
    left.push_back(opt.region.contains(points[i], reg.inner) ? weights[i] : std::complex<double>(0.0));
  }
  auto atoms = detail::pair_sums(pts, left, right, zmax, eps);
  for (auto& a : atoms) a.w /= reg.volume;
  AutocorrEstimate out;
  out.radius = reg.inner;
  out.zmax = zmax;
  out.normalization = opt.normalization;
  out.comb = WeightedComb(dim, zmax, std::move(atoms), "autocorrelation of " + provenance);
  return out;
}

}  // namespace

AutocorrEstimate autocorrelation(const PointSample& sample, double zmax, const AutocorrOptions& options) {
  if (sample.empty()) fail(ErrorKind::kDegenerateInput, "autocorrelation of an empty sample");
  if (zmax > sample.radius() * (1.0 + 1e-12)) {
    fail(ErrorKind::kInvalidArgument, "autocorrelation: zmax exceeds the sample radius");
  }
  const std::vector<std::complex<double>> ones(sample.size(), {1.0, 0.0});
  return estimate(sample.dim(), sample.radius(), sample.points(), ones, sample.tolerance(), zmax, options,
                  sample.provenance());
}

AutocorrEstimate weighted_autocorrelation(const WeightedComb& comb, double zmax, const AutocorrOptions& options) {
  std::vector<Point> pts;
  std::vector<std::complex<double>> w;
  for (const auto& a : comb.atoms()) {
    if (a.x.norm() > comb.radius() * (1.0 + 1e-12)) {
      fail(ErrorKind::kOutOfWindow, "weighted_autocorrelation: atom outside B_R");
    }
    pts.push_back(a.x);
    w.push_back(a.w);
  }
  const double radius = comb.radius();
  if (zmax > radius * (1.0 + 1e-12)) {
    fail(ErrorKind::kInvalidArgument, "weighted_autocorrelation: zmax exceeds the comb radius");
  }
  return estimate(comb.dim(), radius, pts, w, comb.tolerance(), zmax, options, comb.provenance());
}

double comb_deviation(const WeightedComb& a, const WeightedComb& b, double tol) {
  double dev = 0.0;
  for (const auto& x : a.atoms()) dev = std::max(dev, std::abs(x.w - b.weight_at(x.x, tol)));
  for (const auto& x : b.atoms()) dev = std::max(dev, std::abs(x.w - a.weight_at(x.x, tol)));
  return dev;
}

ConvergenceLadder eberlein_ladder(const SampleGenerator& generate, const std::vector<double>& radii, double zmax,
                                  double tolerance, const AutocorrOptions& options) {
  if (radii.empty()) fail(ErrorKind::kInvalidArgument, "eberlein_ladder: no radii");
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
    if (!(radii[i] < radii[i + 1])) fail(ErrorKind::kInvalidArgument, "eberlein_ladder: radii must increase");
  }
  if (!(radii.front() > 0.0) || zmax > radii.front()) {
    fail(ErrorKind::kInvalidArgument, "eberlein_ladder: zmax must not exceed the smallest radius");
  }
  ConvergenceLadder ladder;
  ladder.radii = radii;
  ladder.tolerance = tolerance;
  for (double r : radii) {
    const PointSample s = generate(r);
    ladder.estimates.push_back(autocorrelation(s, zmax, options));
  }
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
    const WeightedComb& a = ladder.estimates[i].comb;
    const WeightedComb& b = ladder.estimates[i + 1].comb;
    const double tol = std::max(a.tolerance(), b.tolerance()) * 1e3;
    std::vector<AtomDeviation> rows;
    double dev = 0.0;
    for (const auto& x : a.atoms()) {
      const double d = std::abs(x.w - b.weight_at(x.x, tol));
      rows.push_back({x.x, d});
      dev = std::max(dev, d);
    }
    for (const auto& x : b.atoms()) {
      if (a.weight_at(x.x, tol) == std::complex<double>(0.0)) {
        rows.push_back({x.x, std::abs(x.w)});
        dev = std::max(dev, std::abs(x.w));
      }
    }
    std::sort(rows.begin(), rows.end(), [](const AtomDeviation& p, const AtomDeviation& q) {
      return lex_less(p.z, q.z);
    });
    ladder.deviations.push_back(dev);
    ladder.table.push_back(std::move(rows));
  }
  return ladder;
}

}  // namespace aperiodic
