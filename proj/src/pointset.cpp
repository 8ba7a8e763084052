#include "aperiodic/pointset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aperiodic/detail/pairs.hpp"
#include "aperiodic/error.hpp"
#include "aperiodic/numeric.hpp"
#include "aperiodic/spatial_index.hpp"

namespace aperiodic {
namespace {

double mean_spacing(std::size_t dim, double radius, std::size_t n) {
  if (n == 0 || !(radius > 0.0)) return radius > 0.0 ? radius : 1.0;
  return std::pow(ball_volume(dim, radius) / static_cast<double>(n), 1.0 / static_cast<double>(dim));
}

void check_radius(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    fail(ErrorKind::kInvalidArgument, "sample radius must be positive and finite");
  }
}

template <class Get>
void check_distinct(std::size_t dim, std::size_t n, double eps, Get get, const char* what) {
  if (n < 2) return;
  std::vector<double> flat(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = get(i);
    for (std::size_t k = 0; k < dim; ++k) flat[i * dim + k] = p[k];
  }
  const SpatialIndex index(flat, dim, std::max(2.0 * eps / kRelativeTolerance, 1e-300));
  for (std::size_t i = 0; i < n; ++i) {
    index.for_each_within(index.point(i), eps, [&](std::size_t j, double) {
      if (j != i) {
        fail(ErrorKind::kInvalidArgument,
             std::string(what) + ": points closer than matching tolerance at " + get(i).str());
      }
    });
  }
}

}  // namespace

PointSample::PointSample(std::size_t dim, double radius, std::vector<Point> points,
                         std::string provenance)
    : dim_(dim), radius_(radius), points_(std::move(points)), provenance_(std::move(provenance)) {
  if (dim == 0 || dim > kMaxDim) fail(ErrorKind::kDimensionMismatch, "sample dimension must be in [1, 4]");
  check_radius(radius);
  const double slack = radius * (1.0 + 1e-12);
  for (const Point& p : points_) {
    require_same_dim(p, dim, "PointSample");
    if (!p.finite()) fail(ErrorKind::kInvalidArgument, "PointSample: non-finite coordinate");
    if (p.norm() > slack) {
      fail(ErrorKind::kOutOfWindow, "PointSample: point " + p.str() + " outside radius");
    }
  }
  check_distinct(dim_, points_.size(), tolerance(),
                 [this](std::size_t i) -> const Point& { return points_[i]; }, "PointSample");
}

double PointSample::scale() const { return mean_spacing(dim_, radius_, points_.size()); }

std::vector<double> PointSample::flat() const {
  std::vector<double> out(points_.size() * dim_);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t k = 0; k < dim_; ++k) out[i * dim_ + k] = points_[i][k];
  }
  return out;
}

WeightedComb::WeightedComb(std::size_t dim, double radius, std::vector<WeightedAtom> atoms,
                           std::string provenance)
    : dim_(dim), radius_(radius), atoms_(std::move(atoms)), provenance_(std::move(provenance)) {
  if (dim == 0 || dim > kMaxDim) fail(ErrorKind::kDimensionMismatch, "comb dimension must be in [1, 4]");
  check_radius(radius);
  for (const WeightedAtom& a : atoms_) {
    require_same_dim(a.x, dim, "WeightedComb");
    if (!a.x.finite() || !std::isfinite(a.w.real()) || !std::isfinite(a.w.imag())) {
      fail(ErrorKind::kInvalidArgument, "WeightedComb: non-finite atom");
    }
    if (a.w == std::complex<double>(0.0)) {
      fail(ErrorKind::kInvalidArgument, "WeightedComb: zero weight at " + a.x.str());
    }
  }
  std::stable_sort(atoms_.begin(), atoms_.end(),
                   [](const WeightedAtom& a, const WeightedAtom& b) { return lex_less(a.x, b.x); });
  check_distinct(dim_, atoms_.size(), tolerance(),
                 [this](std::size_t i) -> const Point& { return atoms_[i].x; }, "WeightedComb");
}

double WeightedComb::scale() const { return mean_spacing(dim_, radius_, atoms_.size()); }

std::complex<double> WeightedComb::weight_at(const Point& z, double tol) const {
  require_same_dim(z, dim_, "weight_at");
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), z[0] - tol,
                             [](const WeightedAtom& a, double v) { return a.x[0] < v; });
  for (; it != atoms_.end() && it->x[0] <= z[0] + tol; ++it) {
    if (distance(it->x, z) <= tol) return it->w;
  }
  return {0.0, 0.0};
}

WeightedComb as_comb(const PointSample& sample) {
  std::vector<WeightedAtom> atoms;
  atoms.reserve(sample.size());
  for (const Point& p : sample.points()) atoms.push_back({p, {1.0, 0.0}});
  return WeightedComb(sample.dim(), sample.radius(), std::move(atoms), sample.provenance());
}

PointSample restrict(const PointSample& sample, double r) {
  if (!(r > 0.0)) fail(ErrorKind::kInvalidArgument, "restrict: radius must be positive");
  if (r > sample.radius() * (1.0 + 1e-12)) {
    fail(ErrorKind::kOutOfWindow, "restrict: radius " + std::to_string(r) +
                                      " exceeds sample radius " + std::to_string(sample.radius()));
  }
  std::vector<Point> kept;
  for (const Point& p : sample.points()) {
    if (p.norm2() <= r * r) kept.push_back(p);
  }
  return PointSample(sample.dim(), r, std::move(kept), sample.provenance());
}

PointSample translate(const PointSample& sample, const Point& t) {
  require_same_dim(t, sample.dim(), "translate");
  std::vector<Point> moved;
  moved.reserve(sample.size());
  for (const Point& p : sample.points()) moved.push_back(p + t);
  return PointSample(sample.dim(), sample.radius() + t.norm(), std::move(moved),
                     sample.provenance() + " translated by " + t.str());
}

WeightedComb difference_vectors(const PointSample& sample, double zmax) {
  if (!(zmax > 0.0)) fail(ErrorKind::kInvalidArgument, "difference_vectors: zmax must be positive");
  if (zmax > 2.0 * sample.radius() * (1.0 + 1e-12)) {
    fail(ErrorKind::kInvalidArgument, "difference_vectors: zmax exceeds sample diameter");
  }
  const std::vector<std::complex<double>> ones(sample.size(), {1.0, 0.0});
  auto atoms = detail::pair_sums(sample.points(), ones, ones, zmax, sample.tolerance());
  return WeightedComb(sample.dim(), zmax, std::move(atoms), "difference vectors of " + sample.provenance());
}

namespace {

double packing_radius(const PointSample& s, const SpatialIndex& index) {
  if (s.size() < 2) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    double reach = 2.0 * s.scale();
    double local = std::numeric_limits<double>::infinity();
    while (true) {
      index.for_each_within(index.point(i), reach, [&](std::size_t j, double d2) {
        if (j != i) local = std::min(local, std::sqrt(d2));
      });
      if (std::isfinite(local) || reach > 2.0 * s.radius()) break;
      reach *= 2.0;
    }
    best = std::min(best, local);
  }
  return best / 2.0;
}

std::optional<DifferenceWitness> find_witness(const PointSample& s, const SpatialIndex& index,
                                              const WeightedComb& diffs, double tol,
                                              double& separation) {
  separation = std::numeric_limits<double>::infinity();
  if (diffs.size() < 2) return std::nullopt;
  std::vector<double> flat(diffs.size() * s.dim());
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    for (std::size_t k = 0; k < s.dim(); ++k) flat[i * s.dim() + k] = diffs[i].x[k];
  }
  const SpatialIndex dindex(flat, s.dim(), std::max(diffs.scale(), 1e-12));
  std::size_t a_best = 0, b_best = 0;
  for (std::size_t a = 0; a < diffs.size(); ++a) {
    double reach = dindex.cell();
    double local = std::numeric_limits<double>::infinity();
    std::size_t arg = a;
    while (true) {
      dindex.for_each_within(dindex.point(a), reach, [&](std::size_t b, double d2) {
        if (b != a && std::sqrt(d2) < local) {
          local = std::sqrt(d2);
          arg = b;
        }
      });
      if (std::isfinite(local) || reach > 4.0 * diffs.radius()) break;
      reach *= 2.0;
    }
    if (local < separation) {
      separation = local;
      a_best = std::min(a, arg);
      b_best = std::max(a, arg);
    }
  }
  if (!(separation < tol)) return std::nullopt;

  auto realize = [&](const Point& z) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Point target = s[i] - z;
      std::optional<std::size_t> hit;
      index.for_each_within(target.coords(), s.tolerance() * 10.0, [&](std::size_t j, double) {
        if (!hit) hit = j;
      });
      if (hit) return std::array<std::size_t, 2>{i, *hit};
    }
    return std::array<std::size_t, 2>{0, 0};
  };
  DifferenceWitness w;
  w.z1 = diffs[a_best].x;
  w.z2 = diffs[b_best].x;
  w.pair1 = realize(w.z1);
  w.pair2 = realize(w.z2);
  w.separation = separation;
  return w;
}

}  // namespace

StructureReport structure_report(const PointSample& sample, double margin,
                                 const StructureOptions& options) {
  if (sample.empty()) fail(ErrorKind::kDegenerateInput, "structure_report: empty sample");
  if (!(margin > 0.0) || !(margin < sample.radius())) {
    fail(ErrorKind::kInvalidArgument, "structure_report: margin must lie in (0, radius)");
  }
  const std::size_t dim = sample.dim();
  const std::vector<double> flat = sample.flat();
  const SpatialIndex index(flat, dim, sample.scale());

  StructureReport rep;
  rep.packing_radius = packing_radius(sample, index);

  // Covering radius: probe a grid of pitch r/4 in the margin-shrunk ball.
  const double inner = sample.radius() - margin;
  double pitch = std::isfinite(rep.packing_radius) ? rep.packing_radius / 4.0 : inner / 4.0;
  const double max_probes = 4e6;
  while (std::pow(2.0 * inner / pitch + 1.0, static_cast<double>(dim)) > max_probes) pitch *= 2.0;
  const auto steps = static_cast<std::int64_t>(std::floor(inner / pitch));
  std::vector<std::int64_t> idx(dim, -steps);
  Point probe(dim);
  while (true) {
    for (std::size_t k = 0; k < dim; ++k) probe[k] = static_cast<double>(idx[k]) * pitch;
    if (probe.norm2() <= inner * inner) {
      if (auto nn = index.nearest(probe.coords())) {
        rep.covering_radius = std::max(rep.covering_radius, nn->second);
      }
      ++rep.probes;
    }
    std::size_t k = 0;
    for (; k < dim; ++k) {
      if (idx[k] < steps) {
        ++idx[k];
        break;
      }
      idx[k] = -steps;
    }
    if (k == dim) break;
  }
  rep.covering_upper_bound = rep.covering_radius + 0.5 * pitch * std::sqrt(static_cast<double>(dim));

  const WeightedComb diffs = difference_vectors(sample, margin);
  rep.distinct_differences = diffs.size();
  double sep = 0.0;
  rep.meyer_witness = find_witness(sample, index, diffs, options.meyer_tolerance * sample.scale(), sep);
  rep.difference_separation = sep;
  if (rep.meyer_witness && rep.meyer_witness->separation < options.flc_tolerance * sample.scale()) {
    rep.flc_witness = rep.meyer_witness;
  }
  return rep;
}

std::array<double, kMaxDim + 1> to_sphere(const Point& x) {
  std::array<double, kMaxDim + 1> s{};
  const double r2 = x.norm2();
  const double denom = 1.0 + r2;
  for (std::size_t k = 0; k < x.dim(); ++k) s[k] = 2.0 * x[k] / denom;
  s[x.dim()] = (r2 - 1.0) / denom;
  return s;
}

namespace {

// Small k-d tree for nearest-neighbour queries on sphere coordinates, where
// points cluster near the north pole and a uniform grid degenerates.
class KdTree {
 public:
  KdTree(const std::vector<double>& pts, std::size_t dim) : pts_(pts), dim_(dim) {
    idx_.resize(pts.size() / dim);
    for (std::size_t i = 0; i < idx_.size(); ++i) idx_[i] = i;
    build(0, idx_.size(), 0);
  }

  // Squared distance to the nearest point, capped at best2.
  double nearest2(const double* q, double best2) const {
    search(0, idx_.size(), 0, q, best2);
    return best2;
  }

 private:
  void build(std::size_t lo, std::size_t hi, std::size_t depth) {
    if (hi - lo <= 8) return;
    const std::size_t axis = depth % dim_;
    const std::size_t mid = (lo + hi) / 2;
    std::nth_element(idx_.begin() + static_cast<std::ptrdiff_t>(lo),
                     idx_.begin() + static_cast<std::ptrdiff_t>(mid),
                     idx_.begin() + static_cast<std::ptrdiff_t>(hi),
                     [&](std::size_t a, std::size_t b) {
                       return pts_[a * dim_ + axis] < pts_[b * dim_ + axis];
                     });
    build(lo, mid, depth + 1);
    build(mid + 1, hi, depth + 1);
  }

  void search(std::size_t lo, std::size_t hi, std::size_t depth, const double* q,
              double& best2) const {
    if (hi - lo <= 8) {
      for (std::size_t k = lo; k < hi; ++k) best2 = std::min(best2, dist2(idx_[k], q));
      return;
    }
    const std::size_t axis = depth % dim_;
    const std::size_t mid = (lo + hi) / 2;
    best2 = std::min(best2, dist2(idx_[mid], q));
    const double delta = q[axis] - pts_[idx_[mid] * dim_ + axis];
    const bool go_left = delta < 0.0;
    if (go_left) {
      search(lo, mid, depth + 1, q, best2);
      if (delta * delta < best2) search(mid + 1, hi, depth + 1, q, best2);
    } else {
      search(mid + 1, hi, depth + 1, q, best2);
      if (delta * delta < best2) search(lo, mid, depth + 1, q, best2);
    }
  }

  double dist2(std::size_t i, const double* q) const {
    double d2 = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double t = pts_[i * dim_ + k] - q[k];
      d2 += t * t;
    }
    return d2;
  }

  const std::vector<double>& pts_;
  std::size_t dim_;
  std::vector<std::size_t> idx_;
};

// max over a in A of min(|a - N|, min_b |a - b|), on sphere coordinates.
double directed_hausdorff(const std::vector<double>& a, const std::vector<double>& b,
                          std::size_t sdim) {
  const KdTree tree(b, sdim);
  double h = 0.0;
  for (std::size_t i = 0; i < a.size() / sdim; ++i) {
    const double* p = a.data() + i * sdim;
    double to_pole2 = 0.0;
    for (std::size_t k = 0; k + 1 < sdim; ++k) to_pole2 += p[k] * p[k];
    to_pole2 += (p[sdim - 1] - 1.0) * (p[sdim - 1] - 1.0);
    h = std::max(h, std::sqrt(tree.nearest2(p, to_pole2)));
  }
  return h;
}

}  // namespace

double hull_distance(const PointSample& s1, const PointSample& s2) {
  if (s1.dim() != s2.dim()) fail(ErrorKind::kDimensionMismatch, "hull_distance: dimension mismatch");
  const std::size_t sdim = s1.dim() + 1;
  auto lift = [&](const PointSample& s) {
    std::vector<double> out;
    out.reserve(s.size() * sdim);
    for (const Point& p : s.points()) {
      const auto q = to_sphere(p);
      out.insert(out.end(), q.begin(), q.begin() + static_cast<std::ptrdiff_t>(sdim));
    }
    return out;
  };
  const auto a = lift(s1);
  const auto b = lift(s2);
  return std::max(directed_hausdorff(a, b, sdim), directed_hausdorff(b, a, sdim));
}

}  // namespace aperiodic
