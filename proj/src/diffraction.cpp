#include "aperiodic/diffraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "aperiodic/detail/lattice_enum.hpp"
#include "aperiodic/error.hpp"
#include "aperiodic/parallel.hpp"

namespace aperiodic {

void sort_peaks(std::vector<BraggPeak>& peaks) {
  std::sort(peaks.begin(), peaks.end(), [](const BraggPeak& a, const BraggPeak& b) {
    const double na = a.k.norm2(), nb = b.k.norm2();
    if (na != nb) return na < nb;
    return lex_less(a.k, b.k);
  });
}

std::optional<BraggPeak> BraggList::find(const Point& k, double tol) const {
  const BraggPeak* best = nullptr;
  double bd = tol;
  for (const BraggPeak& p : peaks) {
    const double d = distance(p.k, k);
    if (d <= bd) {
      bd = d;
      best = &p;
    }
  }
  if (!best) return std::nullopt;
  return *best;
}

double BraggList::total_intensity() const {
  double s = 0.0;
  for (const BraggPeak& p : peaks) s += p.intensity;
  return s;
}

namespace {

double resolve_threshold(const ExponentialSum& sum, const ScanOptions& opt) {
  if (opt.threshold) {
    if (!(*opt.threshold > 0.0)) fail(ErrorKind::kInvalidArgument, "scan threshold must be positive");
    return *opt.threshold;
  }
  return 1e-4 * std::norm(sum(Point(sum.dim())));
}

}  // namespace

BraggList bragg_scan(const ExponentialSum& sum, std::span<const Point> candidates, const ScanOptions& options) {
  if (candidates.empty()) fail(ErrorKind::kInvalidArgument, "bragg_scan: empty candidate set");
  for (const Point& k : candidates) require_same_dim(k, sum.dim(), "bragg_scan candidate");
  BraggList out;
  out.dim = sum.dim();
  out.radius = sum.radius();
  out.threshold = resolve_threshold(sum, options);
  if (sum.size() == 0) return out;
  const auto values = parallel_map<cplx>(candidates.size(), [&](std::size_t i) { return sum(candidates[i]); });
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double I = std::norm(values[i]);
    if (I >= out.threshold) out.peaks.push_back({candidates[i], I, values[i]});
  }
  sort_peaks(out.peaks);
  return out;
}

BraggList bragg_scan(const PointSample& sample, std::span<const Point> candidates, const ScanOptions& options) {
  return bragg_scan(ExponentialSum(sample, options.region), candidates, options);
}

BraggList bragg_scan(const WeightedComb& comb, std::span<const Point> candidates, const ScanOptions& options) {
  return bragg_scan(ExponentialSum(comb, options.region), candidates, options);
}

namespace {

// Maximizes f on [a, b] to the given width.
std::pair<double, double> golden_max(const std::function<double(double)>& f, double a, double b, double width) {
  constexpr double kInvPhi = 0.61803398874989484820;
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > width) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

}  // namespace

BraggList bragg_scan_grid(const ExponentialSum& sum, const GridSpec& grid, const ScanOptions& options) {
  const std::size_t d = sum.dim();
  require_same_dim(grid.lo, d, "grid lower corner");
  require_same_dim(grid.hi, d, "grid upper corner");
  if (!(grid.pitch > 0.0)) fail(ErrorKind::kInvalidArgument, "grid pitch must be positive");
  std::vector<std::size_t> n(d);
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (!(grid.hi[i] >= grid.lo[i])) fail(ErrorKind::kInvalidArgument, "grid upper corner below lower corner");
    n[i] = static_cast<std::size_t>(std::floor((grid.hi[i] - grid.lo[i]) / grid.pitch + 1e-9)) + 1;
    total *= n[i];
  }
  if (total > 50'000'000) fail(ErrorKind::kCapExceeded, "grid scan exceeds 5e7 wave vectors");

  BraggList out;
  out.dim = d;
  out.radius = sum.radius();
  out.threshold = resolve_threshold(sum, options);
  if (sum.size() == 0) return out;
  const double refine = options.refine_pitch.value_or(1.0 / (10.0 * sum.radius()));
  const double separation = options.min_separation.value_or(2.0 / sum.radius());

  // rows along axis 0, split into chunks so 1-d scans parallelize too
  constexpr std::size_t kChunk = 1024;
  const std::size_t chunks = (n[0] + kChunk - 1) / kChunk;
  const std::size_t rows = total / n[0];
  std::vector<double> intensity(total);
  auto grid_point = [&](std::size_t linear) {
    Point k(d);
    for (std::size_t i = 0; i < d; ++i) {
      k[i] = grid.lo[i] + static_cast<double>(linear % n[i]) * grid.pitch;
      linear /= n[i];
    }
    return k;
  };
  Point step(d);
  step[0] = grid.pitch;
  parallel_for(rows * chunks, [&](std::size_t task) {
    const std::size_t row = task / chunks, chunk = task % chunks;
    const std::size_t first = row * n[0] + chunk * kChunk;
    const std::size_t len = std::min(kChunk, n[0] - chunk * kChunk);
    const auto vals = sum.along(grid_point(first), step, len);
    for (std::size_t j = 0; j < len; ++j) intensity[first + j] = std::norm(vals[j]);
  });

  // local maxima over the 3^d neighbourhood; ties go to the lowest index
  std::vector<std::size_t> maxima;
  const double floor_level = 0.5 * out.threshold;
  for (std::size_t idx = 0; idx < total; ++idx) {
    const double v = intensity[idx];
    if (v < floor_level) continue;
    std::vector<std::size_t> coord(d);
    std::size_t rest = idx;
    for (std::size_t i = 0; i < d; ++i) {
      coord[i] = rest % n[i];
      rest /= n[i];
    }
    bool is_max = true;
    std::size_t neighbours = 1;
    for (std::size_t i = 0; i < d; ++i) neighbours *= 3;
    for (std::size_t m = 0; m < neighbours && is_max; ++m) {
      std::size_t code = m, lin = 0, stride = 1;
      bool valid = true, self = true;
      for (std::size_t i = 0; i < d; ++i) {
        const int off = static_cast<int>(code % 3) - 1;
        code /= 3;
        if (off != 0) self = false;
        const long c = static_cast<long>(coord[i]) + off;
        if (c < 0 || c >= static_cast<long>(n[i])) valid = false;
        lin += static_cast<std::size_t>(std::max(c, 0L)) * stride;
        stride *= n[i];
      }
      if (!valid || self) continue;
      if (intensity[lin] > v || (intensity[lin] == v && lin < idx)) is_max = false;
    }
    if (is_max) maxima.push_back(idx);
  }

  // coordinate-wise golden-section refinement
  std::vector<BraggPeak> refined = parallel_map<BraggPeak>(maxima.size(), [&](std::size_t m) {
    Point k = grid_point(maxima[m]);
    double best = intensity[maxima[m]];
    const int sweeps = d == 1 ? 1 : 2;
    for (int s = 0; s < sweeps; ++s) {
      for (std::size_t i = 0; i < d; ++i) {
        auto f = [&](double t) {
          Point q = k;
          q[i] = t;
          return std::norm(sum(q));
        };
        auto [t, v] = golden_max(f, k[i] - grid.pitch, k[i] + grid.pitch, refine);
        if (v > best) {
          best = v;
          k[i] = t;
        }
      }
    }
    const cplx a = sum(k);
    return BraggPeak{k, std::norm(a), a};
  });

  std::vector<std::size_t> order(refined.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return refined[a].intensity > refined[b].intensity;
  });
  for (std::size_t i : order) {
    const BraggPeak& p = refined[i];
    if (p.intensity < out.threshold) continue;
    const bool shadowed = std::any_of(out.peaks.begin(), out.peaks.end(), [&](const BraggPeak& q) {
      return distance(p.k, q.k) < separation;
    });
    if (!shadowed) out.peaks.push_back(p);
  }
  sort_peaks(out.peaks);
  return out;
}

BraggList bragg_scan_grid(const PointSample& sample, const GridSpec& grid, const ScanOptions& options) {
  return bragg_scan_grid(ExponentialSum(sample, options.region), grid, options);
}

// ---------------------------------------------------------------------------
// Closed forms

namespace {

std::vector<Point> dual_points(const LatticeSpec& lattice, double kmax) {
  if (!(kmax > 0.0)) fail(ErrorKind::kInvalidArgument, "kmax must be positive");
  const LatticeSpec dual = lattice.dual();
  const auto n = dual.basis.rows();
  const Eigen::VectorXd lo = Eigen::VectorXd::Constant(n, -kmax), hi = Eigen::VectorXd::Constant(n, kmax);
  const double k2 = kmax * kmax;
  auto pts = detail::enumerate_lattice<Point>(
      dual.basis, lo, hi,
      [&](const detail::IntCoords&, const Eigen::VectorXd& y) -> std::optional<Point> {
        if (y.squaredNorm() > k2) return std::nullopt;
        Point p(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = y[i];
        return p;
      },
      kDefaultPointCap);
  return pts;
}

}  // namespace

ClosedFormSpectrum closed_form_lattice(const CrystallographicSpec& spec, double kmax) {
  spec.validate();
  const double dens = spec.lattice.density();
  ClosedFormSpectrum out;
  out.kind = spec.motif.size() == 1 && spec.motif.front().norm2() == 0.0 ? ClosedFormSpectrum::Kind::kLattice
                                                                          : ClosedFormSpectrum::Kind::kCrystallographic;
  out.dim = spec.lattice.dim();
  out.kmax = kmax;
  for (const Point& y : dual_points(spec.lattice, kmax)) {
    CompensatedSum h;
    for (const Point& s : spec.motif) h.add(unit_phase(-y.dot(s)));
    const cplx hv = h.value();
    out.atoms.push_back({y, dens * dens * std::norm(hv), dens * std::conj(hv)});
  }
  sort_peaks(out.atoms);
  return out;
}

ClosedFormSpectrum closed_form_derivative_comb(const LatticeSpec& lattice, const std::vector<int>& p, double kmax) {
  lattice.validate();
  if (p.size() != lattice.dim()) fail(ErrorKind::kDimensionMismatch, "multi-index length differs from dimension");
  int order = 0;
  for (int pi : p) {
    if (pi < 0) fail(ErrorKind::kInvalidArgument, "multi-index entries must be nonnegative");
    order += pi;
  }
  const double dens = lattice.density();
  const double four_pi2 = 4.0 * kPi * kPi;
  ClosedFormSpectrum out;
  out.kind = ClosedFormSpectrum::Kind::kDerivativeComb;
  out.dim = lattice.dim();
  out.kmax = kmax;
  for (const Point& y : dual_points(lattice, kmax)) {
    double f = 1.0;
    for (int i = 0; i < order; ++i) f *= four_pi2;
    double mono = 1.0;
    cplx amp(dens, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (int j = 0; j < p[i]; ++j) {
        mono *= y[i] * y[i];
        amp *= cplx(0.0, kTwoPi * y[i]);
      }
    }
    out.atoms.push_back({y, dens * dens * (f * mono), amp});
  }
  sort_peaks(out.atoms);
  return out;
}

// ---------------------------------------------------------------------------
// Group check

namespace {

class PointSet {
 public:
  PointSet(std::size_t dim, double tol) : dim_(dim), tol_(tol) {}

  // Inserts unless a point within tol is present; returns true on insert.
  bool insert(const Point& p) {
    if (contains(p)) return false;
    cells_[key(p)].push_back(points_.size());
    points_.push_back(p);
    return true;
  }

  bool contains(const Point& p) const {
    const auto base = key(p);
    std::size_t neighbours = 1;
    for (std::size_t i = 0; i < dim_; ++i) neighbours *= 3;
    for (std::size_t m = 0; m < neighbours; ++m) {
      auto k = base;
      std::size_t code = m;
      for (std::size_t i = 0; i < dim_; ++i) {
        k[i] += static_cast<std::int64_t>(code % 3) - 1;
        code /= 3;
      }
      auto it = cells_.find(k);
      if (it == cells_.end()) continue;
      for (std::size_t idx : it->second) {
        if (distance(points_[idx], p) <= tol_) return true;
      }
    }
    return false;
  }

  const std::vector<Point>& points() const { return points_; }

 private:
  using Key = std::array<std::int64_t, kMaxDim>;
  struct Hash {
    std::size_t operator()(const Key& k) const noexcept {
      std::size_t h = 1469598103934665603ull;
      for (auto v : k) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
      return h;
    }
  };
  Key key(const Point& p) const {
    Key k{};
    for (std::size_t i = 0; i < dim_; ++i) k[i] = static_cast<std::int64_t>(std::floor(p[i] / tol_));
    return k;
  }

  std::size_t dim_;
  double tol_;
  std::vector<Point> points_;
  std::unordered_map<Key, std::vector<std::size_t>, Hash> cells_;
};

}  // namespace

GroupCheckReport bragg_group_check(const BraggList& peaks, int generations, double tolerance,
                                   const GroupCheckOptions& options) {
  if (peaks.peaks.empty()) fail(ErrorKind::kInvalidArgument, "bragg_group_check: no peaks");
  if (generations < 0) fail(ErrorKind::kInvalidArgument, "bragg_group_check: generations must be >= 0");
  if (!(tolerance > 0.0)) fail(ErrorKind::kInvalidArgument, "bragg_group_check: tolerance must be positive");
  double kmax = options.kmax;
  if (kmax <= 0.0) {
    for (const auto& p : peaks.peaks) kmax = std::max(kmax, p.k.norm());
  }
  const double kmax2 = (kmax + tolerance) * (kmax + tolerance);

  PointSet all(peaks.dim, tolerance);
  std::vector<Point> gens;
  for (const auto& p : peaks.peaks) {
    if (all.insert(p.k)) gens.push_back(p.k);
  }
  std::vector<Point> frontier = all.points();
  for (int g = 0; g < generations && !frontier.empty(); ++g) {
    std::vector<Point> next;
    for (const Point& a : frontier) {
      for (const Point& s : gens) {
        for (const Point& c : {a + s, a - s}) {
          if (c.norm2() > kmax2) continue;
          if (all.insert(c)) {
            next.push_back(c);
            if (all.points().size() > options.cap) {
              fail(ErrorKind::kCapExceeded, "bragg_group_check: generated set exceeds cap");
            }
          }
        }
      }
    }
    frontier = std::move(next);
  }

  GroupCheckReport rep;
  rep.generated = all.points();
  std::vector<BraggPeak> sorted;
  for (const Point& p : rep.generated) sorted.push_back({p, 0.0, {}});
  sort_peaks(sorted);
  rep.generated.clear();
  for (const auto& p : sorted) rep.generated.push_back(p.k);

  PointSet listed(peaks.dim, tolerance);
  for (const auto& p : peaks.peaks) listed.insert(p.k);
  std::vector<int> cls(rep.generated.size());
  std::vector<char> outside(rep.generated.size(), 0);
  parallel_for(rep.generated.size(), [&](std::size_t i) {
    const Point& k = rep.generated[i];
    if (listed.contains(k)) {
      cls[i] = 0;
    } else if (options.intensity) {
      cls[i] = options.intensity(k) >= peaks.threshold ? 0 : 1;
    } else {
      cls[i] = 2;
    }
    if (options.in_module && !options.in_module(k)) outside[i] = 1;
  });
  for (std::size_t i = 0; i < rep.generated.size(); ++i) {
    const Point& k = rep.generated[i];
    (cls[i] == 0 ? rep.detected : cls[i] == 1 ? rep.below_threshold : rep.unmatched).push_back(k);
    if (outside[i]) rep.outside_module.push_back(k);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Uniformity

UniformityReport bombieri_taylor_uniformity(const std::vector<SampleGenerator>& elements, const Point& k,
                                            const std::vector<double>& radii, const AveragingRegion& region) {
  if (elements.size() < 2) fail(ErrorKind::kInvalidArgument, "uniformity check needs at least two hull elements");
  if (radii.empty()) fail(ErrorKind::kInvalidArgument, "uniformity check needs radii");
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
    if (!(radii[i] < radii[i + 1])) fail(ErrorKind::kInvalidArgument, "uniformity radii must increase");
  }
  UniformityReport rep;
  rep.k = k;
  rep.radii = radii;
  rep.intensity.assign(elements.size(), std::vector<double>(radii.size(), 0.0));
  for (std::size_t e = 0; e < elements.size(); ++e) {
    for (std::size_t r = 0; r < radii.size(); ++r) {
      AveragingRegion reg = region;
      if (reg.radius == 0.0 && reg.shape == AveragingRegion::Shape::kBall) reg.radius = radii[r];
      const PointSample s = elements[e](radii[r]);
      rep.intensity[e][r] = std::norm(ExponentialSum(s, reg)(k));
    }
  }
  for (std::size_t r = 0; r < radii.size(); ++r) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t e = 0; e < elements.size(); ++e) {
      lo = std::min(lo, rep.intensity[e][r]);
      hi = std::max(hi, rep.intensity[e][r]);
    }
    rep.spread.push_back(hi - lo);
  }
  return rep;
}

}  // namespace aperiodic
