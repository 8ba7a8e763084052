#include "aperiodic/cps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aperiodic/detail/lattice_enum.hpp"
#include "aperiodic/error.hpp"
#include "aperiodic/numeric.hpp"
#include "aperiodic/spatial_index.hpp"

namespace aperiodic {
namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain; counter-clockwise, collinear points dropped.
std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double segment_distance(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = ab.norm2();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + t * ab);
}

double window_extent(const Window& w) {
  double m = 0.0;
  for (const Point& v : w.vertices) m = std::max(m, v.norm());
  return m;
}

Point segment_point(const Eigen::VectorXd& y, Eigen::Index from, Eigen::Index count) {
  Point p(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i) p[static_cast<std::size_t>(i)] = y[from + i];
  return p;
}

bool lex_negative(double nx, double ny) { return nx < 0.0 || (nx == 0.0 && ny < 0.0); }

}  // namespace

// ---------------------------------------------------------------------------
// Window

Window Window::interval(double lo, double hi, bool closed) {
  Window w;
  w.kind = Kind::kInterval;
  w.vertices = {Point{lo}, Point{hi}};
  w.closed = closed;
  w.validate();
  return w;
}

Window Window::polygon(std::vector<Point> vertices, bool closed) {
  Window w;
  w.kind = Kind::kPolygon;
  w.vertices = std::move(vertices);
  w.closed = closed;
  w.validate();
  return w;
}

Window Window::octagon(double circumradius, double phase, bool closed) {
  if (!(circumradius >= 0.0)) fail(ErrorKind::kInvalidArgument, "octagon radius must be nonnegative");
  Window w;
  w.kind = Kind::kOctagon;
  for (int j = 0; j < 8; ++j) {
    const double a = phase + j * kPi / 4.0;
    w.vertices.push_back(Point{circumradius * std::cos(a), circumradius * std::sin(a)});
  }
  w.closed = closed;
  w.validate();
  return w;
}

void Window::validate() const {
  for (const Point& v : vertices) {
    if (!v.finite()) fail(ErrorKind::kInvalidArgument, "window vertex is not finite");
  }
  if (kind == Kind::kInterval) {
    if (vertices.size() != 2 || vertices[0].dim() != 1 || vertices[1].dim() != 1) {
      fail(ErrorKind::kInvalidArgument, "interval window needs two 1-d endpoints");
    }
    if (vertices[0][0] > vertices[1][0]) fail(ErrorKind::kInvalidArgument, "interval window has lo > hi");
    return;
  }
  if (vertices.size() < 3) fail(ErrorKind::kInvalidArgument, "polygon window needs at least 3 vertices");
  for (const Point& v : vertices) {
    if (v.dim() != 2) fail(ErrorKind::kDimensionMismatch, "polygon window vertices must be 2-d");
  }
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double c = cross(vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
    if (c < -1e-12 * (1.0 + window_extent(*this))) {
      fail(ErrorKind::kInvalidArgument, "polygon window must be convex and counter-clockwise");
    }
  }
}

double Window::volume() const {
  if (kind == Kind::kInterval) return vertices[1][0] - vertices[0][0];
  double a = 0.0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = vertices[i];
    const Point& q = vertices[(i + 1) % n];
    a += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * a;
}

bool Window::contains(const Point& y) const {
  require_same_dim(y, dim(), "Window::contains");
  if (empty()) return false;
  const double slack = closed ? 1e-12 * (1.0 + window_extent(*this)) : 0.0;
  if (kind == Kind::kInterval) {
    const double lo = vertices[0][0], hi = vertices[1][0];
    if (closed) return y[0] >= lo - slack && y[0] <= hi + slack;
    return y[0] >= lo && y[0] < hi;
  }
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = vertices[i];
    const Point& b = vertices[(i + 1) % n];
    const double nx = b[1] - a[1], ny = -(b[0] - a[0]);
    const double len = std::hypot(nx, ny);
    if (len == 0.0) continue;
    const double s = (nx * (y[0] - a[0]) + ny * (y[1] - a[1])) / len;
    if (closed) {
      if (s > slack) return false;
    } else if (s > 0.0 || (s == 0.0 && !lex_negative(nx, ny))) {
      return false;
    }
  }
  return true;
}

double Window::boundary_distance(const Point& y) const {
  require_same_dim(y, dim(), "Window::boundary_distance");
  if (kind == Kind::kInterval) {
    return std::min(std::abs(y[0] - vertices[0][0]), std::abs(y[0] - vertices[1][0]));
  }
  double d = std::numeric_limits<double>::infinity();
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) d = std::min(d, segment_distance(y, vertices[i], vertices[(i + 1) % n]));
  return d;
}

std::pair<Point, Point> Window::bounds() const {
  Point lo = vertices.front(), hi = vertices.front();
  for (const Point& v : vertices) {
    for (std::size_t i = 0; i < v.dim(); ++i) {
      lo[i] = std::min(lo[i], v[i]);
      hi[i] = std::max(hi[i], v[i]);
    }
  }
  return {lo, hi};
}

Window Window::difference() const {
  if (kind == Kind::kInterval) {
    const double len = vertices[1][0] - vertices[0][0];
    return interval(-len, len, true);
  }
  std::vector<Point> sums;
  for (const Point& a : vertices) {
    for (const Point& b : vertices) sums.push_back(a - b);
  }
  return polygon(convex_hull(std::move(sums)), true);
}

// ---------------------------------------------------------------------------
// Scheme

Eigen::MatrixXd CutProjectScheme::embedded() const {
  Eigen::MatrixXd m(proj_phys.rows() + proj_int.rows(), proj_phys.cols());
  m << proj_phys, proj_int;
  return m * basis;
}

Point CutProjectScheme::physical(const std::vector<std::int64_t>& coords) const {
  Eigen::VectorXd c(static_cast<Eigen::Index>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) c[static_cast<Eigen::Index>(i)] = static_cast<double>(coords[i]);
  const Eigen::VectorXd y = proj_phys * (basis * c);
  return segment_point(y, 0, y.size());
}

Point CutProjectScheme::star(const std::vector<std::int64_t>& coords) const {
  Eigen::VectorXd c(static_cast<Eigen::Index>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) c[static_cast<Eigen::Index>(i)] = static_cast<double>(coords[i]);
  const Eigen::VectorXd y = proj_int * (basis * c);
  return segment_point(y, 0, y.size());
}

void CutProjectScheme::validate() const {
  const auto n = static_cast<Eigen::Index>(d_phys + d_int);
  if (d_phys < 1 || d_phys > kMaxDim) fail(ErrorKind::kInvalidArgument, "d_phys must be in 1..4");
  if (d_int < 1 || d_int > 2) fail(ErrorKind::kInvalidArgument, "d_int must be 1 or 2");
  if (basis.rows() != n || basis.cols() != n) {
    fail(ErrorKind::kDimensionMismatch, "lattice basis must be (d_phys + d_int) square");
  }
  if (proj_phys.rows() != static_cast<Eigen::Index>(d_phys) || proj_phys.cols() != n) {
    fail(ErrorKind::kDimensionMismatch, "proj_phys must be d_phys x (d_phys + d_int)");
  }
  if (proj_int.rows() != static_cast<Eigen::Index>(d_int) || proj_int.cols() != n) {
    fail(ErrorKind::kDimensionMismatch, "proj_int must be d_int x (d_phys + d_int)");
  }
  if (!basis.allFinite() || !proj_phys.allFinite() || !proj_int.allFinite()) {
    fail(ErrorKind::kInvalidArgument, "scheme matrices must be finite");
  }
  if (!Eigen::FullPivLU<Eigen::MatrixXd>(embedded()).isInvertible()) {
    fail(ErrorKind::kSingularBasis, "[proj_phys; proj_int] * basis is singular");
  }
}

void ModelSetSpec::validate() const {
  scheme.validate();
  window.validate();
  if (window.dim() != scheme.d_int) fail(ErrorKind::kDimensionMismatch, "window dimension differs from d_int");
  if (shift.dim() != scheme.d_int) fail(ErrorKind::kDimensionMismatch, "shift dimension differs from d_int");
  if (!shift.finite()) fail(ErrorKind::kInvalidArgument, "shift is not finite");
  if (!(genericity_tolerance >= 0.0)) fail(ErrorKind::kInvalidArgument, "genericity tolerance must be >= 0");
}

// ---------------------------------------------------------------------------
// Model sets

std::vector<LiftedPoint> model_set_lift(const ModelSetSpec& spec, double radius, std::size_t cap) {
  spec.validate();
  if (!(radius > 0.0) || !std::isfinite(radius)) fail(ErrorKind::kInvalidArgument, "radius must be positive");
  if (spec.window.empty()) return {};
  const std::size_t dp = spec.scheme.d_phys, di = spec.scheme.d_int;
  const auto n = static_cast<Eigen::Index>(dp + di);
  const Eigen::MatrixXd G = spec.scheme.embedded();

  const double tol = spec.genericity_tolerance;
  const auto [wlo, whi] = spec.window.bounds();
  Eigen::VectorXd lo(n), hi(n);
  for (std::size_t i = 0; i < dp; ++i) {
    lo[static_cast<Eigen::Index>(i)] = -radius;
    hi[static_cast<Eigen::Index>(i)] = radius;
  }
  for (std::size_t i = 0; i < di; ++i) {
    const auto r = static_cast<Eigen::Index>(dp + i);
    lo[r] = wlo[i] - spec.shift[i] - tol - 1e-12;
    hi[r] = whi[i] - spec.shift[i] + tol + 1e-12;
  }
  const double r2 = radius * radius;
  auto accept = [&](const detail::IntCoords& c, const Eigen::VectorXd& y) -> std::optional<LiftedPoint> {
    double n2 = 0.0;
    for (std::size_t i = 0; i < dp; ++i) n2 += y[static_cast<Eigen::Index>(i)] * y[static_cast<Eigen::Index>(i)];
    if (n2 > r2) return std::nullopt;
    Point ys = segment_point(y, static_cast<Eigen::Index>(dp), static_cast<Eigen::Index>(di)) + spec.shift;
    if (spec.check_genericity) {
      const double d = spec.window.boundary_distance(ys);
      if (d < tol) {
        std::string coords;
        for (std::size_t i = 0; i < c.size(); ++i) coords += (i ? "," : "") + std::to_string(c[i]);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3g", d);
        fail(ErrorKind::kGenericity, "lattice point (" + coords + ") has internal image " + ys.str() +
                                         " within " + buf + " of the window boundary; choose a generic shift");
      }
    }
    if (!spec.window.contains(ys)) return std::nullopt;
    return LiftedPoint{segment_point(y, 0, static_cast<Eigen::Index>(dp)), ys, c};
  };
  auto pts = detail::enumerate_lattice<LiftedPoint>(G, lo, hi, accept, cap);
  std::sort(pts.begin(), pts.end(), [](const LiftedPoint& a, const LiftedPoint& b) { return lex_less(a.x, b.x); });
  return pts;
}

PointSample model_set_sample(const ModelSetSpec& spec, double radius, std::size_t cap) {
  auto lifted = model_set_lift(spec, radius, cap);
  std::vector<Point> pts;
  pts.reserve(lifted.size());
  for (auto& p : lifted) pts.push_back(p.x);
  return PointSample(spec.scheme.d_phys, radius, std::move(pts), "model set R=" + std::to_string(radius));
}

Point star_map(const ModelSetSpec& spec, const std::vector<std::int64_t>& coords) {
  if (coords.size() != spec.scheme.d_phys + spec.scheme.d_int) {
    fail(ErrorKind::kDimensionMismatch, "star_map: wrong number of lattice coordinates");
  }
  return spec.scheme.star(coords);
}

double model_set_density(const ModelSetSpec& spec, double radius) {
  const auto n = model_set_lift(spec, radius).size();
  return static_cast<double>(n) / ball_volume(spec.scheme.d_phys, radius);
}

double model_set_density_limit(const ModelSetSpec& spec) {
  spec.validate();
  return std::max(spec.window.volume(), 0.0) / std::abs(spec.scheme.embedded().determinant());
}

namespace {

std::vector<DualCandidate> dual_in_box(const CutProjectScheme& scheme, const Eigen::VectorXd& lo,
                                       const Eigen::VectorXd& hi, const Point* center, double kradius,
                                       double kint, std::size_t cap) {
  const std::size_t dp = scheme.d_phys, di = scheme.d_int;
  const Eigen::MatrixXd dual = scheme.embedded().inverse().transpose();
  const double kr2 = kradius * kradius, ki2 = kint * kint;
  auto accept = [&](const detail::IntCoords& c, const Eigen::VectorXd& y) -> std::optional<DualCandidate> {
    Point k = segment_point(y, 0, static_cast<Eigen::Index>(dp));
    Point ks = segment_point(y, static_cast<Eigen::Index>(dp), static_cast<Eigen::Index>(di));
    const double dk = center ? (k - *center).norm2() : k.norm2();
    if (dk > kr2 || ks.norm2() > ki2) return std::nullopt;
    return DualCandidate{k, ks, c};
  };
  return detail::enumerate_lattice<DualCandidate>(dual, lo, hi, accept, cap);
}

}  // namespace

std::vector<DualCandidate> dual_candidates(const CutProjectScheme& scheme, double kmax, double kint,
                                           std::size_t cap) {
  scheme.validate();
  if (!(kmax >= 0.0) || !(kint >= 0.0)) fail(ErrorKind::kInvalidArgument, "dual_candidates: bounds must be >= 0");
  const auto n = static_cast<Eigen::Index>(scheme.d_phys + scheme.d_int);
  Eigen::VectorXd lo(n), hi(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double b = i < static_cast<Eigen::Index>(scheme.d_phys) ? kmax : kint;
    lo[i] = -b;
    hi[i] = b;
  }
  auto out = dual_in_box(scheme, lo, hi, nullptr, kmax, kint, cap);
  std::sort(out.begin(), out.end(), [](const DualCandidate& a, const DualCandidate& b) {
    const double na = a.k.norm2(), nb = b.k.norm2();
    if (na != nb) return na < nb;
    return lex_less(a.k, b.k);
  });
  return out;
}

std::optional<DualCandidate> dual_lift(const CutProjectScheme& scheme, const Point& k, double kint, double tol) {
  scheme.validate();
  require_same_dim(k, scheme.d_phys, "dual_lift");
  const auto n = static_cast<Eigen::Index>(scheme.d_phys + scheme.d_int);
  Eigen::VectorXd lo(n), hi(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i < static_cast<Eigen::Index>(scheme.d_phys)) {
      lo[i] = k[static_cast<std::size_t>(i)] - tol;
      hi[i] = k[static_cast<std::size_t>(i)] + tol;
    } else {
      lo[i] = -kint;
      hi[i] = kint;
    }
  }
  auto found = dual_in_box(scheme, lo, hi, &k, tol, kint, 1'000'000);
  if (found.empty()) return std::nullopt;
  return *std::min_element(found.begin(), found.end(), [&](const DualCandidate& a, const DualCandidate& b) {
    const double da = (a.k - k).norm2(), db = (b.k - k).norm2();
    if (da != db) return da < db;
    return a.k_star.norm2() < b.k_star.norm2();
  });
}

MeyerContainment meyer_containment(const ModelSetSpec& spec, double radius, double zmax) {
  const PointSample sample = model_set_sample(spec, radius);
  const WeightedComb diffs = difference_vectors(sample, zmax);
  ModelSetSpec dd = spec;
  dd.window = spec.window.difference();
  dd.shift = Point(spec.scheme.d_int);
  dd.check_genericity = false;
  const auto lifted = model_set_lift(dd, zmax * (1.0 + 1e-12) + sample.tolerance());
  std::vector<double> flat;
  for (const auto& p : lifted) flat.insert(flat.end(), p.x.coords().begin(), p.x.coords().end());
  const SpatialIndex index(flat, spec.scheme.d_phys, std::max(zmax / 64.0, 1e-6));

  MeyerContainment out;
  const double tol = sample.tolerance();
  for (const WeightedAtom& a : diffs.atoms()) {
    ++out.differences;
    const auto hit = index.nearest(a.x.coords());
    const double miss = hit ? hit->second : std::numeric_limits<double>::infinity();
    out.max_miss = std::max(out.max_miss, miss);
    if (miss <= tol) ++out.contained;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Presets

ModelSetSpec model_set_preset(std::string_view name) {
  ModelSetSpec spec;
  if (name == "fibonacci-cps") {
    const double tau = kGolden;
    spec.scheme.d_phys = 1;
    spec.scheme.d_int = 1;
    spec.scheme.basis.resize(2, 2);
    spec.scheme.basis << tau, 1.0, 1.0 - tau, 1.0;
    spec.scheme.proj_phys.resize(1, 2);
    spec.scheme.proj_phys << 1.0, 0.0;
    spec.scheme.proj_int.resize(1, 2);
    spec.scheme.proj_int << 0.0, 1.0;
    spec.window = Window::interval(-1.0, tau - 1.0);
    spec.shift = Point{0.1234567};
    return spec;
  }
  if (name == "ammann-beenker") {
    // Z^4 with e_j -> s zeta^j physically and s zeta^{3j} internally,
    // zeta = exp(i pi / 4); s makes the shortest distance 1.
    const double s = 1.0 / (2.0 * std::sin(kPi / 8.0));
    spec.scheme.d_phys = 2;
    spec.scheme.d_int = 2;
    spec.scheme.basis = Eigen::MatrixXd::Identity(4, 4);
    spec.scheme.proj_phys.resize(2, 4);
    spec.scheme.proj_int.resize(2, 4);
    for (int j = 0; j < 4; ++j) {
      spec.scheme.proj_phys(0, j) = s * std::cos(j * kPi / 4.0);
      spec.scheme.proj_phys(1, j) = s * std::sin(j * kPi / 4.0);
      spec.scheme.proj_int(0, j) = s * std::cos(3.0 * j * kPi / 4.0);
      spec.scheme.proj_int(1, j) = s * std::sin(3.0 * j * kPi / 4.0);
    }
    // projection of the unit cell: regular octagon with edge s
    spec.window = Window::octagon(s / (2.0 * std::sin(kPi / 8.0)), kPi / 8.0);
    spec.shift = Point{0.0123456789, 0.0234567891};
    return spec;
  }
  fail(ErrorKind::kConfig, "unknown model-set preset '" + std::string(name) + "'");
}

}  // namespace aperiodic
