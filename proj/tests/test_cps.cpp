#include <doctest.h>

#include <cmath>
#include <set>

#include "aperiodic/cps.hpp"
#include "oracles.hpp"

using namespace aperiodic;
using oracle::error_kind;

namespace {

bool contains_point(const PointSample& s, const Point& p, double tol) {
  for (const Point& q : s.points()) {
    if (distance(p, q) <= tol) return true;
  }
  return false;
}

Point rotate(const Point& p, double angle) {
  return Point{std::cos(angle) * p[0] - std::sin(angle) * p[1], std::sin(angle) * p[0] + std::cos(angle) * p[1]};
}

}  // namespace

TEST_CASE("windows") {
  const Window w = Window::interval(-1.0, 2.0);
  CHECK(w.contains(Point{-1.0}));
  CHECK_FALSE(w.contains(Point{2.0}));
  CHECK(Window::interval(-1.0, 2.0, true).contains(Point{2.0}));
  CHECK(w.volume() == 3.0);
  CHECK(w.boundary_distance(Point{0.5}) == 1.5);
  const Window d = w.difference();
  CHECK(d.closed);
  CHECK(d.contains(Point{-3.0}));
  CHECK(d.contains(Point{3.0}));
  CHECK(d.volume() == 6.0);

  const double rho = 1.7;
  const Window oct = Window::octagon(rho, 0.3);
  CHECK(oct.volume() == doctest::Approx(2.0 * std::sqrt(2.0) * rho * rho).epsilon(1e-12));
  CHECK(oct.contains(Point{0.0, 0.0}));
  CHECK_FALSE(oct.contains(Point{rho, rho}));
  CHECK(oct.difference().volume() == doctest::Approx(4.0 * oct.volume()).epsilon(1e-12));

  // unit square: the lower and left edges belong to the half-open window
  const Window sq = Window::polygon({Point{0, 0}, Point{1, 0}, Point{1, 1}, Point{0, 1}});
  CHECK(sq.contains(Point{0.5, 0.0}));
  CHECK(sq.contains(Point{0.0, 0.5}));
  CHECK_FALSE(sq.contains(Point{0.5, 1.0}));
  CHECK_FALSE(sq.contains(Point{1.0, 0.5}));
  CHECK(sq.volume() == doctest::Approx(1.0));
  CHECK(error_kind([] { Window::polygon({Point{0, 0}, Point{0, 1}, Point{1, 0}}).validate(); }) ==
        ErrorKind::kInvalidArgument);
}

TEST_CASE("polygon membership agrees with half-plane tests on random points") {
  oracle::Gen g(17);
  const Window oct = Window::octagon(1.0, kPi / 8.0);
  for (int i = 0; i < 2000; ++i) {
    const Point y{g.uniform(-1.2, 1.2), g.uniform(-1.2, 1.2)};
    bool inside = true;
    for (int j = 0; j < 8; ++j) {
      const Point a = oct.vertices[static_cast<std::size_t>(j)];
      const Point b = oct.vertices[static_cast<std::size_t>((j + 1) % 8)];
      const double cross = (b[0] - a[0]) * (y[1] - a[1]) - (b[1] - a[1]) * (y[0] - a[0]);
      if (cross <= 0.0) inside = false;
    }
    if (oct.boundary_distance(y) > 1e-12) CHECK(oct.contains(y) == inside);
  }
}

TEST_CASE("fibonacci model set") {
  const ModelSetSpec spec = model_set_preset("fibonacci-cps");
  const PointSample s = model_set_sample(spec, 1000.0);
  std::set<long long> gaps;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) gaps.insert(std::llround((s[i + 1][0] - s[i][0]) * 1e9));
  CHECK(gaps == std::set<long long>{1'000'000'000LL, std::llround(kGolden * 1e9)});

  CHECK(star_map(spec, {0, 0}) == Point{0.0});
  CHECK(spec.scheme.physical({1, 0})[0] == doctest::Approx(kGolden).epsilon(1e-15));
  CHECK(star_map(spec, {1, 0})[0] == doctest::Approx(1.0 - kGolden).epsilon(1e-15));

  const double d3 = model_set_density(spec, 1e3), d4 = model_set_density(spec, 1e4);
  CHECK(std::abs(d3 / d4 - 1.0) < 5e-3);
  CHECK(d4 == doctest::Approx(model_set_density_limit(spec)).epsilon(1e-3));

  const StructureReport rep = structure_report(s, 20.0);
  CHECK(rep.packing_radius == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::isfinite(rep.covering_upper_bound));
  CHECK(rep.packing_radius <= rep.covering_radius);
  CHECK_FALSE(rep.meyer_witness);
}

TEST_CASE("star map is additive") {
  const ModelSetSpec fib = model_set_preset("fibonacci-cps");
  const ModelSetSpec ab = model_set_preset("ammann-beenker");
  oracle::Gen g(8);
  for (int i = 0; i < 200; ++i) {
    std::vector<std::int64_t> u{g.integer(-50, 50), g.integer(-50, 50)}, v{g.integer(-50, 50), g.integer(-50, 50)};
    std::vector<std::int64_t> w{u[0] + v[0], u[1] + v[1]};
    CHECK(std::abs(star_map(fib, w)[0] - star_map(fib, u)[0] - star_map(fib, v)[0]) < 1e-12);
    std::vector<std::int64_t> p(4), q(4), r(4);
    for (int j = 0; j < 4; ++j) {
      p[j] = g.integer(-20, 20);
      q[j] = g.integer(-20, 20);
      r[j] = p[j] + q[j];
    }
    CHECK(max_abs_diff(star_map(ab, r), star_map(ab, p) + star_map(ab, q)) < 1e-12);
  }
}

TEST_CASE("window size and density") {
  ModelSetSpec spec = model_set_preset("fibonacci-cps");
  const double base = model_set_density(spec, 1e4);
  spec.window = Window::interval(-1.0, 2.0 * kGolden - 1.0);
  const double doubled = model_set_density(spec, 1e4);
  CHECK(std::abs(doubled / base - 2.0) < 0.02);
  spec.window = Window::interval(0.0, 0.0);
  CHECK(model_set_sample(spec, 100.0).empty());
  CHECK(model_set_density(spec, 100.0) == 0.0);
}

TEST_CASE("nested windows give nested point sets") {
  oracle::Gen g(41);
  ModelSetSpec big = model_set_preset("fibonacci-cps");
  for (int trial = 0; trial < 8; ++trial) {
    const double a = g.uniform(-1.0, 0.0), b = g.uniform(0.1, 1.0);
    big.window = Window::interval(a, b);
    ModelSetSpec small = big;
    small.window = Window::interval(g.uniform(a, 0.0), g.uniform(0.05, b));
    const PointSample sb = model_set_sample(big, 300.0), ss = model_set_sample(small, 300.0);
    CHECK(ss.size() <= sb.size());
    for (const Point& p : ss.points()) CHECK(contains_point(sb, p, 1e-9));
  }
}

TEST_CASE("shifting by a star image translates the point set") {
  const ModelSetSpec spec = model_set_preset("fibonacci-cps");
  oracle::Gen g(12);
  for (int trial = 0; trial < 6; ++trial) {
    const std::vector<std::int64_t> v{g.integer(-6, 6), g.integer(-6, 6)};
    ModelSetSpec moved = spec;
    moved.shift = spec.shift + star_map(spec, v);
    const Point t = spec.scheme.physical(v);
    const double r = 200.0;
    const PointSample a = model_set_sample(spec, r), b = model_set_sample(moved, r);
    const double inner = r - t.norm() - 1.0;
    for (const Point& p : b.points()) {
      if (p.norm() <= inner) CHECK(contains_point(a, p + t, 1e-9));
    }
    for (const Point& p : a.points()) {
      if (p.norm() <= inner) CHECK(contains_point(b, p - t, 1e-9));
    }
  }
}

TEST_CASE("genericity violations are rejected") {
  ModelSetSpec spec = model_set_preset("fibonacci-cps");
  spec.shift = Point{0.0};
  CHECK(error_kind([&] { model_set_sample(spec, 10.0); }) == ErrorKind::kGenericity);
  CHECK(error_kind([] { model_set_preset("penrose"); }) == ErrorKind::kConfig);
}

TEST_CASE("meyer containment on the fibonacci preset") {
  const MeyerContainment m = meyer_containment(model_set_preset("fibonacci-cps"), 500.0, 50.0);
  CHECK(m.differences > 10);
  CHECK(m.holds());
  CHECK(m.max_miss < 1e-9);
}

TEST_CASE("ammann-beenker vertex set") {
  const ModelSetSpec spec = model_set_preset("ammann-beenker");
  const PointSample s = model_set_sample(spec, 30.0);
  CHECK(model_set_density(spec, 60.0) == doctest::Approx(model_set_density_limit(spec)).epsilon(0.02));
  CHECK(model_set_density_limit(spec) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  const StructureReport rep = structure_report(s, 6.0);
  CHECK(rep.packing_radius == doctest::Approx(0.5).epsilon(1e-9));

  // difference vectors are invariant under rotation by pi/4; counts agree
  // up to boundary effects
  const WeightedComb d = difference_vectors(s, 4.0);
  CHECK(d.size() > 50);
  for (const auto& atom : d.atoms()) {
    const std::complex<double> w = d.weight_at(rotate(atom.x, kPi / 4.0), 1e-9);
    CHECK(w.real() > 0.0);
    CHECK(std::abs(w.real() / atom.w.real() - 1.0) < 0.1);
  }
}

TEST_CASE("dual candidates pair integrally with the lattice") {
  for (const char* name : {"fibonacci-cps", "ammann-beenker"}) {
    const ModelSetSpec spec = model_set_preset(name);
    const auto dual = dual_candidates(spec.scheme, 3.0, 2.0);
    REQUIRE_FALSE(dual.empty());
    CHECK(dual.front().k.norm() == 0.0);
    oracle::Gen g(4);
    const std::size_t n = spec.scheme.d_phys + spec.scheme.d_int;
    for (const auto& c : dual) {
      CHECK(c.k.norm() <= 3.0 + 1e-12);
      CHECK(c.k_star.norm() <= 2.0 + 1e-12);
      std::vector<std::int64_t> x(n);
      for (auto& xi : x) xi = g.integer(-5, 5);
      const double pairing = c.k.dot(spec.scheme.physical(x)) + c.k_star.dot(spec.scheme.star(x));
      CHECK(std::abs(pairing - std::round(pairing)) < 1e-9);
    }
    for (std::size_t i = 0; i + 1 < dual.size(); ++i) CHECK(dual[i].k.norm() <= dual[i + 1].k.norm() + 1e-15);
  }
  const auto scheme = model_set_preset("fibonacci-cps").scheme;
  const auto lift = dual_lift(scheme, Point{kGolden / std::sqrt(5.0)}, 2.0, 1e-9);
  REQUIRE(lift);
  CHECK(lift->k[0] == doctest::Approx(kGolden / std::sqrt(5.0)).epsilon(1e-12));
  CHECK_FALSE(dual_lift(scheme, Point{0.3}, 2.0, 1e-9));
}
