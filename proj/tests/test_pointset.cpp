#include <doctest.h>

#include <cmath>

#include "aperiodic/error.hpp"
#include "aperiodic/generators.hpp"
#include "aperiodic/pointset.hpp"
#include "oracles.hpp"

using namespace aperiodic;

namespace {

PointSample integers(double r) {
  LatticeSpec l{Eigen::MatrixXd::Identity(1, 1)};
  return lattice_sample(l, r);
}

PointSample shifted_integers(double r, double t) {
  std::vector<Point> pts;
  for (int n = static_cast<int>(std::ceil(-r - t)); n + t <= r; ++n) {
    if (std::abs(n + t) <= r) pts.push_back(Point{n + t});
  }
  return PointSample(1, r, pts);
}

PointSample fibonacci(double r) {
  return chain_covering(SubstitutionSystem::preset("fibonacci"), r).sample;
}

using oracle::error_kind;

}  // namespace

TEST_CASE("point sample invariants are enforced") {
  CHECK(error_kind([] { PointSample(1, 1.0, {Point{2.0}}); }) == ErrorKind::kOutOfWindow);
  CHECK(error_kind([] { PointSample(1, 1.0, {Point{0.5}, Point{0.5}}); }) == ErrorKind::kInvalidArgument);
  CHECK(error_kind([] { PointSample(1, -1.0, {}); }) == ErrorKind::kInvalidArgument);
  CHECK(error_kind([] { PointSample(2, 1.0, {Point{0.5}}); }) == ErrorKind::kDimensionMismatch);
  CHECK(error_kind([] { PointSample(1, 1.0, {Point{NAN}}); }) == ErrorKind::kInvalidArgument);
  CHECK(error_kind([] { WeightedComb(1, 1.0, {{Point{0.0}, 0.0}}); }) == ErrorKind::kInvalidArgument);
  CHECK_NOTHROW(PointSample(1, 1.0, {}));
}

TEST_CASE("restrict") {
  const PointSample z = integers(10.0);
  const PointSample r = restrict(z, 2.5);
  REQUIRE(r.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(r[i] == Point{double(i - 2)});
  CHECK(r.radius() == 2.5);
  CHECK(r.provenance() == z.provenance());

  const PointSample same = restrict(z, z.radius());
  REQUIRE(same.size() == z.size());
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(same[i] == z[i]);

  CHECK(error_kind([&] { restrict(z, 11.0); }) == ErrorKind::kOutOfWindow);

  const PointSample fib = restrict(fibonacci(1000.0), 100.0);
  const double dens = 1.0 / (kGolden / (kGolden + 1.0) * kGolden + 1.0 / (kGolden + 1.0));
  CHECK(std::abs(fib.size() / (200.0 * dens) - 1.0) < 0.05);
}

TEST_CASE("restrict composes as restriction to the smaller ball") {
  oracle::Gen g(11);
  for (int trial = 0; trial < 20; ++trial) {
    const PointSample s = trial % 2 == 0 ? g.delone_1d(50.0, 0.3, 1.7) : g.jittered_2d(12.0, 0.3);
    const double r1 = g.uniform(1.0, s.radius()), r2 = g.uniform(1.0, s.radius());
    const PointSample a = restrict(restrict(s, r1), std::min(r1, r2));
    const PointSample b = restrict(s, std::min(r1, r2));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  }
}

TEST_CASE("structure report on lattices and chains") {
  SUBCASE("integers") {
    const StructureReport rep = structure_report(integers(50.0), 5.0);
    CHECK(rep.packing_radius == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep.covering_radius == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep.covering_upper_bound >= 0.5);
    CHECK_FALSE(rep.meyer_witness);
    CHECK_FALSE(rep.flc_witness);
    CHECK(rep.distinct_differences == 11);
  }
  SUBCASE("crystal with minimal gap 1/3") {
    CrystallographicSpec c{{Eigen::MatrixXd::Identity(1, 1)}, {Point{0.0}, Point{1.0 / 3.0}}};
    const StructureReport rep = structure_report(crystallographic_sample(c, 30.0), 3.0);
    CHECK(rep.packing_radius == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
    CHECK(rep.covering_upper_bound >= 1.0 / 3.0);
  }
  SUBCASE("fibonacci tiles 1 and tau") {
    const StructureReport rep = structure_report(fibonacci(400.0), 10.0);
    CHECK(rep.packing_radius == doctest::Approx(0.5).epsilon(1e-9));
    // the true covering radius tau/2 lies between the probe maximum and the bound
    CHECK(rep.covering_radius <= kGolden / 2.0 + 1e-9);
    CHECK(rep.covering_radius >= kGolden / 2.0 - rep.packing_radius / 4.0);
    CHECK(rep.covering_upper_bound >= kGolden / 2.0);
    CHECK_FALSE(rep.meyer_witness);
  }
  CHECK(error_kind([] { structure_report(PointSample(1, 1.0, {}), 0.5); }) == ErrorKind::kDegenerateInput);
}

TEST_CASE("structure report is Delone on random samples and finds witnesses") {
  oracle::Gen g(7);
  for (int trial = 0; trial < 10; ++trial) {
    const PointSample s = trial % 2 == 0 ? g.delone_1d(80.0, 0.5, 1.5) : g.jittered_2d(10.0, 0.2);
    const StructureReport rep = structure_report(s, 3.0);
    CHECK(rep.packing_radius > 0.0);
    CHECK(rep.packing_radius <= rep.covering_upper_bound);
    CHECK(std::isfinite(rep.covering_upper_bound));
    // generic random gaps make Lambda - Lambda nearly accumulate
    REQUIRE(rep.meyer_witness);
    const DifferenceWitness& w = *rep.meyer_witness;
    const auto [i1, j1] = w.pair1;
    const auto [i2, j2] = w.pair2;
    CHECK(max_abs_diff(s[i1] - s[j1], w.z1) < 1e-9);
    CHECK(max_abs_diff(s[i2] - s[j2], w.z2) < 1e-9);
    CHECK(distance(w.z1, w.z2) == doctest::Approx(w.separation));
  }
}

TEST_CASE("difference vectors") {
  const WeightedComb d = difference_vectors(restrict(integers(10.0), 2.5), 1.5);
  REQUIRE(d.size() == 3);
  CHECK(d.weight_at(Point{0.0}) == std::complex<double>(5.0));
  CHECK(d.weight_at(Point{1.0}) == std::complex<double>(4.0));
  CHECK(d.weight_at(Point{-1.0}) == std::complex<double>(4.0));

  const WeightedComb single = difference_vectors(PointSample(1, 1.0, {Point{0.0}}), 1.0);
  REQUIRE(single.size() == 1);
  CHECK(single[0].w == std::complex<double>(1.0));

  CHECK(error_kind([] { difference_vectors(integers(2.0), 5.0); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("difference vectors match a double loop on Thue-Morse a-positions") {
  const ChainSample tm = chain_covering(SubstitutionSystem::preset("thue-morse"), 1024.0);
  const PointSample a = letter_positions(tm, "a");
  const double zmax = 20.0;
  const WeightedComb d = difference_vectors(a, zmax);
  const auto brute = oracle::brute_differences(a, zmax, 1e-9);
  REQUIRE(d.size() == brute.size());
  for (const auto& [z, c] : brute) CHECK(d.weight_at(z).real() == c);
  CHECK(d.weight_at(Point{0.0}).real() == double(a.size()));
}

TEST_CASE("difference counts are centrally symmetric") {
  oracle::Gen g(3);
  for (int trial = 0; trial < 12; ++trial) {
    const PointSample s = trial % 3 == 0 ? g.jittered_2d(6.0, 0.25) : g.delone_1d(30.0, 0.4, 1.2);
    const WeightedComb d = difference_vectors(s, 4.0);
    for (const auto& atom : d.atoms()) CHECK(d.weight_at(-atom.x) == atom.w);
    const auto brute = oracle::brute_differences(s, 4.0, s.tolerance());
    CHECK(brute.size() == d.size());
  }
}

TEST_CASE("hull distance") {
  const PointSample z = integers(20.0);
  CHECK(hull_distance(z, z) == 0.0);
  const PointSample h = shifted_integers(20.0, 0.5);
  const double d = hull_distance(z, h);
  CHECK(d > 0.0);
  CHECK(d == doctest::Approx(oracle::brute_hull_distance(z, h)).epsilon(1e-12));
  CHECK(hull_distance(z, h) == hull_distance(h, z));

  double prev = INFINITY;
  for (double t : {0.1, 0.01, 0.001}) {
    const double dt = hull_distance(z, shifted_integers(20.0, t));
    CHECK(dt < prev);
    prev = dt;
  }
  CHECK(error_kind([&] { hull_distance(z, oracle::Gen(1).jittered_2d(3.0, 0.1)); }) ==
        ErrorKind::kDimensionMismatch);
}

TEST_CASE("hull distance agrees with brute force and obeys the triangle inequality") {
  oracle::Gen g(99);
  std::vector<PointSample> pool;
  for (int i = 0; i < 6; ++i) pool.push_back(g.delone_1d(g.uniform(5.0, 25.0), 0.5, 2.0));
  for (const auto& a : pool) {
    for (const auto& b : pool) {
      CHECK(hull_distance(a, b) == doctest::Approx(oracle::brute_hull_distance(a, b)).epsilon(1e-12));
      for (const auto& c : pool) {
        CHECK(hull_distance(a, c) <= hull_distance(a, b) + hull_distance(b, c) + 1e-15);
      }
    }
  }
  std::vector<PointSample> pool2;
  for (int i = 0; i < 3; ++i) pool2.push_back(g.jittered_2d(4.0, 0.3));
  for (const auto& a : pool2) {
    for (const auto& b : pool2) {
      CHECK(hull_distance(a, b) == doctest::Approx(oracle::brute_hull_distance(a, b)).epsilon(1e-12));
    }
  }
}

TEST_CASE("translate shifts every point") {
  const PointSample z = integers(5.0);
  const PointSample t = translate(z, Point{0.25});
  REQUIRE(t.size() == z.size());
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(t[i][0] == z[i][0] + 0.25);
  CHECK(t.radius() == 5.25);
}
