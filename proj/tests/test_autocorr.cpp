#include <doctest.h>

#include <cmath>

#include "aperiodic/autocorr.hpp"
#include "aperiodic/cps.hpp"
#include "aperiodic/generators.hpp"
#include "oracles.hpp"

using namespace aperiodic;
using oracle::error_kind;

namespace {

const LatticeSpec kZ{Eigen::MatrixXd::Identity(1, 1)};

WeightedComb tm_signed(double radius) {
  const ChainSample c = chain_covering(SubstitutionSystem::preset("thue-morse"), radius);
  return weighted_chain(c, {{"a", 1.0}, {"b", -1.0}});
}

WeightedComb random_comb(oracle::Gen& g, const PointSample& s) {
  std::vector<WeightedAtom> atoms;
  for (const Point& p : s.points()) atoms.push_back({p, {g.uniform(0.1, 1.0), g.uniform(-1.0, 1.0)}});
  return WeightedComb(s.dim(), s.radius(), std::move(atoms));
}

}  // namespace

TEST_CASE("integer lattice autocorrelation") {
  const double r = 1e4;
  const AutocorrEstimate e = autocorrelation(lattice_sample(kZ, r), 10.0);
  CHECK(e.comb.size() == 21);
  for (int z = -10; z <= 10; ++z) {
    CHECK(std::abs(e.eta(Point{double(z)}).real() - 1.0) < 1e-3);
    // exact finite count: 2R + 1 - |z| pairs over vol = 2R
    CHECK(e.eta(Point{double(z)}).real() == doctest::Approx((2 * r + 1 - std::abs(z)) / (2 * r)).epsilon(1e-14));
  }
  CHECK(e.eta(Point{0.5}) == std::complex<double>(0.0));
  CHECK(e.eta(Point{3.3}) == std::complex<double>(0.0));
}

TEST_CASE("crystal autocorrelation") {
  const CrystallographicSpec c{kZ, {Point{0.0}, Point{1.0 / 3.0}}};
  const AutocorrEstimate e = autocorrelation(crystallographic_sample(c, 1e4), 2.0);
  CHECK(std::abs(e.eta(Point{0.0}).real() - 2.0) < 1e-3);
  CHECK(std::abs(e.eta(Point{1.0 / 3.0}).real() - 1.0) < 1e-3);
  CHECK(std::abs(e.eta(Point{-1.0 / 3.0}).real() - 1.0) < 1e-3);
  CHECK(std::abs(e.eta(Point{1.0}).real() - 2.0) < 1e-3);
  CHECK(std::abs(e.eta(Point{2.0 / 3.0}).real() - 1.0) < 1e-3);
}

TEST_CASE("singletons and single atoms") {
  const AutocorrEstimate e = autocorrelation(PointSample(1, 5.0, {Point{1.0}}), 2.0);
  REQUIRE(e.comb.size() == 1);
  CHECK(e.eta(Point{0.0}).real() == doctest::Approx(1.0 / 10.0).epsilon(1e-15));
  const std::complex<double> w{0.6, -0.8};
  const AutocorrEstimate f = weighted_autocorrelation(WeightedComb(2, 3.0, {{Point{0.5, 0.5}, w}}), 1.0);
  REQUIRE(f.comb.size() == 1);
  CHECK(f.eta(Point{0.0, 0.0}).real() == doctest::Approx(std::norm(w) / (kPi * 9.0)).epsilon(1e-14));
  CHECK(error_kind([] { autocorrelation(PointSample(1, 5.0, {}), 1.0); }) == ErrorKind::kDegenerateInput);
  CHECK(error_kind([] { autocorrelation(PointSample(1, 5.0, {Point{0.0}}), 6.0); }) ==
        ErrorKind::kInvalidArgument);
}

TEST_CASE("unit weights reduce to the point-set autocorrelation") {
  const PointSample s = chain_covering(SubstitutionSystem::preset("fibonacci"), 500.0).sample;
  const AutocorrEstimate a = autocorrelation(s, 20.0);
  const AutocorrEstimate b = weighted_autocorrelation(as_comb(s), 20.0);
  REQUIRE(a.comb.size() == b.comb.size());
  for (std::size_t i = 0; i < a.comb.size(); ++i) {
    CHECK(a.comb[i].x == b.comb[i].x);
    CHECK(a.comb[i].w == b.comb[i].w);
  }
}

TEST_CASE("Thue-Morse signed comb") {
  const AutocorrEstimate e = weighted_autocorrelation(tm_signed(16384.0), 4.0);
  CHECK(std::abs(e.eta(Point{0.0}).real() - 1.0) < 1e-3);
  const double eta1 = e.eta(Point{1.0}).real();
  CHECK(eta1 >= -1.0);
  CHECK(eta1 < 0.0);

  // brute-force pair sums on a small ball
  const WeightedComb small = tm_signed(256.0);
  const AutocorrEstimate s = weighted_autocorrelation(small, 12.0);
  const auto brute = oracle::brute_weighted_pairs(small, 12.0, 1e-9);
  std::size_t nonzero = 0;
  for (const auto& [z, w] : brute) {
    if (w == std::complex<double>(0.0)) continue;
    ++nonzero;
    CHECK(s.eta(z).real() == doctest::Approx(w.real() / 512.0).epsilon(1e-14));
  }
  CHECK(s.comb.size() == nonzero);
}

TEST_CASE("random samples: pair sums match a double loop") {
  oracle::Gen g(21);
  for (int trial = 0; trial < 8; ++trial) {
    const PointSample s = trial % 2 == 0 ? g.delone_1d(40.0, 0.4, 1.3) : g.jittered_2d(7.0, 0.3);
    const WeightedComb c = random_comb(g, s);
    const double zmax = 3.0;
    const AutocorrEstimate e = weighted_autocorrelation(c, zmax);
    const auto brute = oracle::brute_weighted_pairs(c, zmax, s.tolerance());
    const double vol = ball_volume(s.dim(), s.radius());
    CHECK(e.comb.size() == brute.size());
    for (const auto& [z, w] : brute) CHECK(std::abs(e.eta(z) - w / vol) < 1e-13);
  }
}

TEST_CASE("autocorrelation invariants on random combs") {
  oracle::Gen g(33);
  for (int trial = 0; trial < 12; ++trial) {
    const PointSample s = trial % 3 == 0 ? g.jittered_2d(8.0, 0.2) : g.delone_1d(60.0, 0.3, 1.5);
    const AutocorrEstimate plain = autocorrelation(s, 4.0);
    // eta(0) is the density estimate, and dominates every other atom
    CHECK(plain.eta(Point(s.dim())).real() == static_cast<double>(s.size()) / ball_volume(s.dim(), s.radius()));
    const AutocorrEstimate e = weighted_autocorrelation(random_comb(g, s), 4.0);
    const double eta0 = e.eta(Point(s.dim())).real();
    for (const auto& a : e.comb.atoms()) {
      CHECK(std::abs(a.w) <= eta0 * (1.0 + 1e-12));
      CHECK(std::abs(e.eta(-a.x) - std::conj(a.w)) <= 1e-14 * eta0);
    }
    for (const auto& a : plain.comb.atoms()) CHECK(a.w.real() <= plain.eta(Point(s.dim())).real());
  }
}

TEST_CASE("translation changes the estimate by at most the boundary bias") {
  oracle::Gen g(44);
  for (int trial = 0; trial < 10; ++trial) {
    const double r = 300.0, zmax = 5.0;
    const PointSample s = g.delone_1d(r + 10.0, 0.5, 1.5);
    const Point t{g.uniform(-3.0, 3.0)};
    const PointSample a = restrict(s, r);
    const PointSample b = restrict(translate(s, t), r);
    const double dens = static_cast<double>(a.size()) / (2.0 * r);
    const double dev = comb_deviation(autocorrelation(a, zmax).comb, autocorrelation(b, zmax).comb, 1e-9);
    CHECK(dev <= 2.0 * dens * (std::abs(t[0]) + zmax) / r);
  }
  // integers against integers + 0.3: same atoms, weights within 1 / R
  const double r = 1e4;
  std::vector<Point> shifted;
  for (int n = -10000; n < 10000; ++n) shifted.push_back(Point{n + 0.3});
  const AutocorrEstimate a = autocorrelation(lattice_sample(kZ, r), 5.0);
  const AutocorrEstimate b = autocorrelation(PointSample(1, r, shifted), 5.0);
  REQUIRE(a.comb.size() == b.comb.size());
  for (std::size_t i = 0; i < a.comb.size(); ++i) CHECK(std::abs(a.comb[i].x[0] - b.comb[i].x[0]) < 1e-9);
  CHECK(comb_deviation(a.comb, b.comb, 1e-9) <= 1.0 / r);
}

TEST_CASE("one-sided and two-sided normalizations agree to O(zmax / R)") {
  for (double r : {1e3, 1e4}) {
    const PointSample s = chain_covering(SubstitutionSystem::preset("fibonacci"), r).sample;
    const double zmax = 10.0;
    const AutocorrEstimate both = autocorrelation(s, zmax);
    const AutocorrEstimate one = autocorrelation(s, zmax, {Normalization::kOneSided, {}});
    CHECK(one.radius == r - zmax);
    const double dens = static_cast<double>(s.size()) / (2.0 * r);
    CHECK(comb_deviation(both.comb, one.comb, 1e-6) <= 2.0 * dens * zmax / r);
  }
}

TEST_CASE("box averaging regions") {
  LatticeSpec z2{Eigen::MatrixXd::Identity(2, 2)};
  const PointSample s = lattice_sample(z2, 60.0);
  AutocorrOptions opt;
  opt.region.shape = AveragingRegion::Shape::kBox;
  const AutocorrEstimate e = autocorrelation(s, 3.0, opt);
  CHECK(std::abs(e.eta(Point{1.0, 0.0}).real() - 1.0) < 0.05);
  CHECK(std::abs(e.eta(Point{1.0, 1.0}).real() - 1.0) < 0.05);
  CHECK(e.eta(Point{0.5, 0.0}) == std::complex<double>(0.0));
}

TEST_CASE("Eberlein ladders") {
  SUBCASE("integers: deviations shrink like 1 / R") {
    const ConvergenceLadder l = eberlein_ladder([](double r) { return lattice_sample(kZ, r); },
                                                {1e2, 1e3, 1e4}, 10.0, 1e-2);
    REQUIRE(l.deviations.size() == 2);
    // eta_R(z) - 1 = (1 - |z|) / 2R exactly
    CHECK(l.deviations[0] == doctest::Approx(9.0 * (1.0 / 200 - 1.0 / 2000)).epsilon(1e-9));
    CHECK(l.deviations[1] == doctest::Approx(9.0 * (1.0 / 2000 - 1.0 / 20000)).epsilon(1e-9));
    CHECK(l.deviations[0] / l.deviations[1] == doctest::Approx(10.0).epsilon(1e-6));
    CHECK(l.converged());
  }
  SUBCASE("fibonacci converges") {
    const auto sys = SubstitutionSystem::preset("fibonacci");
    const ConvergenceLadder l =
        eberlein_ladder([&](double r) { return chain_covering(sys, r).sample; }, {1e2, 1e3, 1e4}, 10.0, 1e-2);
    CHECK(l.deviations.back() < 1e-2);
    CHECK(l.converged());
    CHECK(l.table.size() == 2);
  }
  SUBCASE("model set ladder") {
    const ModelSetSpec spec = model_set_preset("fibonacci-cps");
    const ConvergenceLadder l =
        eberlein_ladder([&](double r) { return model_set_sample(spec, r); }, {1e3, 1e4}, 10.0, 1e-2);
    CHECK(l.converged());
  }
  CHECK(error_kind([] {
          eberlein_ladder([](double r) { return lattice_sample(kZ, r); }, {1e3, 1e2}, 1.0);
        }) == ErrorKind::kInvalidArgument);
}
