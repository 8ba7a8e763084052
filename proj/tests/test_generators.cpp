#include <doctest.h>

#include <cmath>
#include <set>

#include "aperiodic/generators.hpp"
#include "oracles.hpp"

using namespace aperiodic;
using oracle::error_kind;

namespace {

const std::map<char, std::string> kTM{{'a', "ab"}, {'b', "ba"}};
const std::map<char, std::string> kPD{{'a', "ab"}, {'b', "aa"}};
const std::map<char, std::string> kFib{{'a', "ab"}, {'b', "a"}};

double letter_fraction(const std::vector<int>& letters, int letter) {
  std::size_t c = 0;
  for (int l : letters) c += l == letter;
  return static_cast<double>(c) / static_cast<double>(letters.size());
}

}  // namespace

TEST_CASE("lattice samples") {
  LatticeSpec z{Eigen::MatrixXd::Identity(1, 1)};
  const PointSample s = lattice_sample(z, 3.2);
  REQUIRE(s.size() == 7);
  for (int i = 0; i < 7; ++i) CHECK(s[i] == Point{double(i - 3)});

  LatticeSpec z2{Eigen::MatrixXd::Identity(2, 2)};
  CHECK(lattice_sample(z2, 1.5).size() == 9);

  Eigen::MatrixXd b(2, 2);
  b << 1.0, 0.5, 0.0, 0.5;  // columns (1, 0) and (0.5, 0.5)
  LatticeSpec skew{b};
  CHECK(skew.density() == doctest::Approx(2.0));
  const double r = 1000.0;
  const PointSample big = lattice_sample(skew, r);
  CHECK(std::abs(big.size() / (kPi * r * r) / 2.0 - 1.0) < 0.01);

  LatticeSpec singular{Eigen::MatrixXd::Zero(2, 2)};
  CHECK(error_kind([&] { lattice_sample(singular, 1.0); }) == ErrorKind::kSingularBasis);
  CHECK(error_kind([&] { lattice_sample(z2, 1e4, 1000); }) == ErrorKind::kCapExceeded);
}

TEST_CASE("lattice samples equal brute-force enumeration") {
  oracle::Gen g(5);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd b(2, 2);
    b << g.uniform(0.6, 1.4), g.uniform(-0.5, 0.5), g.uniform(-0.5, 0.5), g.uniform(0.6, 1.4);
    const double r = g.uniform(3.0, 8.0);
    const PointSample s = lattice_sample(LatticeSpec{b}, r);
    std::size_t count = 0;
    for (int i = -60; i <= 60; ++i) {
      for (int j = -60; j <= 60; ++j) {
        const Point p{b(0, 0) * i + b(0, 1) * j, b(1, 0) * i + b(1, 1) * j};
        if (p.norm() <= r) ++count;
      }
    }
    CHECK(s.size() == count);
  }
}

TEST_CASE("crystallographic samples") {
  LatticeSpec z{Eigen::MatrixXd::Identity(1, 1)};
  const PointSample a = crystallographic_sample({z, {Point{0.0}}}, 7.5);
  const PointSample b = lattice_sample(z, 7.5);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

  const PointSample c = crystallographic_sample({z, {Point{0.0}, Point{1.0 / 3.0}}}, 2.0);
  const std::vector<double> want{-2, -5.0 / 3, -1, -2.0 / 3, 0, 1.0 / 3, 1, 4.0 / 3, 2};
  REQUIRE(c.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(c[i][0] == doctest::Approx(want[i]).epsilon(1e-15));

  const PointSample big = crystallographic_sample({z, {Point{0.0}, Point{1.0 / 3.0}}}, 1e4);
  CHECK(std::abs(big.size() / 2e4 / 2.0 - 1.0) < 0.01);

  CHECK(error_kind([&] { crystallographic_sample({z, {Point{0.0}, Point{1.0}}}, 3.0); }) ==
        ErrorKind::kMotifCollision);
}

TEST_CASE("substitution words match direct rewriting") {
  const auto tm = SubstitutionSystem::preset("thue-morse");
  CHECK(tm.spell(tm.iterate(tm.index_of("a"), 4)) == "abbabaabbaababba");
  CHECK(tm.spell(tm.iterate(tm.index_of("a"), 4)) == oracle::rewrite("a", kTM, 4));
  const auto pd = SubstitutionSystem::preset("period-doubling");
  CHECK(pd.spell(pd.iterate(pd.index_of("a"), 3)) == "abaaabab");
  const auto fib = SubstitutionSystem::preset("fibonacci");
  for (int n = 1; n <= 12; ++n) {
    CHECK(fib.spell(fib.iterate(0, n)) == oracle::rewrite("a", kFib, n));
    CHECK(pd.spell(pd.iterate(1, n)) == oracle::rewrite("b", kPD, n));
  }
}

TEST_CASE("word lengths are column sums of matrix powers") {
  for (const char* name : {"fibonacci", "thue-morse", "period-doubling"}) {
    const auto sys = SubstitutionSystem::preset(name);
    const Eigen::MatrixXi m = sys.matrix();
    Eigen::MatrixXi p = Eigen::MatrixXi::Identity(m.rows(), m.cols());
    for (int n = 1; n <= 10; ++n) {
      p = p * m;
      for (int l = 0; l < static_cast<int>(sys.size()); ++l) {
        CHECK(static_cast<int>(sys.iterate(l, n).size()) == p.col(l).sum());
      }
    }
  }
}

TEST_CASE("tile lengths are the left Perron-Frobenius eigenvector") {
  const auto fib = SubstitutionSystem::preset("fibonacci");
  CHECK(fib.lengths()[0] == doctest::Approx(kGolden).epsilon(1e-13));
  CHECK(fib.lengths()[1] == 1.0);
  const Eigen::MatrixXd mt = fib.matrix().cast<double>().transpose();
  const auto left = oracle::perron_vector(mt);
  CHECK(left[0] / left[1] == doctest::Approx(kGolden).epsilon(1e-12));
  CHECK(fib.inflation_factor() == doctest::Approx(oracle::perron_value(mt)).epsilon(1e-12));

  for (const char* name : {"thue-morse", "period-doubling"}) {
    const auto sys = SubstitutionSystem::preset(name);
    CHECK(sys.constant_length());
    for (double l : sys.lengths()) CHECK(l == 1.0);
  }
}

TEST_CASE("letter frequencies agree with a dense eigen-decomposition") {
  for (const char* name : {"fibonacci", "thue-morse", "period-doubling"}) {
    const auto sys = SubstitutionSystem::preset(name);
    const auto want = oracle::perron_vector(sys.matrix().cast<double>());
    const auto got = sys.frequencies();
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-10));
  }
  const auto tm = SubstitutionSystem::preset("thue-morse");
  const ChainSample c = substitution_chain(tm, 16);
  CHECK(std::abs(letter_fraction(c.letters, 0) - 0.5) < 1e-3);
  const auto pd = SubstitutionSystem::preset("period-doubling");
  const ChainSample d = substitution_chain(pd, 17);
  REQUIRE(d.letters.size() >= 100000);
  CHECK(std::abs(letter_fraction(d.letters, 0) - 2.0 / 3.0) < 1e-3);
  const auto fib = SubstitutionSystem::preset("fibonacci");
  const ChainSample f = substitution_chain(fib, 26);
  REQUIRE(f.letters.size() >= 100000);
  CHECK(std::abs(letter_fraction(f.letters, 0) - 1.0 / kGolden) < 1e-3);
}

TEST_CASE("chains lay out the two-sided fixed point") {
  const auto tm = SubstitutionSystem::preset("thue-morse");
  const ChainSample c = substitution_chain(tm, 6);
  // sigma^6(b) ends at the origin and sigma^6(a) starts there
  const std::string right = oracle::rewrite("a", kTM, 6);
  const std::string left = oracle::rewrite("b", kTM, 6);
  std::string spelled;
  for (int l : c.letters) spelled += tm.alphabet()[static_cast<std::size_t>(l)];
  const std::string both = left + right;
  const std::size_t zero = static_cast<std::size_t>(
      std::find(c.sample.points().begin(), c.sample.points().end(), Point{0.0}) - c.sample.points().begin());
  REQUIRE(zero < c.sample.size());
  CHECK(both.substr(left.size() - zero, spelled.size()) == spelled);

  // the TM seed b|a is legal and sigma^2 maps it to itself around the origin
  const auto words = tm.legal_two_words();
  CHECK(words.count(tm.seed()) == 1);
}

TEST_CASE("chain gaps reproduce tile lengths") {
  for (const char* name : {"fibonacci", "thue-morse", "period-doubling"}) {
    const auto sys = SubstitutionSystem::preset(name);
    const ChainSample c = chain_covering(sys, 5000.0);
    REQUIRE(c.letters.size() == c.sample.size());
    const double bound = static_cast<double>(c.sample.size()) * 1e-12;
    for (std::size_t i = 0; i + 1 < c.sample.size(); ++i) {
      const double gap = c.sample[i + 1][0] - c.sample[i][0];
      CHECK(std::abs(gap - sys.lengths()[static_cast<std::size_t>(c.letters[i])]) <= bound);
    }
    CHECK(c.sample.radius() == 5000.0);
  }
}

TEST_CASE("letter positions") {
  const auto tm = SubstitutionSystem::preset("thue-morse");
  const ChainSample c = substitution_chain(tm, 4);
  const PointSample a = letter_positions(c, "a");
  auto has = [&](double x) {
    return std::find(a.points().begin(), a.points().end(), Point{x}) != a.points().end();
  };
  // the word right of the origin starts with abba
  CHECK(has(0.0));
  CHECK_FALSE(has(1.0));
  CHECK_FALSE(has(2.0));
  CHECK(has(3.0));
  CHECK(a.size() + letter_positions(c, "b").size() == c.sample.size());
  CHECK(error_kind([&] { letter_positions(c, "z"); }) == ErrorKind::kUnknownLetter);
}

TEST_CASE("substitution validation") {
  CHECK(error_kind([] {
          SubstitutionSystem::from_strings({"a", "b"}, {{"a", "a"}, {"b", "b"}}, std::nullopt, "a|b");
        }) == ErrorKind::kNonPrimitive);
  CHECK(error_kind([] {
          SubstitutionSystem::from_strings({"a", "b"}, {{"a", "ab"}, {"b", "a"}}, std::nullopt, "b|b");
        }) == ErrorKind::kIllegalSeed);
  CHECK(error_kind([] {
          SubstitutionSystem::from_strings({"a", "b"}, {{"a", "ab"}, {"b", "a"}},
                                           std::map<std::string, double>{{"a", 1.0}, {"b", 1.0}}, "a|a");
        }) == ErrorKind::kInvalidArgument);
  CHECK(error_kind([] { SubstitutionSystem::preset("nope"); }) == ErrorKind::kConfig);
  const auto custom = SubstitutionSystem::from_strings({"a", "b"}, {{"a", "ab"}, {"b", "a"}},
                                                       std::nullopt, "a|a", "custom");
  CHECK(custom.lengths()[0] == doctest::Approx(kGolden).epsilon(1e-13));
}

TEST_CASE("random primitive substitutions") {
  oracle::Gen g(2024);
  int built = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::map<std::string, std::string> rules;
    std::map<char, std::string> raw;
    for (char l : {'a', 'b', 'c'}) {
      std::string w;
      const int len = g.integer(1, 4);
      for (int i = 0; i < len; ++i) w += static_cast<char>('a' + g.integer(0, 2));
      rules[std::string(1, l)] = w;
      raw[l] = w;
    }
    std::optional<SubstitutionSystem> sys;
    for (const char* seed : {"a|a", "a|b", "b|a", "c|a", "a|c", "b|b", "b|c", "c|b", "c|c"}) {
      try {
        sys.emplace(SubstitutionSystem::from_strings({"a", "b", "c"}, rules, std::nullopt, seed));
        break;
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::kNonPrimitive) break;
      }
    }
    if (!sys) continue;
    ++built;
    const Eigen::MatrixXd m = sys->matrix().cast<double>();
    const auto left = oracle::perron_vector(m.transpose());
    const double mn = *std::min_element(left.begin(), left.end());
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(sys->lengths()[i] == doctest::Approx(left[i] / mn).epsilon(1e-9));
    }
    for (int n = 1; n <= 4; ++n) CHECK(sys->spell(sys->iterate(0, n)) == oracle::rewrite("a", raw, n));
  }
  CHECK(built > 5);
}

TEST_CASE("induced substitutions on legal two-letter words") {
  const auto tm = induced_substitution(SubstitutionSystem::preset("thue-morse"));
  CHECK(tm.size() == 4);
  CHECK(tm.constant_length());
  std::set<std::string> names(tm.alphabet().begin(), tm.alphabet().end());
  CHECK(names == std::set<std::string>{"aa", "ab", "ba", "bb"});
  for (const auto& r : tm.rules()) CHECK(r.size() == 2);
  // primitive: some power of the matrix is strictly positive
  const Eigen::MatrixXi m = tm.matrix();
  Eigen::MatrixXi p = m;
  bool positive = false;
  for (int n = 1; n <= 10 && !positive; ++n, p = p * m) positive = (p.array() > 0).all();
  CHECK(positive);

  const auto fib = induced_substitution(SubstitutionSystem::preset("fibonacci"));
  std::set<std::string> fnames(fib.alphabet().begin(), fib.alphabet().end());
  CHECK(fnames == std::set<std::string>{"aa", "ab", "ba"});

  // oracle: two-letter factors of a long iterate
  const std::string w = oracle::rewrite("a", kFib, 14);
  std::set<std::string> seen;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) seen.insert(w.substr(i, 2));
  CHECK(seen == fnames);
}
