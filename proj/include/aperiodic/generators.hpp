#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aperiodic/point.hpp"
#include "aperiodic/pointset.hpp"

namespace aperiodic {

inline constexpr std::size_t kDefaultPointCap = 10'000'000;

/// Lattice Gamma = basis * Z^d; the columns of `basis` are the generators.
struct LatticeSpec {
  Eigen::MatrixXd basis;

  std::size_t dim() const { return static_cast<std::size_t>(basis.rows()); }
  /// dens(Gamma) = 1 / |det basis|.
  double density() const;
  /// Dual lattice Gamma* with basis (basis^{-1})^T.
  LatticeSpec dual() const;
  void validate() const;
};

/// Fully periodic set S + Gamma.
struct CrystallographicSpec {
  LatticeSpec lattice;
  std::vector<Point> motif;

  void validate() const;
};

PointSample lattice_sample(const LatticeSpec& spec, double radius,
                           std::size_t cap = kDefaultPointCap);
PointSample crystallographic_sample(const CrystallographicSpec& spec, double radius,
                                    std::size_t cap = kDefaultPointCap);

/// Primitive substitution with a geometric realization: letter i becomes an
/// interval of length lengths()[i]. Letters are indices into alphabet().
class SubstitutionSystem {
 public:
  using Word = std::vector<int>;

  /// `lengths` empty selects the left Perron-Frobenius eigenvector scaled to
  /// min length 1. The seed is the legal pair (left of origin, right of origin).
  SubstitutionSystem(std::vector<std::string> alphabet, std::vector<Word> rules,
                     std::vector<double> lengths, std::pair<int, int> seed,
                     std::string name = {});

  static SubstitutionSystem preset(std::string_view name);
  /// Parses rules given as strings of single-character letter names.
  static SubstitutionSystem from_strings(const std::vector<std::string>& alphabet,
                                         const std::map<std::string, std::string>& rules,
                                         std::optional<std::map<std::string, double>> lengths,
                                         std::string_view seed, std::string name = {});

  const std::string& name() const { return name_; }
  std::size_t size() const { return alphabet_.size(); }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::vector<Word>& rules() const { return rules_; }
  const std::vector<double>& lengths() const { return lengths_; }
  std::pair<int, int> seed() const { return seed_; }
  int index_of(std::string_view letter) const;

  /// M(i, j) = number of letters i in sigma(j).
  Eigen::MatrixXi matrix() const;
  bool constant_length() const;
  double inflation_factor() const { return lambda_; }
  /// Normalized right Perron-Frobenius eigenvector (letter frequencies).
  std::vector<double> frequencies() const;

  Word apply(const Word& w) const;
  Word iterate(int letter, int n) const;
  std::set<std::pair<int, int>> legal_two_words() const;
  std::string spell(const Word& w) const;

 private:
  std::vector<std::string> alphabet_;
  std::vector<Word> rules_;
  std::vector<double> lengths_;
  std::pair<int, int> seed_;
  std::string name_;
  double lambda_ = 0.0;
};

/// Geometric realization of (a window of) a two-sided fixed point.
struct ChainSample {
  PointSample sample;               // left endpoints
  std::vector<int> letters;         // letter at each endpoint
  std::vector<std::string> alphabet;
  std::vector<double> lengths;      // tile length per letter; 0 when not constant
};

/// sigma^n(u) | sigma^n(v) laid out with the origin at the seed boundary,
/// restricted to the ball reaching the shorter side.
ChainSample substitution_chain(const SubstitutionSystem& sys, int n_iters,
                               std::size_t cap = kDefaultPointCap);

/// Smallest iteration count whose chain reaches radius on both sides,
/// restricted to that radius.
ChainSample chain_covering(const SubstitutionSystem& sys, double radius,
                           std::size_t cap = kDefaultPointCap);

ChainSample restrict(const ChainSample& chain, double r);

PointSample letter_positions(const ChainSample& chain, std::string_view letter);

/// Comb with a complex weight per letter (letters missing from the map get 0
/// and are dropped).
WeightedComb weighted_chain(const ChainSample& chain,
                            const std::map<std::string, std::complex<double>>& weights);

/// Induced substitution on legal two-letter words: (xy) maps to the first
/// |sigma(x)| overlapping two-letter windows of sigma(xy).
SubstitutionSystem induced_substitution(const SubstitutionSystem& sys);

}  // namespace aperiodic
