#include "aperiodic/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aperiodic/detail/lattice_enum.hpp"
#include "aperiodic/error.hpp"
#include "aperiodic/numeric.hpp"

namespace aperiodic {
namespace {

std::string matrix_str(const Eigen::MatrixXd& m) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    s += i ? ",[" : "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%s%.10g", j ? "," : "", m(i, j));
      s += buf;
    }
    s += "]";
  }
  return s + "]";
}

void sort_points(std::vector<Point>& pts) { std::sort(pts.begin(), pts.end(), lex_less); }

}  // namespace

double LatticeSpec::density() const { return 1.0 / std::abs(basis.determinant()); }

LatticeSpec LatticeSpec::dual() const {
  validate();
  return {basis.inverse().transpose()};
}

void LatticeSpec::validate() const {
  if (basis.rows() != basis.cols() || basis.rows() < 1 ||
      basis.rows() > static_cast<Eigen::Index>(kMaxDim)) {
    fail(ErrorKind::kDimensionMismatch, "lattice basis must be a square d x d matrix, 1 <= d <= 4");
  }
  if (!basis.allFinite()) fail(ErrorKind::kInvalidArgument, "lattice basis has non-finite entries");
  const double det = basis.determinant();
  const double scale = basis.cwiseAbs().maxCoeff();
  if (!(std::abs(det) > 1e-12 * std::pow(scale, static_cast<double>(basis.rows())))) {
    fail(ErrorKind::kSingularBasis, "lattice basis is singular");
  }
}

void CrystallographicSpec::validate() const {
  lattice.validate();
  if (motif.empty()) fail(ErrorKind::kInvalidArgument, "crystallographic motif is empty");
  const Eigen::MatrixXd inv = lattice.basis.inverse();
  const std::size_t d = lattice.dim();
  for (const Point& s : motif) require_same_dim(s, d, "motif point");
  for (std::size_t i = 0; i < motif.size(); ++i) {
    for (std::size_t j = i + 1; j < motif.size(); ++j) {
      Eigen::VectorXd diff(d);
      for (std::size_t k = 0; k < d; ++k) diff[k] = motif[i][k] - motif[j][k];
      const Eigen::VectorXd c = inv * diff;
      bool integral = true;
      for (Eigen::Index k = 0; k < c.size(); ++k) {
        if (std::abs(c[k] - std::nearbyint(c[k])) > 1e-9) integral = false;
      }
      if (integral) {
        fail(ErrorKind::kMotifCollision,
             "motif points " + motif[i].str() + " and " + motif[j].str() + " coincide mod the lattice");
      }
    }
  }
}

namespace {

std::vector<Point> lattice_points_around(const LatticeSpec& spec, const Point& offset, double radius,
                                         std::size_t cap) {
  const auto d = static_cast<Eigen::Index>(spec.dim());
  Eigen::VectorXd lo(d), hi(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    lo[i] = -radius - offset[static_cast<std::size_t>(i)];
    hi[i] = radius - offset[static_cast<std::size_t>(i)];
  }
  const double r2 = radius * radius;
  return detail::enumerate_lattice<Point>(
      spec.basis, lo, hi,
      [&](const detail::IntCoords&, const Eigen::VectorXd& y) -> std::optional<Point> {
        Point p(static_cast<std::size_t>(d));
        for (Eigen::Index i = 0; i < d; ++i) p[static_cast<std::size_t>(i)] = y[i] + offset[static_cast<std::size_t>(i)];
        if (p.norm2() <= r2) return p;
        return std::nullopt;
      },
      cap);
}

void check_estimated_count(double expected, std::size_t cap) {
  if (expected > 2.0 * static_cast<double>(cap)) {
    fail(ErrorKind::kCapExceeded, "expected point count " + std::to_string(expected) + " exceeds cap");
  }
}

}  // namespace

PointSample lattice_sample(const LatticeSpec& spec, double radius, std::size_t cap) {
  spec.validate();
  if (!(radius > 0.0)) fail(ErrorKind::kInvalidArgument, "lattice_sample: radius must be positive");
  check_estimated_count(spec.density() * ball_volume(spec.dim(), radius), cap);
  auto pts = lattice_points_around(spec, Point(spec.dim()), radius, cap);
  sort_points(pts);
  return PointSample(spec.dim(), radius, std::move(pts), "lattice basis=" + matrix_str(spec.basis));
}

PointSample crystallographic_sample(const CrystallographicSpec& spec, double radius, std::size_t cap) {
  spec.validate();
  if (!(radius > 0.0)) fail(ErrorKind::kInvalidArgument, "crystallographic_sample: radius must be positive");
  check_estimated_count(static_cast<double>(spec.motif.size()) * spec.lattice.density() *
                            ball_volume(spec.lattice.dim(), radius),
                        cap);
  std::vector<Point> pts;
  std::string motif = "[";
  for (const Point& s : spec.motif) {
    auto part = lattice_points_around(spec.lattice, s, radius, cap);
    pts.insert(pts.end(), part.begin(), part.end());
    motif += s.str();
  }
  sort_points(pts);
  return PointSample(spec.lattice.dim(), radius, std::move(pts),
                     "crystallographic motif=" + motif + "] basis=" + matrix_str(spec.lattice.basis));
}

// ---------------------------------------------------------------------------
// Substitutions

namespace {

bool primitive(const Eigen::MatrixXi& m) {
  const Eigen::Index n = m.rows();
  Eigen::MatrixXi base = (m.array() > 0).cast<int>();
  Eigen::MatrixXi power = base;
  // Wielandt: a primitive n x n matrix has a strictly positive power <= (n-1)^2 + 1
  const Eigen::Index bound = (n - 1) * (n - 1) + 1;
  for (Eigen::Index k = 1; k <= bound; ++k) {
    if ((power.array() > 0).all()) return true;
    power = ((power * base).array() > 0).cast<int>();
  }
  return false;
}

// Perron-Frobenius eigenpair by power iteration on M + I (aperiodic, same
// eigenvectors). left selects v M = lambda v.
std::pair<double, Eigen::VectorXd> perron(const Eigen::MatrixXi& m, bool left) {
  const Eigen::MatrixXd a = m.cast<double>();
  const Eigen::MatrixXd shifted =
      (left ? Eigen::MatrixXd(a.transpose()) : a) + Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::VectorXd v = Eigen::VectorXd::Ones(a.rows());
  for (int it = 0; it < 200000; ++it) {
    Eigen::VectorXd next = shifted * v;
    next /= next.sum();
    const double change = (next - v).cwiseAbs().maxCoeff();
    v = next;
    if (change < 1e-17) break;
  }
  const Eigen::MatrixXd op = left ? Eigen::MatrixXd(a.transpose()) : a;
  const double lambda = (op * v).sum() / v.sum();
  return {lambda, v};
}

}  // namespace

SubstitutionSystem::SubstitutionSystem(std::vector<std::string> alphabet, std::vector<Word> rules,
                                       std::vector<double> lengths, std::pair<int, int> seed,
                                       std::string name)
    : alphabet_(std::move(alphabet)),
      rules_(std::move(rules)),
      lengths_(std::move(lengths)),
      seed_(seed),
      name_(std::move(name)) {
  const int n = static_cast<int>(alphabet_.size());
  if (n == 0) fail(ErrorKind::kInvalidArgument, "substitution alphabet is empty");
  if (rules_.size() != alphabet_.size()) {
    fail(ErrorKind::kInvalidArgument, "substitution needs exactly one rule per letter");
  }
  for (const Word& w : rules_) {
    if (w.empty()) fail(ErrorKind::kInvalidArgument, "substitution rule maps a letter to the empty word");
    for (int l : w) {
      if (l < 0 || l >= n) fail(ErrorKind::kUnknownLetter, "substitution rule uses an unknown letter");
    }
  }
  const Eigen::MatrixXi m = matrix();
  if (!primitive(m)) fail(ErrorKind::kNonPrimitive, "substitution matrix is not primitive");

  auto [lambda, left] = perron(m, true);
  lambda_ = lambda;
  if (lengths_.empty()) {
    const double mn = left.minCoeff();
    lengths_.resize(alphabet_.size());
    for (int i = 0; i < n; ++i) lengths_[static_cast<std::size_t>(i)] = left[i] / mn;
    if (constant_length()) std::fill(lengths_.begin(), lengths_.end(), 1.0);
  } else {
    if (lengths_.size() != alphabet_.size()) {
      fail(ErrorKind::kInvalidArgument, "one tile length per letter required");
    }
    Eigen::VectorXd l(n);
    for (int i = 0; i < n; ++i) {
      l[i] = lengths_[static_cast<std::size_t>(i)];
      if (!(l[i] > 0.0)) fail(ErrorKind::kInvalidArgument, "tile lengths must be positive");
    }
    const Eigen::VectorXd image = m.cast<double>().transpose() * l;
    if ((image - lambda_ * l).cwiseAbs().maxCoeff() > 1e-9 * lambda_ * l.maxCoeff()) {
      fail(ErrorKind::kInvalidArgument, "tile lengths are not a left Perron-Frobenius eigenvector");
    }
  }

  if (seed_.first < 0 || seed_.first >= n || seed_.second < 0 || seed_.second >= n) {
    fail(ErrorKind::kIllegalSeed, "seed uses an unknown letter");
  }
  if (!legal_two_words().count(seed_)) {
    fail(ErrorKind::kIllegalSeed, "seed " + alphabet_[static_cast<std::size_t>(seed_.first)] + "|" +
                                      alphabet_[static_cast<std::size_t>(seed_.second)] +
                                      " is not a legal two-letter word");
  }
}

SubstitutionSystem SubstitutionSystem::preset(std::string_view name) {
  if (name == "fibonacci") {
    return from_strings({"a", "b"}, {{"a", "ab"}, {"b", "a"}}, std::nullopt, "a|a", "fibonacci");
  }
  if (name == "thue-morse") {
    return from_strings({"a", "b"}, {{"a", "ab"}, {"b", "ba"}}, std::nullopt, "b|a", "thue-morse");
  }
  if (name == "period-doubling") {
    return from_strings({"a", "b"}, {{"a", "ab"}, {"b", "aa"}}, std::nullopt, "a|a", "period-doubling");
  }
  fail(ErrorKind::kConfig, "unknown substitution preset '" + std::string(name) + "'");
}

SubstitutionSystem SubstitutionSystem::from_strings(
    const std::vector<std::string>& alphabet, const std::map<std::string, std::string>& rules,
    std::optional<std::map<std::string, double>> lengths, std::string_view seed, std::string name) {
  auto index = [&](std::string_view l) -> int {
    auto it = std::find(alphabet.begin(), alphabet.end(), l);
    if (it == alphabet.end()) fail(ErrorKind::kUnknownLetter, "unknown letter '" + std::string(l) + "'");
    return static_cast<int>(it - alphabet.begin());
  };
  std::vector<Word> words(alphabet.size());
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    auto it = rules.find(alphabet[i]);
    if (it == rules.end()) fail(ErrorKind::kInvalidArgument, "no rule for letter '" + alphabet[i] + "'");
    for (char c : it->second) words[i].push_back(index(std::string_view(&c, 1)));
  }
  for (const auto& [k, v] : rules) index(k);
  std::vector<double> lens;
  if (lengths) {
    lens.resize(alphabet.size());
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
      auto it = lengths->find(alphabet[i]);
      if (it == lengths->end()) fail(ErrorKind::kInvalidArgument, "no length for letter '" + alphabet[i] + "'");
      lens[i] = it->second;
    }
  }
  const auto bar = seed.find('|');
  if (bar == std::string_view::npos) fail(ErrorKind::kIllegalSeed, "seed must have the form u|v");
  const int u = index(seed.substr(0, bar));
  const int v = index(seed.substr(bar + 1));
  return SubstitutionSystem(alphabet, std::move(words), std::move(lens), {u, v}, std::move(name));
}

int SubstitutionSystem::index_of(std::string_view letter) const {
  auto it = std::find(alphabet_.begin(), alphabet_.end(), letter);
  if (it == alphabet_.end()) fail(ErrorKind::kUnknownLetter, "unknown letter '" + std::string(letter) + "'");
  return static_cast<int>(it - alphabet_.begin());
}

Eigen::MatrixXi SubstitutionSystem::matrix() const {
  const auto n = static_cast<Eigen::Index>(alphabet_.size());
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (int l : rules_[static_cast<std::size_t>(j)]) ++m(l, j);
  }
  return m;
}

bool SubstitutionSystem::constant_length() const {
  return std::all_of(rules_.begin(), rules_.end(),
                     [&](const Word& w) { return w.size() == rules_.front().size(); });
}

std::vector<double> SubstitutionSystem::frequencies() const {
  auto [lambda, right] = perron(matrix(), false);
  std::vector<double> f(right.data(), right.data() + right.size());
  const double s = std::accumulate(f.begin(), f.end(), 0.0);
  for (double& x : f) x /= s;
  return f;
}

SubstitutionSystem::Word SubstitutionSystem::apply(const Word& w) const {
  Word out;
  for (int l : w) {
    const Word& r = rules_[static_cast<std::size_t>(l)];
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

SubstitutionSystem::Word SubstitutionSystem::iterate(int letter, int n) const {
  Word w{letter};
  for (int i = 0; i < n; ++i) w = apply(w);
  return w;
}

std::set<std::pair<int, int>> SubstitutionSystem::legal_two_words() const {
  std::set<std::pair<int, int>> out;
  const int n = static_cast<int>(alphabet_.size());
  for (int l = 0; l < n; ++l) {
    Word w{l};
    std::size_t stable = 0;
    for (int k = 0; k < 4 * n * n + 8 && w.size() < 2'000'000; ++k) {
      w = apply(w);
      const std::size_t before = out.size();
      for (std::size_t i = 0; i + 1 < w.size(); ++i) out.emplace(w[i], w[i + 1]);
      stable = out.size() == before ? stable + 1 : 0;
      if (stable >= 3 && w.size() > 64) break;
    }
  }
  return out;
}

std::string SubstitutionSystem::spell(const Word& w) const {
  std::string s;
  for (int l : w) s += alphabet_[static_cast<std::size_t>(l)];
  return s;
}

// ---------------------------------------------------------------------------
// Chains

namespace {

// |sigma^n(letter)| for every letter, in doubles to detect overflow early.
std::vector<double> word_lengths(const SubstitutionSystem& sys, int n) {
  const Eigen::MatrixXd m = sys.matrix().cast<double>();
  Eigen::RowVectorXd len = Eigen::RowVectorXd::Ones(m.rows());
  for (int i = 0; i < n; ++i) len = len * m;
  return {len.data(), len.data() + len.size()};
}

double geometric_length(const SubstitutionSystem& sys, int letter, int n) {
  const Eigen::MatrixXd m = sys.matrix().cast<double>();
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(m.rows());
  counts[letter] = 1.0;
  for (int i = 0; i < n; ++i) counts = m * counts;
  double s = 0.0;
  for (Eigen::Index i = 0; i < counts.size(); ++i) s += counts[i] * sys.lengths()[static_cast<std::size_t>(i)];
  return s;
}

}  // namespace

ChainSample substitution_chain(const SubstitutionSystem& sys, int n_iters, std::size_t cap) {
  if (n_iters < 1) fail(ErrorKind::kInvalidArgument, "substitution_chain: n_iters must be positive");
  const auto [u, v] = sys.seed();
  const auto lens = word_lengths(sys, n_iters);
  const double total = lens[static_cast<std::size_t>(u)] + lens[static_cast<std::size_t>(v)];
  if (total > static_cast<double>(cap)) {
    fail(ErrorKind::kCapExceeded, "chain of " + std::to_string(total) + " letters exceeds cap");
  }
  const auto left = sys.iterate(u, n_iters);
  const auto right = sys.iterate(v, n_iters);
  const std::size_t k = sys.size();
  const std::vector<double>& len = sys.lengths();

  // positions as integer letter counts times tile lengths
  auto position = [&](const std::vector<std::int64_t>& counts) {
    double x = 0.0;
    for (std::size_t l = 0; l < k; ++l) x += static_cast<double>(counts[l]) * len[l];
    return x;
  };
  std::vector<double> xs;
  std::vector<int> letters;
  xs.reserve(left.size() + right.size());
  letters.reserve(left.size() + right.size());

  std::vector<std::int64_t> counts(k, 0);
  std::vector<double> left_pos(left.size());
  for (std::size_t i = left.size(); i-- > 0;) {
    ++counts[static_cast<std::size_t>(left[i])];
    left_pos[i] = -position(counts);
  }
  const double left_extent = -left_pos.front();
  std::fill(counts.begin(), counts.end(), 0);
  std::vector<double> right_pos(right.size());
  for (std::size_t i = 0; i < right.size(); ++i) {
    right_pos[i] = position(counts);
    ++counts[static_cast<std::size_t>(right[i])];
  }
  const double right_extent = position(counts);
  const double radius = std::min(left_extent, right_extent);

  std::vector<Point> pts;
  for (std::size_t i = 0; i < left.size(); ++i) {
    if (-left_pos[i] <= radius) {
      pts.push_back(Point{left_pos[i]});
      letters.push_back(left[i]);
    }
  }
  for (std::size_t i = 0; i < right.size(); ++i) {
    if (right_pos[i] <= radius) {
      pts.push_back(Point{right_pos[i]});
      letters.push_back(right[i]);
    }
  }
  const std::string prov = (sys.name().empty() ? std::string("substitution") : sys.name()) +
                           " chain n=" + std::to_string(n_iters) + " seed=" +
                           sys.alphabet()[static_cast<std::size_t>(u)] + "|" +
                           sys.alphabet()[static_cast<std::size_t>(v)];
  return {PointSample(1, radius, std::move(pts), prov), std::move(letters), sys.alphabet(), len};
}

ChainSample chain_covering(const SubstitutionSystem& sys, double radius, std::size_t cap) {
  if (!(radius > 0.0)) fail(ErrorKind::kInvalidArgument, "chain_covering: radius must be positive");
  const auto [u, v] = sys.seed();
  int n = 1;
  while (std::min(geometric_length(sys, u, n), geometric_length(sys, v, n)) < radius) {
    ++n;
    if (n > 200) fail(ErrorKind::kCapExceeded, "chain_covering: radius unreachable");
  }
  return restrict(substitution_chain(sys, n, cap), radius);
}

ChainSample restrict(const ChainSample& chain, double r) {
  const PointSample kept = restrict(chain.sample, r);
  std::vector<int> letters;
  letters.reserve(kept.size());
  for (std::size_t i = 0; i < chain.sample.size(); ++i) {
    if (chain.sample[i].norm2() <= r * r) letters.push_back(chain.letters[i]);
  }
  return {kept, std::move(letters), chain.alphabet, chain.lengths};
}

PointSample letter_positions(const ChainSample& chain, std::string_view letter) {
  auto it = std::find(chain.alphabet.begin(), chain.alphabet.end(), letter);
  if (it == chain.alphabet.end()) {
    fail(ErrorKind::kUnknownLetter, "unknown letter '" + std::string(letter) + "'");
  }
  const int idx = static_cast<int>(it - chain.alphabet.begin());
  std::vector<Point> pts;
  for (std::size_t i = 0; i < chain.letters.size(); ++i) {
    if (chain.letters[i] == idx) pts.push_back(chain.sample[i]);
  }
  return PointSample(1, chain.sample.radius(), std::move(pts),
                     chain.sample.provenance() + " positions of " + std::string(letter));
}

WeightedComb weighted_chain(const ChainSample& chain,
                            const std::map<std::string, std::complex<double>>& weights) {
  for (const auto& [name, w] : weights) {
    if (std::find(chain.alphabet.begin(), chain.alphabet.end(), name) == chain.alphabet.end()) {
      fail(ErrorKind::kUnknownLetter, "unknown letter '" + name + "'");
    }
  }
  std::vector<WeightedAtom> atoms;
  for (std::size_t i = 0; i < chain.letters.size(); ++i) {
    auto it = weights.find(chain.alphabet[static_cast<std::size_t>(chain.letters[i])]);
    if (it == weights.end() || it->second == std::complex<double>(0.0)) continue;
    atoms.push_back({chain.sample[i], it->second});
  }
  return WeightedComb(1, chain.sample.radius(), std::move(atoms),
                      chain.sample.provenance() + " weighted");
}

SubstitutionSystem induced_substitution(const SubstitutionSystem& sys) {
  const auto legal = sys.legal_two_words();
  std::vector<std::pair<int, int>> words(legal.begin(), legal.end());
  std::vector<std::string> names;
  for (const auto& [x, y] : words) {
    names.push_back(sys.alphabet()[static_cast<std::size_t>(x)] + sys.alphabet()[static_cast<std::size_t>(y)]);
  }
  auto index = [&](int x, int y) {
    auto it = std::find(words.begin(), words.end(), std::make_pair(x, y));
    if (it == words.end()) fail(ErrorKind::kIllegalWord, "induced rule produced an illegal two-letter word");
    return static_cast<int>(it - words.begin());
  };
  std::vector<SubstitutionSystem::Word> rules;
  for (const auto& [x, y] : words) {
    const auto& sx = sys.rules()[static_cast<std::size_t>(x)];
    const int next = sys.rules()[static_cast<std::size_t>(y)].front();
    SubstitutionSystem::Word r;
    for (std::size_t i = 0; i < sx.size(); ++i) {
      r.push_back(index(sx[i], i + 1 < sx.size() ? sx[i + 1] : next));
    }
    rules.push_back(std::move(r));
  }
  const auto [u, v] = sys.seed();
  int k = 1;
  auto right = sys.iterate(v, k);
  while (right.size() < 2) right = sys.iterate(v, ++k);
  const std::pair<int, int> seed{index(u, v), index(v, right[1])};
  return SubstitutionSystem(names, std::move(rules), {}, seed,
                            (sys.name().empty() ? std::string("substitution") : sys.name()) + "-induced");
}

}  // namespace aperiodic
