#include "aperiodic/factors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "aperiodic/error.hpp"
#include "aperiodic/parallel.hpp"
#include "aperiodic/spatial_index.hpp"

namespace aperiodic {

ClusterPattern ClusterPattern::interval(double lo, double hi, std::vector<Point> points) {
  ClusterPattern p;
  p.shape = Shape::kInterval;
  p.lo = lo;
  p.hi = hi;
  p.dim = 1;
  p.points = std::move(points);
  p.validate();
  return p;
}

ClusterPattern ClusterPattern::ball(std::size_t dim, double radius, std::vector<Point> points) {
  ClusterPattern p;
  p.shape = Shape::kBall;
  p.radius = radius;
  p.dim = dim;
  p.points = std::move(points);
  p.validate();
  return p;
}

ClusterPattern ClusterPattern::box(std::size_t dim, double half_width, std::vector<Point> points) {
  ClusterPattern p;
  p.shape = Shape::kBox;
  p.radius = half_width;
  p.dim = dim;
  p.points = std::move(points);
  p.validate();
  return p;
}

bool ClusterPattern::in_window(const Point& x, double tol) const {
  switch (shape) {
    case Shape::kInterval:
      return x[0] >= lo - tol && x[0] <= hi + tol;
    case Shape::kBall:
      return x.norm() <= radius + tol;
    case Shape::kBox:
      for (std::size_t i = 0; i < dim; ++i) {
        if (std::abs(x[i]) > radius + tol) return false;
      }
      return true;
  }
  return false;
}

double ClusterPattern::extent() const {
  switch (shape) {
    case Shape::kInterval:
      return std::max(std::abs(lo), std::abs(hi));
    case Shape::kBall:
      return radius;
    case Shape::kBox:
      return radius * std::sqrt(static_cast<double>(dim));
  }
  return 0.0;
}

void ClusterPattern::validate() const {
  if (dim < 1 || dim > kMaxDim) fail(ErrorKind::kInvalidArgument, "cluster dimension must be in 1..4");
  if (shape == Shape::kInterval) {
    if (dim != 1) fail(ErrorKind::kDimensionMismatch, "interval clusters are 1-d");
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
      fail(ErrorKind::kInvalidArgument, "cluster interval must satisfy lo <= hi");
    }
  } else if (!(radius >= 0.0) || !std::isfinite(radius)) {
    fail(ErrorKind::kInvalidArgument, "cluster window radius must be finite and nonnegative");
  }
  if (points.empty()) fail(ErrorKind::kInvalidArgument, "the empty set is not a cluster");
  for (const Point& p : points) {
    require_same_dim(p, dim, "cluster point");
    if (!in_window(p, 1e-12 * (1.0 + extent()))) {
      fail(ErrorKind::kOutOfWindow, "cluster point " + p.str() + " lies outside K");
    }
  }
}

namespace {

// Sorted relative positions (Lambda - t) cap K for every interior point.
struct Neighbourhoods {
  std::vector<std::size_t> interior;                 // sample indices
  std::vector<std::vector<Point>> clusters;          // per interior point
  double shrunk = 0.0;
};

Neighbourhoods neighbourhoods(const PointSample& sample, const ClusterPattern& pattern) {
  require_same_dim(Point(sample.dim()), pattern.dim, "locator_set");
  Neighbourhoods out;
  out.shrunk = sample.radius() - pattern.extent();
  if (out.shrunk < 0.0 || sample.empty()) {
    out.shrunk = std::max(out.shrunk, 0.0);
    return out;
  }
  const double tol = sample.tolerance();
  const double reach = pattern.extent() + tol;
  const std::vector<double> flat = sample.flat();
  const SpatialIndex index(flat, sample.dim(), std::max(reach, sample.scale()));
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (sample[i].norm() <= out.shrunk) out.interior.push_back(i);
  }
  out.clusters.resize(out.interior.size());
  const std::size_t blocks = (out.interior.size() + kBlockSize - 1) / kBlockSize;
  parallel_for(blocks, [&](std::size_t b) {
    const std::size_t end = std::min(out.interior.size(), (b + 1) * kBlockSize);
    for (std::size_t j = b * kBlockSize; j < end; ++j) {
      const Point& t = sample[out.interior[j]];
      std::vector<Point>& rel = out.clusters[j];
      index.for_each_within(t.coords(), reach, [&](std::size_t idx, double) {
        const Point d = sample[idx] - t;
        if (pattern.in_window(d, tol)) rel.push_back(d);
      });
      std::sort(rel.begin(), rel.end(), lex_less);
    }
  });
  return out;
}

bool same_cluster(const std::vector<Point>& a, const std::vector<Point>& sorted_b, double tol) {
  if (a.size() != sorted_b.size()) return false;
  std::vector<char> used(sorted_b.size(), 0);
  for (const Point& p : a) {
    bool hit = false;
    for (std::size_t j = 0; j < sorted_b.size(); ++j) {
      if (!used[j] && near(p, sorted_b[j], tol)) {
        used[j] = 1;
        hit = true;
        break;
      }
    }
    if (!hit) return false;
  }
  return true;
}

PointSample locate(const PointSample& sample, const ClusterPattern& pattern, const std::string& tag) {
  pattern.validate();
  const Neighbourhoods nb = neighbourhoods(sample, pattern);
  const double tol = std::max(sample.tolerance(), 1e-12 * (1.0 + pattern.extent()));
  std::vector<Point> pts;
  for (std::size_t j = 0; j < nb.interior.size(); ++j) {
    if (same_cluster(pattern.points, nb.clusters[j], tol)) pts.push_back(sample[nb.interior[j]]);
  }
  return PointSample(sample.dim(), nb.shrunk, std::move(pts), tag + " of " + sample.provenance());
}

}  // namespace

PointSample locator_set(const PointSample& sample, const ClusterPattern& pattern) {
  return locate(sample, pattern, "locator set (closed K)");
}

PointSample derived_factor_sample(const PointSample& sample, const ClusterPattern& pattern) {
  return locate(sample, pattern, "derived factor Y_{K,P} (closed K)");
}

std::vector<ClusterPattern> occurring_patterns(const PointSample& sample, const ClusterPattern& window) {
  const Neighbourhoods nb = neighbourhoods(sample, window);
  const double tol = std::max(sample.tolerance(), 1e-12 * (1.0 + window.extent()));
  std::vector<ClusterPattern> out;
  for (const auto& cluster : nb.clusters) {
    if (cluster.empty()) continue;
    const bool seen = std::any_of(out.begin(), out.end(), [&](const ClusterPattern& p) {
      return same_cluster(p.points, cluster, tol);
    });
    if (seen) continue;
    ClusterPattern p = window;
    p.points = cluster;
    out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Block maps

BlockMap BlockMap::from_strings(std::size_t w, const std::map<std::string, std::string>& rule) {
  if (w < 1) fail(ErrorKind::kInvalidArgument, "block map window must be positive");
  BlockMap m;
  m.w = w;
  for (const auto& [key, value] : rule) {
    if (key.size() != w) fail(ErrorKind::kInvalidArgument, "block map key '" + key + "' has wrong length");
    if (value.empty()) fail(ErrorKind::kInvalidArgument, "block map value is empty");
    std::vector<std::string> word;
    for (char c : key) word.emplace_back(1, c);
    m.rule[word] = value;
  }
  return m;
}

BlockMap BlockMap::thue_morse_difference() {
  return from_strings(2, {{"ab", "a"}, {"ba", "a"}, {"aa", "b"}, {"bb", "b"}});
}

BlockMap BlockMap::identity(const std::vector<std::string>& alphabet) {
  BlockMap m;
  m.w = 1;
  for (const auto& l : alphabet) m.rule[{l}] = l;
  return m;
}

BlockMap BlockMap::constant(const std::vector<std::string>& alphabet, std::size_t w, const std::string& letter) {
  if (w < 1) fail(ErrorKind::kInvalidArgument, "block map window must be positive");
  BlockMap m;
  m.w = w;
  std::vector<std::size_t> idx(w, 0);
  while (true) {
    std::vector<std::string> word;
    for (std::size_t i : idx) word.push_back(alphabet[i]);
    m.rule[word] = letter;
    std::size_t i = 0;
    for (; i < w; ++i) {
      if (++idx[i] < alphabet.size()) break;
      idx[i] = 0;
    }
    if (i == w) break;
  }
  return m;
}

std::vector<std::string> BlockMap::output_alphabet() const {
  std::set<std::string> s;
  for (const auto& [k, v] : rule) s.insert(v);
  return {s.begin(), s.end()};
}

std::vector<std::string> sliding_block(const std::vector<std::string>& word, const BlockMap& map) {
  if (map.w < 1) fail(ErrorKind::kInvalidArgument, "block map window must be positive");
  std::vector<std::string> out;
  if (word.size() < map.w) return out;
  out.reserve(word.size() - map.w + 1);
  std::vector<std::string> window;
  for (std::size_t i = 0; i + map.w <= word.size(); ++i) {
    window.assign(word.begin() + static_cast<std::ptrdiff_t>(i),
                  word.begin() + static_cast<std::ptrdiff_t>(i + map.w));
    auto it = map.rule.find(window);
    if (it == map.rule.end()) {
      std::string s;
      for (const auto& l : window) s += l;
      fail(ErrorKind::kIllegalWord, "block map has no rule for word '" + s + "'");
    }
    out.push_back(it->second);
  }
  return out;
}

std::vector<std::string> chain_letters(const ChainSample& chain) {
  std::vector<std::string> out;
  out.reserve(chain.letters.size());
  for (int l : chain.letters) out.push_back(chain.alphabet[static_cast<std::size_t>(l)]);
  return out;
}

ChainSample sliding_block(const ChainSample& chain, const BlockMap& map) {
  if (chain.sample.dim() != 1) fail(ErrorKind::kDimensionMismatch, "sliding_block needs a 1-d chain");
  const auto mapped = sliding_block(chain_letters(chain), map);
  const std::vector<std::string> alphabet = map.output_alphabet();

  double max_len = 0.0;
  for (double l : chain.lengths) max_len = std::max(max_len, l);
  const double radius = std::max(0.0, chain.sample.radius() - static_cast<double>(map.w - 1) * max_len);

  std::vector<Point> pts;
  std::vector<int> letters;
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    if (std::abs(chain.sample[i][0]) > radius) continue;
    pts.push_back(chain.sample[i]);
    letters.push_back(static_cast<int>(std::find(alphabet.begin(), alphabet.end(), mapped[i]) - alphabet.begin()));
  }
  const bool constant = !chain.lengths.empty() &&
                        std::all_of(chain.lengths.begin(), chain.lengths.end(),
                                    [&](double l) { return l == chain.lengths.front(); });
  std::vector<double> lengths(alphabet.size(), constant ? chain.lengths.front() : 0.0);
  return {PointSample(1, radius, std::move(pts), "sliding-block image of " + chain.sample.provenance()),
          std::move(letters), alphabet, std::move(lengths)};
}

FactorGainReport factor_diffraction_gain(const PointSample& source, const PointSample& factor,
                                         std::span<const Point> candidates, double threshold,
                                         const AveragingRegion& region) {
  ScanOptions opt;
  opt.threshold = threshold;
  opt.region = region;
  if (region.radius == 0.0 && region.shape == AveragingRegion::Shape::kBall) {
    // both scans average over the same ball
    opt.region.radius = std::min(source.radius(), factor.radius());
  }
  FactorGainReport rep;
  rep.source = bragg_scan(source, candidates, opt);
  rep.factor = bragg_scan(factor, candidates, opt);
  for (const BraggPeak& p : rep.factor.peaks) {
    if (!rep.source.find(p.k, 1e-12 * (1.0 + p.k.norm()))) rep.gain.push_back(p);
  }
  return rep;
}

}  // namespace aperiodic
