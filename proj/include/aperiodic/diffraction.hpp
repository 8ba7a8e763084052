#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "aperiodic/autocorr.hpp"
#include "aperiodic/generators.hpp"
#include "aperiodic/numeric.hpp"
#include "aperiodic/pointset.hpp"

namespace aperiodic {

/// c_k^(R) = (1 / vol) sum_x w(x) exp(2 pi i k.x) over the points of the
/// averaging region. Holds a copy of the points so it can be evaluated at
/// many k. Sums are compensated and reduced over fixed point blocks.
class ExponentialSum {
 public:
  explicit ExponentialSum(const PointSample& sample, const AveragingRegion& region = {});
  explicit ExponentialSum(const WeightedComb& comb, const AveragingRegion& region = {});

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  /// Averaging radius (ball radius or cube half-width).
  double radius() const { return radius_; }
  double volume() const { return volume_; }
  /// sum |w| / vol, an upper bound for |c_k|.
  double weight_bound() const { return weight_bound_; }

  cplx operator()(const Point& k) const;
  /// Values at k0 + j * step, j = 0 .. count - 1, by phase recurrence with
  /// exact resynchronisation every 64 steps. Single-threaded.
  std::vector<cplx> along(const Point& k0, const Point& step, std::size_t count) const;

 private:
  void init(std::span<const Point> pts, std::span<const cplx> w, double sample_radius,
            const AveragingRegion& region);

  std::size_t dim_ = 1;
  double radius_ = 0.0;
  double volume_ = 0.0;
  double weight_bound_ = 0.0;
  std::vector<double> coords_;  // row-major
  std::vector<cplx> weights_;
};

struct Amplitude {
  Point k;
  double radius = 0.0;
  cplx value;
  double intensity = 0.0;
};

Amplitude amplitude(const PointSample& sample, const Point& k, const AveragingRegion& region = {});
Amplitude amplitude(const WeightedComb& comb, const Point& k, const AveragingRegion& region = {});

struct BraggPeak {
  Point k;
  double intensity = 0.0;
  cplx amplitude;
};

/// Peaks sorted by |k| then lexicographically.
struct BraggList {
  std::size_t dim = 1;
  double threshold = 0.0;
  double radius = 0.0;
  std::vector<BraggPeak> peaks;

  std::optional<BraggPeak> find(const Point& k, double tol) const;
  double total_intensity() const;
};

void sort_peaks(std::vector<BraggPeak>& peaks);

struct ScanOptions {
  /// Keep entries with intensity >= threshold; default 1e-4 * c_0^2.
  std::optional<double> threshold;
  AveragingRegion region;
  /// Grid scans: golden-section refinement target; default 1 / (10 R).
  std::optional<double> refine_pitch;
  /// Grid scans: a local maximum within this distance of a stronger one is
  /// treated as a sidelobe and dropped; default 2 / R.
  std::optional<double> min_separation;
};

/// Axis-aligned k-grid with the given pitch (<= 1 / (4R) recommended).
struct GridSpec {
  Point lo;
  Point hi;
  double pitch = 0.0;
};

BraggList bragg_scan(const ExponentialSum& sum, std::span<const Point> candidates,
                     const ScanOptions& options = {});
BraggList bragg_scan(const PointSample& sample, std::span<const Point> candidates,
                     const ScanOptions& options = {});
BraggList bragg_scan(const WeightedComb& comb, std::span<const Point> candidates,
                     const ScanOptions& options = {});
/// Grid mode: local maxima of |c_k|^2 refined by golden-section search.
BraggList bragg_scan_grid(const ExponentialSum& sum, const GridSpec& grid, const ScanOptions& options = {});
BraggList bragg_scan_grid(const PointSample& sample, const GridSpec& grid, const ScanOptions& options = {});

// ---------------------------------------------------------------------------
// Closed forms

struct ClosedFormSpectrum {
  enum class Kind { kLattice, kCrystallographic, kDerivativeComb, kQuasiperiodic };
  Kind kind = Kind::kLattice;
  std::size_t dim = 1;
  double kmax = 0.0;
  std::vector<BraggPeak> atoms;  // amplitude dens * conj(h(k)) where defined
};

/// dens(Gamma)^2 |h(y)|^2 delta_y on Gamma*, h(y) = sum_s exp(-2 pi i y.s).
ClosedFormSpectrum closed_form_lattice(const CrystallographicSpec& spec, double kmax);

/// dens(Gamma)^2 (4 pi^2)^|p| y^(2p) delta_y for the comb of p-th derivatives.
ClosedFormSpectrum closed_form_derivative_comb(const LatticeSpec& lattice, const std::vector<int>& p,
                                               double kmax);

// ---------------------------------------------------------------------------
// Thue-Morse Riesz product

/// prod_{l=0}^{N} (1 - cos(2^{l+1} pi x)).
double riesz_partial(int n, double x);

/// Cosine coefficients b_m of the partial product:
/// riesz_partial(n, x) = sum_m b_m cos(2 pi m x), m = 0 .. 2^{n+1} - 1.
std::vector<double> riesz_cosine_coefficients(int n);

struct RieszReport {
  int n = 0;
  std::size_t bins = 0;
  double radius = 0.0;
  std::vector<double> periodogram_mass;  // per bin, total 1
  std::vector<double> riesz_mass;        // per bin, total 1
  /// sup over bin edges of the difference of the two distribution functions.
  double sup_deviation = 0.0;
};

/// Compares the periodogram |c_k^(R)|^2 vol(B_R) of a +-1 comb on integer
/// positions with the N-th partial Riesz product, both integrated exactly
/// over equal bins of [0, 1] and normalized to mass 1. Requires R = 2^m,
/// m >= N + 4.
RieszReport riesz_distribution_check(const WeightedComb& comb, int n, std::size_t bins);

// ---------------------------------------------------------------------------
// Group generated by the Bragg spectrum

struct GroupCheckOptions {
  double kmax = 0.0;        // 0: largest |k| among the peaks
  std::size_t cap = 200000;  // limit on generated points
  /// Intensity at a generated point not in the list; classifies it as
  /// detected (>= threshold) or below threshold.
  std::function<double(const Point&)> intensity;
  /// Optional module membership test for every generated point.
  std::function<bool(const Point&)> in_module;
};

struct GroupCheckReport {
  std::vector<Point> generated;
  std::vector<Point> detected;
  std::vector<Point> below_threshold;
  std::vector<Point> unmatched;
  std::vector<Point> outside_module;
};

/// Closes the peak positions under + and - for the given number of
/// generations, within |k| <= kmax, and classifies the generated points.
GroupCheckReport bragg_group_check(const BraggList& peaks, int generations, double tolerance,
                                   const GroupCheckOptions& options = {});

// ---------------------------------------------------------------------------
// Uniformity across hull elements

struct UniformityReport {
  Point k;
  std::vector<double> radii;
  /// intensity[e][r] for element e at radius index r.
  std::vector<std::vector<double>> intensity;
  /// max - min over elements, per radius.
  std::vector<double> spread;
  double final_spread() const { return spread.empty() ? 0.0 : spread.back(); }
};

/// |c_k^(R)|^2 for each hull element (translate, reseeding, ...) at each
/// radius. At least two elements are required.
UniformityReport bombieri_taylor_uniformity(const std::vector<SampleGenerator>& elements, const Point& k,
                                            const std::vector<double>& radii,
                                            const AveragingRegion& region = {});

}  // namespace aperiodic
