#pragma once

#include <vector>

#include "aperiodic/diffraction.hpp"
#include "aperiodic/numeric.hpp"
#include "aperiodic/point.hpp"

namespace aperiodic {

struct QPTerm {
  Point k;
  cplx a;
};

/// u(x) = sum_k a_k exp(2 pi i k.x) over a finite set of distinct frequencies
/// with nonzero coefficients.
class QuasiperiodicFunction {
 public:
  QuasiperiodicFunction(std::size_t dim, std::vector<QPTerm> terms);

  std::size_t dim() const { return dim_; }
  const std::vector<QPTerm>& terms() const { return terms_; }
  double norm_l1() const;
  /// Smallest distance between distinct frequencies (infinite for one term).
  double min_gap() const;

 private:
  std::size_t dim_;
  std::vector<QPTerm> terms_;
};

cplx evaluate(const QuasiperiodicFunction& u, const Point& x);

/// x -> u(x - t): a_k is multiplied by exp(-2 pi i k.t).
QuasiperiodicFunction translate(const QuasiperiodicFunction& u, const Point& t);

struct FourierBohrEstimate {
  cplx value;             // (1 / vol B_R) int_{B_R} u(x) exp(-2 pi i k.x) dx
  cplx coefficient;       // a_k, or 0 when k is not a frequency
  double leakage_bound = 0.0;  // bound on |value - coefficient|
};

/// Termwise analytic ball average.
FourierBohrEstimate fourier_bohr(const QuasiperiodicFunction& u, const Point& k, double radius);

/// Density of gamma_u relative to Lebesgue measure: coefficients |a_k|^2.
QuasiperiodicFunction qp_autocorrelation(const QuasiperiodicFunction& u);

struct QPSpectrum {
  std::size_t dim = 1;
  std::vector<BraggPeak> atoms;  // (k, |a_k|^2), sorted by |k|
  double total_mass = 0.0;
};

QPSpectrum qp_diffraction(const QuasiperiodicFunction& u);

struct ParsevalReport {
  double mass = 0.0;          // sum |a_k|^2
  double mean = 0.0;          // ball average of |u|^2
  double deviation = 0.0;     // |mass - mean|
  double leakage_bound = 0.0; // analytic bound on the deviation
};

ParsevalReport parseval_check(const QuasiperiodicFunction& u, double radius);

struct FinitenessReport {
  std::vector<double> kmax;
  std::vector<double> qp_mass;       // sum of |a_k|^2 over |k| <= kmax
  std::vector<double> delone_mass;   // sum of Bragg intensities over |k| <= kmax
  double qp_total = 0.0;
  /// delone_mass[i + 1] / delone_mass[i].
  std::vector<double> growth;
  bool qp_constant = false;          // constant once kmax exceeds every frequency
  bool delone_increasing = false;    // strictly increasing across the ladder
};

FinitenessReport finiteness_contrast(const QuasiperiodicFunction& u, const BraggList& peaks,
                                     const std::vector<double>& kmax_ladder = {2.0, 4.0, 8.0});

}  // namespace aperiodic
