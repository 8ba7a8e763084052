#include <algorithm>
#include <cmath>
#include <cstdint>

#include "aperiodic/diffraction.hpp"
#include "aperiodic/error.hpp"
#include "aperiodic/parallel.hpp"

namespace aperiodic {

double riesz_partial(int n, double x) {
  if (n < 0) fail(ErrorKind::kInvalidArgument, "riesz_partial: N must be nonnegative");
  double prod = 1.0;
  for (int l = 0; l <= n; ++l) {
    // 1 - cos(2 pi t) = 2 sin^2(pi t), with t = 2^l x reduced exactly mod 1
    double t = std::ldexp(x, l);
    t -= std::nearbyint(t);
    const double s = std::sin(kPi * t);
    prod *= 2.0 * s * s;
  }
  return prod;
}

std::vector<double> riesz_cosine_coefficients(int n) {
  if (n < 0 || n > 24) fail(ErrorKind::kInvalidArgument, "riesz_cosine_coefficients: N out of range");
  const std::size_t top = (std::size_t{1} << (n + 1)) - 1;
  // two-sided coefficients c[m + top]; every entry is a signed power of 1/2
  std::vector<double> c(2 * top + 1, 0.0), next;
  c[top] = 1.0;
  for (int l = 0; l <= n; ++l) {
    const std::size_t f = std::size_t{1} << l;
    next.assign(c.size(), 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] == 0.0) continue;
      next[i] += c[i];
      if (i >= f) next[i - f] -= 0.5 * c[i];
      if (i + f < c.size()) next[i + f] -= 0.5 * c[i];
    }
    c.swap(next);
  }
  std::vector<double> b(top + 1);
  b[0] = c[top];
  for (std::size_t m = 1; m <= top; ++m) b[m] = 2.0 * c[top + m];
  return b;
}

namespace {

// sin(2 pi r / bins) for integer r, reduced exactly.
double sin_frac(std::int64_t r, std::int64_t bins) {
  r %= bins;
  if (r < 0) r += bins;
  return std::sin(kTwoPi * static_cast<double>(r) / static_cast<double>(bins));
}

// Masses of the cosine series sum_m a_m cos(2 pi m x) on the bins
// [j / bins, (j + 1) / bins], j = 0 .. bins - 1.
std::vector<double> bin_masses(const std::vector<double>& a, std::int64_t bins) {
  std::vector<double> out(static_cast<std::size_t>(bins));
  parallel_for(out.size(), [&](std::size_t jj) {
    const auto j = static_cast<std::int64_t>(jj);
    CompensatedSum acc;
    acc.add(cplx(a[0] / static_cast<double>(bins), 0.0));
    for (std::size_t m = 1; m < a.size(); ++m) {
      if (a[m] == 0.0) continue;
      const auto mm = static_cast<std::int64_t>(m);
      const double diff = sin_frac(mm * (j + 1), bins) - sin_frac(mm * j, bins);
      acc.add(cplx(a[m] * diff / (kTwoPi * static_cast<double>(m)), 0.0));
    }
    out[jj] = acc.value().real();
  });
  return out;
}

void normalize(std::vector<double>& v) {
  CompensatedSum s;
  for (double x : v) s.add(cplx(x, 0.0));
  const double total = s.value().real();
  if (!(total > 0.0)) fail(ErrorKind::kDegenerateInput, "distribution has no positive mass");
  for (double& x : v) x /= total;
}

}  // namespace

RieszReport riesz_distribution_check(const WeightedComb& comb, int n, std::size_t bins) {
  if (n < 0) fail(ErrorKind::kInvalidArgument, "riesz check: N must be nonnegative");
  if (bins < 1) fail(ErrorKind::kInvalidArgument, "riesz check: bins must be positive");
  if (comb.dim() != 1) fail(ErrorKind::kDimensionMismatch, "riesz check needs a 1-d comb");
  int m = 0;
  const double mant = std::frexp(comb.radius(), &m);
  if (mant != 0.5 || m - 1 < n + 4) {
    fail(ErrorKind::kInsufficientRadius,
         "riesz check needs R = 2^m with m >= N + 4 (N = " + std::to_string(n) + ")");
  }
  if (comb.empty()) fail(ErrorKind::kDegenerateInput, "riesz check on an empty comb");

  std::int64_t lo = 0, hi = 0;
  bool first = true;
  for (const auto& a : comb.atoms()) {
    const double x = a.x[0];
    if (x != std::nearbyint(x)) fail(ErrorKind::kInvalidArgument, "riesz check needs integer positions");
    if (a.w.imag() != 0.0 || std::abs(a.w.real()) != 1.0) {
      fail(ErrorKind::kInvalidArgument, "riesz check needs +-1 weights");
    }
    const auto xi = static_cast<std::int64_t>(x);
    lo = first ? xi : std::min(lo, xi);
    hi = first ? xi : std::max(hi, xi);
    first = false;
  }
  const auto len = static_cast<std::size_t>(hi - lo + 1);
  std::vector<std::int32_t> w(len, 0);
  for (const auto& a : comb.atoms()) {
    w[static_cast<std::size_t>(static_cast<std::int64_t>(a.x[0]) - lo)] = a.w.real() > 0 ? 1 : -1;
  }

  // correlation C(z) = sum_x w(x) w(x + z); the periodogram is
  // sum_z C(|z|) e^{2 pi i k z} up to the common factor 1 / vol(B_R)
  std::vector<double> corr(len, 0.0);
  const std::size_t blocks = (len + 255) / 256;
  parallel_for(blocks, [&](std::size_t b) {
    const std::size_t end = std::min(len, (b + 1) * 256);
    for (std::size_t z = b * 256; z < end; ++z) {
      std::int64_t s = 0;
      const std::int32_t* p = w.data();
      const std::int32_t* q = w.data() + z;
      const std::size_t cnt = len - z;
      for (std::size_t i = 0; i < cnt; ++i) s += p[i] * q[i];
      corr[z] = static_cast<double>(s);
    }
  });
  std::vector<double> series(len);
  series[0] = corr[0];
  for (std::size_t z = 1; z < len; ++z) series[z] = 2.0 * corr[z];

  RieszReport rep;
  rep.n = n;
  rep.bins = bins;
  rep.radius = comb.radius();
  const auto nb = static_cast<std::int64_t>(bins);
  rep.periodogram_mass = bin_masses(series, nb);
  rep.riesz_mass = bin_masses(riesz_cosine_coefficients(n), nb);
  normalize(rep.periodogram_mass);
  normalize(rep.riesz_mass);
  double fp = 0.0, fr = 0.0;
  for (std::size_t j = 0; j < bins; ++j) {
    fp += rep.periodogram_mass[j];
    fr += rep.riesz_mass[j];
    rep.sup_deviation = std::max(rep.sup_deviation, std::abs(fp - fr));
  }
  return rep;
}

}  // namespace aperiodic
