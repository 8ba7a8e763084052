#include <algorithm>
#include <cmath>

#include "aperiodic/diffraction.hpp"
#include "aperiodic/error.hpp"
#include "aperiodic/parallel.hpp"

namespace aperiodic {

ExponentialSum::ExponentialSum(const PointSample& sample, const AveragingRegion& region) {
  const std::vector<cplx> ones(sample.size(), cplx(1.0, 0.0));
  dim_ = sample.dim();
  init(sample.points(), ones, sample.radius(), region);
}

ExponentialSum::ExponentialSum(const WeightedComb& comb, const AveragingRegion& region) {
  std::vector<Point> pts;
  std::vector<cplx> w;
  pts.reserve(comb.size());
  w.reserve(comb.size());
  for (const auto& a : comb.atoms()) {
    pts.push_back(a.x);
    w.push_back(a.w);
  }
  dim_ = comb.dim();
  init(pts, w, comb.radius(), region);
}

void ExponentialSum::init(std::span<const Point> pts, std::span<const cplx> w, double sample_radius,
                          const AveragingRegion& region) {
  const bool ball = region.shape == AveragingRegion::Shape::kBall;
  const double root_d = std::sqrt(static_cast<double>(dim_));
  radius_ = region.radius > 0.0 ? region.radius : (ball ? sample_radius : sample_radius / root_d);
  if (!(radius_ > 0.0)) fail(ErrorKind::kInvalidArgument, "exponential sum needs a positive radius");
  const double reach = ball ? radius_ : radius_ * root_d;
  if (reach > sample_radius * (1.0 + 1e-12)) {
    fail(ErrorKind::kInvalidArgument, "averaging region exceeds the sample ball");
  }
  volume_ = region.volume(dim_, radius_);
  double total = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!region.contains(pts[i], radius_)) continue;
    coords_.insert(coords_.end(), pts[i].coords().begin(), pts[i].coords().end());
    weights_.push_back(w[i]);
    total += std::abs(w[i]);
  }
  weight_bound_ = total / volume_;
}

cplx ExponentialSum::operator()(const Point& k) const {
  require_same_dim(k, dim_, "exponential sum wave vector");
  const std::size_t n = weights_.size();
  if (n == 0) return {0.0, 0.0};
  const std::size_t blocks = (n + kBlockSize - 1) / kBlockSize;
  auto parts = parallel_map<CompensatedSum>(blocks, [&](std::size_t b) {
    CompensatedSum acc;
    const std::size_t end = std::min(n, (b + 1) * kBlockSize);
    for (std::size_t i = b * kBlockSize; i < end; ++i) {
      const double* x = coords_.data() + i * dim_;
      double t = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) t += k[j] * x[j];
      acc.add(weights_[i] * unit_phase(t));
    }
    return acc;
  });
  const CompensatedSum total = tree_reduce(std::move(parts), CompensatedSum{}, [](CompensatedSum a, const CompensatedSum& b) {
    a.add(b);
    return a;
  });
  return total.value() / volume_;
}

std::vector<cplx> ExponentialSum::along(const Point& k0, const Point& step, std::size_t count) const {
  require_same_dim(k0, dim_, "exponential sum wave vector");
  require_same_dim(step, dim_, "exponential sum step");
  constexpr std::size_t kSegment = 64;
  std::vector<cplx> out(count, cplx(0.0, 0.0));
  std::vector<CompensatedSum> acc(kSegment);
  for (std::size_t s = 0; s < count; s += kSegment) {
    const std::size_t len = std::min(kSegment, count - s);
    std::fill(acc.begin(), acc.end(), CompensatedSum{});
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      const double* x = coords_.data() + i * dim_;
      double t0 = 0.0, ts = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) {
        t0 += (k0[j] + static_cast<double>(s) * step[j]) * x[j];
        ts += step[j] * x[j];
      }
      cplx p = weights_[i] * unit_phase(t0);
      const cplx r = unit_phase(ts);
      for (std::size_t j = 0; j < len; ++j) {
        acc[j].add(p);
        p *= r;
      }
    }
    for (std::size_t j = 0; j < len; ++j) out[s + j] = acc[j].value() / volume_;
  }
  return out;
}

Amplitude amplitude(const PointSample& sample, const Point& k, const AveragingRegion& region) {
  const ExponentialSum sum(sample, region);
  const cplx v = sum(k);
  return {k, sum.radius(), v, std::norm(v)};
}

Amplitude amplitude(const WeightedComb& comb, const Point& k, const AveragingRegion& region) {
  const ExponentialSum sum(comb, region);
  const cplx v = sum(k);
  return {k, sum.radius(), v, std::norm(v)};
}

}  // namespace aperiodic
