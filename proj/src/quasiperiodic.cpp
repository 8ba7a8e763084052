#include "aperiodic/quasiperiodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aperiodic/error.hpp"

namespace aperiodic {

QuasiperiodicFunction::QuasiperiodicFunction(std::size_t dim, std::vector<QPTerm> terms)
    : dim_(dim), terms_(std::move(terms)) {
  if (dim_ < 1 || dim_ > kMaxDim) fail(ErrorKind::kInvalidArgument, "quasiperiodic dimension must be in 1..4");
  for (const QPTerm& t : terms_) {
    require_same_dim(t.k, dim_, "frequency");
    if (!t.k.finite() || !std::isfinite(t.a.real()) || !std::isfinite(t.a.imag())) {
      fail(ErrorKind::kInvalidArgument, "quasiperiodic terms must be finite");
    }
    if (t.a == cplx(0.0)) fail(ErrorKind::kInvalidArgument, "zero coefficient at k = " + t.k.str());
  }
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    for (std::size_t j = i + 1; j < terms_.size(); ++j) {
      const double scale = 1.0 + std::max(terms_[i].k.norm(), terms_[j].k.norm());
      if (distance(terms_[i].k, terms_[j].k) <= 1e-9 * scale) {
        fail(ErrorKind::kInvalidArgument, "repeated frequency " + terms_[i].k.str());
      }
    }
  }
}

double QuasiperiodicFunction::norm_l1() const {
  double s = 0.0;
  for (const QPTerm& t : terms_) s += std::abs(t.a);
  return s;
}

double QuasiperiodicFunction::min_gap() const {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    for (std::size_t j = i + 1; j < terms_.size(); ++j) g = std::min(g, distance(terms_[i].k, terms_[j].k));
  }
  return g;
}

cplx evaluate(const QuasiperiodicFunction& u, const Point& x) {
  require_same_dim(x, u.dim(), "evaluation point");
  CompensatedSum s;
  for (const QPTerm& t : u.terms()) s.add(t.a * unit_phase(t.k.dot(x)));
  return s.value();
}

QuasiperiodicFunction translate(const QuasiperiodicFunction& u, const Point& t) {
  require_same_dim(t, u.dim(), "translation");
  std::vector<QPTerm> terms = u.terms();
  for (QPTerm& term : terms) term.a *= unit_phase(-term.k.dot(t));
  return QuasiperiodicFunction(u.dim(), std::move(terms));
}

FourierBohrEstimate fourier_bohr(const QuasiperiodicFunction& u, const Point& k, double radius) {
  require_same_dim(k, u.dim(), "wave vector");
  if (!(radius > 0.0)) fail(ErrorKind::kInvalidArgument, "fourier_bohr: radius must be positive");
  FourierBohrEstimate est;
  CompensatedSum value;
  double bound = 0.0;
  const double tol = 1e-9 * (1.0 + k.norm());
  for (const QPTerm& t : u.terms()) {
    const double q = distance(t.k, k);
    if (q <= tol) {
      est.coefficient = t.a;
      value.add(t.a);
      continue;
    }
    value.add(t.a * ball_average_plane_wave(q, u.dim(), radius));
    bound += std::abs(t.a) * ball_average_bound(q, u.dim(), radius);
  }
  est.value = value.value();
  est.leakage_bound = bound;
  return est;
}

QuasiperiodicFunction qp_autocorrelation(const QuasiperiodicFunction& u) {
  std::vector<QPTerm> terms;
  for (const QPTerm& t : u.terms()) terms.push_back({t.k, cplx(std::norm(t.a), 0.0)});
  return QuasiperiodicFunction(u.dim(), std::move(terms));
}

QPSpectrum qp_diffraction(const QuasiperiodicFunction& u) {
  QPSpectrum s;
  s.dim = u.dim();
  CompensatedSum total;
  for (const QPTerm& t : u.terms()) {
    const double m = std::norm(t.a);
    s.atoms.push_back({t.k, m, t.a});
    total.add(cplx(m, 0.0));
  }
  sort_peaks(s.atoms);
  s.total_mass = total.value().real();
  return s;
}

ParsevalReport parseval_check(const QuasiperiodicFunction& u, double radius) {
  if (!(radius > 0.0)) fail(ErrorKind::kInvalidArgument, "parseval_check: radius must be positive");
  ParsevalReport rep;
  CompensatedSum mass, mean;
  double bound = 0.0;
  const auto& terms = u.terms();
  // |u|^2 = sum_{i,j} a_i conj(a_j) exp(2 pi i (k_i - k_j).x), averaged termwise
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double d = std::norm(terms[i].a);
    mass.add(cplx(d, 0.0));
    mean.add(cplx(d, 0.0));
    for (std::size_t j = 0; j < terms.size(); ++j) {
      if (i == j) continue;
      const double q = distance(terms[i].k, terms[j].k);
      const cplx c = terms[i].a * std::conj(terms[j].a);
      mean.add(c * ball_average_plane_wave(q, u.dim(), radius));
      bound += std::abs(c) * ball_average_bound(q, u.dim(), radius);
    }
  }
  rep.mass = mass.value().real();
  rep.mean = mean.value().real();
  rep.deviation = std::abs(rep.mass - rep.mean);
  rep.leakage_bound = bound;
  return rep;
}

FinitenessReport finiteness_contrast(const QuasiperiodicFunction& u, const BraggList& peaks,
                                     const std::vector<double>& kmax_ladder) {
  if (kmax_ladder.empty()) fail(ErrorKind::kInvalidArgument, "finiteness_contrast: empty kmax ladder");
  for (std::size_t i = 0; i + 1 < kmax_ladder.size(); ++i) {
    if (!(kmax_ladder[i] < kmax_ladder[i + 1])) {
      fail(ErrorKind::kInvalidArgument, "finiteness_contrast: kmax ladder must increase");
    }
  }
  FinitenessReport rep;
  rep.kmax = kmax_ladder;
  rep.qp_total = qp_diffraction(u).total_mass;
  double kfreq = 0.0;
  for (const QPTerm& t : u.terms()) kfreq = std::max(kfreq, t.k.norm());
  rep.qp_constant = true;
  rep.delone_increasing = true;
  for (double km : kmax_ladder) {
    CompensatedSum q, d;
    for (const QPTerm& t : u.terms()) {
      if (t.k.norm() <= km) q.add(cplx(std::norm(t.a), 0.0));
    }
    for (const BraggPeak& p : peaks.peaks) {
      if (p.k.norm() <= km) d.add(cplx(p.intensity, 0.0));
    }
    rep.qp_mass.push_back(q.value().real());
    rep.delone_mass.push_back(d.value().real());
    if (km >= kfreq && rep.qp_mass.back() != rep.qp_total) rep.qp_constant = false;
  }
  for (std::size_t i = 0; i + 1 < rep.delone_mass.size(); ++i) {
    const double g = rep.delone_mass[i] > 0.0 ? rep.delone_mass[i + 1] / rep.delone_mass[i]
                                              : std::numeric_limits<double>::infinity();
    rep.growth.push_back(g);
    if (!(rep.delone_mass[i + 1] > rep.delone_mass[i])) rep.delone_increasing = false;
  }
  return rep;
}

}  // namespace aperiodic
