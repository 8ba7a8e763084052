#include "aperiodic/point.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "aperiodic/error.hpp"

namespace aperiodic {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid argument";
    case ErrorKind::kOutOfWindow: return "out of window";
    case ErrorKind::kDegenerateInput: return "degenerate input";
    case ErrorKind::kDimensionMismatch: return "dimension mismatch";
    case ErrorKind::kSingularBasis: return "singular basis";
    case ErrorKind::kMotifCollision: return "motif collision";
    case ErrorKind::kNonPrimitive: return "non-primitive substitution";
    case ErrorKind::kIllegalSeed: return "illegal seed";
    case ErrorKind::kUnknownLetter: return "unknown letter";
    case ErrorKind::kIllegalWord: return "illegal word";
    case ErrorKind::kGenericity: return "genericity violation";
    case ErrorKind::kInsufficientRadius: return "insufficient radius";
    case ErrorKind::kCapExceeded: return "point cap exceeded";
    case ErrorKind::kConfig: return "config error";
    case ErrorKind::kShape: return "data shape error";
  }
  return "unknown error";
}

Point::Point(std::size_t dim) : dim_(dim) {
  if (dim == 0 || dim > kMaxDim) {
    fail(ErrorKind::kDimensionMismatch, "point dimension must be in [1, 4]");
  }
}

Point::Point(std::initializer_list<double> coords)
    : Point(std::span<const double>(coords.begin(), coords.size())) {}

Point::Point(std::span<const double> coords) : Point(coords.size()) {
  std::copy(coords.begin(), coords.end(), c_.begin());
}

Point& Point::operator+=(const Point& o) {
  for (std::size_t i = 0; i < dim_; ++i) c_[i] += o.c_[i];
  return *this;
}

Point& Point::operator-=(const Point& o) {
  for (std::size_t i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
  return *this;
}

Point& Point::operator*=(double s) {
  for (std::size_t i = 0; i < dim_; ++i) c_[i] *= s;
  return *this;
}

double Point::dot(const Point& o) const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) s += c_[i] * o.c_[i];
  return s;
}

double Point::norm2() const { return dot(*this); }
double Point::norm() const { return std::sqrt(norm2()); }

bool Point::finite() const {
  for (std::size_t i = 0; i < dim_; ++i) {
    if (!std::isfinite(c_[i])) return false;
  }
  return true;
}

bool Point::operator==(const Point& o) const {
  if (dim_ != o.dim_) return false;
  for (std::size_t i = 0; i < dim_; ++i) {
    if (c_[i] != o.c_[i]) return false;
  }
  return true;
}

std::string Point::str() const {
  std::string s = "(";
  char buf[32];
  for (std::size_t i = 0; i < dim_; ++i) {
    std::snprintf(buf, sizeof buf, "%.10g", c_[i]);
    if (i) s += ", ";
    s += buf;
  }
  return s + ")";
}

Point operator+(Point a, const Point& b) { return a += b; }
Point operator-(Point a, const Point& b) { return a -= b; }
Point operator-(Point a) { return a *= -1.0; }
Point operator*(double s, Point a) { return a *= s; }

double distance(const Point& a, const Point& b) { return (a - b).norm(); }

double max_abs_diff(const Point& a, const Point& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool lex_less(const Point& a, const Point& b) {
  const std::size_t n = std::min(a.dim(), b.dim());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return a.dim() < b.dim();
}

bool near(const Point& a, const Point& b, double tol) {
  return a.dim() == b.dim() && distance(a, b) <= tol;
}

void require_same_dim(const Point& a, std::size_t dim, const char* what) {
  if (a.dim() != dim) {
    fail(ErrorKind::kDimensionMismatch,
         std::string(what) + ": expected dimension " + std::to_string(dim) +
             ", got " + std::to_string(a.dim()));
  }
}

}  // namespace aperiodic
