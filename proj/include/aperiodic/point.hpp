#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>

namespace aperiodic {

inline constexpr std::size_t kMaxDim = 4;

/// A point (or wave vector) in R^d with d <= kMaxDim, stored inline.
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dim);
  Point(std::initializer_list<double> coords);
  explicit Point(std::span<const double> coords);

  std::size_t dim() const noexcept { return dim_; }
  double operator[](std::size_t i) const noexcept { return c_[i]; }
  double& operator[](std::size_t i) noexcept { return c_[i]; }
  std::span<const double> coords() const noexcept { return {c_.data(), dim_}; }

  Point& operator+=(const Point& o);
  Point& operator-=(const Point& o);
  Point& operator*=(double s);

  double dot(const Point& o) const;
  double norm2() const;
  double norm() const;
  bool finite() const;

  /// Exact coordinate equality (same dimension, bitwise-equal values).
  bool operator==(const Point& o) const;

  std::string str() const;

 private:
  std::array<double, kMaxDim> c_{};
  std::size_t dim_ = 0;
};

Point operator+(Point a, const Point& b);
Point operator-(Point a, const Point& b);
Point operator-(Point a);
Point operator*(double s, Point a);

double distance(const Point& a, const Point& b);
double max_abs_diff(const Point& a, const Point& b);

/// Strict lexicographic order on coordinates; used for all deterministic sorts.
bool lex_less(const Point& a, const Point& b);

/// Approximate equality with absolute tolerance on the Euclidean distance.
bool near(const Point& a, const Point& b, double tol);

void require_same_dim(const Point& a, std::size_t dim, const char* what);

}  // namespace aperiodic
