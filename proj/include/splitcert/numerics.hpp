#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace splitcert {

/// Element of the (finite-dimensional) ambient space. Immutable once built;
/// construction rejects empty or non-finite coordinate vectors.
class Point {
 public:
  explicit Point(std::vector<double> coords);
  Point(std::initializer_list<double> coords);

  static Point zeros(std::size_t dim);
  static Point from_eigen(const Eigen::VectorXd& v);

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }
  Eigen::Map<const Eigen::VectorXd> as_eigen() const noexcept {
    return {coords_.data(), static_cast<Eigen::Index>(coords_.size())};
  }

  friend bool operator==(const Point& a, const Point& b) = default;

 private:
  std::vector<double> coords_;
};

/// Throws ContractError unless both points have the same dimension.
void require_same_dim(const Point& a, const Point& b);

/// Σ a_i b_i, accumulated strictly left to right. Each product is
/// commutative in IEEE arithmetic, so inner(a, b) == inner(b, a) bit for bit.
double inner(const Point& a, const Point& b);
double norm_sq(const Point& a);
double norm(const Point& a);
double dist_sq(const Point& a, const Point& b);

Point operator+(const Point& a, const Point& b);
Point operator-(const Point& a, const Point& b);
Point operator*(double s, const Point& a);
/// a + s * b
Point axpy(const Point& a, double s, const Point& b);

/// Deterministic random source. The conversions from the raw 64-bit engine
/// output are spelled out here (the standard distributions are
/// implementation-defined), so catalog data and perturbations are identical
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller (one draw per call, no caching).
  double normal();
  /// Uniformly distributed direction on the unit sphere.
  Point unit_vector(std::size_t dim);

 private:
  std::mt19937_64 engine_;
};

}  // namespace splitcert
