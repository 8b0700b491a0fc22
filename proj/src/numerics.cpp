#include "splitcert/numerics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "splitcert/errors.hpp"

namespace splitcert {

namespace {

void require_finite(const std::vector<double>& coords) {
  if (coords.empty()) throw ContractError("Point: dimension must be >= 1");
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (!std::isfinite(coords[i])) {
      throw ContractError("Point: coordinate " + std::to_string(i) + " is not finite");
    }
  }
}

}  // namespace

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) { require_finite(coords_); }

Point::Point(std::initializer_list<double> coords) : coords_(coords) { require_finite(coords_); }

Point Point::zeros(std::size_t dim) { return Point(std::vector<double>(dim, 0.0)); }

Point Point::from_eigen(const Eigen::VectorXd& v) {
  return Point(std::vector<double>(v.data(), v.data() + v.size()));
}

void require_same_dim(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) {
    throw ContractError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                        std::to_string(b.dim()));
  }
}

double inner(const Point& a, const Point& b) {
  require_same_dim(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm_sq(const Point& a) {
  double acc = 0.0;
  for (double v : a.coords()) acc += v * v;
  return acc;
}

double norm(const Point& a) { return std::sqrt(norm_sq(a)); }

double dist_sq(const Point& a, const Point& b) {
  require_same_dim(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

Point operator+(const Point& a, const Point& b) {
  require_same_dim(a, b);
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] + b[i];
  return Point(std::move(out));
}

Point operator-(const Point& a, const Point& b) {
  require_same_dim(a, b);
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] - b[i];
  return Point(std::move(out));
}

Point operator*(double s, const Point& a) {
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = s * a[i];
  return Point(std::move(out));
}

Point axpy(const Point& a, double s, const Point& b) {
  require_same_dim(a, b);
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] + s * b[i];
  return Point(std::move(out));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  // 1 - u keeps the argument of log in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Point Rng::unit_vector(std::size_t dim) {
  std::vector<double> v(dim);
  double nrm = 0.0;
  do {
    for (auto& c : v) c = normal();
    nrm = 0.0;
    for (double c : v) nrm += c * c;
    nrm = std::sqrt(nrm);
  } while (nrm == 0.0);
  for (auto& c : v) c /= nrm;
  return Point(std::move(v));
}

}  // namespace splitcert
