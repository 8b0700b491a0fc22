#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "splitcert/numerics.hpp"

namespace splitcert {

/// A proper convex function on R^n exposing value, subgradient and
/// (optionally) proximity-operator oracles.
///
/// Subgradient selection is deterministic: at a nondifferentiable point the
/// oracle returns 0 when 0 belongs to the subdifferential, and otherwise the
/// canonical sign-type element. When a Lipschitz bound B is declared, every
/// returned subgradient is checked against it (ContractError on violation).
class FunctionOracle {
 public:
  virtual ~FunctionOracle() = default;

  std::size_t dim() const noexcept { return dim_; }

  /// f(x), possibly +inf outside the effective domain.
  double value(const Point& x) const;
  /// An element of ∂f(x). DomainError if x is outside dom ∂f.
  Point subgradient(const Point& x) const;

  bool has_prox() const noexcept { return has_prox_; }
  /// argmin_y f(y) + ‖y − x‖² / (2λ). ConfigError if the oracle has no prox.
  Point prox(double lambda, const Point& x) const;

  /// True for indicator functions of closed convex sets; prox is then the
  /// projection and the function takes only the values 0 and +inf.
  virtual bool is_indicator() const noexcept { return false; }

  std::optional<double> lipschitz_bound() const noexcept { return lipschitz_; }
  std::optional<double> smoothness_bound() const noexcept { return smoothness_; }

  virtual std::string describe() const = 0;

 protected:
  FunctionOracle(std::size_t dim, bool has_prox, std::optional<double> lipschitz,
                 std::optional<double> smoothness);

  virtual double do_value(const Point& x) const = 0;
  virtual Point do_subgradient(const Point& x) const = 0;
  virtual Point do_prox(double lambda, const Point& x) const;

 private:
  std::size_t dim_;
  bool has_prox_;
  std::optional<double> lipschitz_;
  std::optional<double> smoothness_;
};

using OraclePtr = std::shared_ptr<const FunctionOracle>;

/// g ∈ ∂_eps f(x): f(x) + ⟨g, y − x⟩ − eps ≤ f(y) for every y.
struct EpsSubgradient {
  Point g;
  double eps;
};

// ---- proximity operators and projections ---------------------------------

/// prox of λ·weight·‖·‖₁: coordinatewise soft threshold at λ·weight.
Point prox_l1(double lambda, double weight, const Point& x);

/// Coordinatewise clamp onto [lo, hi]. Bounds may be infinite.
/// ContractError when lo_i > hi_i or the lengths disagree with x.
Point project_box(std::span<const double> lo, std::span<const double> hi, const Point& x);

/// Projection onto the closed ball of the given radius around center.
Point project_ball(double radius, const Point& center, const Point& x);

/// prox of λ·½‖A y − b‖²: solves (I + λAᵀA) p = x + λAᵀb by Cholesky.
Point prox_quadratic(double lambda, const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     const Point& x);

/// Certified ε-subgradient of f at x built from an exact subgradient at y:
/// g = ∂f(y), eps = f(x) − f(y) − ⟨g, x − y⟩ (≥ 0 by convexity; rounding
/// noise below zero is clamped). DomainError if f is infinite at x or y.
EpsSubgradient eps_subgradient_at_shifted_point(const FunctionOracle& f, const Point& x,
                                                const Point& y);

// ---- function catalog -----------------------------------------------------

/// f ≡ 0.
OraclePtr make_zero(std::size_t dim);
/// weight·‖x‖₁.
OraclePtr make_l1(std::size_t dim, double weight);
/// ‖x − center‖₁.
OraclePtr make_shifted_l1(const Point& center);
/// ½‖A x − b‖².
OraclePtr make_least_squares(Eigen::MatrixXd A, Eigen::VectorXd b);
/// (coef/2)‖x‖².
OraclePtr make_squared_norm(std::size_t dim, double coef);
/// ⟨c, x⟩.
OraclePtr make_linear(const Point& c);
/// Indicator of the box [lo, hi]; bounds may be infinite.
OraclePtr make_box_indicator(std::vector<double> lo, std::vector<double> hi);
/// Indicator of the closed ball B(center, radius).
OraclePtr make_ball_indicator(const Point& center, double radius);
/// Σ_j max(0, 1 − labels_j ⟨features_j, x⟩), one feature vector per row.
OraclePtr make_hinge_block(Eigen::MatrixXd features, Eigen::VectorXd labels);

}  // namespace splitcert
