#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "splitcert/numerics.hpp"
#include "splitcert/oracles.hpp"

namespace testsupport {

using splitcert::FunctionOracle;
using splitcert::OraclePtr;
using splitcert::Point;
using splitcert::Rng;

inline Point random_point(Rng& rng, std::size_t dim, double scale) {
  std::vector<double> v(dim);
  for (auto& c : v) c = scale * rng.normal();
  return Point(std::move(v));
}

inline Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = rng.normal();
  }
  return M;
}

inline Eigen::VectorXd random_vector(Rng& rng, Eigen::Index n) {
  return random_matrix(rng, n, 1).col(0);
}

inline std::size_t random_dim(Rng& rng, std::size_t max_dim) {
  return 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(max_dim));
}

inline OraclePtr random_least_squares(Rng& rng, std::size_t dim) {
  const auto rows = static_cast<Eigen::Index>(random_dim(rng, 6));
  return splitcert::make_least_squares(random_matrix(rng, rows, static_cast<Eigen::Index>(dim)),
                                       random_vector(rng, rows));
}

inline OraclePtr random_box(Rng& rng, std::size_t dim) {
  std::vector<double> lo(dim), hi(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    lo[i] = rng.uniform(-2.0, 0.5);
    hi[i] = lo[i] + rng.uniform(0.0, 2.0);
  }
  return splitcert::make_box_indicator(lo, hi);
}

/// One of the prox-capable oracles, with random parameters.
inline OraclePtr random_prox_oracle(Rng& rng, std::size_t dim) {
  switch (static_cast<int>(rng.uniform() * 8)) {
    case 0: return splitcert::make_zero(dim);
    case 1: return splitcert::make_l1(dim, rng.uniform(0.0, 3.0));
    case 2: return splitcert::make_shifted_l1(random_point(rng, dim, 1.0));
    case 3: return random_least_squares(rng, dim);
    case 4: return splitcert::make_squared_norm(dim, rng.uniform(0.0, 5.0));
    case 5: return splitcert::make_linear(random_point(rng, dim, 1.0));
    case 6: return random_box(rng, dim);
    default:
      return splitcert::make_ball_indicator(random_point(rng, dim, 1.0), rng.uniform(0.1, 3.0));
  }
}

/// One of the real-valued oracles with a subgradient, with random parameters.
inline OraclePtr random_subgradient_oracle(Rng& rng, std::size_t dim) {
  switch (static_cast<int>(rng.uniform() * 6)) {
    case 0: return splitcert::make_l1(dim, rng.uniform(0.0, 3.0));
    case 1: return splitcert::make_shifted_l1(random_point(rng, dim, 1.0));
    case 2: return random_least_squares(rng, dim);
    case 3: return splitcert::make_squared_norm(dim, rng.uniform(0.0, 5.0));
    case 4: return splitcert::make_linear(random_point(rng, dim, 1.0));
    default: {
      const auto rows = static_cast<Eigen::Index>(random_dim(rng, 8));
      Eigen::VectorXd labels(rows);
      for (Eigen::Index j = 0; j < rows; ++j) labels[j] = rng.uniform() < 0.5 ? -1.0 : 1.0;
      return splitcert::make_hinge_block(random_matrix(rng, rows, static_cast<Eigen::Index>(dim)),
                                         labels);
    }
  }
}

/// Probe around p at radii spread over several decades; indicator domains
/// are respected by projecting the probe.
inline Point probe_near(Rng& rng, const FunctionOracle& f, const Point& p) {
  const double radius = std::pow(10.0, rng.uniform(-4.0, 1.0));
  Point y = splitcert::axpy(p, radius, rng.unit_vector(p.dim()));
  if (f.is_indicator()) y = f.prox(1.0, y);
  return y;
}

/// min over probes y of [f(y) + ‖y − x‖²/(2λ)] − [f(p) + ‖p − x‖²/(2λ)], p = prox(λ, x).
inline double prox_optimality_slack(Rng& rng, const FunctionOracle& f, double lambda,
                                    const Point& x, int probes) {
  const Point p = f.prox(lambda, x);
  auto obj = [&](const Point& y) { return f.value(y) + splitcert::dist_sq(y, x) / (2.0 * lambda); };
  const double at_p = obj(p);
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < probes; ++k) {
    worst = std::min(worst, obj(probe_near(rng, f, p)) - at_p);
  }
  return worst;
}

/// ‖x − x′‖ − ‖prox(λ, x) − prox(λ, x′)‖.
inline double nonexpansive_slack(const FunctionOracle& f, double lambda, const Point& x,
                                 const Point& x2) {
  return std::sqrt(splitcert::dist_sq(x, x2)) -
         std::sqrt(splitcert::dist_sq(f.prox(lambda, x), f.prox(lambda, x2)));
}

/// min over probes z of f(z) − f(x) − ⟨g, z − x⟩ + ε for the certified pair (g, ε).
inline double eps_subgradient_slack(Rng& rng, const FunctionOracle& f, const Point& x,
                                    const splitcert::EpsSubgradient& es, int probes) {
  const double fx = f.value(x);
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < probes; ++k) {
    const Point z = probe_near(rng, f, x);
    worst = std::min(worst, f.value(z) - fx - splitcert::inner(es.g, z - x) + es.eps);
  }
  return worst;
}

/// min over probes y of f(y) − f(x) − ⟨g, y − x⟩.
inline double subgradient_slack(Rng& rng, const FunctionOracle& f, const Point& x,
                                const Point& g, int probes) {
  return eps_subgradient_slack(rng, f, x, {g, 0.0}, probes);
}

}  // namespace testsupport
