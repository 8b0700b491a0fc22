#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "splitcert/numerics.hpp"
#include "splitcert/oracles.hpp"

namespace splitcert {

/// Step sizes α_t = alpha · t^(−theta). theta = 0 gives a constant step.
struct StepSchedule {
  double alpha = 0.1;
  double theta = 0.5;

  double at(std::int64_t t) const;
  void validate() const;
};

/// f = Σ_{i=1..m} (l_i + r_i). The l_i are queried for subgradients, the
/// r_i for proximity operators. m = 1 is the plain composite f = l + r.
struct ObjectiveSpec {
  std::vector<OraclePtr> smooth_parts;
  std::vector<OraclePtr> prox_parts;

  std::size_t m() const noexcept { return smooth_parts.size(); }
  std::size_t dim() const;
  /// Σ_i l_i(x) + r_i(x), summed in component order.
  double value(const Point& x) const;
  /// ContractError unless |l| = |r| = m ≥ 1 and all dimensions agree.
  void validate() const;
};

/// Everything recorded by one algorithm run. Index k of each per-iteration
/// vector holds iteration t = k + 1. Steps are taken from x_t to x_{t+1} for
/// t = 1..T−1, so the step-related fields at the last index are zero.
struct RunTrace {
  std::string algo_id;
  std::string problem_id;
  std::uint64_t seed = 0;
  StepSchedule schedule;
  double eps = 0.0;

  std::vector<Point> iterates;
  std::vector<double> f_values;
  std::vector<double> alpha_values;
  std::vector<double> eps_values;
  /// Per step, the largest subgradient norm queried from l-side oracles
  /// (l or l_i) and from r-side oracles (r or r_i, including the element
  /// of ∂r recovered from each prox step).
  std::vector<double> subgrad_max_l;
  std::vector<double> subgrad_max_r;

  /// Douglas-Rachford only: y_t, z_t (index k holds y_{k+2}, z_{k+2}) and f(z_t).
  std::vector<Point> shadow_y;
  std::vector<Point> shadow_z;
  std::vector<double> f_at_z;

  std::int64_t T() const noexcept { return static_cast<std::int64_t>(iterates.size()); }
  /// ContractError if the per-iteration vectors disagree in length.
  void validate() const;
};

}  // namespace splitcert
