#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "splitcert/numerics.hpp"
#include "splitcert/trace.hpp"

namespace splitcert::problems {

struct Capabilities {
  bool prox_l = false;         // every l_i has a prox (Douglas-Rachford)
  bool prox_r = false;         // every r_i has a prox
  bool projectable_D = false;  // r is the indicator of a bounded projectable set
  bool separable_m = false;    // m > 1 components for the incremental method
};

/// A catalog entry: objective, start point and a certified reference solution.
struct Problem {
  std::string id;
  std::string description;
  ObjectiveSpec spec;
  Point x1 = Point::zeros(1);
  Point x_ref = Point::zeros(1);
  double f_star = 0.0;
  std::optional<double> B_analytic;
  std::optional<double> beta_analytic;
  Capabilities caps;
  /// Algorithm ids (fb, fb-smooth, psg, inc, dr) whose preconditions hold.
  std::vector<std::string> algorithms;
  std::uint64_t seed = 0;
  /// Generation parameters (dimensions, λ, μ, ...) for the JSON descriptor.
  std::string params_json = "{}";
  std::string reference_method;
  /// Accuracy evidence of the reference: KKT residual, duality gap, or the
  /// disagreement between the two 1-D oracles.
  double reference_residual = 0.0;
  /// Smallest f(y) − f(x_ref) over the optimality probes.
  double probe_min_slack = 0.0;

  bool allows(std::string_view algo) const;
  std::int64_t m() const { return static_cast<std::int64_t>(spec.m()); }
  /// ‖x1 − x_ref‖², the upper bound on d(x1, X)² used by every rate.
  double d_sq() const { return dist_sq(x1, x_ref); }
  std::string descriptor_json() const;
};

/// All problems that passed optimality certification. Built once per
/// process, immutable afterwards.
const std::vector<Problem>& catalog();
/// Ids of generated problems that failed certification (normally empty).
const std::vector<std::string>& rejected();
/// ConfigError for unknown ids.
const Problem& find_problem(std::string_view id);

// ---- reference oracles -------------------------------------------------------

struct ReferenceSolution {
  Point x;
  double f;
  std::string method;
  double residual;
};

/// Generic high-accuracy oracle: golden-section search for 1-D objectives,
/// constant-step smooth forward-backward when l declares β, otherwise a long
/// forward-backward run (θ = 0.5) keeping the best iterate.
ReferenceSolution reference_solve(const ObjectiveSpec& spec, const Point& x1,
                                  std::int64_t budget);

/// ½‖Ax − b‖² + λ‖x‖₁: constant-step ISTA to identify the support, then an
/// exact linear solve on it; residual = max KKT violation.
ReferenceSolution solve_lasso(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                              double lambda, const Point& x1, std::int64_t budget);

/// (μ/2)‖x‖² + Σ_j max(0, 1 − y_j⟨a_j, x⟩) by dual coordinate ascent;
/// residual = primal − dual objective gap.
ReferenceSolution solve_hinge(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                              double mu, std::int64_t max_sweeps);

/// Golden-section search for a convex f on [lo, hi].
double golden_section_1d(const std::function<double(double)>& f, double lo, double hi,
                         double tol = 1e-13);
/// Repeated grid refinement (1001 points, zoom around the best) on [lo, hi].
double grid_search_1d(const std::function<double(double)>& f, double lo, double hi,
                      double tol = 1e-13);

/// min over probes y of f(y) − f(x_ref): random points at radii 1e-6..10
/// around x_ref (projected into D when a component is an indicator).
double optimality_probe_slack(const ObjectiveSpec& spec, const Point& x_ref,
                              std::int64_t probes, std::uint64_t seed);

}  // namespace splitcert::problems
