#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "splitcert/numerics.hpp"
#include "splitcert/trace.hpp"

namespace splitcert::fejer {

/// Which convergence argument the (η_t, ξ_t) pairs come from.
enum class Provenance { FbThm32, PsThm35, IncThm37, DrThm310, SmoothProp33, Custom };

std::string_view to_string(Provenance p);
/// Accepts the canonical names ("FB_thm32", ...) case-insensitively.
/// ConfigError on anything else.
Provenance provenance_from_string(std::string_view name);

/// Weights of the modified Fejér inequality
///   ‖x_{t+1} − x‖² ≤ ‖x_t − x‖² − η_t (f(x_{t+lag}) − f(x)) + ξ_t.
/// eta[k], xi[k] hold t = k + 1. value_lag is 0 for the classical form; the
/// smooth forward-backward certificate uses 1 (descent-lemma form, which
/// evaluates f at the next iterate).
struct CertificateConstants {
  std::vector<double> eta;
  std::vector<double> xi;
  Provenance provenance = Provenance::Custom;
  int value_lag = 0;
};

/// η_t = 2α_t, ξ_t = (10B² + 2ε)α_t².
CertificateConstants fb_constants(std::span<const double> alphas, double B, double eps);
/// Projected subgradient as forward-backward with r = ι_D: same weights as
/// fb_constants, tagged PS_thm35.
CertificateConstants ps_constants(std::span<const double> alphas, double B, double eps);
/// η_t = 2α_t, ξ_t = (4m + 5)·m·B²·α_t².
CertificateConstants inc_constants(std::span<const double> alphas, std::int64_t m, double B);
/// η_t = 2α_t, ξ_t = 16α_t²B².
CertificateConstants dr_constants(std::span<const double> alphas, double B);
/// η_t = 2/β, ξ_t = 0, value_lag = 1.
CertificateConstants smooth_constants(double beta, std::int64_t T);

/// A point x at which the inequality is tested, with f(x) precomputed.
struct TestPoint {
  std::string id;
  Point x;
  double f;
};

enum class IterateTestPoints {
  Auto,       // All when T <= thinning_threshold, else Geometric
  All,        // every stored iterate
  Geometric,  // t ∈ {1, 2, 4, 8, ...} ∪ {T}
  None,
};

struct CertifyOptions {
  double tol_rel = 1e-9;
  IterateTestPoints iterates = IterateTestPoints::Auto;
  std::int64_t thinning_threshold = 10000;
};

struct FejerCertificate {
  bool pass = false;
  /// Smallest raw slack over all (t, x) pairs.
  double min_slack = 0.0;
  /// Smallest slack / max(1, ‖x_t − x‖²); the verdict compares this to −tol_rel.
  double min_rel_slack = 0.0;
  std::int64_t argmin_t = 0;
  std::string argmin_point;
  /// min_t ξ_t − ‖x_{t+1} − x_t‖².
  double eq3_min_slack = 0.0;
  std::int64_t eq3_argmin_t = 0;
  Provenance provenance = Provenance::Custom;
  int value_lag = 0;
  double tol_rel = 0.0;
  std::size_t test_point_count = 0;
  /// Set by callers when the constants rest on a bound the run exceeded.
  bool conditional = false;
  /// Per step t = k + 1: the minimum relative slack over all test points.
  std::vector<double> step_min_rel_slack;
};

/// Evaluates the modified Fejér inequality for every consecutive pair of the
/// trace against every test point (explicit points plus the iterate points
/// selected by options.iterates).
///
/// ContractError: fewer than two iterates, constants shorter than T − 1,
/// dimension mismatch. DomainError: a test point with non-finite f.
FejerCertificate certify(const RunTrace& trace, const CertificateConstants& constants,
                         std::span<const TestPoint> test_points,
                         const CertifyOptions& options = {});

/// Largest subgradient norm recorded in the trace. ContractError when empty.
double observed_B(const RunTrace& trace);
double observed_B(std::span<const double> norms);

/// {verdict, min_slack, min_rel_slack, argmin{t, test_point_id}, eq3_min_slack,
///  eq3_argmin_t, constants_provenance, value_lag, tol_rel, test_points, conditional}
std::string to_json(const FejerCertificate& cert);

}  // namespace splitcert::fejer
