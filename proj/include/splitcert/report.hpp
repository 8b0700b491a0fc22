#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "splitcert/fejer.hpp"
#include "splitcert/numerics.hpp"
#include "splitcert/trace.hpp"

namespace splitcert::report {

struct RunConfig {
  std::string problem_id;
  std::string algo;  // fb, fb-smooth, psg, inc, dr
  double alpha = 0.1;
  double theta = 0.5;
  double eps = 0.0;
  std::int64_t T = 1000;
  std::uint64_t seed = 0;
  std::string out;
};

/// ConfigError when the problem is unknown, the algorithm is not declared
/// for it, or a parameter is out of range.
void validate(const RunConfig& config);

/// A trace plus the reference data needed to judge it. Everything here is
/// persisted by write_trace, so a reloaded bundle needs no catalog lookup.
struct TraceBundle {
  RunTrace trace;
  double f_star = 0.0;
  Point x_ref = Point::zeros(1);
  std::optional<double> B_analytic;
  std::optional<double> beta_analytic;
  std::int64_t m = 1;

  double d_sq() const { return dist_sq(trace.iterates.front(), x_ref); }
};

TraceBundle execute(const RunConfig& config);

/// 17 significant digits, '.' as decimal point regardless of locale.
std::string format_double(double v);

/// t,f_gap,alpha_t,eps_t,dist_sq_to_ref,max_subgrad_norm_so_far
std::string trace_csv(const TraceBundle& bundle);
/// t,f,alpha_t,eps_t,subgrad_max_l,subgrad_max_r,x1..xn (reload format).
std::string iterates_csv(const TraceBundle& bundle);
std::string sidecar_json(const TraceBundle& bundle);

/// Writes path, path.json and path.iterates.csv. ConfigError if a file
/// cannot be opened.
void write_trace(const TraceBundle& bundle, const std::string& path);
/// Reads what write_trace wrote. ParseError on missing or malformed files.
TraceBundle read_trace(const std::string& path);

/// Bound used by the default certificate constants: override, else the
/// analytic bound, else the largest recorded subgradient norm.
double effective_B(const TraceBundle& bundle, std::optional<double> B_override);

/// constants_source is "auto" (chosen from the trace's algorithm), a
/// provenance name (FB_thm32, ...), or the path of a JSON file
/// {"eta": [...], "xi": [...], "value_lag": 0}.
fejer::CertificateConstants make_constants(const TraceBundle& bundle,
                                           std::string_view constants_source,
                                           std::optional<double> B_override);

/// Certifies against x_ref and the iterates. conditional is set when the
/// run recorded subgradients longer than the B the constants were built on.
fejer::FejerCertificate certify_bundle(const TraceBundle& bundle,
                                       std::string_view constants_source,
                                       std::optional<double> B_override,
                                       const fejer::CertifyOptions& options = {});

inline constexpr std::string_view kTheorems[] = {"thm22", "cor23",  "thm24",  "thm32",
                                                 "thm35", "thm37", "thm310", "prop33"};

struct BoundsReport {
  std::string theorem;
  std::vector<std::int64_t> T;
  std::vector<double> gap;
  std::vector<double> bound;
  double max_ratio = 0.0;
  std::optional<std::int64_t> first_violation_T;

  std::string csv() const;
  std::string summary_json() const;
};

/// Compares f(x_T) − f* with the chosen bound for every T the bound covers.
/// ConfigError when the theorem does not apply to the trace.
BoundsReport bounds(const TraceBundle& bundle, std::string_view theorem,
                    std::optional<double> B_override);

struct SlopeReport {
  bool converged = false;
  double window_decades = 1.0;
  std::int64_t T_start = 0;
  std::int64_t T_end = 0;
  double last_iterate_slope = 0.0;
  double best_iterate_slope = 0.0;

  std::string json() const;
};

/// Least-squares slope of log gap against log T over [T_end/10^w, T_end],
/// for the last iterate and for the running best iterate. ContractError
/// for T < 1000 or a non-positive window.
SlopeReport slope(const TraceBundle& bundle, double window_decades = 1.0);

}  // namespace splitcert::report
