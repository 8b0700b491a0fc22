#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>

#include "splitcert/numerics.hpp"
#include "splitcert/oracles.hpp"
#include "splitcert/trace.hpp"

namespace splitcert::algorithms {

/// Subgradient norms observed during one step, split by oracle side.
struct NormLog {
  double max_l = 0.0;
  double max_r = 0.0;

  void l(const Point& g) { max_l = std::max(max_l, norm(g)); }
  void r(const Point& g) { max_r = std::max(max_r, norm(g)); }
};

struct FbStep {
  Point next;
  double achieved_eps = 0.0;
};

/// Maximum number of radius halvings when searching for an ε-subgradient
/// within budget; past it the exact subgradient (ε = 0) is used.
inline constexpr int kMaxHalvings = 60;

/// x⁺ = prox_{α r}(x − α g) with g ∈ ∂_ε l(x), ε ≤ eps_budget.
///
/// With eps_budget > 0, g is the exact subgradient of l at x + δu for a
/// random unit direction u drawn from rng and δ = sqrt(eps_budget), halved
/// until the certified ε fits the budget. eps_budget = 0 uses ∂l(x) and does
/// not touch rng. Records ‖g‖ (l-side) and ‖(x − αg − x⁺)/α‖ (r-side, the
/// element of ∂r(x⁺) recovered from the prox) in log when given.
FbStep forward_backward_step(const Point& x, double alpha_t, const FunctionOracle& l,
                             const FunctionOracle& r, double eps_budget, Rng& rng,
                             NormLog* log = nullptr);

/// Forward-backward with ε-subgradients, α_t = α t^(−θ), ε_t ≤ ε α_t.
/// Requires m = 1 and a prox-capable r.
RunTrace run_forward_backward(const ObjectiveSpec& spec, const Point& x1,
                              const StepSchedule& schedule, double eps, std::int64_t T,
                              std::uint64_t seed);

/// Constant step 1/β forward-backward with exact gradients; β is the
/// smoothness bound declared by l. ConfigError if l declares none.
RunTrace run_smooth_fb(const ObjectiveSpec& spec, const Point& x1, std::int64_t T);

/// x_{t+1} = P_D(x_t − α_t g_t), g_t ∈ ∂_{ε_t} l(x_t). r must be the indicator
/// of a projectable set and x1 ∈ D; every iterate is checked for feasibility.
RunTrace run_projected_subgradient(const ObjectiveSpec& spec, const Point& x1,
                                   const StepSchedule& schedule, double eps, std::int64_t T,
                                   std::uint64_t seed);

/// First index (1-based) attaining min_t f(x_t), and that value.
std::pair<std::int64_t, double> best_iterate(const RunTrace& trace);

/// One cycle ψ⁰ = x, ψⁱ = prox_{α r_i}(ψⁱ⁻¹ − α g_i), g_i ∈ ∂l_i(ψⁱ⁻¹),
/// i = 1..m in fixed order; returns ψᵐ.
Point incremental_cycle(const Point& x, double alpha_t, const ObjectiveSpec& spec,
                        NormLog* log = nullptr);

RunTrace run_incremental(const ObjectiveSpec& spec, const Point& x1,
                         const StepSchedule& schedule, std::int64_t T);

struct DrStep {
  Point x_next;
  Point y;
  Point z;
};

/// y = prox_{α l}(x), z = prox_{α r}(2y − x), x⁺ = x + z − y.
/// ConfigError unless both l and r have a prox.
DrStep douglas_rachford_step(const Point& x, double alpha_t, const FunctionOracle& l,
                             const FunctionOracle& r);

/// Douglas-Rachford with α_t = α t^(−θ). f is evaluated at the governing
/// sequence x_t; y_t, z_t and f(z_t) are kept alongside.
RunTrace run_douglas_rachford(const ObjectiveSpec& spec, const Point& x1,
                              const StepSchedule& schedule, std::int64_t T);

}  // namespace splitcert::algorithms
