#include "splitcert/algorithms.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "splitcert/errors.hpp"

namespace splitcert::algorithms {

namespace {

void require_T(std::int64_t T) {
  if (T < 1) throw ConfigError("T must be >= 1");
}

void require_single_component(const ObjectiveSpec& spec, const char* algo) {
  spec.validate();
  if (spec.m() != 1) throw ConfigError(std::string(algo) + " requires m = 1");
}

// (forward − x⁺)/α: the element of ∂r(x⁺) certified by the prox step.
Point prox_residual(const Point& forward, const Point& next, double alpha_t) {
  return (1.0 / alpha_t) * (forward - next);
}

double finite_value(const ObjectiveSpec& spec, const Point& x, std::int64_t t) {
  const double v = spec.value(x);
  if (!std::isfinite(v)) {
    throw DomainError("iterate x_" + std::to_string(t) + " lies outside dom f");
  }
  return v;
}

RunTrace start_trace(std::string algo, const StepSchedule& schedule, double eps,
                     std::int64_t T, std::uint64_t seed) {
  RunTrace tr;
  tr.algo_id = std::move(algo);
  tr.schedule = schedule;
  tr.eps = eps;
  tr.seed = seed;
  const auto n = static_cast<std::size_t>(T);
  tr.iterates.reserve(n);
  tr.f_values.reserve(n);
  tr.alpha_values.reserve(n);
  tr.eps_values.reserve(n);
  tr.subgrad_max_l.reserve(n);
  tr.subgrad_max_r.reserve(n);
  return tr;
}

void record(RunTrace& tr, const Point& x, double f, double alpha_t, double eps_t,
            const NormLog& log) {
  tr.iterates.push_back(x);
  tr.f_values.push_back(f);
  tr.alpha_values.push_back(alpha_t);
  tr.eps_values.push_back(eps_t);
  tr.subgrad_max_l.push_back(log.max_l);
  tr.subgrad_max_r.push_back(log.max_r);
}

// Shared body of forward-backward and projected subgradient; the latter only
// adds the feasibility assertion.
RunTrace run_fb_like(const ObjectiveSpec& spec, const Point& x1, const StepSchedule& schedule,
                     double eps, std::int64_t T, std::uint64_t seed, std::string algo,
                     bool assert_feasible) {
  require_T(T);
  schedule.validate();
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw ConfigError("eps must be finite and >= 0");
  const FunctionOracle& l = *spec.smooth_parts.front();
  const FunctionOracle& r = *spec.prox_parts.front();
  if (!r.has_prox()) throw ConfigError(algo + ": r has no proximity operator");

  Rng rng(seed);
  RunTrace tr = start_trace(std::move(algo), schedule, eps, T, seed);
  Point x = x1;
  for (std::int64_t t = 1; t <= T; ++t) {
    if (assert_feasible && r.value(x) != 0.0) {
      throw ContractError("projected subgradient: x_" + std::to_string(t) + " left D");
    }
    const double f = finite_value(spec, x, t);
    const double alpha_t = schedule.at(t);
    NormLog log;
    log.r(r.subgradient(x));
    if (t == T) {
      log.l(l.subgradient(x));
      record(tr, x, f, alpha_t, 0.0, log);
      break;
    }
    FbStep step = forward_backward_step(x, alpha_t, l, r, eps * alpha_t, rng, &log);
    record(tr, x, f, alpha_t, step.achieved_eps, log);
    x = std::move(step.next);
  }
  return tr;
}

}  // namespace

FbStep forward_backward_step(const Point& x, double alpha_t, const FunctionOracle& l,
                             const FunctionOracle& r, double eps_budget, Rng& rng,
                             NormLog* log) {
  if (!(eps_budget >= 0.0)) throw ContractError("forward_backward_step: eps_budget < 0");
  if (!(alpha_t > 0.0)) throw ContractError("forward_backward_step: alpha_t must be > 0");

  std::optional<EpsSubgradient> es;
  if (eps_budget > 0.0) {
    const Point u = rng.unit_vector(x.dim());
    double radius = std::sqrt(eps_budget);
    for (int h = 0; h <= kMaxHalvings; ++h, radius *= 0.5) {
      EpsSubgradient cand = eps_subgradient_at_shifted_point(l, x, axpy(x, radius, u));
      if (cand.eps <= eps_budget) {
        es = std::move(cand);
        break;
      }
    }
  }
  if (!es) es = EpsSubgradient{l.subgradient(x), 0.0};

  const Point forward = axpy(x, -alpha_t, es->g);
  Point next = r.prox(alpha_t, forward);
  if (log) {
    log->l(es->g);
    log->r(prox_residual(forward, next, alpha_t));
  }
  return {std::move(next), es->eps};
}

RunTrace run_forward_backward(const ObjectiveSpec& spec, const Point& x1,
                              const StepSchedule& schedule, double eps, std::int64_t T,
                              std::uint64_t seed) {
  require_single_component(spec, "forward-backward");
  return run_fb_like(spec, x1, schedule, eps, T, seed, "fb", false);
}

RunTrace run_projected_subgradient(const ObjectiveSpec& spec, const Point& x1,
                                   const StepSchedule& schedule, double eps, std::int64_t T,
                                   std::uint64_t seed) {
  require_single_component(spec, "projected subgradient");
  const FunctionOracle& r = *spec.prox_parts.front();
  if (!r.is_indicator() || !r.has_prox()) {
    throw ConfigError("projected subgradient: r must be the indicator of a projectable set");
  }
  if (r.value(x1) != 0.0) throw ContractError("projected subgradient: x1 must lie in D");
  return run_fb_like(spec, x1, schedule, eps, T, seed, "psg", true);
}

RunTrace run_smooth_fb(const ObjectiveSpec& spec, const Point& x1, std::int64_t T) {
  require_single_component(spec, "smooth forward-backward");
  const auto beta = spec.smooth_parts.front()->smoothness_bound();
  if (!beta || !(*beta > 0.0)) {
    throw ConfigError("smooth forward-backward: l declares no positive smoothness bound");
  }
  StepSchedule constant{1.0 / *beta, 0.0};
  RunTrace tr = run_fb_like(spec, x1, constant, 0.0, T, 0, "fb-smooth", false);
  return tr;
}

std::pair<std::int64_t, double> best_iterate(const RunTrace& trace) {
  if (trace.f_values.empty()) throw ContractError("best_iterate: empty trace");
  std::size_t best = 0;
  for (std::size_t k = 1; k < trace.f_values.size(); ++k) {
    if (trace.f_values[k] < trace.f_values[best]) best = k;
  }
  return {static_cast<std::int64_t>(best) + 1, trace.f_values[best]};
}

Point incremental_cycle(const Point& x, double alpha_t, const ObjectiveSpec& spec,
                        NormLog* log) {
  Point psi = x;
  for (std::size_t i = 0; i < spec.m(); ++i) {
    const FunctionOracle& l = *spec.smooth_parts[i];
    const FunctionOracle& r = *spec.prox_parts[i];
    const Point g = l.subgradient(psi);
    const Point forward = axpy(psi, -alpha_t, g);
    Point next = r.prox(alpha_t, forward);
    if (log) {
      log->l(g);
      log->r(prox_residual(forward, next, alpha_t));
    }
    psi = std::move(next);
  }
  return psi;
}

RunTrace run_incremental(const ObjectiveSpec& spec, const Point& x1,
                         const StepSchedule& schedule, std::int64_t T) {
  spec.validate();
  require_T(T);
  schedule.validate();
  for (const auto& r : spec.prox_parts) {
    if (!r->has_prox()) throw ConfigError("incremental: every r_i needs a prox");
  }
  RunTrace tr = start_trace("inc", schedule, 0.0, T, 0);
  Point x = x1;
  for (std::int64_t t = 1; t <= T; ++t) {
    const double f = finite_value(spec, x, t);
    const double alpha_t = schedule.at(t);
    NormLog log;
    for (std::size_t i = 0; i < spec.m(); ++i) {
      log.l(spec.smooth_parts[i]->subgradient(x));
      log.r(spec.prox_parts[i]->subgradient(x));
    }
    if (t == T) {
      record(tr, x, f, alpha_t, 0.0, log);
      break;
    }
    Point next = incremental_cycle(x, alpha_t, spec, &log);
    record(tr, x, f, alpha_t, 0.0, log);
    x = std::move(next);
  }
  return tr;
}

DrStep douglas_rachford_step(const Point& x, double alpha_t, const FunctionOracle& l,
                             const FunctionOracle& r) {
  if (!l.has_prox() || !r.has_prox()) {
    throw ConfigError("Douglas-Rachford needs a prox for both l and r");
  }
  Point y = l.prox(alpha_t, x);
  Point z = r.prox(alpha_t, 2.0 * y - x);
  Point x_next = x + (z - y);
  return {std::move(x_next), std::move(y), std::move(z)};
}

RunTrace run_douglas_rachford(const ObjectiveSpec& spec, const Point& x1,
                              const StepSchedule& schedule, std::int64_t T) {
  require_single_component(spec, "Douglas-Rachford");
  require_T(T);
  schedule.validate();
  const FunctionOracle& l = *spec.smooth_parts.front();
  const FunctionOracle& r = *spec.prox_parts.front();
  if (!l.has_prox() || !r.has_prox()) {
    throw ConfigError("Douglas-Rachford needs a prox for both l and r");
  }
  RunTrace tr = start_trace("dr", schedule, 0.0, T, 0);
  Point x = x1;
  for (std::int64_t t = 1; t <= T; ++t) {
    const double f = finite_value(spec, x, t);
    const double alpha_t = schedule.at(t);
    NormLog log;
    log.l(l.subgradient(x));
    log.r(r.subgradient(x));
    if (t == T) {
      record(tr, x, f, alpha_t, 0.0, log);
      break;
    }
    DrStep step = douglas_rachford_step(x, alpha_t, l, r);
    // v ∈ ∂l(y), w ∈ ∂r(z) from the two prox optimality conditions.
    log.l((1.0 / alpha_t) * (x - step.y));
    log.r((1.0 / alpha_t) * ((2.0 * step.y - x) - step.z));
    record(tr, x, f, alpha_t, 0.0, log);
    tr.f_at_z.push_back(spec.value(step.z));
    tr.shadow_y.push_back(std::move(step.y));
    tr.shadow_z.push_back(std::move(step.z));
    x = std::move(step.x_next);
  }
  return tr;
}

}  // namespace splitcert::algorithms
