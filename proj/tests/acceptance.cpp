#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "splitcert/algorithms.hpp"
#include "splitcert/fejer.hpp"
#include "splitcert/oracles.hpp"
#include "splitcert/problems.hpp"
#include "splitcert/rates.hpp"
#include "splitcert/report.hpp"
#include "support.hpp"

using namespace splitcert;
using namespace splitcert::algorithms;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (budget_s > 0 && secs > budget_s) {
    o.pass = false;
    o.detail += " (over time budget)";
  }
  if (!o.pass) ++failures;
  std::printf("%s %2d %-28s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", id, name, secs,
              o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct Pair {
  const char* problem;
  const char* algo;
  const char* theorem;
  double alpha;
  double eps;
};

const Pair kPairs[] = {
    {"lasso_small", "fb", "thm32", 0.5, 1e-3},
    {"lasso_small", "fb-smooth", "prop33", 0.5, 0.0},
    {"hinge_m3", "inc", "thm37", 0.05, 0.0},
    {"hinge_m10", "inc", "thm37", 0.05, 0.0},
    {"lasso_small", "dr", "thm310", 0.5, 0.0},
};

report::RunConfig config_for(const Pair& p, std::int64_t T) {
  report::RunConfig c;
  c.problem_id = p.problem;
  c.algo = p.algo;
  c.alpha = p.alpha;
  c.theta = 0.5;
  c.eps = p.eps;
  c.T = T;
  c.seed = 7;
  return c;
}

std::vector<report::TraceBundle>& acceptance_runs() {
  static std::vector<report::TraceBundle> runs = [] {
    std::vector<report::TraceBundle> out;
    for (const auto& p : kPairs) out.push_back(report::execute(config_for(p, 10000)));
    return out;
  }();
  return runs;
}

bool same_trajectory(const RunTrace& a, const RunTrace& b) {
  return a.iterates == b.iterates && a.f_values == b.f_values &&
         a.alpha_values == b.alpha_values && a.eps_values == b.eps_values;
}

}  // namespace

int main() {
  criterion(1, "sum bound dominance", 1.0, [] {
    const double qs[] = {0, 0.25, 0.5, 0.75, 1, 1.5, 2, 3};
    double worst = INFINITY;
    for (double q : qs) {
      for (std::int64_t T = 3; T <= 2000; ++T) {
        double sum = 0.0;
        for (std::int64_t t = 1; t < T; ++t) {
          sum += std::pow(static_cast<double>(t), -q) / static_cast<double>(T - t);
        }
        worst = std::min(worst, rates::lemma25_bound(q, T) - sum);
      }
    }
    return Outcome{worst >= 0.0, fmt("min(bound - sum) = %.3g", worst)};
  });

  criterion(2, "c_theta spot values", 0.0, [] {
    const double c0 = 5.0 + 2.0 / (1.0 - 0.0);
    const double c2 = (std::pow(2.0, 2.0) + 3.0 * 2.0 - 1.0) / (2.0 - 1.0);
    const bool ok = rates::c_theta(1.0) == 9.0 && std::abs(rates::c_theta(0.0) - c0) <= 1e-15 &&
                    std::abs(rates::c_theta(2.0) - c2) <= 1e-15;
    return Outcome{ok, fmt("c(0)=%.17g", rates::c_theta(0.0)) +
                           fmt(" c(1)=%.17g", rates::c_theta(1.0)) +
                           fmt(" c(2)=%.17g", rates::c_theta(2.0))};
  });

  criterion(3, "polynomial vs exact bound", 10.0, [] {
    constexpr std::int64_t Tmax = 10000;
    Rng rng(2024);
    std::vector<double> inv(Tmax + 1, 0.0);
    for (std::int64_t k = 1; k <= Tmax; ++k) inv[k] = 1.0 / static_cast<double>(k);
    double worst = INFINITY;
    double agreement = 0.0;
    for (int s = 0; s < 50; ++s) {
      const rates::PolySchedule ps{rng.uniform(0.1, 5.0), rng.uniform(0.0, 0.9),
                                   rng.uniform(0.0, 5.0), rng.uniform(0.0, 3.0)};
      const double d_sq = rng.uniform(0.01, 10.0);
      std::vector<double> eta(Tmax), xi(Tmax);
      for (std::int64_t t = 1; t <= Tmax; ++t) {
        eta[t - 1] = ps.eta_at(t);
        xi[t - 1] = ps.xi_at(t);
      }
      for (std::int64_t T = 3; T <= Tmax; ++T) {
        double conv = 0.0;
        for (std::int64_t t = 1; t < T; ++t) conv += xi[t - 1] * inv[T - t];
        const double exact = (d_sq / static_cast<double>(T) + conv + xi[T - 1]) / eta[T - 1];
        const double poly = rates::bound_thm24(d_sq, ps, T);
        worst = std::min(worst, (poly - exact) / exact);
        if (T % 997 == 0) {
          const double lib = rates::bound_thm22(d_sq, std::span(eta).first(T),
                                                std::span(xi).first(T));
          agreement = std::max(agreement, std::abs(lib - exact) / exact);
        }
      }
    }
    return Outcome{worst >= 0.0 && agreement <= 1e-12,
                   fmt("min relative margin %.3g", worst) +
                       fmt(", exact-sum check %.2g", agreement)};
  });

  criterion(4, "fejer certificates", 60.0, [] {
    bool ok = true;
    std::string detail;
    const auto& runs = acceptance_runs();
    for (std::size_t k = 0; k < runs.size(); ++k) {
      fejer::CertifyOptions opt;
      opt.iterates = fejer::IterateTestPoints::All;
      const auto cert = report::certify_bundle(runs[k], "auto", std::nullopt, opt);
      ok = ok && cert.pass && cert.min_rel_slack >= -1e-9 && !cert.conditional;
      detail += std::string(kPairs[k].problem) + "/" + kPairs[k].algo +
                fmt(" %.2g; ", cert.min_rel_slack);
    }
    return Outcome{ok, detail};
  });

  criterion(5, "rate envelopes", 0.0, [] {
    bool ok = true;
    std::string detail;
    const auto& runs = acceptance_runs();
    for (std::size_t k = 0; k < runs.size(); ++k) {
      const auto rep = report::bounds(runs[k], kPairs[k].theorem, std::nullopt);
      ok = ok && !rep.first_violation_T && rep.T.back() == 10000;
      detail += std::string(kPairs[k].theorem) + fmt(" %.2g; ", rep.max_ratio);
    }
    return Outcome{ok, "max ratio " + detail};
  });

  criterion(6, "smooth 1/T rate", 0.0, [] {
    const auto& p = problems::find_problem("lasso_small");
    const double beta = *p.beta_analytic;
    const double d_sq = p.d_sq();
    const auto tr = run_smooth_fb(p.spec, p.x1, 1000);
    const double gap = tr.f_values[999] - p.f_star;
    double worst = -INFINITY;
    for (std::int64_t T = 10; T <= 1000; ++T) {
      worst = std::max(worst, static_cast<double>(T) * (tr.f_values[T - 1] - p.f_star));
    }
    const bool ok = gap <= beta * d_sq / 2000.0 && worst <= beta * d_sq / 2.0;
    return Outcome{ok, fmt("gap(1000) = %.3g", gap) + fmt(" vs %.3g", beta * d_sq / 2000.0) +
                           fmt(", max T*gap = %.3g", worst) + fmt(" vs %.3g", beta * d_sq / 2.0)};
  });

  criterion(7, "last vs best iterate slope", 30.0, [] {
    const auto s = report::slope(acceptance_runs()[0], 1.0);
    const bool ok = !s.converged && s.last_iterate_slope >= -0.75 &&
                    s.last_iterate_slope <= -0.35 &&
                    std::abs(s.last_iterate_slope - s.best_iterate_slope) <= 0.1;
    return Outcome{ok, fmt("last %.4f", s.last_iterate_slope) +
                           fmt(", best %.4f", s.best_iterate_slope)};
  });

  criterion(8, "reductions are bit exact", 0.0, [] {
    const auto& lasso = problems::find_problem("lasso_small");
    const bool inc_fb = same_trajectory(run_incremental(lasso.spec, lasso.x1, {0.5, 0.5}, 10000),
                                        run_forward_backward(lasso.spec, lasso.x1, {0.5, 0.5},
                                                             0.0, 10000, 7));
    bool fb_ps = true;
    for (const char* id : {"box_l1", "abs_box_1d"}) {
      const auto& p = problems::find_problem(id);
      fb_ps = fb_ps &&
              same_trajectory(run_forward_backward(p.spec, p.x1, {0.2, 0.5}, 1e-3, 10000, 7),
                              run_projected_subgradient(p.spec, p.x1, {0.2, 0.5}, 1e-3, 10000, 7));
    }
    return Outcome{inc_fb && fb_ps, std::string("inc(m=1)==fb: ") + (inc_fb ? "yes" : "no") +
                                        ", fb(box)==psg: " + (fb_ps ? "yes" : "no")};
  });

  criterion(9, "oracle properties", 10.0, [] {
    using namespace testsupport;
    Rng rng(99);
    double prox_opt = INFINITY, nonexp = INFINITY, idem = INFINITY, eps_sub = INFINITY;
    for (int k = 0; k < 1000; ++k) {
      const std::size_t dim = random_dim(rng, 6);
      const auto f = random_prox_oracle(rng, dim);
      const double lambda = std::pow(10.0, rng.uniform(-2.0, 1.0));
      const Point x = random_point(rng, dim, 2.0);
      prox_opt = std::min(prox_opt, prox_optimality_slack(rng, *f, lambda, x, 20));
      nonexp = std::min(nonexp, nonexpansive_slack(*f, lambda, x, random_point(rng, dim, 2.0)));
    }
    for (int k = 0; k < 1000; ++k) {
      const std::size_t dim = random_dim(rng, 6);
      const auto set = rng.uniform() < 0.5
                           ? random_box(rng, dim)
                           : make_ball_indicator(random_point(rng, dim, 1.0), rng.uniform(0.1, 3.0));
      const Point p = set->prox(1.0, random_point(rng, dim, 3.0));
      idem = std::min(idem, -std::sqrt(dist_sq(set->prox(1.0, p), p)));
    }
    for (int k = 0; k < 1000; ++k) {
      const std::size_t dim = random_dim(rng, 6);
      const auto f = random_subgradient_oracle(rng, dim);
      const Point x = random_point(rng, dim, 2.0);
      const Point y = axpy(x, std::pow(10.0, rng.uniform(-4.0, 0.0)), rng.unit_vector(dim));
      const auto es = eps_subgradient_at_shifted_point(*f, x, y);
      eps_sub = std::min(eps_sub, eps_subgradient_slack(rng, *f, x, es, 20));
    }
    const double worst = std::min({prox_opt, nonexp, idem, eps_sub});
    return Outcome{worst >= -1e-9, fmt("prox %.2g", prox_opt) + fmt(", nonexpansive %.2g", nonexp) +
                                       fmt(", idempotent %.2g", idem) +
                                       fmt(", eps-subgradient %.2g", eps_sub)};
  });

  criterion(10, "determinism", 0.0, [] {
    bool ok = true;
    const auto& runs = acceptance_runs();
    for (std::size_t k = 0; k < runs.size(); ++k) {
      const auto again = report::execute(config_for(kPairs[k], 10000));
      ok = ok && report::trace_csv(again) == report::trace_csv(runs[k]) &&
           report::iterates_csv(again) == report::iterates_csv(runs[k]) &&
           report::sidecar_json(again) == report::sidecar_json(runs[k]);
    }
    return Outcome{ok, ok ? "all reruns byte identical" : "outputs differ"};
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
