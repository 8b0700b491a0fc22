#include "splitcert/problems.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include <json.hpp>

#include "splitcert/algorithms.hpp"
#include "splitcert/errors.hpp"
#include "splitcert/oracles.hpp"

namespace splitcert::problems {

namespace {

using nlohmann::ordered_json;

constexpr double kProbeTolerance = 1e-8;
constexpr std::int64_t kProbeCount = 1000;

Eigen::MatrixXd gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd M(rows, cols);
  // Column-major fill order, fixed.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = rng.normal();
  }
  return M;
}

Eigen::MatrixXd orthonormal_q(const Eigen::MatrixXd& M) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(M.rows(), M.cols());
  return Q;
}

Point eigen_point(const Eigen::VectorXd& v) { return Point::from_eigen(v); }

Eigen::MatrixXd scalar_matrix(double v) { return Eigen::MatrixXd::Constant(1, 1, v); }
Eigen::VectorXd scalar_vector(double v) { return Eigen::VectorXd::Constant(1, v); }

// ---- generators ---------------------------------------------------------------

// Lasso with a geometric singular spectrum and a dense, strictly positive
// solution. V's first column is 1/√n, so b = A x* + λ√n/σ₁ u₁ makes x* satisfy
// Aᵀ(A x* − b) = −λ·1 exactly. The start offsets x* along V·1, giving every
// spectral direction the same initial weight.
Problem make_lasso_small() {
  constexpr Eigen::Index n = 30;
  constexpr double lambda = 0.1;
  constexpr double sigma_min = 1e-2;
  constexpr double start_offset = 0.3;
  Problem p;
  p.id = "lasso_small";
  p.description = "1/2||Ax-b||^2 + lambda||x||_1, n=30, singular values geometric in [1e-2, 1]";
  p.seed = 0x1A5501;
  Rng rng(p.seed);

  Eigen::MatrixXd MV = gaussian_matrix(rng, n, n);
  MV.col(0).setOnes();
  Eigen::MatrixXd V = orthonormal_q(MV);
  if (V(0, 0) < 0.0) V.col(0) *= -1.0;
  Eigen::MatrixXd U = orthonormal_q(gaussian_matrix(rng, n, n));
  Eigen::VectorXd sigma(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    sigma[k] = std::pow(sigma_min, static_cast<double>(k) / static_cast<double>(n - 1));
  }
  Eigen::MatrixXd A = U * sigma.asDiagonal() * V.transpose();
  Eigen::VectorXd x_star(n);
  for (Eigen::Index i = 0; i < n; ++i) x_star[i] = rng.uniform(0.5, 1.5);
  Eigen::VectorXd b =
      A * x_star + (lambda * std::sqrt(static_cast<double>(n)) / sigma[0]) * U.col(0);
  const Eigen::VectorXd x1 = x_star - start_offset * (V * Eigen::VectorXd::Ones(n));

  p.spec.smooth_parts = {make_least_squares(A, b)};
  p.spec.prox_parts = {make_l1(static_cast<std::size_t>(n), lambda)};
  p.x1 = eigen_point(x1);
  auto ref = solve_lasso(A, b, lambda, p.x1, 20000);
  p.x_ref = ref.x;
  p.f_star = p.spec.value(p.x_ref);
  p.reference_method = ref.method;
  p.reference_residual = ref.residual;
  p.beta_analytic = p.spec.smooth_parts.front()->smoothness_bound();
  p.caps = {true, true, false, false};
  p.algorithms = {"fb", "fb-smooth", "inc", "dr"};
  p.params_json = ordered_json{{"n", n}, {"rows", n}, {"lambda", lambda},
                               {"sigma_min", sigma_min}, {"start_offset", start_offset}}
                      .dump();
  return p;
}

// λ ≥ ‖Aᵀb‖∞ forces the zero solution.
Problem make_lasso_zero() {
  constexpr Eigen::Index rows = 20, n = 10;
  Problem p;
  p.id = "lasso_zero";
  p.description = "1/2||Ax-b||^2 + lambda||x||_1 with lambda = 1.1 ||A^T b||_inf (x_ref = 0)";
  p.seed = 0x1A5502;
  Rng rng(p.seed);
  Eigen::MatrixXd A = gaussian_matrix(rng, rows, n) / std::sqrt(static_cast<double>(rows));
  Eigen::VectorXd b = gaussian_matrix(rng, rows, 1).col(0);
  const double lambda = 1.1 * (A.transpose() * b).cwiseAbs().maxCoeff();
  const Eigen::VectorXd x1 = gaussian_matrix(rng, n, 1).col(0);

  p.spec.smooth_parts = {make_least_squares(A, b)};
  p.spec.prox_parts = {make_l1(static_cast<std::size_t>(n), lambda)};
  p.x1 = eigen_point(x1);
  auto ref = solve_lasso(A, b, lambda, p.x1, 20000);
  p.x_ref = ref.x;
  p.f_star = p.spec.value(p.x_ref);
  p.reference_method = ref.method;
  p.reference_residual = ref.residual;
  p.beta_analytic = p.spec.smooth_parts.front()->smoothness_bound();
  p.caps = {true, true, false, false};
  p.algorithms = {"fb", "fb-smooth", "inc", "dr"};
  p.params_json = ordered_json{{"n", n}, {"rows", rows}, {"lambda", lambda}}.dump();
  return p;
}

// ‖x − a‖₁ + ι_{[−1,1]^n}; separable, so each coordinate is a 1-D problem.
Problem make_box_l1() {
  constexpr std::size_t n = 10;
  Problem p;
  p.id = "box_l1";
  p.description = "||x - a||_1 + indicator of [-1,1]^n, n=10, a in [-0.9,0.9]^n";
  p.seed = 0xB0C1;
  Rng rng(p.seed);
  std::vector<double> a(n), x1(n);
  for (auto& v : a) v = rng.uniform(-0.9, 0.9);
  for (auto& v : x1) v = rng.uniform(-1.0, 1.0);

  p.spec.smooth_parts = {make_shifted_l1(Point(a))};
  p.spec.prox_parts = {make_box_indicator(std::vector<double>(n, -1.0),
                                          std::vector<double>(n, 1.0))};
  p.x1 = Point(x1);
  std::vector<double> xr(n);
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ai = a[i];
    auto fi = [ai](double x) { return std::abs(x - ai); };
    xr[i] = golden_section_1d(fi, -1.0, 1.0);
    const double xg = grid_search_1d(fi, -1.0, 1.0);
    residual = std::max(residual, std::abs(fi(xr[i]) - fi(xg)));
  }
  p.x_ref = Point(xr);
  p.f_star = p.spec.value(p.x_ref);
  p.reference_method = "golden_section+grid per coordinate";
  p.reference_residual = residual;
  p.B_analytic = std::sqrt(static_cast<double>(n));
  p.caps = {true, true, true, false};
  p.algorithms = {"psg", "fb", "inc"};
  p.params_json = ordered_json{{"n", n}, {"a_range", 0.9}, {"box", 1.0}}.dump();
  return p;
}

// Σ_i [hinge block i + (μ/2m)‖x‖²], 30 samples in R^5 split into m blocks.
Problem make_hinge_sum(std::int64_t m) {
  constexpr Eigen::Index samples = 30, n = 5;
  constexpr double mu = 0.1;
  constexpr double flip = 0.2;
  Problem p;
  p.id = "hinge_m" + std::to_string(m);
  p.description = "sum of hinge losses + (mu/2)||x||^2 split into m components";
  p.seed = 0x41E6E;  // same data for every m
  Rng rng(p.seed);
  const Eigen::VectorXd w = gaussian_matrix(rng, n, 1).col(0);
  Eigen::MatrixXd F = gaussian_matrix(rng, samples, n);
  Eigen::VectorXd y(samples);
  for (Eigen::Index j = 0; j < samples; ++j) {
    double label = F.row(j).dot(w) >= 0.0 ? 1.0 : -1.0;
    if (rng.uniform() < flip) label = -label;
    y[j] = label;
  }
  for (std::int64_t i = 0; i < m; ++i) {
    const Eigen::Index lo = static_cast<Eigen::Index>(i * samples / m);
    const Eigen::Index hi = static_cast<Eigen::Index>((i + 1) * samples / m);
    p.spec.smooth_parts.push_back(
        make_hinge_block(F.middleRows(lo, hi - lo), y.segment(lo, hi - lo)));
    p.spec.prox_parts.push_back(
        make_squared_norm(static_cast<std::size_t>(n), mu / static_cast<double>(m)));
  }
  p.x1 = Point::zeros(static_cast<std::size_t>(n));
  auto ref = solve_hinge(F, y, mu, 200000);
  p.x_ref = ref.x;
  p.f_star = p.spec.value(p.x_ref);
  p.reference_method = ref.method;
  p.reference_residual = ref.residual;
  p.caps = {false, true, false, m > 1};
  p.algorithms = {"inc"};
  p.params_json = ordered_json{{"n", n}, {"samples", samples}, {"m", m}, {"mu", mu},
                               {"label_flip", flip}}
                      .dump();
  return p;
}

Problem one_dim(std::string id, std::string description, std::vector<OraclePtr> ls,
                std::vector<OraclePtr> rs, double x1, std::vector<std::string> algos,
                Capabilities caps, std::optional<double> B) {
  Problem p;
  p.id = std::move(id);
  p.description = std::move(description);
  p.spec.smooth_parts = std::move(ls);
  p.spec.prox_parts = std::move(rs);
  p.x1 = Point{x1};
  auto ref = reference_solve(p.spec, p.x1, 0);
  p.x_ref = ref.x;
  p.f_star = p.spec.value(p.x_ref);
  p.reference_method = ref.method;
  p.reference_residual = ref.residual;
  p.B_analytic = B;
  if (p.spec.m() == 1) p.beta_analytic = p.spec.smooth_parts.front()->smoothness_bound();
  p.caps = caps;
  p.algorithms = std::move(algos);
  p.params_json = ordered_json{{"n", 1}, {"m", p.spec.m()}}.dump();
  return p;
}

std::vector<Problem> one_dim_suite() {
  std::vector<Problem> out;
  out.push_back(one_dim("quad_abs_1d", "1/2(x-2)^2 + |x|",
                        {make_least_squares(scalar_matrix(1.0), scalar_vector(2.0))},
                        {make_l1(1, 1.0)}, 0.0, {"fb", "fb-smooth", "inc", "dr"},
                        {true, true, false, false}, std::nullopt));
  out.push_back(one_dim("abs_box_1d", "|x| + indicator of [-1,1]", {make_l1(1, 1.0)},
                        {make_box_indicator({-1.0}, {1.0})}, 0.5, {"psg", "fb", "inc"},
                        {true, true, true, false}, 1.0));
  out.push_back(one_dim("two_quad_1d", "1/2(x-1)^2 + 1/2(x+1)^2 as m=2 components",
                        {make_least_squares(scalar_matrix(1.0), scalar_vector(1.0)),
                         make_least_squares(scalar_matrix(1.0), scalar_vector(-1.0))},
                        {make_zero(1), make_zero(1)}, 2.0, {"inc"},
                        {true, true, false, true}, std::nullopt));
  return out;
}

struct Catalog {
  std::vector<Problem> problems;
  std::vector<std::string> rejected;
};

Catalog build_catalog() {
  std::vector<Problem> candidates;
  candidates.push_back(make_lasso_small());
  candidates.push_back(make_lasso_zero());
  candidates.push_back(make_box_l1());
  candidates.push_back(make_hinge_sum(3));
  candidates.push_back(make_hinge_sum(10));
  for (auto& p : one_dim_suite()) candidates.push_back(std::move(p));

  Catalog c;
  for (auto& p : candidates) {
    p.probe_min_slack = optimality_probe_slack(p.spec, p.x_ref, kProbeCount, p.seed ^ 0x9E37);
    if (p.probe_min_slack >= -kProbeTolerance) {
      c.problems.push_back(std::move(p));
    } else {
      std::cerr << "splitcert: rejecting problem " << p.id << " (probe slack "
                << p.probe_min_slack << ")\n";
      c.rejected.push_back(p.id);
    }
  }
  return c;
}

const Catalog& the_catalog() {
  static const Catalog c = build_catalog();
  return c;
}

}  // namespace

bool Problem::allows(std::string_view algo) const {
  return std::find(algorithms.begin(), algorithms.end(), algo) != algorithms.end();
}

std::string Problem::descriptor_json() const {
  ordered_json j;
  j["id"] = id;
  j["description"] = description;
  j["dimension"] = x1.dim();
  j["m"] = spec.m();
  j["seed"] = seed;
  j["parameters"] = ordered_json::parse(params_json);
  j["algorithms"] = algorithms;
  j["capabilities"] = {{"prox_l", caps.prox_l},
                       {"prox_r", caps.prox_r},
                       {"projectable_D", caps.projectable_D},
                       {"separable_m", caps.separable_m}};
  j["B_analytic"] = B_analytic ? ordered_json(*B_analytic) : ordered_json(nullptr);
  j["beta_analytic"] = beta_analytic ? ordered_json(*beta_analytic) : ordered_json(nullptr);
  j["f_star"] = f_star;
  j["d_sq"] = d_sq();
  j["reference_method"] = reference_method;
  j["reference_residual"] = reference_residual;
  j["probe_min_slack"] = probe_min_slack;
  return j.dump();
}

const std::vector<Problem>& catalog() { return the_catalog().problems; }

const std::vector<std::string>& rejected() { return the_catalog().rejected; }

const Problem& find_problem(std::string_view id) {
  for (const auto& p : catalog()) {
    if (p.id == id) return p;
  }
  throw ConfigError("unknown problem id '" + std::string(id) + "'");
}

// ---- reference oracles ------------------------------------------------------------

double golden_section_1d(const std::function<double(double)>& f, double lo, double hi,
                         double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol * (1.0 + std::abs(lo) + std::abs(hi))) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  // The bracket endpoints themselves may be optimal (constrained minima).
  double best = 0.5 * (lo + hi);
  double fbest = f(best);
  for (double cand : {lo, hi}) {
    const double fv = f(cand);
    if (fv < fbest) {
      best = cand;
      fbest = fv;
    }
  }
  return best;
}

double grid_search_1d(const std::function<double(double)>& f, double lo, double hi,
                      double tol) {
  constexpr int kPoints = 1001;
  double best = lo;
  while (hi - lo > tol * (1.0 + std::abs(lo) + std::abs(hi))) {
    const double h = (hi - lo) / (kPoints - 1);
    int arg = 0;
    double fbest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kPoints; ++i) {
      const double fv = f(lo + h * i);
      if (fv < fbest) {
        fbest = fv;
        arg = i;
      }
    }
    best = lo + h * arg;
    const double new_lo = std::max(lo, best - h);
    const double new_hi = std::min(hi, best + h);
    if (new_hi - new_lo >= hi - lo) break;
    lo = new_lo;
    hi = new_hi;
  }
  return best;
}

ReferenceSolution reference_solve(const ObjectiveSpec& spec, const Point& x1,
                                  std::int64_t budget) {
  spec.validate();
  if (spec.dim() == 1) {
    auto f = [&spec](double x) { return spec.value(Point{x}); };
    double lo = x1[0] - 100.0, hi = x1[0] + 100.0;
    for (const auto& r : spec.prox_parts) {
      if (r->is_indicator()) {
        lo = r->prox(1.0, Point{lo})[0];
        hi = r->prox(1.0, Point{hi})[0];
      }
    }
    const double xg = golden_section_1d(f, lo, hi);
    const double xs = grid_search_1d(f, lo, hi);
    return {Point{xg}, f(xg), "golden_section+grid", std::abs(f(xg) - f(xs))};
  }
  const auto beta = spec.m() == 1 ? spec.smooth_parts.front()->smoothness_bound()
                                  : std::optional<double>{};
  if (beta && *beta > 0.0 && spec.prox_parts.front()->has_prox()) {
    const auto& l = *spec.smooth_parts.front();
    const auto& r = *spec.prox_parts.front();
    const double step = 1.0 / *beta;
    Point x = x1;
    double last_move = std::numeric_limits<double>::infinity();
    for (std::int64_t k = 0; k < budget; ++k) {
      Point next = r.prox(step, axpy(x, -step, l.subgradient(x)));
      last_move = std::sqrt(dist_sq(next, x));
      x = std::move(next);
      if (last_move <= 1e-15 * (1.0 + norm(x))) break;
    }
    return {x, spec.value(x), "constant_step_fb", last_move};
  }
  // Nonsmooth fallback: diminishing-step forward-backward keeping the best point.
  const RunTrace tr =
      spec.m() == 1
          ? algorithms::run_forward_backward(spec, x1, {0.1, 0.5}, 0.0, std::max<std::int64_t>(budget, 2), 0)
          : algorithms::run_incremental(spec, x1, {0.1, 0.5}, std::max<std::int64_t>(budget, 2));
  const auto [t, fv] = algorithms::best_iterate(tr);
  return {tr.iterates[static_cast<std::size_t>(t - 1)], fv, "best_iterate_subgradient",
          std::numeric_limits<double>::infinity()};
}

ReferenceSolution solve_lasso(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                              double lambda, const Point& x1, std::int64_t budget) {
  const Eigen::Index n = A.cols();
  const Eigen::MatrixXd H = A.transpose() * A;
  const Eigen::VectorXd c = A.transpose() * b;
  const double beta = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H, Eigen::EigenvaluesOnly)
                          .eigenvalues()
                          .maxCoeff();
  const double step = 1.0 / beta;

  auto kkt_violation = [&](const Eigen::VectorXd& x) {
    const Eigen::VectorXd grad = H * x - c;
    double v = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (x[i] != 0.0) {
        v = std::max(v, std::abs(grad[i] + lambda * (x[i] > 0 ? 1.0 : -1.0)));
      } else {
        v = std::max(v, std::max(0.0, std::abs(grad[i]) - lambda));
      }
    }
    return v;
  };

  Eigen::VectorXd x = x1.as_eigen();
  Eigen::VectorXd best = x;
  double best_kkt = kkt_violation(x);
  for (int round = 0; round < 8; ++round) {
    for (std::int64_t k = 0; k < budget; ++k) {
      Eigen::VectorXd v = x - step * (H * x - c);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double a = std::abs(v[i]) - step * lambda;
        x[i] = a > 0.0 ? std::copysign(a, v[i]) : 0.0;
      }
    }
    // Polish: solve the normal equations on the current support with its signs.
    std::vector<Eigen::Index> support;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (x[i] != 0.0) support.push_back(i);
    }
    Eigen::VectorXd polished = Eigen::VectorXd::Zero(n);
    if (!support.empty()) {
      const auto s = static_cast<Eigen::Index>(support.size());
      Eigen::MatrixXd Hs(s, s);
      Eigen::VectorXd rhs(s);
      for (Eigen::Index i = 0; i < s; ++i) {
        for (Eigen::Index j = 0; j < s; ++j) Hs(i, j) = H(support[i], support[j]);
        rhs[i] = c[support[i]] - lambda * (x[support[i]] > 0 ? 1.0 : -1.0);
      }
      const Eigen::VectorXd xs = Hs.ldlt().solve(rhs);
      bool signs_ok = true;
      for (Eigen::Index i = 0; i < s; ++i) {
        polished[support[i]] = xs[i];
        if (xs[i] * x[support[i]] <= 0.0) signs_ok = false;
      }
      if (!signs_ok) polished = x;
    }
    const double viol = kkt_violation(polished);
    if (viol < best_kkt) {
      best_kkt = viol;
      best = polished;
    }
    if (best_kkt <= 1e-12) break;
  }
  const Point xr = Point::from_eigen(best);
  const Eigen::VectorXd r = A * best - b;
  return {xr, 0.5 * r.squaredNorm() + lambda * best.cwiseAbs().sum(), "ista+active_set_polish",
          best_kkt};
}

ReferenceSolution solve_hinge(const Eigen::MatrixXd& F, const Eigen::VectorXd& y, double mu,
                              std::int64_t max_sweeps) {
  const Eigen::Index N = F.rows();
  const double C = 1.0 / mu;
  Eigen::VectorXd dual = Eigen::VectorXd::Zero(N);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(F.cols());
  const Eigen::VectorXd q = F.rowwise().squaredNorm();

  // Scaled problem ½‖w‖² + C Σ hinge; the original objective is μ times it.
  auto gap_of = [&](const Eigen::VectorXd& wv, const Eigen::VectorXd& dv) {
    const Eigen::VectorXd margins = y.cwiseProduct(F * wv);
    double hinge = 0.0;
    for (Eigen::Index j = 0; j < N; ++j) hinge += std::max(0.0, 1.0 - margins[j]);
    const double primal = 0.5 * wv.squaredNorm() + C * hinge;
    const double dual_value = dv.sum() - 0.5 * wv.squaredNorm();
    return std::pair{primal - dual_value, primal};
  };

  double gap = std::numeric_limits<double>::infinity();
  for (std::int64_t sweep = 0; sweep < max_sweeps; ++sweep) {
    for (Eigen::Index j = 0; j < N; ++j) {
      if (q[j] == 0.0) continue;
      const double grad = y[j] * F.row(j).dot(w) - 1.0;
      const double next = std::clamp(dual[j] - grad / q[j], 0.0, C);
      if (next != dual[j]) {
        w += (next - dual[j]) * y[j] * F.row(j).transpose();
        dual[j] = next;
      }
    }
    if (sweep % 16 == 15) {
      w = F.transpose() * dual.cwiseProduct(y);
      const auto [g, primal] = gap_of(w, dual);
      gap = g;
      if (g <= 1e-14 * std::max(1.0, primal)) break;
    }
  }
  w = F.transpose() * dual.cwiseProduct(y);
  gap = gap_of(w, dual).first;
  const Point x = Point::from_eigen(w);
  const Eigen::VectorXd margins = y.cwiseProduct(F * w);
  double hinge = 0.0;
  for (Eigen::Index j = 0; j < N; ++j) hinge += std::max(0.0, 1.0 - margins[j]);
  return {x, 0.5 * mu * w.squaredNorm() + hinge, "dual_coordinate_ascent", mu * std::max(gap, 0.0)};
}

double optimality_probe_slack(const ObjectiveSpec& spec, const Point& x_ref,
                              std::int64_t probes, std::uint64_t seed) {
  Rng rng(seed);
  const double f_ref = spec.value(x_ref);
  if (!std::isfinite(f_ref)) throw DomainError("optimality probe: f(x_ref) is infinite");
  double worst = std::numeric_limits<double>::infinity();
  for (std::int64_t k = 0; k < probes; ++k) {
    const double radius = std::pow(10.0, rng.uniform(-6.0, 1.0));
    Point y = axpy(x_ref, radius, rng.unit_vector(x_ref.dim()));
    for (const auto& r : spec.prox_parts) {
      if (r->is_indicator()) y = r->prox(1.0, y);
    }
    worst = std::min(worst, spec.value(y) - f_ref);
  }
  return worst;
}

}  // namespace splitcert::problems
