#include "splitcert/fejer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "splitcert/errors.hpp"

namespace splitcert::fejer {

namespace {

constexpr std::int64_t kGramBlock = 256;

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

CertificateConstants step_weighted(std::span<const double> alphas, double xi_coef,
                                   Provenance p) {
  CertificateConstants c;
  c.provenance = p;
  c.eta.reserve(alphas.size());
  c.xi.reserve(alphas.size());
  for (double a : alphas) {
    c.eta.push_back(2.0 * a);
    c.xi.push_back(xi_coef * a * a);
  }
  return c;
}

std::vector<std::int64_t> iterate_indices(std::int64_t T, const CertifyOptions& opt) {
  IterateTestPoints policy = opt.iterates;
  if (policy == IterateTestPoints::Auto) {
    policy = T <= opt.thinning_threshold ? IterateTestPoints::All : IterateTestPoints::Geometric;
  }
  std::vector<std::int64_t> idx;
  switch (policy) {
    case IterateTestPoints::All:
      idx.resize(static_cast<std::size_t>(T));
      for (std::int64_t k = 0; k < T; ++k) idx[static_cast<std::size_t>(k)] = k;
      break;
    case IterateTestPoints::Geometric:
      for (std::int64_t t = 1; t <= T; t *= 2) idx.push_back(t - 1);
      if (idx.back() != T - 1) idx.push_back(T - 1);
      break;
    default:
      break;
  }
  return idx;
}

struct Tracker {
  double min_slack = std::numeric_limits<double>::infinity();
  double min_rel = std::numeric_limits<double>::infinity();
  std::int64_t argmin_t = 0;
  std::int64_t argmin_point = -1;  // >= 0: explicit point; < -1: iterate -(k + 2)
  std::vector<double> step_min;

  void add(std::int64_t k, double slack, double d1, std::int64_t point_code) {
    const double rel = slack / std::max(1.0, d1);
    min_slack = std::min(min_slack, slack);
    auto& s = step_min[static_cast<std::size_t>(k)];
    s = std::min(s, rel);
    if (rel < min_rel) {
      min_rel = rel;
      argmin_t = k + 1;
      argmin_point = point_code;
    }
  }
};

}  // namespace

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::FbThm32: return "FB_thm32";
    case Provenance::PsThm35: return "PS_thm35";
    case Provenance::IncThm37: return "INC_thm37";
    case Provenance::DrThm310: return "DR_thm310";
    case Provenance::SmoothProp33: return "SMOOTH_prop33";
    case Provenance::Custom: return "CUSTOM";
  }
  return "CUSTOM";
}

Provenance provenance_from_string(std::string_view name) {
  const std::string n = lower(name);
  for (auto p : {Provenance::FbThm32, Provenance::PsThm35, Provenance::IncThm37,
                 Provenance::DrThm310, Provenance::SmoothProp33, Provenance::Custom}) {
    if (n == lower(to_string(p))) return p;
  }
  throw ConfigError("unknown constants provenance '" + std::string(name) + "'");
}

CertificateConstants fb_constants(std::span<const double> alphas, double B, double eps) {
  return step_weighted(alphas, 10.0 * B * B + 2.0 * eps, Provenance::FbThm32);
}

CertificateConstants ps_constants(std::span<const double> alphas, double B, double eps) {
  return step_weighted(alphas, 10.0 * B * B + 2.0 * eps, Provenance::PsThm35);
}

CertificateConstants inc_constants(std::span<const double> alphas, std::int64_t m, double B) {
  const double md = static_cast<double>(m);
  return step_weighted(alphas, (4.0 * md + 5.0) * md * B * B, Provenance::IncThm37);
}

CertificateConstants dr_constants(std::span<const double> alphas, double B) {
  return step_weighted(alphas, 16.0 * B * B, Provenance::DrThm310);
}

CertificateConstants smooth_constants(double beta, std::int64_t T) {
  if (!(beta > 0.0)) throw ContractError("smooth_constants: beta must be > 0");
  CertificateConstants c;
  c.provenance = Provenance::SmoothProp33;
  c.value_lag = 1;
  c.eta.assign(static_cast<std::size_t>(T), 2.0 / beta);
  c.xi.assign(static_cast<std::size_t>(T), 0.0);
  return c;
}

FejerCertificate certify(const RunTrace& trace, const CertificateConstants& constants,
                         std::span<const TestPoint> test_points, const CertifyOptions& options) {
  const std::int64_t T = trace.T();
  if (T < 2) throw ContractError("certify: trace needs at least two iterates");
  if (trace.f_values.size() != trace.iterates.size()) {
    throw ContractError("certify: f_values length differs from iterates");
  }
  const auto steps = static_cast<std::size_t>(T - 1);
  if (constants.eta.size() < steps || constants.xi.size() < steps) {
    throw ContractError("certify: constants cover " + std::to_string(constants.eta.size()) +
                        " steps, trace needs " + std::to_string(steps));
  }
  if (constants.value_lag != 0 && constants.value_lag != 1) {
    throw ContractError("certify: value_lag must be 0 or 1");
  }
  for (const auto& p : test_points) {
    require_same_dim(p.x, trace.iterates.front());
    if (!std::isfinite(p.f)) throw DomainError("certify: test point '" + p.id + "' has f = inf");
  }
  for (double fv : trace.f_values) {
    if (!std::isfinite(fv)) throw DomainError("certify: trace visits a point with f = inf");
  }

  const auto& X = trace.iterates;
  const auto& f = trace.f_values;
  const auto lag = static_cast<std::size_t>(constants.value_lag);
  Tracker tr;
  tr.step_min.assign(steps, std::numeric_limits<double>::infinity());

  // Explicit points: distances computed directly.
  for (std::size_t s = 0; s < test_points.size(); ++s) {
    const auto& p = test_points[s];
    double d_next = dist_sq(X[0], p.x);
    for (std::size_t k = 0; k < steps; ++k) {
      const double d1 = d_next;
      d_next = dist_sq(X[k + 1], p.x);
      const double slack =
          d1 - constants.eta[k] * (f[k + lag] - p.f) + constants.xi[k] - d_next;
      tr.add(static_cast<std::int64_t>(k), slack, d1, static_cast<std::int64_t>(s));
    }
  }

  // Iterate points: ‖x_t − x_s‖² = ‖x_t‖² − 2⟨x_t, x_s⟩ + ‖x_s‖² from a
  // blocked Gram product.
  const auto idx = iterate_indices(T, options);
  if (!idx.empty()) {
    const auto n = static_cast<Eigen::Index>(X.front().dim());
    Eigen::MatrixXd XM(T, n);
    Eigen::VectorXd sq(T);
    for (std::int64_t k = 0; k < T; ++k) {
      XM.row(k) = X[static_cast<std::size_t>(k)].as_eigen().transpose();
      sq[k] = norm_sq(X[static_cast<std::size_t>(k)]);
    }
    for (std::size_t b0 = 0; b0 < idx.size(); b0 += kGramBlock) {
      const std::size_t b1 = std::min(idx.size(), b0 + static_cast<std::size_t>(kGramBlock));
      const auto P = static_cast<Eigen::Index>(b1 - b0);
      Eigen::MatrixXd S(n, P);
      for (Eigen::Index j = 0; j < P; ++j) S.col(j) = XM.row(idx[b0 + j]).transpose();
      const Eigen::MatrixXd G = XM * S;
      for (Eigen::Index j = 0; j < P; ++j) {
        const std::int64_t s = idx[b0 + j];
        const double fs = f[static_cast<std::size_t>(s)];
        const double ss = sq[s];
        double d_next = std::max(0.0, sq[0] - 2.0 * G(0, j) + ss);
        for (std::size_t k = 0; k < steps; ++k) {
          const double d1 = d_next;
          const auto kk = static_cast<Eigen::Index>(k + 1);
          d_next = std::max(0.0, sq[kk] - 2.0 * G(kk, j) + ss);
          const double slack =
              d1 - constants.eta[k] * (f[k + lag] - fs) + constants.xi[k] - d_next;
          tr.add(static_cast<std::int64_t>(k), slack, d1, -(s + 2));
        }
      }
    }
  }

  FejerCertificate cert;
  cert.provenance = constants.provenance;
  cert.value_lag = constants.value_lag;
  cert.tol_rel = options.tol_rel;
  cert.test_point_count = test_points.size() + idx.size();
  cert.step_min_rel_slack = std::move(tr.step_min);

  cert.eq3_min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < steps; ++k) {
    const double s = constants.xi[k] - dist_sq(X[k + 1], X[k]);
    if (s < cert.eq3_min_slack) {
      cert.eq3_min_slack = s;
      cert.eq3_argmin_t = static_cast<std::int64_t>(k) + 1;
    }
  }

  if (cert.test_point_count == 0) {
    throw ContractError("certify: no test points (the reference minimizer is required)");
  }
  cert.min_slack = tr.min_slack;
  cert.min_rel_slack = tr.min_rel;
  cert.argmin_t = tr.argmin_t;
  if (tr.argmin_point >= 0) {
    cert.argmin_point = test_points[static_cast<std::size_t>(tr.argmin_point)].id;
  } else {
    cert.argmin_point = "x_" + std::to_string(-tr.argmin_point - 1);
  }
  cert.pass = cert.min_rel_slack >= -options.tol_rel;
  return cert;
}

double observed_B(std::span<const double> norms) {
  if (norms.empty()) throw ContractError("observed_B: no subgradient norms recorded");
  double b = 0.0;
  for (double v : norms) b = std::max(b, v);
  return b;
}

double observed_B(const RunTrace& trace) {
  if (trace.subgrad_max_l.empty() && trace.subgrad_max_r.empty()) {
    throw ContractError("observed_B: no subgradient norms recorded");
  }
  double b = 0.0;
  for (double v : trace.subgrad_max_l) b = std::max(b, v);
  for (double v : trace.subgrad_max_r) b = std::max(b, v);
  return b;
}

std::string to_json(const FejerCertificate& c) {
  nlohmann::ordered_json j;
  j["verdict"] = c.pass ? "pass" : "fail";
  j["min_slack"] = c.min_slack;
  j["min_rel_slack"] = c.min_rel_slack;
  j["argmin"] = {{"t", c.argmin_t}, {"test_point_id", c.argmin_point}};
  j["eq3_min_slack"] = c.eq3_min_slack;
  j["eq3_argmin_t"] = c.eq3_argmin_t;
  j["constants_provenance"] = std::string(to_string(c.provenance));
  j["value_lag"] = c.value_lag;
  j["tol_rel"] = c.tol_rel;
  j["test_points"] = c.test_point_count;
  j["conditional"] = c.conditional;
  return j.dump(2);
}

}  // namespace splitcert::fejer
