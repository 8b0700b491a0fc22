#include "splitcert/rates.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "splitcert/errors.hpp"

namespace splitcert::rates {

namespace {

void require_T_at_least(std::int64_t T, std::int64_t lo, const char* what) {
  if (T < lo) {
    throw ContractError(std::string(what) + ": requires T >= " + std::to_string(lo) +
                        ", got " + std::to_string(T));
  }
}

// (log T)^{1[θ₂ ≤ 1]} T^(θ₁ − min(θ₂, 1))
double poly_log_factor(double theta1, double theta2, std::int64_t T) {
  const double t = static_cast<double>(T);
  const double logf = theta2 <= 1.0 ? std::log(t) : 1.0;
  return logf * std::pow(t, theta1 - std::min(theta2, 1.0));
}

// Shared shape of the splitting-method rates:
//   d_sq/(2α) T^(θ−1) + K c_{2θ} (log T)^{1[2θ≤1]} T^(−min(θ, 1−θ)).
double splitting_rate(double d_sq, double alpha, double theta, double K, std::int64_t T,
                      const char* what) {
  require_T_at_least(T, 4, what);
  if (!(alpha > 0.0)) throw ContractError(std::string(what) + ": alpha must be > 0");
  if (!(theta > 0.0 && theta < 1.0)) {
    throw ContractError(std::string(what) + ": theta must lie in (0, 1)");
  }
  const double t = static_cast<double>(T);
  const double logf = 2.0 * theta <= 1.0 ? std::log(t) : 1.0;
  return d_sq / (2.0 * alpha) * std::pow(t, theta - 1.0) +
         K * c_theta(2.0 * theta) * logf * std::pow(t, -std::min(theta, 1.0 - theta));
}

}  // namespace

double PolySchedule::eta_at(std::int64_t t) const {
  return eta * std::pow(static_cast<double>(t), -theta1);
}

double PolySchedule::xi_at(std::int64_t t) const {
  return xi * std::pow(static_cast<double>(t), -theta2);
}

double c_theta(double theta2) {
  if (!(theta2 >= 0.0)) throw ContractError("c_theta: theta2 must be >= 0");
  if (theta2 < 1.0) return 5.0 + 2.0 / (1.0 - theta2);
  if (theta2 == 1.0) return 9.0;
  return (std::pow(2.0, theta2) + 3.0 * theta2 - 1.0) / (theta2 - 1.0);
}

double bound_thm22(double d_sq, std::span<const double> eta, std::span<const double> xi) {
  const auto T = static_cast<std::int64_t>(eta.size());
  require_T_at_least(T, 2, "bound_thm22");
  if (xi.size() != eta.size()) throw ContractError("bound_thm22: eta/xi length mismatch");
  for (std::size_t t = 1; t < eta.size(); ++t) {
    if (eta[t] > eta[t - 1]) {
      throw ContractError("bound_thm22: eta must be non-increasing (violated at t=" +
                          std::to_string(t + 1) + ")");
    }
  }
  double acc = d_sq / static_cast<double>(T);
  for (std::int64_t t = 1; t < T; ++t) {
    acc += xi[static_cast<std::size_t>(t - 1)] / static_cast<double>(T - t);
  }
  acc += xi[static_cast<std::size_t>(T - 1)];
  return acc / eta[static_cast<std::size_t>(T - 1)];
}

double bound_cor23(double d_sq, double eta_T, std::int64_t T) {
  require_T_at_least(T, 2, "bound_cor23");
  if (!(eta_T > 0.0)) throw ContractError("bound_cor23: eta_T must be > 0");
  return d_sq / (eta_T * static_cast<double>(T));
}

double bound_thm24(double d_sq, const PolySchedule& s, std::int64_t T) {
  require_T_at_least(T, 3, "bound_thm24");
  if (!(s.eta > 0.0)) throw ContractError("bound_thm24: eta must be > 0");
  if (!(s.theta1 >= 0.0 && s.theta1 < 1.0)) {
    throw ContractError("bound_thm24: theta1 must lie in [0, 1)");
  }
  const double t = static_cast<double>(T);
  return d_sq / s.eta * std::pow(t, s.theta1 - 1.0) +
         s.xi * c_theta(s.theta2) / s.eta * poly_log_factor(s.theta1, s.theta2, T);
}

double lemma25_bound(double q, std::int64_t T) {
  require_T_at_least(T, 3, "lemma25_bound");
  if (!(q >= 0.0)) throw ContractError("lemma25_bound: q must be >= 0");
  const double t = static_cast<double>(T);
  if (q < 1.0) return (4.0 + 2.0 / (1.0 - q)) * std::pow(t, -q) * std::log(t);
  if (q == 1.0) return 8.0 * std::log(t) / t;
  return (std::pow(2.0, q) + 2.0 * q) / (q - 1.0) / t;
}

double lemma25_brute(double q, std::int64_t T) {
  require_T_at_least(T, 2, "lemma25_brute");
  double acc = 0.0;
  for (std::int64_t t = 1; t < T; ++t) {
    acc += std::pow(static_cast<double>(t), -q) / static_cast<double>(T - t);
  }
  return acc;
}

double bound_thm32(double d_sq, double alpha, double theta, double B, double eps,
                   std::int64_t T) {
  return splitting_rate(d_sq, alpha, theta, alpha * (5.0 * B * B + eps), T, "bound_thm32");
}

double bound_thm35(double d_sq, double alpha, double theta, double B, double eps,
                   std::int64_t T) {
  return splitting_rate(d_sq, alpha, theta, alpha * (B * B + 2.0 * eps), T, "bound_thm35");
}

double bound_thm37(double d_sq, double alpha, double theta, double B, std::int64_t m,
                   std::int64_t T) {
  const double md = static_cast<double>(m);
  return splitting_rate(d_sq, alpha, theta, alpha * (4.0 * md + 5.0) * md * B * B / 2.0, T,
                        "bound_thm37");
}

double bound_thm310(double d_sq, double alpha, double theta, double B, std::int64_t T) {
  return splitting_rate(d_sq, alpha, theta, 8.0 * alpha * B * B, T, "bound_thm310");
}

double bound_prop33(double d_sq, double beta, std::int64_t T) {
  require_T_at_least(T, 2, "bound_prop33");
  return beta * d_sq / (2.0 * static_cast<double>(T));
}

}  // namespace splitcert::rates
