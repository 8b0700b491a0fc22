#pragma once

#include <cstdint>
#include <span>

namespace splitcert::rates {

/// η_t = eta·t^(−theta1) and the envelope ξ_t ≤ xi·t^(−theta2).
struct PolySchedule {
  double eta;     // > 0
  double theta1;  // in [0, 1)
  double xi;      // >= 0
  double theta2;  // >= 0

  double eta_at(std::int64_t t) const;
  double xi_at(std::int64_t t) const;
};

/// Piecewise constant of the polynomial-rate bound:
///   5 + 2/(1 − θ) for θ < 1,   9 for θ = 1,   (2^θ + 3θ − 1)/(θ − 1) for θ > 1.
double c_theta(double theta2);

/// Excess-value bound of a modified Fejér sequence with explicit weights,
/// solved for f(x_T) − f_*:
///   [ d_sq/T + Σ_{t<T} ξ_t/(T − t) + ξ_T ] / η_T,   T = eta.size().
/// Requires eta non-increasing and T > 1 (ContractError otherwise).
double bound_thm22(double d_sq, std::span<const double> eta, std::span<const double> xi);

/// The ξ ≡ 0 specialisation: d_sq / (eta_T · T).
double bound_cor23(double d_sq, double eta_T, std::int64_t T);

/// Closed-form polynomial-schedule bound (natural log; the log factor is
/// present iff theta2 ≤ 1). ContractError for T < 3.
double bound_thm24(double d_sq, const PolySchedule& schedule, std::int64_t T);

/// Stated upper bound on Σ_{t=1}^{T−1} t^(−q)/(T − t). T ≥ 3.
double lemma25_bound(double q, std::int64_t T);
/// The exact sum itself, accumulated from t = 1 upward. T ≥ 2.
double lemma25_brute(double q, std::int64_t T);

// Rate statements for the four splitting methods, each with step α_t = α t^(−θ)
// and valid for T > 3. The common first term is d_sq/(2α) · T^(θ−1); the
// second carries the (log T)^{1[2θ≤1]} T^(−min(θ, 1−θ)) factor.

/// Forward-backward with ε-subgradients: second term α(5B² + ε) c_{2θ}.
double bound_thm32(double d_sq, double alpha, double theta, double B, double eps,
                   std::int64_t T);
/// Projected approximate subgradient: second term α(B² + 2ε) c_{2θ}.
double bound_thm35(double d_sq, double alpha, double theta, double B, double eps,
                   std::int64_t T);
/// Incremental subgradient-proximal over m components: α(4m + 5)mB²/2 · c_{2θ}.
double bound_thm37(double d_sq, double alpha, double theta, double B, std::int64_t m,
                   std::int64_t T);
/// Douglas-Rachford: second term 8αB² c_{2θ}.
double bound_thm310(double d_sq, double alpha, double theta, double B, std::int64_t T);
/// Smooth forward-backward with step 1/β: β d_sq / (2T).
double bound_prop33(double d_sq, double beta, std::int64_t T);

}  // namespace splitcert::rates
