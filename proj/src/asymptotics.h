// Likelihood asymptotics: the modified signed-root P-value transform, the
// approximate conditional density of the MLE given an ancillary, Hinkley's
// exact conditional density for the curved normal, and the one-sided score
// test. All functions are pure; quadrature scratch space is per-call.
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace epiconf::models {
class ParametricModel;
}

namespace epiconf::asymptotics {

// A likelihood reduced to the pieces the signed-root machinery needs.
struct LikelihoodSummary {
    double theta_hat = 0.0;                 // maximum-likelihood estimate
    std::function<double(double)> w;        // likelihood-ratio statistic w(theta)
    double info_at_mle = 0.0;               // observed Fisher information at theta_hat
    std::size_t n = 0;                      // sample size behind the likelihood
};

// Signed likelihood root r = sign(theta_hat - theta) sqrt(w(theta)), Wald
// root z = sqrt(I(theta_hat)) (theta_hat - theta), and the correction
// r* = r + log(z/r)/r. Right-side P-value is P(Z > r*) = 1 - Phi(r*).
// Near the MLE (|r| < 1e-4) the log term is a removable singularity; the
// limit r* ~ r is used and *near_mle_flag (when given) set to true.
double rstar(const LikelihoodSummary& s, double theta,
             bool* near_mle_flag = nullptr);
double rstar_pvalue(const LikelihoodSummary& s, double theta,
                    bool* near_mle_flag = nullptr);

// Mean-one gamma family with shape theta: exact likelihood-ratio statistic
// from the sufficient pair (n, sum_t), sum_t = sum(log y_i - y_i), and the
// observed Fisher information at the MLE. Domain error for non-positive
// theta or theta_hat.
double gamma_w(double theta, double theta_hat, std::size_t n, double sum_t);
double gamma_info(double theta_hat, std::size_t n);
// Ready-to-use summary for rstar_pvalue.
LikelihoodSummary gamma_summary(std::size_t n, double sum_t);

// ---- Hinkley's exact conditional law (curved normal N(theta, theta^2)) ----
// W = T/theta with T = sqrt(sum y_i^2), conditioned on the unit ancillary
// a = sum y_i / sqrt(sum y_i^2):
//   p(w | a) = w^{n-1} exp{-(w-a)^2/2} / I_{n-1}(a),   w > 0,
//   I_{n-1}(a) = int_0^inf x^{n-1} exp{-(x-a)^2/2} dx.
// The normalizer integrand is truncated at x = a + 12 (below e^-72 of peak).
double hinkley_normalizer(double a, std::size_t n);
double hinkley_density(double w, double a, std::size_t n);
double hinkley_cdf(double w, double a, std::size_t n);
// Right-side conditional P-value P_theta(T >= t | a) = 1 - F_a(t/theta).
double hinkley_conditional_pvalue(double theta, double t, double a,
                                  std::size_t n);

// ---- approximate conditional density of the MLE given an ancillary ----
// p_theta(theta_hat | a) = k |I(theta_hat)|^{1/2} L(theta) / L(theta_hat),
// with both likelihood values taken through the model's summary
// parametrization (theta_hat, a, n). Returns the unnormalized value;
// bn_normalizer integrates it over theta_hat for the constant k(a).
// Capability error when the model has no summary likelihood.
double bn_conditional_density(const models::ParametricModel& model,
                              double theta, double theta_hat, double a,
                              std::size_t n);
double bn_normalizer(const models::ParametricModel& model, double theta,
                     double a, std::size_t n);

// Conditional confidence density in theta induced by the approximate MLE
// density through the theta-free pivot u = theta_hat/theta:
//   c(theta) = p_u(theta_hat_obs/theta | a) * theta_hat_obs / theta^2,
// with p_u the normalized pivot density.
double bn_confidence_density(const models::ParametricModel& model, double theta,
                             double theta_hat_obs, double a, std::size_t n);

// One-sided score test P-value 1 - Phi(U(theta0)/sqrt(I_obs(theta0))).
// Domain error when the observed information is not strictly positive.
double score_pvalue(const models::ParametricModel& model, double theta0,
                    const std::vector<double>& y);

}  // namespace epiconf::asymptotics
