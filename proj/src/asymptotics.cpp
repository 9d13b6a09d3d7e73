#include "asymptotics.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "errors.h"
#include "models.h"
#include "numerics.h"

namespace epiconf::asymptotics {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double rstar(const LikelihoodSummary& s, double theta, bool* near_mle_flag) {
    if (near_mle_flag) *near_mle_flag = false;
    if (!(s.info_at_mle > 0.0))
        throw std::domain_error("rstar: information at the MLE must be positive");
    if (!s.w) throw std::domain_error("rstar: summary lacks a w(theta) function");
    double w = s.w(theta);
    if (w < 0.0) {
        if (w < -1e-9)
            throw std::domain_error("rstar: negative likelihood-ratio statistic");
        w = 0.0;
    }
    double sign = s.theta_hat >= theta ? 1.0 : -1.0;
    double r = sign * std::sqrt(w);
    double z = std::sqrt(s.info_at_mle) * (s.theta_hat - theta);
    // log(z/r)/r has a removable singularity at the MLE (z/r -> 1); switch to
    // the limit r* ~ r inside the cutoff and flag the caller.
    if (std::abs(r) < 1e-4) {
        if (near_mle_flag) *near_mle_flag = true;
        return r;
    }
    return r + std::log(z / r) / r;
}

double rstar_pvalue(const LikelihoodSummary& s, double theta,
                    bool* near_mle_flag) {
    return 1.0 - numerics::normal_cdf(rstar(s, theta, near_mle_flag));
}

double gamma_w(double theta, double theta_hat, std::size_t n, double sum_t) {
    if (!(theta > 0.0) || !(theta_hat > 0.0))
        throw std::domain_error("gamma_w: theta and theta_hat must be positive");
    double nn = static_cast<double>(n);
    return 2.0 * nn * (numerics::log_gamma(theta) - numerics::log_gamma(theta_hat)) +
           2.0 * nn * (theta_hat * std::log(theta_hat) - theta * std::log(theta)) +
           2.0 * (theta_hat - theta) * sum_t;
}

double gamma_info(double theta_hat, std::size_t n) {
    if (!(theta_hat > 0.0))
        throw std::domain_error("gamma_info: theta_hat must be positive");
    return static_cast<double>(n) *
           (numerics::trigamma(theta_hat) - 1.0 / theta_hat);
}

LikelihoodSummary gamma_summary(std::size_t n, double sum_t) {
    LikelihoodSummary s;
    s.theta_hat = models::gamma_shape_mle(n, sum_t);
    s.n = n;
    s.info_at_mle = gamma_info(s.theta_hat, n);
    double theta_hat = s.theta_hat;
    s.w = [theta_hat, n, sum_t](double theta) {
        return gamma_w(theta, theta_hat, n, sum_t);
    };
    return s;
}

// ---- Hinkley's exact conditional law for the curved normal ----

namespace {

double hinkley_integrand(double x, double a, std::size_t n) {
    double d = x - a;
    double value = std::exp(-0.5 * d * d);
    for (std::size_t k = 1; k < n; ++k) value *= x;
    return value;
}

double hinkley_upper_limit(double a) { return a + 12.0; }

}  // namespace

double hinkley_normalizer(double a, std::size_t n) {
    if (n < 1) throw std::domain_error("hinkley_normalizer: n must be >= 1");
    double hi = hinkley_upper_limit(a);
    if (!(hi > 0.0))
        throw std::domain_error("hinkley_normalizer: truncation point a+12 <= 0");
    return numerics::integrate(
        [a, n](double x) { return hinkley_integrand(x, a, n); }, 0.0, hi, 1e-11);
}

double hinkley_density(double w, double a, std::size_t n) {
    if (n < 1) throw std::domain_error("hinkley_density: n must be >= 1");
    if (w < 0.0) return 0.0;
    return hinkley_integrand(w, a, n) / hinkley_normalizer(a, n);
}

double hinkley_cdf(double w, double a, std::size_t n) {
    if (n < 1) throw std::domain_error("hinkley_cdf: n must be >= 1");
    if (w <= 0.0) return 0.0;
    double hi = hinkley_upper_limit(a);
    if (w >= hi) return 1.0;
    double mass = numerics::integrate(
        [a, n](double x) { return hinkley_integrand(x, a, n); }, 0.0, w, 1e-11);
    return std::clamp(mass / hinkley_normalizer(a, n), 0.0, 1.0);
}

double hinkley_conditional_pvalue(double theta, double t, double a,
                                  std::size_t n) {
    if (!(theta > 0.0))
        throw std::domain_error("hinkley_conditional_pvalue: theta must be positive");
    if (!(t >= 0.0))
        throw std::domain_error("hinkley_conditional_pvalue: t must be nonnegative");
    return 1.0 - hinkley_cdf(t / theta, a, n);
}

// ---- approximate conditional density of the MLE given an ancillary ----

double bn_conditional_density(const models::ParametricModel& model, double theta,
                              double theta_hat, double a, std::size_t n) {
    if (!model.has_summary_likelihood())
        throw CapabilityError(model.name() +
                              ": no summary-likelihood parametrization");
    double log_ratio = model.log_likelihood_from_summary(theta, theta_hat, a, n) -
                       model.log_likelihood_from_summary(theta_hat, theta_hat, a, n);
    double info = model.information_at_mle(theta_hat, a, n);
    if (!(info > 0.0))
        throw std::domain_error("bn_conditional_density: information at the MLE "
                                "must be positive");
    return std::sqrt(info) * std::exp(log_ratio);
}

double bn_normalizer(const models::ParametricModel& model, double theta,
                     double a, std::size_t n) {
    auto f = [&](double th_hat) {
        return bn_conditional_density(model, theta, th_hat, a, n);
    };
    numerics::Interval bounds = model.parameter_space();
    auto grid = numerics::build_support_grid(f, theta, 0.75 * std::abs(theta) + 0.5,
                                             bounds);
    return numerics::integrate(f, grid.front(), grid.back(), 1e-9);
}

double bn_confidence_density(const models::ParametricModel& model, double theta,
                             double theta_hat_obs, double a, std::size_t n) {
    if (!(theta > 0.0) || !(theta_hat_obs > 0.0))
        throw std::domain_error(
            "bn_confidence_density: theta and theta_hat_obs must be positive");
    // Pivot density evaluated at reference theta = 1; the ratio p*/norm is
    // theta-free by construction for summary-likelihood families.
    double u = theta_hat_obs / theta;
    double pivot = bn_conditional_density(model, 1.0, u, a, n) /
                   bn_normalizer(model, 1.0, a, n);
    return pivot * theta_hat_obs / (theta * theta);
}

double score_pvalue(const models::ParametricModel& model, double theta0,
                    const std::vector<double>& y) {
    double u = model.score(theta0, y);
    double info = model.observed_information(theta0, y);
    if (!(info > 0.0))
        throw std::domain_error("score_pvalue: observed information must be "
                                "positive at theta0");
    return 1.0 - numerics::normal_cdf(u / std::sqrt(info));
}

}  // namespace epiconf::asymptotics
