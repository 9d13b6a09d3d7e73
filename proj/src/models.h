// Registry of one-parameter statistical families sharing a common interface:
// log-density, MLE, simulation, and where the family has them, a statistic T
// with a tractable law, ancillaries, exact conditional laws, and finite
// sample-space enumeration. Models are immutable after construction.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "numerics.h"

namespace epiconf::models {

using Dataset = std::vector<double>;

struct Capabilities {
    bool has_sufficient_T = false;
    bool has_ancillary = false;
    bool has_exact_conditional = false;
    bool discrete_data = false;
    bool discrete_parameter = false;
};

class ParametricModel {
public:
    virtual ~ParametricModel() = default;

    virtual std::string name() const = 0;
    virtual numerics::Interval parameter_space() const = 0;
    virtual Capabilities capabilities() const = 0;

    // ---- likelihood ----
    // log p_theta(y) for a single observation; -inf where the density is 0.
    virtual double log_density(double theta, double y) const = 0;
    // Sum over observations; throws ConfigError for theta outside the
    // parameter space.
    virtual double log_likelihood(double theta, const Dataset& y) const;
    virtual double mle(const Dataset& y) const = 0;

    // ---- simulation (counter-based; bit-reproducible) ----
    virtual Dataset simulate(double theta, std::size_t n, std::uint64_t seed) const = 0;

    // ---- statistic T with tractable law (laws depend on sample size) ----
    virtual bool has_statistic_law(std::size_t n) const;
    virtual double statistic(const Dataset& y) const;
    // P_theta(T <= t) for samples of size n.
    virtual double statistic_cdf(double t, double theta, std::size_t n) const;
    // q_alpha(theta): P_theta(T <= q) = alpha. Default inverts statistic_cdf.
    virtual double quantile(double alpha, double theta, std::size_t n = 1) const;

    // Closed-form confidence density d/dtheta P_theta(T >= t) where coded.
    virtual bool has_analytic_confidence_density(std::size_t n) const;
    virtual double analytic_confidence_density(double theta, double t,
                                               std::size_t n) const;

    // log of the theta-dependent factor of the statistic's own density
    // f_T(t; theta) for samples of size n; theta-free factors may be dropped
    // (only ratios across theta are ever used).
    virtual bool has_statistic_loglik(std::size_t n) const;
    virtual double statistic_loglik(double theta, double t, std::size_t n) const;

    // ---- ancillaries ----
    // Named ancillaries; more than one name means no unique maximal ancillary.
    virtual std::vector<std::string> ancillary_names() const;
    virtual double ancillary_named(const std::string& name, const Dataset& y) const;
    double ancillary(const Dataset& y) const;  // first named ancillary

    // ---- exact conditional law: P_theta(T >= t | ancillary = a) ----
    // The statistic the conditional law is stated in; defaults to statistic().
    // (A family may condition a different reduction than its marginal T.)
    virtual double conditional_statistic(const Dataset& y) const;
    virtual double conditional_rhs_pvalue(double theta, double t, double a,
                                          std::size_t n) const;
    virtual double conditional_density(double theta, double t, double a,
                                       std::size_t n) const;

    // ---- score machinery (numeric-differentiation defaults) ----
    virtual double score(double theta, const Dataset& y) const;
    virtual double observed_information(double theta, const Dataset& y) const;

    // ---- likelihood re-expressed through (theta_hat, ancillary, n) ----
    virtual bool has_summary_likelihood() const;
    virtual double log_likelihood_from_summary(double theta, double theta_hat,
                                               double a, std::size_t n) const;
    // Observed information at the MLE as a function of (theta_hat, a, n).
    virtual double information_at_mle(double theta_hat, double a, std::size_t n) const;

    // ---- finite enumeration (exact coverage) ----
    virtual bool enumerable(std::size_t n) const;
    virtual std::vector<std::pair<Dataset, double>> enumerate(double theta,
                                                              std::size_t n) const;

    // For discrete-parameter families: the finite set of admissible theta
    // values compatible with the dataset (lattice likelihood support).
    virtual std::vector<double> parameter_candidates(const Dataset& y) const;

    // Exact theta-support of the confidence density for compactly supported
    // cases (uniform families); lets grids line up with discontinuities.
    virtual std::optional<numerics::Interval> confidence_support(double t,
                                                                 std::size_t n) const;
    // As above, but from the full dataset (for full-confidence densities).
    virtual std::optional<numerics::Interval> likelihood_support(const Dataset& y) const;

    // Whether theta is an admissible parameter value (bounds, openness,
    // lattice membership for discrete-parameter families).
    virtual bool theta_valid(double theta) const;

protected:
    void check_theta(double theta) const;  // throws ConfigError when invalid
};

using ModelPtr = std::shared_ptr<const ParametricModel>;

// Registry lookup. Accepted names:
//   normal_location
//   location_family:<normal|cauchy|laplace|logistic>
//   discrete_uniform_triple
//   uniform_shift
//   uniform_width2
//   gamma_shape
//   normal_mean_eq_var
//   curved_normal
//   binomial:<n>            (size parameter)
//   negative_binomial:<y>   (target number of successes)
//   evans_2x2
// Throws ConfigError for unknown names or malformed parameters.
ModelPtr make_model(const std::string& spec);

// ---- model-specific helpers used by experiments and tests ----

// Curved normal N(theta, theta^2): survival P_theta(Y >= t) of the raw first
// observation. Kept as a negative control: its limit as theta -> inf is
// 1 - Phi(-1) ~ 0.84, so the raw observation fails the proper-CDF condition.
double curved_normal_raw_marginal(double theta, double t);

// Mean-one gamma with shape theta: natural statistic per observation
// t(y) = log y - y, and the sufficient total's building blocks.
double gamma_shape_t(double y);
// P_theta(t(Y) >= t1) for a single observation, via the two roots of
// log y - y = t1 (t1 < -1).
double gamma_shape_t1_survival(double theta, double t1);
// log-likelihood of a size-n sample through the sufficient (n, sum_t),
// dropping theta-free terms.
double gamma_shape_loglik(double theta, std::size_t n, double sum_t);
// MLE from (n, sum_t): root of n(log theta + 1 - psi(theta)) + sum_t = 0.
double gamma_shape_mle(std::size_t n, double sum_t);

// Curved normal MLE from sufficient sums (s1, s2) = (sum y, sum y^2).
double curved_normal_mle_from_sums(double s1, double s2, std::size_t n);

}  // namespace epiconf::models
