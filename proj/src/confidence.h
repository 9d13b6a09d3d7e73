// Confidence distributions: the right-side P-value function C(theta) =
// P_theta(T >= t) taken marginally or conditionally on an ancillary, its
// density in theta, the implied prior c0 ~ c/L, full-confidence densities
// c_f ~ c0 * L from the updating formula, and interval construction.
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "models.h"
#include "numerics.h"

namespace epiconf::confidence {

enum class Kind { kMarginal, kConditional, kFull };

// Provenance of a distribution: which model/statistic built it, the
// conditioning ancillary value when conditional, and the prior used when full.
struct Source {
    std::string model;
    std::string statistic;
    std::optional<double> ancillary;
    std::string prior;
};

class ConfidenceDistribution {
public:
    ConfidenceDistribution(Kind kind, numerics::GridDensity density, Source source);

    Kind kind() const { return kind_; }
    const numerics::GridDensity& density() const { return density_; }
    const numerics::GridCdf& cdf() const { return cdf_; }
    const Source& source() const { return source_; }

    double density_at(double theta) const { return density_(theta); }
    double cdf_at(double theta) const { return cdf_(theta); }
    // Quantile of the confidence CDF; p in [0,1], endpoints resolve to the
    // grid ends (one-sided intervals use p = 1).
    double quantile(double p) const { return cdf_.quantile(p); }

private:
    Kind kind_;
    numerics::GridDensity density_;
    numerics::GridCdf cdf_;
    Source source_;
};

// Implied prior c0(theta) ~ c(theta; t)/L(theta); possibly improper, stored
// unnormalized. Evaluation is zero beyond the stored grid: the grid spans
// all but ~2e-7 of the source confidence mass, and a flat extension of a
// ~1/theta prior would make prior x likelihood non-integrable.
struct ImpliedPrior {
    numerics::GridDensity density{{0.0, 1.0}, {1.0, 1.0}};
    bool data_dependent = false;
    std::size_t excluded_points = 0;  // grid points dropped where L = 0

    double operator()(double theta) const;
};

// Which likelihood divides the confidence density in Eq.-7-style priors.
//   kDataLikelihood:      L(theta; y) of the observed data (the literal
//                         definition; data-dependent when T is not sufficient
//                         or not invertible).
//   kStatisticLikelihood: the statistic's own density f_T(t; theta) (the
//                         sufficient-statistic route; datum-free).
enum class PriorRoute { kDataLikelihood, kStatisticLikelihood };

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
    double gamma = 0.0;
    double gamma1 = 0.0;  // lower tail mass above the interval: P(theta > upper) = gamma1
    double gamma2 = 0.0;  // gamma2 - gamma1 = gamma
};

struct GridOptions {
    std::size_t points = 2001;
};

// ---- pointwise evaluations ----

// Marginal right-side P-value C_m(theta; t) = P_theta(T >= t).
double marginal_cdf(const models::ParametricModel& model, double t, double theta,
                    std::size_t n = 1);
// c_m = dC_m/dtheta: analytic where coded, else five-point central difference.
double marginal_density_at(const models::ParametricModel& model, double t,
                           double theta, std::size_t n = 1);
// Conditional right-side P-value C_c(theta; t | a) = P_theta(T >= t | a).
double conditional_cdf(const models::ParametricModel& model, double t, double a,
                       double theta, std::size_t n = 1);

// ---- distribution builders (continuous-parameter models) ----

ConfidenceDistribution marginal_distribution(const models::ParametricModel& model,
                                             double t, std::size_t n = 1,
                                             GridOptions opts = {});
// t, a and n are taken from the dataset.
ConfidenceDistribution conditional_distribution(const models::ParametricModel& model,
                                                const models::Dataset& y,
                                                GridOptions opts = {});

// ---- implied prior and the updating formula ----

// Prior from the datum y (marginal confidence density at t = T(y)); when
// conditional = true, from the conditional density given the model ancillary.
ImpliedPrior implied_prior(const models::ParametricModel& model,
                           const models::Dataset& y, bool conditional = false,
                           PriorRoute route = PriorRoute::kDataLikelihood,
                           GridOptions opts = {});

// c_f ~ prior(theta) * L(theta; y), normalized.
ConfidenceDistribution full_confidence(const ImpliedPrior& prior,
                                       const models::ParametricModel& model,
                                       const models::Dataset& y,
                                       GridOptions opts = {});
ConfidenceDistribution full_confidence(const std::function<double(double)>& prior,
                                       const models::ParametricModel& model,
                                       const models::Dataset& y,
                                       GridOptions opts = {});
// Fully functional variant: prior * exp(loglik) on a support located from
// the hint; for likelihoods not tied to a model instance.
ConfidenceDistribution full_confidence(const std::function<double(double)>& prior,
                                       const std::function<double(double)>& loglik,
                                       double center_hint, double halfwidth_hint,
                                       numerics::Interval bounds,
                                       Source source = {}, GridOptions opts = {});

// Discrete-parameter families: exact confidence table over the lattice of
// admissible theta values, weights proportional to the likelihood.
std::vector<std::pair<double, double>> discrete_full_confidence(
    const models::ParametricModel& model, const models::Dataset& y);

// ---- intervals ----

// Equi-tailed: gamma1 = (1-gamma)/2, gamma2 = (1+gamma)/2.
ConfidenceInterval interval(const ConfidenceDistribution& cd, double gamma);
// Explicit split: interval = (Q(1-gamma2), Q(1-gamma1)), gamma = gamma2-gamma1.
ConfidenceInterval interval_split(const ConfidenceDistribution& cd, double gamma1,
                                  double gamma2);
// Confidence mass of [lo, hi] under the distribution.
double confidence_of(const ConfidenceDistribution& cd, double lo, double hi);
double confidence_of(const ConfidenceDistribution& cd,
                     const ConfidenceInterval& ci);

// ---- grid-free quantiles (hot loops; root-finding on the exact C) ----

// Solve C_m(theta; t) = p for theta. p is clamped to [1e-12, 1-1e-12]; the
// endpoints are exact only for compactly supported confidence (uniforms).
double marginal_quantile(const models::ParametricModel& model, double t, double p,
                         std::size_t n = 1, double seed_hint = 1.0);
ConfidenceInterval marginal_interval(const models::ParametricModel& model,
                                     double t, double gamma, double gamma1,
                                     double gamma2, std::size_t n = 1,
                                     double seed_hint = 1.0);
double conditional_quantile(const models::ParametricModel& model, double t,
                            double a, double p, std::size_t n = 1,
                            double seed_hint = 1.0);

// Probability that the floor-guess "floor(y) = floor(theta)" is right for the
// unit uniform shift family: 1 - frac(theta).
double floor_guess_coverage(double theta);

}  // namespace epiconf::confidence
