#include "confidence.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.h"

namespace epiconf::confidence {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Strictly interior point of the parameter space to anchor searches.
double space_anchor(const numerics::Interval& space) {
    bool lo_fin = std::isfinite(space.lo), hi_fin = std::isfinite(space.hi);
    if (lo_fin && hi_fin) return 0.5 * (space.lo + space.hi);
    if (lo_fin) return space.lo + 1.0;
    if (hi_fin) return space.hi - 1.0;
    return 0.0;
}

double initial_seed(const models::ParametricModel& model, double t) {
    if (model.theta_valid(t)) return t;
    if (model.theta_valid(std::abs(t)) && std::abs(t) > 0.0) return std::abs(t);
    if (model.theta_valid(1.0)) return 1.0;
    return space_anchor(model.parameter_space());
}

// Expansion step that keeps seed +- step strictly inside finite bounds.
double safe_step(double seed, const numerics::Interval& space) {
    double step = std::max(0.5, 0.5 * std::abs(seed));
    if (std::isfinite(space.lo)) step = std::min(step, 0.5 * (seed - space.lo));
    if (std::isfinite(space.hi)) step = std::min(step, 0.5 * (space.hi - seed));
    return std::max(step, 1e-12);
}

// Solve C(theta) = p for a monotone-increasing confidence CDF.
double solve_cdf(const std::function<double(double)>& C, double p,
                 const numerics::Interval& space, double seed) {
    auto gap = [&](double th) { return C(th) - p; };
    return numerics::find_root_expand(gap, seed, safe_step(seed, space), space,
                                      1e-11);
}

// Five-point central difference of a confidence CDF in theta, with the step
// shrunk until the stencil stays inside the parameter space.
double cdf_slope(const models::ParametricModel& model,
                 const std::function<double(double)>& C, double theta, double h) {
    for (int i = 0; i < 60 && !(model.theta_valid(theta - 2.0 * h) &&
                                model.theta_valid(theta + 2.0 * h)); ++i)
        h *= 0.5;
    double f1 = C(theta + h), fm1 = C(theta - h);
    double f2 = C(theta + 2.0 * h), fm2 = C(theta - 2.0 * h);
    return (-f2 + 8.0 * f1 - 8.0 * fm1 + fm2) / (12.0 * h);
}

void require_continuous_parameter(const models::ParametricModel& model,
                                  const char* op) {
    if (model.capabilities().discrete_parameter)
        throw CapabilityError(std::string(op) + ": " + model.name() +
                              " has a discrete parameter; use the exact table "
                              "path (discrete_full_confidence)");
}

// Monotone change of variable used to lay out grids. Confidence densities
// with polynomial tails (e.g. anything built from a 1/theta prior) would
// need millions of uniform cells to hold both the peak and the mass in the
// tail; a log or asinh axis makes those tails exponential again.
struct ThetaMap {
    enum Kind { kIdentity, kLog, kAsinh } kind = kIdentity;
    double lo = 0.0;     // kLog:   theta = lo + exp(u)
    double c = 0.0;      // kAsinh: theta = c + s*sinh(u)
    double s = 1.0;

    double to_theta(double u) const {
        switch (kind) {
            case kLog: return lo + std::exp(u);
            case kAsinh: return c + s * std::sinh(u);
            default: return u;
        }
    }
    double to_u(double theta) const {
        switch (kind) {
            case kLog: return std::log(theta - lo);
            case kAsinh: return std::asinh((theta - c) / s);
            default: return theta;
        }
    }
    // Jacobian d theta / d u.
    double slope(double u) const {
        switch (kind) {
            case kLog: return std::exp(u);
            case kAsinh: return s * std::cosh(u);
            default: return 1.0;
        }
    }
};

// Pick the axis from the spread of the distribution: when the 1e-7..1-1e-7
// span dwarfs the interquartile range the tails are heavy and a stretched
// axis is needed; otherwise a plain uniform grid is the most accurate.
ThetaMap choose_map(const numerics::Interval& space, double q_lo, double q25,
                    double med, double q75, double q_hi) {
    double core = std::max(q75 - q25, 1e-9 * (1.0 + std::abs(med)));
    double span = q_hi - q_lo;
    ThetaMap map;
    if (span <= 50.0 * core) return map;  // light tails: uniform
    if (std::isfinite(space.lo) && !std::isfinite(space.hi)) {
        map.kind = ThetaMap::kLog;
        map.lo = space.lo;
        return map;
    }
    if (!std::isfinite(space.lo) && !std::isfinite(space.hi)) {
        map.kind = ThetaMap::kAsinh;
        map.c = med;
        map.s = core / 1.35;  // roughly one standard deviation
        return map;
    }
    return map;  // doubly finite spaces cannot have heavy tails
}

// Uniform grid in u mapped back to theta, endpoints pinned exactly.
std::vector<double> transformed_grid(const ThetaMap& map, double t_lo,
                                     double t_hi, std::size_t points) {
    auto u = numerics::linspace(map.to_u(t_lo), map.to_u(t_hi), points);
    std::vector<double> grid(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) grid[i] = map.to_theta(u[i]);
    grid.front() = t_lo;
    grid.back() = t_hi;
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            grid[i] = std::nextafter(grid[i - 1],
                                     std::numeric_limits<double>::infinity());
    return grid;
}

constexpr double kTailMass = 1e-7;

// Grid carrying all but ~2e-7 of the confidence mass, built from quantiles
// of the (exactly evaluable) confidence CDF.
std::vector<double> quantile_grid(const std::function<double(double)>& C,
                                  const numerics::Interval& space, double seed,
                                  std::size_t points) {
    double med = solve_cdf(C, 0.5, space, seed);
    double q25 = solve_cdf(C, 0.25, space, med);
    double q75 = solve_cdf(C, 0.75, space, med);
    double q_lo = solve_cdf(C, kTailMass, space, q25);
    double q_hi = solve_cdf(C, 1.0 - kTailMass, space, q75);
    ThetaMap map = choose_map(space, q_lo, q25, med, q75, q_hi);
    return transformed_grid(map, q_lo, q_hi, points);
}

numerics::GridDensity normalize_or_throw(std::vector<double> grid,
                                         std::vector<double> values,
                                         const char* what) {
    try {
        numerics::GridDensity raw(std::move(grid), std::move(values));
        return raw.normalize();
    } catch (const std::exception& e) {
        throw IntegrabilityError(std::string(what) +
                                 ": density failed to normalize (" + e.what() +
                                 ")");
    }
}

}  // namespace

// ---- ConfidenceDistribution ----

ConfidenceDistribution::ConfidenceDistribution(Kind kind,
                                               numerics::GridDensity density,
                                               Source source)
    : kind_(kind),
      density_(density.normalized() ? std::move(density) : density.normalize()),
      cdf_(numerics::cdf_from_density(density_)),
      source_(std::move(source)) {}

// ---- ImpliedPrior ----

double ImpliedPrior::operator()(double theta) const {
    // Zero outside the stored grid: the grid already spans all but ~2e-7 of
    // the source confidence mass, and extending a ~1/theta prior flatly
    // would make prior x likelihood non-integrable for heavy-tailed cases.
    return density(theta);
}

// ---- pointwise evaluations ----

double marginal_cdf(const models::ParametricModel& model, double t, double theta,
                    std::size_t n) {
    return 1.0 - model.statistic_cdf(t, theta, n);
}

double marginal_density_at(const models::ParametricModel& model, double t,
                           double theta, std::size_t n) {
    if (model.has_analytic_confidence_density(n))
        return std::max(0.0, model.analytic_confidence_density(theta, t, n));
    auto C = [&](double th) { return marginal_cdf(model, t, th, n); };
    double h = 1e-5 * std::max(1.0, std::abs(theta));
    return std::max(0.0, cdf_slope(model, C, theta, h));
}

double conditional_cdf(const models::ParametricModel& model, double t, double a,
                       double theta, std::size_t n) {
    return model.conditional_rhs_pvalue(theta, t, a, n);
}

// ---- distribution builders ----

ConfidenceDistribution marginal_distribution(const models::ParametricModel& model,
                                             double t, std::size_t n,
                                             GridOptions opts) {
    require_continuous_parameter(model, "marginal_distribution");
    Source src;
    src.model = model.name();
    src.statistic = "marginal statistic";

    std::vector<double> grid;
    if (auto sup = model.confidence_support(t, n)) {
        grid = numerics::linspace(sup->lo, sup->hi, opts.points);
    } else {
        auto C = [&](double th) { return marginal_cdf(model, t, th, n); };
        grid = quantile_grid(C, model.parameter_space(), initial_seed(model, t),
                             opts.points);
    }

    std::vector<double> values(grid.size());
    if (model.has_analytic_confidence_density(n)) {
        for (std::size_t i = 0; i < grid.size(); ++i)
            values[i] =
                std::max(0.0, model.analytic_confidence_density(grid[i], t, n));
    } else {
        // Five-point slope of C with step tied to the local grid spacing.
        auto C = [&](double th) { return marginal_cdf(model, t, th, n); };
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double h = i + 1 < grid.size() ? grid[i + 1] - grid[i]
                                           : grid[i] - grid[i - 1];
            values[i] = std::max(0.0, cdf_slope(model, C, grid[i], h));
        }
    }
    return ConfidenceDistribution(
        Kind::kMarginal,
        normalize_or_throw(std::move(grid), std::move(values),
                           "marginal_distribution"),
        std::move(src));
}

ConfidenceDistribution conditional_distribution(const models::ParametricModel& model,
                                                const models::Dataset& y,
                                                GridOptions opts) {
    require_continuous_parameter(model, "conditional_distribution");
    std::size_t n = y.size();
    double t = model.conditional_statistic(y);
    double a = model.ancillary(y);

    Source src;
    src.model = model.name();
    src.statistic = "conditional statistic";
    src.ancillary = a;

    auto C = [&](double th) { return conditional_cdf(model, t, a, th, n); };
    auto grid = quantile_grid(C, model.parameter_space(), initial_seed(model, t),
                              opts.points);

    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        values[i] = std::max(0.0, model.conditional_density(grid[i], t, a, n));
    return ConfidenceDistribution(
        Kind::kConditional,
        normalize_or_throw(std::move(grid), std::move(values),
                           "conditional_distribution"),
        std::move(src));
}

// ---- implied prior ----

namespace {

// Detects whether the (normalized) ratio c/L changes with the datum: the
// prior from the observed data is compared against the prior from a
// reference dataset simulated at a fixed seed.
bool probe_data_dependence(const models::ParametricModel& model,
                           const models::Dataset& y, bool conditional,
                           PriorRoute route,
                           const std::function<double(double)>& log_prior_a,
                           const std::vector<double>& grid) {
    double theta_ref;
    try {
        theta_ref = model.mle(y);
    } catch (const std::exception&) {
        theta_ref = grid[grid.size() / 2];
    }
    if (!model.theta_valid(theta_ref)) theta_ref = grid[grid.size() / 2];

    models::Dataset y_ref;
    try {
        y_ref = model.simulate(theta_ref, y.size(), 0xDA7A5EEDULL);
    } catch (const std::exception&) {
        return false;  // cannot probe; leave the flag unset
    }

    std::function<double(double)> log_prior_b;
    try {
        std::size_t n = y.size();
        if (conditional) {
            double t_b = model.conditional_statistic(y_ref);
            double a_b = model.ancillary(y_ref);
            log_prior_b = [&model, t_b, a_b, n, y_ref](double th) {
                double c = model.conditional_density(th, t_b, a_b, n);
                double ll = model.log_likelihood(th, y_ref);
                return c > 0.0 && std::isfinite(ll) ? std::log(c) - ll : kNegInf;
            };
        } else {
            double t_b = model.statistic(y_ref);
            if (route == PriorRoute::kStatisticLikelihood) {
                log_prior_b = [&model, t_b, n](double th) {
                    double c = marginal_density_at(model, t_b, th, n);
                    double ll = model.statistic_loglik(th, t_b, n);
                    return c > 0.0 && std::isfinite(ll) ? std::log(c) - ll
                                                        : kNegInf;
                };
            } else {
                log_prior_b = [&model, t_b, n, y_ref](double th) {
                    double c = marginal_density_at(model, t_b, th, n);
                    double ll = model.log_likelihood(th, y_ref);
                    return c > 0.0 && std::isfinite(ll) ? std::log(c) - ll
                                                        : kNegInf;
                };
            }
        }
    } catch (const std::exception&) {
        return false;
    }

    // Normalize both log-ratios at a shared anchor and compare on probes
    // spread across the central part of the grid.
    double anchor = theta_ref;
    if (anchor <= grid.front() || anchor >= grid.back())
        anchor = grid[grid.size() / 2];
    double base_a = log_prior_a(anchor), base_b = log_prior_b(anchor);
    if (!std::isfinite(base_a) || !std::isfinite(base_b)) return false;

    std::size_t valid = 0;
    const std::size_t probes = 17;
    for (std::size_t k = 0; k < probes; ++k) {
        std::size_t idx = grid.size() / 10 +
                          k * (grid.size() * 8 / 10) / (probes - 1);
        double th = grid[std::min(idx, grid.size() - 1)];
        double da = log_prior_a(th), db = log_prior_b(th);
        if (!std::isfinite(da) || !std::isfinite(db)) continue;
        ++valid;
        if (std::abs((da - base_a) - (db - base_b)) > 1e-3) return true;
    }
    // Fewer than 3 usable probes means the comparison was uninformative;
    // either way the flag stays unset.
    (void)valid;
    return false;
}

}  // namespace

ImpliedPrior implied_prior(const models::ParametricModel& model,
                           const models::Dataset& y, bool conditional,
                           PriorRoute route, GridOptions opts) {
    require_continuous_parameter(model, "implied_prior");
    if (conditional && route == PriorRoute::kStatisticLikelihood)
        throw ConfigError(
            "implied_prior: the statistic-likelihood route applies to "
            "marginal priors only");
    std::size_t n = y.size();

    double t, a = 0.0;
    std::function<double(double)> log_prior;
    std::function<double(double)> conf_density;
    if (conditional) {
        t = model.conditional_statistic(y);
        a = model.ancillary(y);
        conf_density = [&model, t, a, n](double th) {
            return model.conditional_density(th, t, a, n);
        };
        log_prior = [&model, t, a, n, &y](double th) {
            double c = model.conditional_density(th, t, a, n);
            double ll = model.log_likelihood(th, y);
            return c > 0.0 && std::isfinite(ll) ? std::log(c) - ll : kNegInf;
        };
    } else {
        t = model.statistic(y);
        conf_density = [&model, t, n](double th) {
            return marginal_density_at(model, t, th, n);
        };
        if (route == PriorRoute::kStatisticLikelihood) {
            log_prior = [&model, t, n](double th) {
                double c = marginal_density_at(model, t, th, n);
                double ll = model.statistic_loglik(th, t, n);
                return c > 0.0 && std::isfinite(ll) ? std::log(c) - ll : kNegInf;
            };
        } else {
            log_prior = [&model, t, n, &y](double th) {
                double c = marginal_density_at(model, t, th, n);
                double ll = model.log_likelihood(th, y);
                return c > 0.0 && std::isfinite(ll) ? std::log(c) - ll : kNegInf;
            };
        }
    }

    std::vector<double> grid;
    if (auto sup = model.confidence_support(t, n)) {
        grid = numerics::linspace(sup->lo, sup->hi, opts.points);
    } else {
        std::function<double(double)> C;
        if (conditional) {
            C = [&model, t, a, n](double th) {
                return conditional_cdf(model, t, a, th, n);
            };
        } else {
            C = [&model, t, n](double th) { return marginal_cdf(model, t, th, n); };
        }
        grid = quantile_grid(C, model.parameter_space(), initial_seed(model, t),
                             opts.points);
    }

    // Work in logs and shift by the maximum: improper priors are stored
    // unnormalized, so a common scale factor is free.
    std::vector<double> logv(grid.size());
    double shift = kNegInf;
    std::size_t excluded = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double c = conf_density(grid[i]);
        logv[i] = log_prior(grid[i]);
        if (c > 0.0 && !std::isfinite(logv[i])) ++excluded;
        shift = std::max(shift, logv[i]);
    }
    if (!std::isfinite(shift))
        throw IntegrabilityError(
            "implied_prior: c/L vanished or diverged on the entire grid");

    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        values[i] = std::isfinite(logv[i]) ? std::exp(logv[i] - shift) : 0.0;

    ImpliedPrior prior;
    prior.density = numerics::GridDensity(grid, values);
    prior.excluded_points = excluded;
    prior.data_dependent =
        probe_data_dependence(model, y, conditional, route, log_prior, grid);
    return prior;
}

// ---- full confidence (updating formula) ----

namespace {

// Shifted-log evaluation of prior x likelihood on a grid; a common scale
// factor is immaterial because the result is normalized.
std::vector<double> product_values(const std::function<double(double)>& log_prior_lik,
                                   const std::vector<double>& grid,
                                   const char* what) {
    std::vector<double> logv(grid.size());
    double shift = kNegInf;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        logv[i] = log_prior_lik(grid[i]);
        shift = std::max(shift, logv[i]);
    }
    if (!std::isfinite(shift))
        throw IntegrabilityError(std::string(what) +
                                 ": prior*likelihood vanished on the entire grid");
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        values[i] = std::isfinite(logv[i]) ? std::exp(logv[i] - shift) : 0.0;
    return values;
}

// Normalizes prior x likelihood on a grid adapted to where its mass lies.
// Pass 1 probes outward from the center on a stretched axis until the mass
// density has died off; pass 2 re-grids between the 1e-7 and 1-1e-7
// quantiles of the pass-1 result so the final cells track the distribution.
ConfidenceDistribution build_product(const std::function<double(double)>& log_prior_lik,
                                     double center, double spread,
                                     numerics::Interval bounds, Kind kind,
                                     Source src, GridOptions opts) {
    ThetaMap map1;
    if (std::isfinite(bounds.lo) && !std::isfinite(bounds.hi)) {
        map1.kind = ThetaMap::kLog;
        map1.lo = bounds.lo;
    } else if (!std::isfinite(bounds.lo) && !std::isfinite(bounds.hi)) {
        map1.kind = ThetaMap::kAsinh;
        map1.c = center;
        map1.s = spread;
    }
    double log_at_center = log_prior_lik(center);
    if (!std::isfinite(log_at_center))
        throw IntegrabilityError(
            "full_confidence: prior*likelihood vanishes at the grid center");
    // Mass density in the stretched coordinate (Jacobian included), so the
    // tail cut happens where the remaining *mass* is negligible.
    auto f_u = [&](double u) {
        double lv = log_prior_lik(map1.to_theta(u));
        return std::isfinite(lv) ? std::exp(lv - log_at_center) * map1.slope(u)
                                 : 0.0;
    };
    numerics::Interval u_bounds{kNegInf, std::numeric_limits<double>::infinity()};
    if (map1.kind == ThetaMap::kIdentity) u_bounds = bounds;
    else if (map1.kind == ThetaMap::kLog && std::isfinite(bounds.hi))
        u_bounds.hi = std::log(bounds.hi - bounds.lo);
    double u_center = map1.to_u(center);
    double u_halfwidth = map1.kind == ThetaMap::kIdentity
                             ? 6.0 * spread
                             : std::max(0.5, 6.0 * spread / map1.slope(u_center));
    numerics::GridSpec probe_spec;
    probe_spec.points = 801;
    auto u_grid = numerics::build_support_grid(f_u, u_center, u_halfwidth,
                                               u_bounds, probe_spec);
    std::vector<double> grid1(u_grid.size());
    for (std::size_t i = 0; i < u_grid.size(); ++i)
        grid1[i] = map1.to_theta(u_grid[i]);
    auto values1 = product_values(log_prior_lik, grid1, "full_confidence");
    auto rough = normalize_or_throw(grid1, values1, "full_confidence");
    auto cdf1 = numerics::cdf_from_density(rough);

    double q_lo = cdf1.quantile(kTailMass);
    double q25 = cdf1.quantile(0.25);
    double med = cdf1.quantile(0.5);
    double q75 = cdf1.quantile(0.75);
    double q_hi = cdf1.quantile(1.0 - kTailMass);
    ThetaMap map2 = choose_map(bounds, q_lo, q25, med, q75, q_hi);
    auto grid = transformed_grid(map2, q_lo, q_hi, opts.points);
    auto values = product_values(log_prior_lik, grid, "full_confidence");
    return ConfidenceDistribution(
        kind,
        normalize_or_throw(std::move(grid), std::move(values), "full_confidence"),
        std::move(src));
}

ConfidenceDistribution build_full(const std::function<double(double)>& prior_fn,
                                  const models::ParametricModel& model,
                                  const models::Dataset& y, Source src,
                                  GridOptions opts) {
    require_continuous_parameter(model, "full_confidence");
    auto log_prior_lik = [&prior_fn, &model, &y](double th) {
        double lp = prior_fn(th);
        if (!(lp > 0.0)) return kNegInf;
        double ll = model.log_likelihood(th, y);
        return std::isfinite(ll) ? std::log(lp) + ll : kNegInf;
    };

    if (auto sup = model.likelihood_support(y)) {
        if (!(sup->lo <= sup->hi))
            throw IntegrabilityError(
                "full_confidence: likelihood support is empty");
        auto grid = numerics::linspace(sup->lo, sup->hi, opts.points);
        auto values = product_values(log_prior_lik, grid, "full_confidence");
        return ConfidenceDistribution(
            Kind::kFull,
            normalize_or_throw(std::move(grid), std::move(values),
                               "full_confidence"),
            std::move(src));
    }

    double center;
    try {
        center = model.mle(y);
    } catch (const BoundaryMleError& e) {
        throw IntegrabilityError(
            std::string("full_confidence: no interior likelihood maximum (") +
            e.what() + ")");
    }
    double info = model.observed_information(center, y);
    double spread = info > 0.0 ? 1.0 / std::sqrt(info)
                               : (1.0 + std::abs(center)) / 3.0;
    return build_product(log_prior_lik, center, spread, model.parameter_space(),
                         Kind::kFull, std::move(src), opts);
}

}  // namespace

ConfidenceDistribution full_confidence(const ImpliedPrior& prior,
                                       const models::ParametricModel& model,
                                       const models::Dataset& y,
                                       GridOptions opts) {
    Source src;
    src.model = model.name();
    src.prior = prior.data_dependent ? "implied prior (data-dependent)"
                                     : "implied prior";
    return build_full([&prior](double th) { return prior(th); }, model, y,
                      std::move(src), opts);
}

ConfidenceDistribution full_confidence(const std::function<double(double)>& prior,
                                       const models::ParametricModel& model,
                                       const models::Dataset& y,
                                       GridOptions opts) {
    Source src;
    src.model = model.name();
    src.prior = "functional prior";
    return build_full(prior, model, y, std::move(src), opts);
}

ConfidenceDistribution full_confidence(const std::function<double(double)>& prior,
                                       const std::function<double(double)>& loglik,
                                       double center_hint, double halfwidth_hint,
                                       numerics::Interval bounds, Source source,
                                       GridOptions opts) {
    auto log_prior_lik = [&prior, &loglik](double th) {
        double lp = prior(th);
        if (!(lp > 0.0)) return kNegInf;
        double ll = loglik(th);
        return std::isfinite(ll) ? std::log(lp) + ll : kNegInf;
    };
    return build_product(log_prior_lik, center_hint, halfwidth_hint / 3.0, bounds,
                         Kind::kFull, std::move(source), opts);
}

std::vector<std::pair<double, double>> discrete_full_confidence(
    const models::ParametricModel& model, const models::Dataset& y) {
    auto candidates = model.parameter_candidates(y);
    if (candidates.empty())
        throw ConfigError("discrete_full_confidence: no admissible theta for "
                          "this dataset");
    std::vector<std::pair<double, double>> table;
    table.reserve(candidates.size());
    double total = 0.0;
    for (double th : candidates) {
        double w = std::exp(model.log_likelihood(th, y));
        table.emplace_back(th, w);
        total += w;
    }
    if (!(total > 0.0))
        throw ConfigError("discrete_full_confidence: dataset has zero "
                          "likelihood at every admissible theta");
    for (auto& [th, w] : table) w /= total;
    return table;
}

// ---- intervals ----

ConfidenceInterval interval_split(const ConfidenceDistribution& cd, double gamma1,
                                  double gamma2) {
    if (!(gamma1 >= 0.0 && gamma2 <= 1.0 && gamma1 < gamma2))
        throw ConfigError("interval: need 0 <= gamma1 < gamma2 <= 1");
    ConfidenceInterval ci;
    ci.gamma1 = gamma1;
    ci.gamma2 = gamma2;
    ci.gamma = gamma2 - gamma1;
    ci.lower = cd.quantile(1.0 - gamma2);
    ci.upper = cd.quantile(1.0 - gamma1);
    return ci;
}

ConfidenceInterval interval(const ConfidenceDistribution& cd, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw ConfigError("interval: gamma must lie in (0,1)");
    return interval_split(cd, 0.5 * (1.0 - gamma), 0.5 * (1.0 + gamma));
}

double confidence_of(const ConfidenceDistribution& cd, double lo, double hi) {
    if (lo > hi) return 0.0;
    return std::max(0.0, cd.cdf_at(hi) - cd.cdf_at(lo));
}

double confidence_of(const ConfidenceDistribution& cd,
                     const ConfidenceInterval& ci) {
    return confidence_of(cd, ci.lower, ci.upper);
}

// ---- grid-free quantiles ----

double marginal_quantile(const models::ParametricModel& model, double t, double p,
                         std::size_t n, double seed_hint) {
    p = std::clamp(p, 1e-12, 1.0 - 1e-12);
    double seed =
        model.theta_valid(seed_hint) ? seed_hint : initial_seed(model, t);
    auto C = [&](double th) { return marginal_cdf(model, t, th, n); };
    return solve_cdf(C, p, model.parameter_space(), seed);
}

ConfidenceInterval marginal_interval(const models::ParametricModel& model,
                                     double t, double gamma, double gamma1,
                                     double gamma2, std::size_t n,
                                     double seed_hint) {
    if (!(gamma1 >= 0.0 && gamma2 <= 1.0 && gamma1 < gamma2))
        throw ConfigError("marginal_interval: need 0 <= gamma1 < gamma2 <= 1");
    ConfidenceInterval ci;
    ci.gamma = gamma;
    ci.gamma1 = gamma1;
    ci.gamma2 = gamma2;
    ci.lower = marginal_quantile(model, t, 1.0 - gamma2, n, seed_hint);
    ci.upper = marginal_quantile(model, t, 1.0 - gamma1, n, seed_hint);
    return ci;
}

double conditional_quantile(const models::ParametricModel& model, double t,
                            double a, double p, std::size_t n,
                            double seed_hint) {
    p = std::clamp(p, 1e-12, 1.0 - 1e-12);
    double seed =
        model.theta_valid(seed_hint) ? seed_hint : initial_seed(model, t);
    auto C = [&](double th) { return conditional_cdf(model, t, a, th, n); };
    return solve_cdf(C, p, model.parameter_space(), seed);
}

double floor_guess_coverage(double theta) {
    return 1.0 - (theta - std::floor(theta));
}

}  // namespace epiconf::confidence
