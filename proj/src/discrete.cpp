#include "discrete.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "errors.h"
#include "models.h"

namespace epiconf::discrete {

namespace {

void check_observed(Family family, Observed obs) {
    bool ok = family == Family::kBinomial
                  ? (obs.n >= 1 && obs.y >= 0 && obs.y <= obs.n)
                  : (obs.y >= 1 && obs.n >= obs.y);
    if (!ok)
        throw ConfigError(std::string(family_name(family)) +
                          ": observed (y=" + std::to_string(obs.y) +
                          ", n=" + std::to_string(obs.n) +
                          ") is outside the sample space");
}

// The two incomplete-beta terms of the mid P-value as (weight, a, b) Beta
// components; a degenerate term (zero shape) contributes its limit to the
// P-value but no Beta component to the density.
struct BetaTerm {
    double a = 0.0, b = 0.0;
    bool valid() const { return a > 0.0 && b > 0.0; }
};

std::pair<BetaTerm, BetaTerm> beta_terms(Family family, Observed obs) {
    double y = obs.y, n = obs.n;
    if (family == Family::kBinomial)
        return {BetaTerm{y, n - y + 1.0}, BetaTerm{y + 1.0, n - y}};
    return {BetaTerm{y, n - y + 1.0}, BetaTerm{y, n - y}};
}

// The exact limit of a degenerate term: binomial first term (y = 0) is
// P(T >= 0) = 1; binomial second term (y = n) is P(T > n) = 0; negative
// binomial second term (n = y) is P(N < y) = 0.
double term_value(const BetaTerm& term, bool is_first, double theta) {
    if (term.valid()) return numerics::reg_inc_beta(theta, term.a, term.b);
    return is_first ? 1.0 : 0.0;
}

}  // namespace

const char* family_name(Family f) {
    return f == Family::kBinomial ? "binomial" : "negative_binomial";
}

double mid_pvalue(Family family, Observed obs, double theta) {
    check_observed(family, obs);
    if (!(theta >= 0.0 && theta <= 1.0))
        throw ConfigError("mid_pvalue: theta must lie in [0, 1]");
    auto [t1, t2] = beta_terms(family, obs);
    return 0.5 * (term_value(t1, true, theta) + term_value(t2, false, theta));
}

double midp_density(Family family, Observed obs, double theta) {
    check_observed(family, obs);
    if (!(theta >= 0.0 && theta <= 1.0))
        throw ConfigError("midp_density: theta must lie in [0, 1]");
    auto [t1, t2] = beta_terms(family, obs);
    double mass = (t1.valid() ? 0.5 : 0.0) + (t2.valid() ? 0.5 : 0.0);
    double v = 0.0;
    if (t1.valid()) v += 0.5 * numerics::beta_pdf(theta, t1.a, t1.b);
    if (t2.valid()) v += 0.5 * numerics::beta_pdf(theta, t2.a, t2.b);
    return v / mass;
}

numerics::GridDensity midp_confidence_density(Family family, Observed obs,
                                              std::size_t points) {
    check_observed(family, obs);
    if (points < 3) throw ConfigError("midp_confidence_density: points >= 3");
    // Endpoint-clustered grid theta_i = (1 - cos(pi u)) / 2. Its trapezoid
    // error is (pi^2 / 12 N^2)(2 - f(0) - f(1)) to leading order, so the
    // grid is sized from the endpoint densities to keep the tabulated
    // integral within 2e-7 -- five-fold margin under the 1e-6 normalization
    // contract even for steep boundary-count cases. `points` is a floor.
    double edge = 2.0 + midp_density(family, obs, 0.0) +
                  midp_density(family, obs, 1.0);
    double target = 2e-7;
    auto needed = std::size_t(
        std::ceil(std::sqrt(std::numbers::pi * std::numbers::pi / 12.0 *
                            edge / target)));
    std::size_t n_pts = std::max(points, needed) | 1;  // odd keeps 1/2 on-grid
    std::vector<double> grid(n_pts), values(n_pts);
    for (std::size_t i = 0; i < n_pts; ++i) {
        double u = double(i) / double(n_pts - 1);
        grid[i] = 0.5 * (1.0 - std::cos(std::numbers::pi * u));
        values[i] = midp_density(family, obs, grid[i]);
    }
    grid.front() = 0.0;
    grid.back() = 1.0;
    return numerics::GridDensity(std::move(grid), std::move(values), true);
}

confidence::ConfidenceInterval midp_interval(Family family, Observed obs,
                                             double gamma) {
    check_observed(family, obs);
    if (!(gamma > 0.0 && gamma < 1.0))
        throw ConfigError("midp_interval: gamma must lie in (0, 1)");
    double g1 = 0.5 * (1.0 - gamma), g2 = 0.5 * (1.0 + gamma);
    auto solve = [&](double p) {
        const double lo = 1e-13, hi = 1.0 - 1e-13;
        if (mid_pvalue(family, obs, lo) >= p) return 0.0;
        if (mid_pvalue(family, obs, hi) <= p) return 1.0;
        return numerics::find_root(
            [&](double th) { return mid_pvalue(family, obs, th) - p; }, lo, hi,
            1e-12);
    };
    confidence::ConfidenceInterval ci;
    ci.gamma = gamma;
    ci.gamma1 = g1;
    ci.gamma2 = g2;
    ci.lower = solve(g1);
    ci.upper = solve(g2);
    return ci;
}

namespace {

// Exact coverage of the fixed-gamma mid-P interval at one theta.
double exact_coverage(Family family, int size, double gamma, double theta,
                      std::uint64_t& outcomes,
                      std::vector<numerics::Interval>& cache) {
    auto interval_for = [&](int idx, Observed obs) {
        if (idx >= int(cache.size()))
            cache.resize(idx + 1, numerics::Interval{2.0, -2.0});
        if (cache[idx].lo > cache[idx].hi) {
            auto ci = midp_interval(family, obs, gamma);
            cache[idx] = {ci.lower, ci.upper};
        }
        return cache[idx];
    };

    double covered = 0.0;
    outcomes = 0;
    if (family == Family::kBinomial) {
        int n = size;
        for (int y = 0; y <= n; ++y) {
            double logp = numerics::log_gamma(n + 1.0) -
                          numerics::log_gamma(y + 1.0) -
                          numerics::log_gamma(n - y + 1.0) +
                          y * std::log(theta) + (n - y) * std::log1p(-theta);
            if (interval_for(y, {y, n}).contains(theta))
                covered += std::exp(logp);
            ++outcomes;
        }
        return covered;
    }
    // Negative binomial: trials n = y, y+1, ... with
    // pmf(n) = C(n-1, y-1) theta^y (1-theta)^(n-y); recurse on n and stop when
    // the accumulated mass reaches 1 - 1e-10.
    int y = size;
    double pmf = std::pow(theta, y);
    double cum = 0.0;
    for (int n = y;; ++n) {
        if (n > y) pmf *= (double(n - 1) / double(n - y)) * (1.0 - theta);
        cum += pmf;
        if (interval_for(n - y, {y, n}).contains(theta)) covered += pmf;
        ++outcomes;
        if (cum >= 1.0 - 1e-10) break;
        if (n - y > 200'000'000)
            throw QuadratureFailure(
                "negative binomial coverage: truncation bound not reached",
                cum);
    }
    return covered;
}

}  // namespace

std::vector<MidpCoverageCase> midp_coverage_experiment(
    const std::vector<std::pair<Family, int>>& cases, double gamma,
    const std::vector<double>& theta_grid, std::uint64_t /*n_sim: exact*/,
    std::uint64_t seed) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw ConfigError("midp_coverage_experiment: gamma in (0, 1)");
    if (theta_grid.empty())
        throw ConfigError("midp_coverage_experiment: theta grid is empty");
    for (double th : theta_grid)
        if (!(th > 0.0 && th < 1.0))
            throw ConfigError(
                "midp_coverage_experiment: theta grid must lie in (0, 1)");

    std::vector<MidpCoverageCase> out;
    out.reserve(cases.size());
    for (auto [family, size] : cases) {
        MidpCoverageCase c;
        c.family = family;
        c.size = size;
        c.report.model = std::string(family_name(family)) + "(" +
                         std::to_string(size) + ")";
        c.report.gamma = gamma;
        c.report.sample_size = std::size_t(size);
        c.report.theta_grid = theta_grid;
        c.report.seed = seed;
        c.report.exact = true;
        std::vector<numerics::Interval> cache;
        for (double theta : theta_grid) {
            coverage::Cell cell;
            cell.theta = theta;
            cell.coverage =
                exact_coverage(family, size, gamma, theta, cell.n, cache);
            c.report.cells.push_back(cell);
        }
        out.push_back(std::move(c));
    }
    return out;
}

EvansTables evans_enumeration() {
    auto model = models::make_model("evans_2x2");
    EvansTables t{};
    for (int th = 1; th <= 2; ++th) {
        for (const auto& [y, p] : model->enumerate(double(th), 1)) {
            int y1 = int(std::lround(y[0])), y2 = int(std::lround(y[1]));
            t.joint[th - 1][y1 - 1][y2 - 1] = p;
            t.marginal_y1[th - 1][y1 - 1] += p;
            t.marginal_y2[th - 1][y2 - 1] += p;
        }
    }
    for (int y1 = 1; y1 <= 2; ++y1)
        for (int y2 = 1; y2 <= 2; ++y2)
            t.mle[y1 - 1][y2 - 1] =
                int(std::lround(model->mle({double(y1), double(y2)})));
    for (int th = 1; th <= 2; ++th) {
        for (int y1 = 1; y1 <= 2; ++y1)
            for (int y2 = 1; y2 <= 2; ++y2) {
                if (t.mle[y1 - 1][y2 - 1] != th) continue;
                double p = t.joint[th - 1][y1 - 1][y2 - 1];
                t.marginal_correct[th - 1] += p;
                t.correct_given_y1[th - 1][y1 - 1] += p;
                t.correct_given_y2[th - 1][y2 - 1] += p;
            }
        for (int k = 1; k <= 2; ++k) {
            t.correct_given_y1[th - 1][k - 1] /= t.marginal_y1[th - 1][k - 1];
            t.correct_given_y2[th - 1][k - 1] /= t.marginal_y2[th - 1][k - 1];
        }
        t.likelihood_at_11[th - 1] =
            std::exp(model->log_likelihood(double(th), {1.0, 1.0}));
    }
    // Likelihood is conventionally reported normalized to its maximum.
    double lmax = std::max(t.likelihood_at_11[0], t.likelihood_at_11[1]);
    t.likelihood_at_11[0] /= lmax;
    t.likelihood_at_11[1] /= lmax;
    return t;
}

}  // namespace epiconf::discrete
