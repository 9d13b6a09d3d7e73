#include "models.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "asymptotics.h"
#include "errors.h"
#include "rng.h"

namespace epiconf::models {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogSqrt2Pi = 0.9189385332046727417803297;  // log sqrt(2*pi)

double sum(const Dataset& y) { return std::accumulate(y.begin(), y.end(), 0.0); }

double sum_sq(const Dataset& y) {
    double s = 0.0;
    for (double v : y) s += v * v;
    return s;
}

void require_nonempty(const Dataset& y, const char* who) {
    if (y.empty()) throw ConfigError(std::string(who) + ": empty dataset");
}

bool integerish(double x) {
    return std::isfinite(x) && std::abs(x - std::round(x)) < 1e-9;
}

double log_choose(double n, double k) {
    return numerics::log_gamma(n + 1.0) - numerics::log_gamma(k + 1.0) -
           numerics::log_gamma(n - k + 1.0);
}

}  // namespace

// ---- base-class defaults ----

double ParametricModel::log_likelihood(double theta, const Dataset& y) const {
    check_theta(theta);
    require_nonempty(y, name().c_str());
    double total = 0.0;
    for (double v : y) {
        total += log_density(theta, v);
        if (total == kNegInf) return kNegInf;
    }
    return total;
}

bool ParametricModel::has_statistic_law(std::size_t) const { return false; }

double ParametricModel::statistic(const Dataset&) const {
    throw CapabilityError(name() + ": no scalar statistic");
}

double ParametricModel::statistic_cdf(double, double, std::size_t) const {
    throw CapabilityError(name() + ": no tractable statistic law");
}

double ParametricModel::quantile(double alpha, double theta, std::size_t n) const {
    check_theta(theta);
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ConfigError(name() + ": quantile level must lie in (0,1)");
    if (!has_statistic_law(n))
        throw CapabilityError(name() + ": no tractable statistic law for n=" +
                              std::to_string(n));
    auto gap = [&](double t) { return statistic_cdf(t, theta, n) - alpha; };
    return numerics::find_root_expand(gap, theta, std::max(1.0, std::abs(theta)),
                                      {-1e15, 1e15}, 1e-11);
}

bool ParametricModel::has_analytic_confidence_density(std::size_t) const {
    return false;
}

double ParametricModel::analytic_confidence_density(double, double,
                                                    std::size_t) const {
    throw CapabilityError(name() + ": no closed-form confidence density");
}

bool ParametricModel::has_statistic_loglik(std::size_t) const { return false; }

double ParametricModel::statistic_loglik(double, double, std::size_t) const {
    throw CapabilityError(name() + ": no statistic-likelihood form");
}

std::vector<std::string> ParametricModel::ancillary_names() const { return {}; }

double ParametricModel::ancillary_named(const std::string& which,
                                        const Dataset&) const {
    throw CapabilityError(name() + ": no ancillary named '" + which + "'");
}

double ParametricModel::ancillary(const Dataset& y) const {
    auto names = ancillary_names();
    if (names.empty()) throw CapabilityError(name() + ": no ancillary");
    return ancillary_named(names.front(), y);
}

double ParametricModel::conditional_statistic(const Dataset& y) const {
    return statistic(y);
}

double ParametricModel::conditional_rhs_pvalue(double, double, double,
                                               std::size_t) const {
    throw CapabilityError(name() + ": no exact conditional law");
}

double ParametricModel::conditional_density(double, double, double,
                                            std::size_t) const {
    throw CapabilityError(name() + ": no exact conditional density");
}

double ParametricModel::score(double theta, const Dataset& y) const {
    check_theta(theta);
    double h = 1e-5 * std::max(1.0, std::abs(theta));
    for (int i = 0; i < 60 && !(theta_valid(theta - 2 * h) &&
                                theta_valid(theta + 2 * h)); ++i)
        h *= 0.5;
    double f1 = log_likelihood(theta + h, y), fm1 = log_likelihood(theta - h, y);
    double f2 = log_likelihood(theta + 2 * h, y),
           fm2 = log_likelihood(theta - 2 * h, y);
    return (-f2 + 8.0 * f1 - 8.0 * fm1 + fm2) / (12.0 * h);
}

double ParametricModel::observed_information(double theta, const Dataset& y) const {
    check_theta(theta);
    double h = 1e-4 * std::max(1.0, std::abs(theta));
    for (int i = 0; i < 60 && !(theta_valid(theta - 2 * h) &&
                                theta_valid(theta + 2 * h)); ++i)
        h *= 0.5;
    double f0 = log_likelihood(theta, y);
    double f1 = log_likelihood(theta + h, y), fm1 = log_likelihood(theta - h, y);
    double f2 = log_likelihood(theta + 2 * h, y),
           fm2 = log_likelihood(theta - 2 * h, y);
    return -(-f2 + 16.0 * f1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
}

bool ParametricModel::has_summary_likelihood() const { return false; }

double ParametricModel::log_likelihood_from_summary(double, double, double,
                                                    std::size_t) const {
    throw CapabilityError(name() + ": no summary-likelihood parametrization");
}

double ParametricModel::information_at_mle(double, double, std::size_t) const {
    throw CapabilityError(name() + ": no summary-likelihood parametrization");
}

bool ParametricModel::enumerable(std::size_t) const { return false; }

std::vector<std::pair<Dataset, double>> ParametricModel::enumerate(
    double, std::size_t) const {
    throw CapabilityError(name() + ": sample space not enumerable");
}

std::vector<double> ParametricModel::parameter_candidates(const Dataset&) const {
    throw CapabilityError(name() + ": no discrete parameter lattice");
}

std::optional<numerics::Interval> ParametricModel::confidence_support(
    double, std::size_t) const {
    return std::nullopt;
}

std::optional<numerics::Interval> ParametricModel::likelihood_support(
    const Dataset&) const {
    return std::nullopt;
}

bool ParametricModel::theta_valid(double theta) const {
    return std::isfinite(theta) && parameter_space().contains(theta);
}

void ParametricModel::check_theta(double theta) const {
    if (!theta_valid(theta)) {
        std::ostringstream msg;
        msg << name() << ": theta=" << theta << " outside the parameter space";
        throw ConfigError(msg.str());
    }
}

namespace {

// ---- standard normal location: y ~ N(theta, 1) ----

class NormalLocation final : public ParametricModel {
public:
    std::string name() const override { return "normal_location"; }
    numerics::Interval parameter_space() const override { return {kNegInf, kInf}; }
    Capabilities capabilities() const override {
        Capabilities c;
        c.has_sufficient_T = true;
        return c;
    }

    double log_density(double theta, double y) const override {
        double d = y - theta;
        return -kLogSqrt2Pi - 0.5 * d * d;
    }

    double mle(const Dataset& y) const override {
        require_nonempty(y, "normal_location");
        return sum(y) / static_cast<double>(y.size());
    }

    Dataset simulate(double theta, std::size_t n, std::uint64_t seed) const override {
        check_theta(theta);
        Dataset out(n);
        for (std::size_t i = 0; i < n; ++i) {
            rng::Stream s(rng::derive(seed, i));
            out[i] = theta + s.next_normal();
        }
        return out;
    }

    bool has_statistic_law(std::size_t n) const override { return n >= 1; }

    double statistic(const Dataset& y) const override {
        require_nonempty(y, "normal_location");
        return sum(y) / static_cast<double>(y.size());
    }

    double statistic_cdf(double t, double theta, std::size_t n) const override {
        check_theta(theta);
        double root_n = std::sqrt(static_cast<double>(n));
        return numerics::normal_cdf((t - theta) * root_n);
    }

    double quantile(double alpha, double theta, std::size_t n) const override {
        check_theta(theta);
        if (!(alpha > 0.0 && alpha < 1.0))
            throw ConfigError("normal_location: quantile level must lie in (0,1)");
        return theta + numerics::normal_quantile(alpha) /
                           std::sqrt(static_cast<double>(n));
    }

    bool has_analytic_confidence_density(std::size_t) const override { return true; }

    double analytic_confidence_density(double theta, double t,
                                       std::size_t n) const override {
        check_theta(theta);
        double root_n = std::sqrt(static_cast<double>(n));
        return root_n * numerics::normal_pdf((theta - t) * root_n);
    }

    bool has_statistic_loglik(std::size_t) const override { return true; }

    // T = sample mean ~ N(theta, 1/n).
    double statistic_loglik(double theta, double t, std::size_t n) const override {
        check_theta(theta);
        double d = t - theta;
        return -0.5 * static_cast<double>(n) * d * d;
    }

    double score(double theta, const Dataset& y) const override {
        check_theta(theta);
        return sum(y) - static_cast<double>(y.size()) * theta;
    }

    double observed_information(double theta, const Dataset& y) const override {
        check_theta(theta);
        return static_cast<double>(y.size());
    }
};

// ---- general location family: y ~ f(y - theta), f a fixed shape ----

enum class LocationShape { kNormal, kCauchy, kLaplace, kLogistic };

class LocationFamily final : public ParametricModel {
public:
    explicit LocationFamily(LocationShape shape) : shape_(shape) {}

    std::string name() const override {
        return std::string("location_family:") + shape_name();
    }
    numerics::Interval parameter_space() const override { return {kNegInf, kInf}; }
    Capabilities capabilities() const override {
        Capabilities c;
        c.has_ancillary = true;  // the configuration of spacings; "range" coded
        return c;
    }

    double log_density(double theta, double y) const override {
        double x = y - theta;
        switch (shape_) {
            case LocationShape::kNormal:
                return -kLogSqrt2Pi - 0.5 * x * x;
            case LocationShape::kCauchy:
                return -std::log(M_PI) - std::log1p(x * x);
            case LocationShape::kLaplace:
                return -std::log(2.0) - std::abs(x);
            case LocationShape::kLogistic:
                return -std::abs(x) - 2.0 * std::log1p(std::exp(-std::abs(x)));
        }
        return kNegInf;
    }

    double mle(const Dataset& y) const override {
        require_nonempty(y, "location_family");
        if (y.size() == 1) return y[0];  // symmetric unimodal shapes
        auto [mn, mx] = std::minmax_element(y.begin(), y.end());
        double lo = *mn - 1.0, hi = *mx + 1.0;
        auto nll = [&](double th) { return -log_likelihood(th, y); };
        // Coarse scan (the Cauchy likelihood can be multimodal), then golden
        // section refinement around the best cell.
        const std::size_t cells = 800;
        double best = lo, best_val = nll(lo);
        for (std::size_t i = 1; i <= cells; ++i) {
            double th = lo + (hi - lo) * static_cast<double>(i) / cells;
            double v = nll(th);
            if (v < best_val) { best_val = v; best = th; }
        }
        double step = (hi - lo) / cells;
        double a = best - 2.0 * step, b = best + 2.0 * step;
        constexpr double kGolden = 0.6180339887498949;
        double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
        double f1 = nll(x1), f2 = nll(x2);
        for (int it = 0; it < 200 && (b - a) > 1e-12 * (1.0 + std::abs(best)); ++it) {
            if (f1 < f2) {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - kGolden * (b - a); f1 = nll(x1);
            } else {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + kGolden * (b - a); f2 = nll(x2);
            }
        }
        return 0.5 * (a + b);
    }

    Dataset simulate(double theta, std::size_t n, std::uint64_t seed) const override {
        check_theta(theta);
        Dataset out(n);
        for (std::size_t i = 0; i < n; ++i) {
            rng::Stream s(rng::derive(seed, i));
            out[i] = theta + standard_draw(s);
        }
        return out;
    }

    std::vector<std::string> ancillary_names() const override { return {"range"}; }

    double ancillary_named(const std::string& which,
                           const Dataset& y) const override {
        if (which != "range")
            throw CapabilityError(name() + ": no ancillary named '" + which + "'");
        require_nonempty(y, "location_family");
        auto [mn, mx] = std::minmax_element(y.begin(), y.end());
        return *mx - *mn;
    }

private:
    const char* shape_name() const {
        switch (shape_) {
            case LocationShape::kNormal: return "normal";
            case LocationShape::kCauchy: return "cauchy";
            case LocationShape::kLaplace: return "laplace";
            case LocationShape::kLogistic: return "logistic";
        }
        return "?";
    }

    double standard_draw(rng::Stream& s) const {
        double u = s.next_u01();
        switch (shape_) {
            case LocationShape::kNormal:
                return numerics::normal_quantile(u);
            case LocationShape::kCauchy:
                return std::tan(M_PI * (u - 0.5));
            case LocationShape::kLaplace:
                return u < 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
            case LocationShape::kLogistic:
                return std::log(u / (1.0 - u));
        }
        return 0.0;
    }

    LocationShape shape_;
};

// ---- three-point uniform on {theta-1, theta, theta+1}, integer theta ----

class DiscreteUniformTriple final : public ParametricModel {
public:
    std::string name() const override { return "discrete_uniform_triple"; }
    numerics::Interval parameter_space() const override { return {-1e15, 1e15}; }
    Capabilities capabilities() const override {
        Capabilities c;
        c.has_ancillary = true;
        c.has_exact_conditional = true;
        c.discrete_data = true;
        c.discrete_parameter = true;
        return c;
    }

    bool theta_valid(double theta) const override {
        return integerish(theta) && std::abs(theta) <= 1e15;
    }

    double log_density(double theta, double y) const override {
        if (!integerish(y)) return kNegInf;
        double d = std::abs(std::round(y) - theta);
        return d <= 1.0 + 1e-9 ? -std::log(3.0) : kNegInf;
    }

    // Every integer in [max(y)-1, min(y)+1] ties for the maximum; the
    // supported integer nearest the sample mean is returned, the smaller one
    // on half-integer ties.
    double mle(const Dataset& y) const override {
        require_nonempty(y, "discrete_uniform_triple");
        auto [mn, mx] = std::minmax_element(y.begin(), y.end());
        double lo = std::round(*mx) - 1.0, hi = std::round(*mn) + 1.0;
        if (lo > hi)
            throw BoundaryMleError(
                "discrete_uniform_triple: sample range exceeds 2; no theta "
                "supports all observations");
        double mean = sum(y) / static_cast<double>(y.size());
        double candidate = std::floor(mean + 0.5);
        if (candidate - mean == 0.5) candidate -= 1.0;  // half-tie: smaller
        return std::clamp(candidate, lo, hi);
    }

    Dataset simulate(double theta, std::size_t n, std::uint64_t seed) const override {
        check_theta(theta);
        Dataset out(n);
        for (std::size_t i = 0; i < n; ++i) {
            rng::Stream s(rng::derive(seed, i));
            double u = s.next_u01();
            out[i] = theta + (u < 1.0 / 3.0 ? -1.0 : (u < 2.0 / 3.0 ? 0.0 : 1.0));
        }
        return out;
    }

    double statistic(const Dataset& y) const override {
        require_nonempty(y, "discrete_uniform_triple");
        return sum(y) / static_cast<double>(y.size());
    }

    std::vector<std::string> ancillary_names() const override { return {"range"}; }

    double ancillary_named(const std::string& which,
                           const Dataset& y) const override {
        if (which != "range")
            throw CapabilityError(name() + ": no ancillary named '" + which + "'");
        require_nonempty(y, "discrete_uniform_triple");
        auto [mn, mx] = std::minmax_element(y.begin(), y.end());
        return *mx - *mn;
    }

    // Exact conditional law of the sample mean given the range, by
    // enumeration of the 3^n equally likely offset patterns.
    double conditional_rhs_pvalue(double theta, double t, double a,
                                  std::size_t n) const override {
        check_theta(theta);
        double hit = 0.0, total = 0.0;
        for (const auto& [y, p] : enumerate(theta, n)) {
            if (std::abs(ancillary_named("range", y) - a) > 1e-9) continue;
            total += p;
            if (statistic(y) >= t - 1e-12) hit += p;
        }
        if (total <= 0.0)
            throw ConfigError("discrete_uniform_triple: ancillary value has "
                              "zero probability");
        return hit / total;
    }

    std::vector<double> parameter_candidates(const Dataset& y) const override {
        require_nonempty(y, "discrete_uniform_triple");
        auto [mn, mx] = std::minmax_element(y.begin(), y.end());
        double lo = std::round(*mx) - 1.0, hi = std::round(*mn) + 1.0;
        std::vector<double> out;
        for (double th = lo; th <= hi + 1e-9; th += 1.0) out.push_back(th);
        return out;
    }

    bool enumerable(std::size_t n) const override { return n >= 1 && n <= 8; }

    std::vector<std::pair<Dataset, double>> enumerate(double theta,
                                                      std::size_t n) const override {
        check_theta(theta);
        if (!enumerable(n))
            throw CapabilityError("discrete_uniform_triple: enumeration supports n<=8");
        std::vector<std::pair<Dataset, double>> out;
        std::size_t total = 1;
        for (std::size_t i = 0; i < n; ++i) total *= 3;
        double p = 1.0 / static_cast<double>(total);
        for (std::size_t code = 0; code < total; ++code) {
            Dataset y(n);
            std::size_t c = code;
            for (std::size_t i = 0; i < n; ++i) {
                y[i] = theta + static_cast<double>(c % 3) - 1.0;
                c /= 3;
            }
            out.emplace_back(std::move(y), p);
        }
        return out;
    }
};

// ---- uniform on [theta, theta+1] ----

class UniformShift final : public ParametricModel {
public:
    std::string name() const override { return "uniform_shift"; }
    numerics::Interval parameter_space() const override { return {kNegInf, kInf}; }
    Capabilities capabilities() const override {
        Capabilities c;
        c.has_sufficient_T = true;
        c.has_ancillary = true;
        c.has_exact_conditional = true;
        return c;
    }

    double log_density(double theta, double y) const override {
        return (y >= theta && y <= theta + 1.0) ? 0.0 : kNegInf;
    }

    double mle(const Dataset& y) const override {
        require_nonempty(y, "uniform_shift");
        auto [mn, mx] = std::minmax_element(y.begin(), y.end());
        if (*mx - *mn > 1.0)
            throw BoundaryMleError(
                "uniform_shift: sample range exceeds 1; likelihood identically 0");
        return 0.5 * ((*mx - 1.0) + *mn);  // midpoint of the flat maximizer set
    }

    Dataset simulate(double theta, std::size_t n, std::uint64_t seed) const override {
        check_theta(theta);
        Dataset out(n);
        for (std::size_t i = 0; i < n; ++i) {
            rng::Stream s(rng::derive(seed, i));
            out[i] = theta + s.next_u01();
        }
        return out;
    }

    bool has_statistic_law(std::size_t n) const override { return n == 1; }

    double statistic(const Dataset& y) const override {
        if (y.size() != 1)
            throw CapabilityError("uniform_shift: scalar statistic is the single observation");
        return y[0];
    }

    double statistic_cdf(double t, double theta, std::size_t n) const override {
        check_theta(theta);
        if (n != 1) throw CapabilityError("uniform_shift: statistic law coded for n=1");
        return std::clamp(t - theta, 0.0, 1.0);
    }

    double quantile(double alpha, double theta, std::size_t n) const override {
        check_theta(theta);
        if (!(alpha > 0.0 && alpha < 1.0))
            throw ConfigError("uniform_shift: quantile level must lie in (0,1)");
        if (n != 1) throw CapabilityError("uniform_shift: statistic law coded for n=1");
        return theta + alpha;
    }

    bool has_analytic_confidence_density(std::size_t n) const override {
        return n == 1;
    }

    double analytic_confidence_density(double theta, double t,
                                       std::size_t n) const override {
        check_theta(theta);
        if (n != 1) throw CapabilityError("uniform_shift: statistic law coded for n=1");
        // Closed support so trapezoid grids hitting the edges stay exact.
        return (theta >= t - 1.0 && theta <= t) ? 1.0 : 0.0;
    }

    bool has_statistic_loglik(std::size_t n) const override { return n == 1; }

    double statistic_loglik(double theta, double t, std::size_t n) const override {
        check_theta(theta);
        if (n != 1) throw CapabilityError("uniform_shift: statistic law coded for n=1");
        return log_density(theta, t);
    }

    std::vector<std::string> ancillary_names() const override { return {"frac"}; }

    double ancillary_named(const std::string& which,
                           const Dataset& y) const override {
        if (which != "frac")
            throw CapabilityError(name() + ": no ancillary named '" + which + "'");
        if (y.size() != 1)
            throw CapabilityError("uniform_shift: fractional-part ancillary coded for n=1");
        return y[0] - std::floor(y[0]);
    }

    // Given frac(Y) = a the observation is degenerate at the unique point of
    // [theta, theta+1) with that fractional part.
    double conditional_rhs_pvalue(double theta, double t, double a,
                                  std::size_t n) const override {
        check_theta(theta);
        if (n != 1) throw CapabilityError("uniform_shift: conditional law coded for n=1");
        double point = a + std::ceil(theta - a);
        return point >= t ? 1.0 : 0.0;
    }

    std::optional<numerics::Interval> confidence_support(double t,
                                                         std::size_t n) const override {
        if (n != 1) return std::nullopt;
        return numerics::Interval{t - 1.0, t};
    }

    std::optional<numerics::Interval> likelihood_support(const Dataset& y) const override {
        require_nonempty(y, "uniform_shift");
        auto [mn, mx] = std::minmax_element(y.begin(), y.end());
        return numerics::Interval{*mx - 1.0, *mn};
    }
};

// ---- uniform on [theta-1, theta+1] ----

class UniformWidth2 final : public ParametricModel {
public:
    std::string name() const override { return "uniform_width2"; }
    numerics::Interval parameter_space() const override { return {kNegInf, kInf}; }
    Capabilities capabilities() const override {
        Capabilities c;
        c.has_ancillary = true;
        return c;
    }

    double log_density(double theta, double y) const override {
        return std::abs(y - theta) <= 1.0 ? -std::log(2.0) : kNegInf;
    }

    double mle(const Dataset& y) const override {
        require_nonempty(y, "uniform_width2");
        auto [mn, mx] = std::minmax_element(y.begin(), y.end());
        if (*mx - *mn > 2.0)
            throw BoundaryMleError(
                "uniform_width2: sample range exceeds 2; likelihood identically 0");
        return 0.5 * (*mn + *mx);  // midrange; the maximizer set midpoint
    }

    Dataset simulate(double theta, std::size_t n, std::uint64_t seed) const override {
        check_theta(theta);
        Dataset out(n);
        for (std::size_t i = 0; i < n; ++i) {
            rng::Stream s(rng::derive(seed, i));
            out[i] = theta + 2.0 * s.next_u01() - 1.0;
        }
        return out;
    }

    bool has_statistic_law(std::size_t n) const override { return n == 1; }

    double statistic(const Dataset& y) const override {
        if (y.size() != 1)
            throw CapabilityError("uniform_width2: scalar statistic is the single observation");
        return y[0];
    }

    double statistic_cdf(double t, double theta, std::size_t n) const override {
        check_theta(theta);
        if (n != 1) throw CapabilityError("uniform_width2: statistic law coded for n=1");
        return std::clamp(0.5 * (t - theta + 1.0), 0.0, 1.0);
    }

    double quantile(double alpha, double theta, std::size_t n) const override {
        check_theta(theta);
        if (!(alpha > 0.0 && alpha < 1.0))
            throw ConfigError("uniform_width2: quantile level must lie in (0,1)");
        if (n != 1) throw CapabilityError("uniform_width2: statistic law coded for n=1");
        return theta + 2.0 * alpha - 1.0;
    }

    bool has_analytic_confidence_density(std::size_t n) const override {
        return n == 1;
    }

    double analytic_confidence_density(double theta, double t,
                                       std::size_t n) const override {
        check_theta(theta);
        if (n != 1) throw CapabilityError("uniform_width2: statistic law coded for n=1");
        return std::abs(theta - t) <= 1.0 ? 0.5 : 0.0;
    }

    bool has_statistic_loglik(std::size_t n) const override { return n == 1; }

    double statistic_loglik(double theta, double t, std::size_t n) const override {
        check_theta(theta);
        if (n != 1) throw CapabilityError("uniform_width2: statistic law coded for n=1");
        return log_density(theta, t);
    }

    std::vector<std::string> ancillary_names() const override { return {"range"}; }

    double ancillary_named(const std::string& which,
                           const Dataset& y) const override {
        if (which != "range")
            throw CapabilityError(name() + ": no ancillary named '" + which + "'");
        require_nonempty(y, "uniform_width2");
        auto [mn, mx] = std::minmax_element(y.begin(), y.end());
        return *mx - *mn;
    }

    std::optional<numerics::Interval> confidence_support(double t,
                                                         std::size_t n) const override {
        if (n != 1) return std::nullopt;
        return numerics::Interval{t - 1.0, t + 1.0};
    }

    std::optional<numerics::Interval> likelihood_support(const Dataset& y) const override {
        require_nonempty(y, "uniform_width2");
        auto [mn, mx] = std::minmax_element(y.begin(), y.end());
        return numerics::Interval{*mx - 1.0, *mn + 1.0};
    }
};

// ---- mean-one gamma with shape theta: y ~ Gamma(theta, rate theta) ----

class GammaShape final : public ParametricModel {
public:
    std::string name() const override { return "gamma_shape"; }
    numerics::Interval parameter_space() const override { return {0.0, kInf}; }
    Capabilities capabilities() const override {
        Capabilities c;
        c.has_sufficient_T = true;
        return c;
    }

    bool theta_valid(double theta) const override {
        return std::isfinite(theta) && theta > 0.0;
    }

    double log_density(double theta, double y) const override {
        if (!(y > 0.0)) return kNegInf;
        return theta * std::log(theta) - numerics::log_gamma(theta) +
               (theta - 1.0) * std::log(y) - theta * y;
    }

    double mle(const Dataset& y) const override {
        require_nonempty(y, "gamma_shape");
        double st = 0.0;
        for (double v : y) {
            if (!(v > 0.0))
                throw ConfigError("gamma_shape: observations must be positive");
            st += gamma_shape_t(v);
        }
        return gamma_shape_mle(y.size(), st);
    }

    Dataset simulate(double theta, std::size_t n, std::uint64_t seed) const override {
        check_theta(theta);
        Dataset out(n);
        for (std::size_t i = 0; i < n; ++i) {
            rng::Stream s(rng::derive(seed, i));
            out[i] = s.next_gamma(theta) / theta;
        }
        return out;
    }

    bool has_statistic_law(std::size_t n) const override { return n == 1; }

    double statistic(const Dataset& y) const override {
        require_nonempty(y, "gamma_shape");
        double st = 0.0;
        for (double v : y) st += gamma_shape_t(v);
        return st;
    }

    double statistic_cdf(double t, double theta, std::size_t n) const override {
        check_theta(theta);
        if (n != 1) throw CapabilityError("gamma_shape: statistic law coded for n=1");
        if (t >= -1.0) return 1.0;  // t(y) = log y - y never exceeds -1
        return 1.0 - gamma_shape_t1_survival(theta, t);
    }

    bool has_statistic_loglik(std::size_t) const override { return true; }

    // T = sum t(y_i) is sufficient; exponential-family factor in theta.
    double statistic_loglik(double theta, double t, std::size_t n) const override {
        check_theta(theta);
        return gamma_shape_loglik(theta, n, t);
    }

    double score(double theta, const Dataset& y) const override {
        check_theta(theta);
        double st = 0.0;
        for (double v : y) st += gamma_shape_t(v);
        double n = static_cast<double>(y.size());
        return n * (std::log(theta) + 1.0 - numerics::digamma(theta)) + st;
    }

    double observed_information(double theta, const Dataset& y) const override {
        check_theta(theta);
        double n = static_cast<double>(y.size());
        return n * (numerics::trigamma(theta) - 1.0 / theta);
    }
};

// ---- normal with variance equal to the mean: y ~ N(theta, theta) ----

class NormalMeanEqVar final : public ParametricModel {
public:
    std::string name() const override { return "normal_mean_eq_var"; }
    numerics::Interval parameter_space() const override { return {0.0, kInf}; }
    Capabilities capabilities() const override {
        Capabilities c;
        c.has_sufficient_T = true;
        return c;
    }

    bool theta_valid(double theta) const override {
        return std::isfinite(theta) && theta > 0.0;
    }

    double log_density(double theta, double y) const override {
        double d = y - theta;
        return -kLogSqrt2Pi - 0.5 * std::log(theta) - 0.5 * d * d / theta;
    }

    double mle(const Dataset& y) const override {
        require_nonempty(y, "normal_mean_eq_var");
        double s2 = sum_sq(y);
        if (!(s2 > 0.0))
            throw BoundaryMleError(
                "normal_mean_eq_var: all observations zero; MLE at the boundary");
        double n = static_cast<double>(y.size());
        return 0.5 * (std::sqrt(1.0 + 4.0 * s2 / n) - 1.0);
    }

    Dataset simulate(double theta, std::size_t n, std::uint64_t seed) const override {
        check_theta(theta);
        Dataset out(n);
        double sd = std::sqrt(theta);
        for (std::size_t i = 0; i < n; ++i) {
            rng::Stream s(rng::derive(seed, i));
            out[i] = theta + sd * s.next_normal();
        }
        return out;
    }

    bool has_statistic_law(std::size_t n) const override { return n >= 1; }

    double statistic(const Dataset& y) const override {
        require_nonempty(y, "normal_mean_eq_var");
        return sum_sq(y);
    }

    // T = sum y_i^2; T/theta is noncentral chi-square, df=n, noncentrality n*theta.
    double statistic_cdf(double t, double theta, std::size_t n) const override {
        check_theta(theta);
        if (t <= 0.0) return 0.0;
        return numerics::noncentral_chisq_cdf(t / theta, static_cast<double>(n),
                                              static_cast<double>(n) * theta);
    }

    bool has_analytic_confidence_density(std::size_t n) const override {
        return n == 1;
    }

    // Two-branch form from T = y^2 (u = sqrt(t) = |y|).
    double analytic_confidence_density(double theta, double t,
                                       std::size_t n) const override {
        check_theta(theta);
        if (n != 1)
            throw CapabilityError("normal_mean_eq_var: closed form coded for n=1");
        if (!(t > 0.0)) return 0.0;
        double u = std::sqrt(t);
        double rt = std::sqrt(theta);
        double up = numerics::normal_pdf((u - theta) / rt);
        double dn = numerics::normal_pdf((-u - theta) / rt);
        return 0.5 * up * (u / (theta * rt) + 1.0 / rt) +
               0.5 * dn * (u / (theta * rt) - 1.0 / rt);
    }

    bool has_statistic_loglik(std::size_t) const override { return true; }

    // T = sum y_i^2 is sufficient; exponential-family factor in theta.
    double statistic_loglik(double theta, double t, std::size_t n) const override {
        check_theta(theta);
        double nn = static_cast<double>(n);
        return -0.5 * t / theta - 0.5 * nn * theta - 0.5 * nn * std::log(theta);
    }

    double score(double theta, const Dataset& y) const override {
        check_theta(theta);
        double n = static_cast<double>(y.size());
        double s2 = sum_sq(y);
        return -0.5 * n / theta + 0.5 * s2 / (theta * theta) - 0.5 * n;
    }

    double observed_information(double theta, const Dataset& y) const override {
        check_theta(theta);
        double n = static_cast<double>(y.size());
        double s2 = sum_sq(y);
        return s2 / (theta * theta * theta) - 0.5 * n / (theta * theta);
    }
};

// ---- curved normal: y ~ N(theta, theta^2), theta > 0 ----

class CurvedNormal final : public ParametricModel {
public:
    std::string name() const override { return "curved_normal"; }
    numerics::Interval parameter_space() const override { return {0.0, kInf}; }
    Capabilities capabilities() const override {
        Capabilities c;
        c.has_sufficient_T = true;
        c.has_ancillary = true;
        c.has_exact_conditional = true;
        return c;
    }

    bool theta_valid(double theta) const override {
        return std::isfinite(theta) && theta > 0.0;
    }

    double log_density(double theta, double y) const override {
        double d = (y - theta) / theta;
        return -kLogSqrt2Pi - std::log(theta) - 0.5 * d * d;
    }

    double mle(const Dataset& y) const override {
        require_nonempty(y, "curved_normal");
        return curved_normal_mle_from_sums(sum(y), sum_sq(y), y.size());
    }

    Dataset simulate(double theta, std::size_t n, std::uint64_t seed) const override {
        check_theta(theta);
        Dataset out(n);
        for (std::size_t i = 0; i < n; ++i) {
            rng::Stream s(rng::derive(seed, i));
            out[i] = theta * (1.0 + s.next_normal());
        }
        return out;
    }

    bool has_statistic_law(std::size_t n) const override { return n == 1; }

    // The MLE itself serves as the marginal statistic (law coded for n=1).
    double statistic(const Dataset& y) const override { return mle(y); }

    double statistic_cdf(double t, double theta, std::size_t n) const override {
        check_theta(theta);
        if (n != 1) throw CapabilityError("curved_normal: marginal law coded for n=1");
        if (t <= 0.0) return 0.0;
        return numerics::normal_cdf(kKappa1 * t / theta - 1.0) -
               numerics::normal_cdf(kKappa2 * t / theta - 1.0);
    }

    bool has_analytic_confidence_density(std::size_t n) const override {
        return n == 1;
    }

    double analytic_confidence_density(double theta, double t,
                                       std::size_t n) const override {
        check_theta(theta);
        if (n != 1) throw CapabilityError("curved_normal: marginal law coded for n=1");
        if (!(t > 0.0)) return 0.0;
        double t2 = theta * theta;
        return (kKappa1 * t / t2) * numerics::normal_pdf(kKappa1 * t / theta - 1.0) -
               (kKappa2 * t / t2) * numerics::normal_pdf(kKappa2 * t / theta - 1.0);
    }

    bool has_statistic_loglik(std::size_t n) const override { return n == 1; }

    // Density of the single-observation MLE (two data branches per value).
    double statistic_loglik(double theta, double t, std::size_t n) const override {
        check_theta(theta);
        if (n != 1) throw CapabilityError("curved_normal: marginal law coded for n=1");
        if (!(t > 0.0)) return kNegInf;
        double f = (kKappa1 / theta) * numerics::normal_pdf(kKappa1 * t / theta - 1.0) -
                   (kKappa2 / theta) * numerics::normal_pdf(kKappa2 * t / theta - 1.0);
        return f > 0.0 ? std::log(f) : kNegInf;
    }

    std::vector<std::string> ancillary_names() const override { return {"a"}; }

    double ancillary_named(const std::string& which,
                           const Dataset& y) const override {
        if (which != "a")
            throw CapabilityError(name() + ": no ancillary named '" + which + "'");
        require_nonempty(y, "curved_normal");
        double s2 = sum_sq(y);
        if (!(s2 > 0.0))
            throw ConfigError("curved_normal: ancillary undefined for all-zero sample");
        return sum(y) / std::sqrt(s2);
    }

    // The conditional law is stated in T = sqrt(sum y_i^2).
    double conditional_statistic(const Dataset& y) const override {
        require_nonempty(y, "curved_normal");
        return std::sqrt(sum_sq(y));
    }

    double conditional_rhs_pvalue(double theta, double t, double a,
                                  std::size_t n) const override {
        check_theta(theta);
        return asymptotics::hinkley_conditional_pvalue(theta, t, a, n);
    }

    double conditional_density(double theta, double t, double a,
                               std::size_t n) const override {
        check_theta(theta);
        return asymptotics::hinkley_density(t / theta, a, n) * t / (theta * theta);
    }

    double score(double theta, const Dataset& y) const override {
        check_theta(theta);
        double n = static_cast<double>(y.size());
        double s1 = sum(y), s2 = sum_sq(y);
        double t2 = theta * theta;
        return -n / theta + s2 / (t2 * theta) - s1 / t2;
    }

    double observed_information(double theta, const Dataset& y) const override {
        check_theta(theta);
        double n = static_cast<double>(y.size());
        double s1 = sum(y), s2 = sum_sq(y);
        double t2 = theta * theta;
        return 3.0 * s2 / (t2 * t2) - 2.0 * s1 / (t2 * theta) - n / t2;
    }

    bool has_summary_likelihood() const override { return true; }

    // log L(theta; theta_hat, a, n) with b = a^2 + a sqrt(a^2 + 4n):
    // the sufficient sums re-expressed through (theta_hat, a) are
    // s1 = b theta_hat / 2 and s2 = (b + 2n) theta_hat^2 / 2.
    double log_likelihood_from_summary(double theta, double theta_hat, double a,
                                       std::size_t n) const override {
        check_theta(theta);
        double nn = static_cast<double>(n);
        double b = a * a + a * std::sqrt(a * a + 4.0 * nn);
        double r = theta_hat / theta;
        return -nn * kLogSqrt2Pi - nn * std::log(theta) -
               0.25 * (b + 2.0 * nn) * r * r + 0.5 * b * r - 0.5 * nn;
    }

    double information_at_mle(double theta_hat, double a,
                              std::size_t n) const override {
        double nn = static_cast<double>(n);
        double b = a * a + a * std::sqrt(a * a + 4.0 * nn);
        return (b + 4.0 * nn) / (2.0 * theta_hat * theta_hat);
    }

private:
    static constexpr double kSqrt5 = 2.23606797749978969640917366873;
    static constexpr double kKappa1 = 0.5 * (1.0 + kSqrt5);
    static constexpr double kKappa2 = 0.5 * (1.0 - kSqrt5);
};

// ---- binomial count: y ~ Bin(N, theta), N fixed ----

class Binomial final : public ParametricModel {
public:
    explicit Binomial(long size) : size_(size) {
        if (size_ < 1) throw ConfigError("binomial: size must be >= 1");
    }

    std::string name() const override {
        return "binomial:" + std::to_string(size_);
    }
    numerics::Interval parameter_space() const override { return {0.0, 1.0}; }
    Capabilities capabilities() const override {
        Capabilities c;
        c.discrete_data = true;
        return c;
    }

    bool theta_valid(double theta) const override {
        return theta > 0.0 && theta < 1.0;
    }

    double log_density(double theta, double y) const override {
        if (!integerish(y)) return kNegInf;
        double k = std::round(y);
        double nn = static_cast<double>(size_);
        if (k < 0.0 || k > nn) return kNegInf;
        return log_choose(nn, k) + k * std::log(theta) +
               (nn - k) * std::log1p(-theta);
    }

    double mle(const Dataset& y) const override {
        require_nonempty(y, "binomial");
        double successes = sum(y);
        double trials = static_cast<double>(y.size()) * static_cast<double>(size_);
        double est = successes / trials;
        if (!(est > 0.0 && est < 1.0))
            throw BoundaryMleError("binomial: all-failure or all-success sample; "
                                   "MLE at the boundary of (0,1)");
        return est;
    }

    Dataset simulate(double theta, std::size_t n, std::uint64_t seed) const override {
        check_theta(theta);
        Dataset out(n);
        for (std::size_t i = 0; i < n; ++i) {
            rng::Stream s(rng::derive(seed, i));
            long count = 0;
            for (long j = 0; j < size_; ++j)
                if (s.next_u01() < theta) ++count;
            out[i] = static_cast<double>(count);
        }
        return out;
    }

    double statistic(const Dataset& y) const override {
        require_nonempty(y, "binomial");
        return sum(y);
    }

    bool enumerable(std::size_t n) const override {
        return n == 1 && size_ <= 100000;
    }

    std::vector<std::pair<Dataset, double>> enumerate(double theta,
                                                      std::size_t n) const override {
        check_theta(theta);
        if (!enumerable(n))
            throw CapabilityError("binomial: enumeration coded for n=1");
        std::vector<std::pair<Dataset, double>> out;
        out.reserve(static_cast<std::size_t>(size_) + 1);
        for (long k = 0; k <= size_; ++k) {
            double y = static_cast<double>(k);
            out.emplace_back(Dataset{y}, std::exp(log_density(theta, y)));
        }
        return out;
    }

    long size() const { return size_; }

private:
    long size_;
};

// ---- negative binomial: trials until the target-th success ----

class NegativeBinomial final : public ParametricModel {
public:
    explicit NegativeBinomial(long target) : target_(target) {
        if (target_ < 1)
            throw ConfigError("negative_binomial: target must be >= 1");
    }

    std::string name() const override {
        return "negative_binomial:" + std::to_string(target_);
    }
    numerics::Interval parameter_space() const override { return {0.0, 1.0}; }
    Capabilities capabilities() const override {
        Capabilities c;
        c.discrete_data = true;
        return c;
    }

    bool theta_valid(double theta) const override {
        return theta > 0.0 && theta < 1.0;
    }

    // y is the total number of trials when the target-th success arrives.
    double log_density(double theta, double y) const override {
        if (!integerish(y)) return kNegInf;
        double m = std::round(y);
        double r = static_cast<double>(target_);
        if (m < r) return kNegInf;
        return log_choose(m - 1.0, r - 1.0) + r * std::log(theta) +
               (m - r) * std::log1p(-theta);
    }

    double mle(const Dataset& y) const override {
        require_nonempty(y, "negative_binomial");
        double trials = sum(y);
        double est = static_cast<double>(y.size()) *
                     static_cast<double>(target_) / trials;
        if (!(est > 0.0 && est < 1.0))
            throw BoundaryMleError("negative_binomial: sample stopped with no "
                                   "failures; MLE at the boundary of (0,1)");
        return est;
    }

    Dataset simulate(double theta, std::size_t n, std::uint64_t seed) const override {
        check_theta(theta);
        Dataset out(n);
        for (std::size_t i = 0; i < n; ++i) {
            rng::Stream s(rng::derive(seed, i));
            long successes = 0, trials = 0;
            while (successes < target_) {
                if (++trials > 2000000000L)
                    throw ConfigError("negative_binomial: simulation exceeded 2e9 trials");
                if (s.next_u01() < theta) ++successes;
            }
            out[i] = static_cast<double>(trials);
        }
        return out;
    }

    double statistic(const Dataset& y) const override {
        require_nonempty(y, "negative_binomial");
        return sum(y);
    }

    bool enumerable(std::size_t n) const override { return n == 1; }

    // Enumeration truncated once the accumulated mass reaches 1 - 1e-10.
    std::vector<std::pair<Dataset, double>> enumerate(double theta,
                                                      std::size_t n) const override {
        check_theta(theta);
        if (!enumerable(n))
            throw CapabilityError("negative_binomial: enumeration coded for n=1");
        std::vector<std::pair<Dataset, double>> out;
        double cum = 0.0;
        for (long m = target_; cum < 1.0 - 1e-10; ++m) {
            if (m > target_ + 100000000L)
                throw ConfigError("negative_binomial: enumeration truncation overran");
            double y = static_cast<double>(m);
            double p = std::exp(log_density(theta, y));
            out.emplace_back(Dataset{y}, p);
            cum += p;
        }
        return out;
    }

    long target() const { return target_; }

private:
    long target_;
};

// ---- two-by-two discrete pair with parameter in {1, 2} ----

class Evans2x2 final : public ParametricModel {
public:
    std::string name() const override { return "evans_2x2"; }
    numerics::Interval parameter_space() const override { return {1.0, 2.0}; }
    Capabilities capabilities() const override {
        Capabilities c;
        c.has_ancillary = true;
        c.discrete_data = true;
        c.discrete_parameter = true;
        return c;
    }

    bool theta_valid(double theta) const override {
        return integerish(theta) &&
               (std::round(theta) == 1.0 || std::round(theta) == 2.0);
    }

    double log_density(double, double) const override {
        throw CapabilityError(
            "evans_2x2: observations are (y1, y2) pairs; use log_likelihood");
    }

    double log_likelihood(double theta, const Dataset& y) const override {
        check_theta(theta);
        if (y.empty() || y.size() % 2 != 0)
            throw ConfigError("evans_2x2: dataset must hold (y1, y2) pairs");
        double total = 0.0;
        for (std::size_t i = 0; i < y.size(); i += 2) {
            double p = cell_prob(theta, y[i], y[i + 1]);
            if (p <= 0.0) return kNegInf;
            total += std::log(p);
        }
        return total;
    }

    double mle(const Dataset& y) const override {
        double l1 = log_likelihood(1.0, y), l2 = log_likelihood(2.0, y);
        if (l1 == kNegInf && l2 == kNegInf)
            throw ConfigError("evans_2x2: dataset outside the sample space");
        return l1 >= l2 ? 1.0 : 2.0;
    }

    Dataset simulate(double theta, std::size_t n, std::uint64_t seed) const override {
        check_theta(theta);
        const auto& p = table(theta);
        Dataset out;
        out.reserve(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            rng::Stream s(rng::derive(seed, i));
            double u = s.next_u01();
            std::size_t cell = 3;
            double cum = 0.0;
            for (std::size_t c = 0; c < 4; ++c) {
                cum += p[c];
                if (u < cum) { cell = c; break; }
            }
            out.push_back(cell < 2 ? 1.0 : 2.0);         // y1
            out.push_back(cell % 2 == 0 ? 1.0 : 2.0);    // y2
        }
        return out;
    }

    std::vector<std::string> ancillary_names() const override {
        return {"Y1", "Y2"};  // two maximal candidates; neither dominates
    }

    double ancillary_named(const std::string& which,
                           const Dataset& y) const override {
        if (y.size() != 2)
            throw CapabilityError("evans_2x2: ancillaries coded for a single pair");
        if (which == "Y1") return y[0];
        if (which == "Y2") return y[1];
        throw CapabilityError(name() + ": no ancillary named '" + which + "'");
    }

    bool enumerable(std::size_t n) const override { return n == 1; }

    std::vector<std::pair<Dataset, double>> enumerate(double theta,
                                                      std::size_t n) const override {
        check_theta(theta);
        if (!enumerable(n))
            throw CapabilityError("evans_2x2: enumeration coded for n=1");
        const auto& p = table(theta);
        return {{{1.0, 1.0}, p[0]},
                {{1.0, 2.0}, p[1]},
                {{2.0, 1.0}, p[2]},
                {{2.0, 2.0}, p[3]}};
    }

    std::vector<double> parameter_candidates(const Dataset&) const override {
        return {1.0, 2.0};
    }

private:
    // Cell order: (1,1), (1,2), (2,1), (2,2).
    static const std::array<double, 4>& table(double theta) {
        static const std::array<double, 4> kTheta1 = {1.0 / 6.0, 1.0 / 6.0,
                                                      2.0 / 6.0, 2.0 / 6.0};
        static const std::array<double, 4> kTheta2 = {1.0 / 12.0, 3.0 / 12.0,
                                                      5.0 / 12.0, 3.0 / 12.0};
        return std::round(theta) == 1.0 ? kTheta1 : kTheta2;
    }

    static double cell_prob(double theta, double y1, double y2) {
        if (!integerish(y1) || !integerish(y2)) return 0.0;
        long a = std::lround(y1), b = std::lround(y2);
        if ((a != 1 && a != 2) || (b != 1 && b != 2)) return 0.0;
        return table(theta)[static_cast<std::size_t>((a - 1) * 2 + (b - 1))];
    }
};

LocationShape parse_shape(const std::string& arg) {
    if (arg == "normal") return LocationShape::kNormal;
    if (arg == "cauchy") return LocationShape::kCauchy;
    if (arg == "laplace") return LocationShape::kLaplace;
    if (arg == "logistic") return LocationShape::kLogistic;
    throw ConfigError("location_family: unknown shape '" + arg +
                      "' (expected normal|cauchy|laplace|logistic)");
}

long parse_count(const std::string& head, const std::string& arg) {
    if (arg.empty())
        throw ConfigError(head + ": missing count parameter (use " + head + ":<k>)");
    std::size_t pos = 0;
    long value = 0;
    try {
        value = std::stol(arg, &pos);
    } catch (const std::exception&) {
        throw ConfigError(head + ": malformed count '" + arg + "'");
    }
    if (pos != arg.size() || value < 1)
        throw ConfigError(head + ": malformed count '" + arg + "'");
    return value;
}

}  // namespace

ModelPtr make_model(const std::string& spec) {
    auto colon = spec.find(':');
    std::string head = spec.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    bool has_arg = colon != std::string::npos;

    if (head == "normal_location" && !has_arg)
        return std::make_shared<NormalLocation>();
    if (head == "location_family" && has_arg)
        return std::make_shared<LocationFamily>(parse_shape(arg));
    if (head == "discrete_uniform_triple" && !has_arg)
        return std::make_shared<DiscreteUniformTriple>();
    if (head == "uniform_shift" && !has_arg)
        return std::make_shared<UniformShift>();
    if (head == "uniform_width2" && !has_arg)
        return std::make_shared<UniformWidth2>();
    if (head == "gamma_shape" && !has_arg)
        return std::make_shared<GammaShape>();
    if (head == "normal_mean_eq_var" && !has_arg)
        return std::make_shared<NormalMeanEqVar>();
    if (head == "curved_normal" && !has_arg)
        return std::make_shared<CurvedNormal>();
    if (head == "binomial")
        return std::make_shared<Binomial>(parse_count("binomial", arg));
    if (head == "negative_binomial")
        return std::make_shared<NegativeBinomial>(
            parse_count("negative_binomial", arg));
    if (head == "evans_2x2" && !has_arg)
        return std::make_shared<Evans2x2>();
    throw ConfigError("unknown model '" + spec + "'");
}

// ---- model-specific helpers ----

double curved_normal_raw_marginal(double theta, double t) {
    if (!(theta > 0.0))
        throw ConfigError("curved_normal_raw_marginal: theta must be positive");
    return 1.0 - numerics::normal_cdf(t / theta - 1.0);
}

double gamma_shape_t(double y) {
    if (!(y > 0.0))
        throw ConfigError("gamma_shape_t: observation must be positive");
    return std::log(y) - y;
}

double gamma_shape_t1_survival(double theta, double t1) {
    if (!(theta > 0.0))
        throw ConfigError("gamma_shape_t1_survival: theta must be positive");
    if (t1 >= -1.0) return 0.0;  // t(y) <= -1 with equality only at y = 1
    auto gap = [t1](double y) { return std::log(y) - y - t1; };
    double y_lo = numerics::find_root(gap, std::exp(t1), 1.0);
    double y_hi = numerics::find_root(gap, 1.0, 3.0 - 3.0 * t1);
    double p_lo = numerics::reg_inc_gamma_p(theta, theta * y_lo);
    double p_hi = numerics::reg_inc_gamma_p(theta, theta * y_hi);
    return std::max(0.0, p_hi - p_lo);
}

double gamma_shape_loglik(double theta, std::size_t n, double sum_t) {
    if (!(theta > 0.0))
        throw ConfigError("gamma_shape_loglik: theta must be positive");
    double nn = static_cast<double>(n);
    return nn * (theta * std::log(theta) - numerics::log_gamma(theta)) +
           theta * sum_t;
}

double gamma_shape_mle(std::size_t n, double sum_t) {
    double nn = static_cast<double>(n);
    if (!(sum_t < -nn))
        throw BoundaryMleError(
            "gamma_shape: score has no interior root (sum of log y - y >= -n)");
    auto score = [nn, sum_t](double th) {
        return nn * (std::log(th) + 1.0 - numerics::digamma(th)) + sum_t;
    };
    return numerics::find_root_expand(score, 1.0, 1.0, {0.0, kInf}, 1e-12);
}

double curved_normal_mle_from_sums(double s1, double s2, std::size_t n) {
    if (!(s2 > 0.0))
        throw BoundaryMleError(
            "curved_normal: all observations zero; MLE at the boundary");
    double nn = static_cast<double>(n);
    return (-s1 + std::sqrt(s1 * s1 + 4.0 * nn * s2)) / (2.0 * nn);
}

}  // namespace epiconf::models
