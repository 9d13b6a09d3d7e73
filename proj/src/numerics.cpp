#include "numerics.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace epiconf::numerics {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSqrt2 = 1.414213562373095048801688724209698079;

// ---- adaptive Simpson ----

struct SimpsonState {
    const std::function<double(double)>* f;
    bool failed = false;
    double best = 0.0;
};

double simpson(double fa, double fm, double fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

// Classic adaptive Simpson with Richardson correction. eps is an absolute
// error budget for this subinterval; it halves on each split.
double adapt(SimpsonState& st, double a, double b, double fa, double fm, double fb,
             double whole, double eps, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = (*st.f)(lm), frm = (*st.f)(rm);
    double left = simpson(fa, flm, fm, a, m);
    double right = simpson(fm, frm, fb, m, b);
    double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * eps || (b - a) < 1e-14 * (std::abs(a) + std::abs(b))) {
        return left + right + delta / 15.0;
    }
    if (depth <= 0) {
        st.failed = true;
        return left + right + delta / 15.0;
    }
    return adapt(st, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           adapt(st, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
    if (!(a < b)) throw std::domain_error("integrate: requires a < b");
    SimpsonState st{&f};
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm))
        throw std::domain_error("integrate: integrand not finite on [a,b]");
    double whole = simpson(fa, fm, fb, a, b);
    // Pilot scale for the absolute budget; the tiny floor keeps integrals that
    // cancel to ~0 (odd integrands) from demanding impossible relative error.
    double scale = std::max({std::abs(whole), 1e-300});
    double eps = rel_tol * std::max(scale, 1e-12);
    double result = adapt(st, a, b, fa, fm, fb, whole, eps, 52);
    if (st.failed) {
        throw QuadratureFailure("integrate: subdivision budget exhausted", result);
    }
    return result;
}

double trapezoid(std::span<const double> grid, std::span<const double> values) {
    double acc = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        acc += 0.5 * (values[i] + values[i - 1]) * (grid[i] - grid[i - 1]);
    return acc;
}

// ---- root finding ----

double find_root(const std::function<double(double)>& g, double lo, double hi,
                 double tol) {
    if (!(lo < hi)) throw std::domain_error("find_root: requires lo < hi");
    double flo = g(lo), fhi = g(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw BracketingError("find_root: no sign change on [lo, hi]");
    for (int iter = 0; iter < 200; ++iter) {
        double width = hi - lo;
        if (width <= tol + 4.0 * std::numeric_limits<double>::epsilon() *
                               (std::abs(lo) + std::abs(hi)))
            break;
        // Secant candidate; fall back to bisection when it leaves the bracket
        // or fails to shrink it meaningfully.
        double x = lo - flo * width / (fhi - flo);
        double margin = 0.01 * width;
        if (!(x > lo + margin) || !(x < hi - margin)) x = 0.5 * (lo + hi);
        double fx = g(x);
        if (fx == 0.0) return x;
        if ((fx > 0.0) == (flo > 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    return 0.5 * (lo + hi);
}

double find_root_expand(const std::function<double(double)>& g, double seed,
                        double step, Interval bounds, double tol) {
    double lo = std::max(bounds.lo, seed - step);
    double hi = std::min(bounds.hi, seed + step);
    // Parameter spaces are open at finite endpoints; never evaluate there.
    if (std::isfinite(bounds.lo) && lo <= bounds.lo) lo = 0.5 * (seed + bounds.lo);
    if (std::isfinite(bounds.hi) && hi >= bounds.hi) hi = 0.5 * (seed + bounds.hi);
    for (int i = 0; i < 200; ++i) {
        double flo = g(lo), fhi = g(hi);
        if ((flo > 0.0) != (fhi > 0.0) || flo == 0.0 || fhi == 0.0)
            return find_root(g, lo, hi, tol);
        double next_lo = seed - 2.0 * (seed - lo);
        double next_hi = seed + 2.0 * (hi - seed);
        // Approach finite bounds geometrically so open endpoints (e.g. 0 for
        // positive parameters) are never stepped on.
        lo = (next_lo <= bounds.lo) ? 0.5 * (lo + bounds.lo) : next_lo;
        hi = (next_hi >= bounds.hi) ? 0.5 * (hi + bounds.hi) : next_hi;
    }
    throw BracketingError("find_root_expand: no sign change found");
}

// ---- special functions ----

namespace {

void require(bool ok, const char* fn, const char* what) {
    if (!ok) throw std::domain_error(std::string(fn) + ": " + what);
}

// Asymptotic series for psi(x), valid for large x; smaller arguments are
// raised with psi(x) = psi(x+1) - 1/x. Terms through x^-12 keep the
// truncation error below ~1e-13 for x >= 8.
double digamma_raised(double x) {
    double inv = 1.0 / x, inv2 = inv * inv;
    double series = inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 -
                    inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
    return std::log(x) - 0.5 * inv - series;
}

double trigamma_raised(double x) {
    double inv = 1.0 / x, inv2 = inv * inv;
    // 1/x + 1/2x^2 + 1/6x^3 - 1/30x^5 + 1/42x^7 - 1/30x^9 + 5/66x^11
    return inv + 0.5 * inv2 +
           inv * inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 -
                         inv2 * (1.0 / 30.0 - inv2 * 5.0 / 66.0))));
}

// Continued fraction for the regularized incomplete beta (modified Lentz).
double betacf(double x, double a, double b) {
    constexpr double fpmin = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) return h;
    }
    throw QuadratureFailure("reg_inc_beta: continued fraction stalled", h);
}

// Series for P(a,x), x < a+1.
double gamma_p_series(double a, double x) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw QuadratureFailure("reg_inc_gamma_p: series stalled", sum);
}

// Continued fraction for Q(a,x), x >= a+1 (modified Lentz).
double gamma_q_cf(double a, double x) {
    constexpr double fpmin = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / fpmin, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15)
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw QuadratureFailure("reg_inc_gamma_p: continued fraction stalled", h);
}

}  // namespace

double log_gamma(double x) {
    require(x > 0.0, "log_gamma", "requires x > 0");
    return std::lgamma(x);
}

double digamma(double x) {
    require(x > 0.0, "digamma", "requires x > 0");
    double acc = 0.0;
    while (x < 8.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    return acc + digamma_raised(x);
}

double trigamma(double x) {
    require(x > 0.0, "trigamma", "requires x > 0");
    double acc = 0.0;
    while (x < 8.0) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    return acc + trigamma_raised(x);
}

double reg_inc_beta(double x, double a, double b) {
    require(a > 0.0 && b > 0.0, "reg_inc_beta", "requires a, b > 0");
    require(x >= 0.0 && x <= 1.0, "reg_inc_beta", "requires x in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    double lbt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                 a * std::log(x) + b * std::log1p(-x);
    double bt = std::exp(lbt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(x, a, b) / a;
    return 1.0 - bt * betacf(1.0 - x, b, a) / b;
}

double beta_pdf(double x, double a, double b) {
    require(a > 0.0 && b > 0.0, "beta_pdf", "requires a, b > 0");
    require(x >= 0.0 && x <= 1.0, "beta_pdf", "requires x in [0,1]");
    if (x == 0.0) return a < 1.0 ? std::numeric_limits<double>::infinity()
                                 : (a == 1.0 ? b : 0.0);
    if (x == 1.0) return b < 1.0 ? std::numeric_limits<double>::infinity()
                                 : (b == 1.0 ? a : 0.0);
    return std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x));
}

double reg_inc_gamma_p(double a, double x) {
    require(a > 0.0, "reg_inc_gamma_p", "requires a > 0");
    require(x >= 0.0, "reg_inc_gamma_p", "requires x >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_quantile(double p) {
    require(p > 0.0 && p < 1.0, "normal_quantile", "requires p in (0,1)");
    // Acklam's rational approximation, then one Newton polish against the
    // erfc-based CDF; good to ~1e-15 across the range.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1.0 - plow;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= phigh) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double e = normal_cdf(x) - p;
    x -= e / normal_pdf(x);
    return x;
}

double chisq_cdf(double x, double df) {
    require(df > 0.0, "chisq_cdf", "requires df > 0");
    require(x >= 0.0, "chisq_cdf", "requires x >= 0");
    return reg_inc_gamma_p(0.5 * df, 0.5 * x);
}

double noncentral_chisq_cdf(double x, double df, double lambda) {
    require(df > 0.0, "noncentral_chisq_cdf", "requires df > 0");
    require(lambda >= 0.0, "noncentral_chisq_cdf", "requires lambda >= 0");
    require(x >= 0.0, "noncentral_chisq_cdf", "requires x >= 0");
    if (x == 0.0) return 0.0;
    if (lambda == 0.0) return chisq_cdf(x, df);
    // Poisson(lambda/2)-weighted central terms, summed outward from the modal
    // weight so both tails can be cut at a fixed relative mass.
    const double hl = 0.5 * lambda;
    const long j0 = static_cast<long>(hl);
    auto log_weight = [&](long j) { return -hl + j * std::log(hl) - std::lgamma(j + 1.0); };
    auto term = [&](long j) {
        return std::exp(log_weight(j)) * reg_inc_gamma_p(0.5 * df + j, 0.5 * x);
    };
    double sum = term(j0);
    double tail_cut = 1e-14;
    // upward
    for (long j = j0 + 1; j < j0 + 100000; ++j) {
        double t = term(j);
        sum += t;
        if (t < tail_cut * sum && j > j0 + 2) break;
    }
    // downward
    for (long j = j0 - 1; j >= 0; --j) {
        double t = term(j);
        sum += t;
        if (t < tail_cut * sum) break;
    }
    return std::min(sum, 1.0);
}

double special(const std::string& name, std::span<const double> args) {
    auto need = [&](std::size_t n) {
        if (args.size() != n)
            throw std::domain_error("special: " + name + " takes " + std::to_string(n) +
                                    " argument(s)");
    };
    if (name == "log_gamma") { need(1); return log_gamma(args[0]); }
    if (name == "digamma") { need(1); return digamma(args[0]); }
    if (name == "trigamma") { need(1); return trigamma(args[0]); }
    if (name == "reg_inc_beta") { need(3); return reg_inc_beta(args[0], args[1], args[2]); }
    if (name == "reg_inc_gamma_p") { need(2); return reg_inc_gamma_p(args[0], args[1]); }
    if (name == "normal_pdf") { need(1); return normal_pdf(args[0]); }
    if (name == "normal_cdf") { need(1); return normal_cdf(args[0]); }
    if (name == "normal_quantile") { need(1); return normal_quantile(args[0]); }
    if (name == "chisq_cdf") { need(2); return chisq_cdf(args[0], args[1]); }
    if (name == "noncentral_chisq_cdf") {
        need(3);
        return noncentral_chisq_cdf(args[0], args[1], args[2]);
    }
    throw ConfigError("special: unknown function '" + name + "'");
}

// ---- grid densities ----

GridDensity::GridDensity(std::vector<double> grid, std::vector<double> values,
                         bool normalized)
    : grid_(std::move(grid)), values_(std::move(values)), normalized_(normalized) {
    if (grid_.size() < 2 || grid_.size() != values_.size())
        throw std::invalid_argument("GridDensity: need matching grids of length >= 2");
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        if (!std::isfinite(grid_[i]) || !std::isfinite(values_[i]) || values_[i] < 0.0)
            throw std::invalid_argument("GridDensity: values must be finite and >= 0");
        if (i > 0 && !(grid_[i] > grid_[i - 1]))
            throw std::invalid_argument("GridDensity: grid must be strictly increasing");
    }
    if (normalized_) {
        double mass = integral();
        if (std::abs(mass - 1.0) > 1e-6)
            throw std::invalid_argument("GridDensity: claimed normalized but mass is " +
                                        std::to_string(mass));
    }
}

double GridDensity::integral() const { return trapezoid(grid_, values_); }

GridDensity GridDensity::normalize() const {
    double mass = integral();
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw IntegrabilityError("GridDensity: cannot normalize, mass = " +
                                 std::to_string(mass));
    std::vector<double> v(values_);
    for (double& x : v) x /= mass;
    return GridDensity(grid_, std::move(v), true);
}

double GridDensity::operator()(double x) const {
    if (x < grid_.front() || x > grid_.back()) return 0.0;
    auto it = std::lower_bound(grid_.begin(), grid_.end(), x);
    if (it == grid_.begin()) return values_.front();
    std::size_t i = static_cast<std::size_t>(it - grid_.begin());
    double t = (x - grid_[i - 1]) / (grid_[i] - grid_[i - 1]);
    return values_[i - 1] + t * (values_[i] - values_[i - 1]);
}

double GridDensity::max_value() const {
    return *std::max_element(values_.begin(), values_.end());
}

double GridCdf::operator()(double x) const {
    if (x <= grid.front()) return values.front();
    if (x >= grid.back()) return values.back();
    auto it = std::lower_bound(grid.begin(), grid.end(), x);
    std::size_t i = static_cast<std::size_t>(it - grid.begin());
    if (grid[i] == x) return values[i];
    double t = (x - grid[i - 1]) / (grid[i] - grid[i - 1]);
    return values[i - 1] + t * (values[i] - values[i - 1]);
}

double GridCdf::quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("GridCdf::quantile: requires p in [0,1]");
    if (p <= values.front()) return grid.front();
    if (p >= values.back()) return grid.back();
    auto it = std::lower_bound(values.begin(), values.end(), p);
    std::size_t i = static_cast<std::size_t>(it - values.begin());
    if (values[i] == p) {
        // Land on the left edge of any flat stretch for determinism.
        while (i > 0 && values[i - 1] == p) --i;
        return grid[i];
    }
    double denom = values[i] - values[i - 1];
    double t = denom > 0.0 ? (p - values[i - 1]) / denom : 0.0;
    return grid[i - 1] + t * (grid[i] - grid[i - 1]);
}

GridCdf cdf_from_density(const GridDensity& d) {
    if (!d.normalized())
        throw std::invalid_argument("cdf_from_density: density must be normalized");
    const auto& g = d.grid();
    const auto& v = d.values();
    std::vector<double> cum(g.size(), 0.0);
    for (std::size_t i = 1; i < g.size(); ++i)
        cum[i] = cum[i - 1] + 0.5 * (v[i] + v[i - 1]) * (g[i] - g[i - 1]);
    double total = cum.back();
    for (double& c : cum) c /= total;  // pin the endpoint to exactly 1
    cum.front() = 0.0;
    cum.back() = 1.0;
    return GridCdf{g, std::move(cum)};
}

double quantile_from_cdf(const GridCdf& cdf, double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("quantile_from_cdf: requires p in (0,1)");
    return cdf.quantile(p);
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> build_support_grid(const std::function<double(double)>& f,
                                       double center, double halfwidth,
                                       Interval bounds, GridSpec spec) {
    double lo = std::max(bounds.lo, center - halfwidth);
    double hi = std::min(bounds.hi, center + halfwidth);
    // Bounded parameter spaces are open at finite endpoints; keep the window
    // strictly inside so the density is never probed on the boundary itself.
    if (std::isfinite(bounds.lo) && lo <= bounds.lo) lo = 0.5 * (center + bounds.lo);
    if (std::isfinite(bounds.hi) && hi >= bounds.hi) hi = 0.5 * (center + bounds.hi);
    if (!(lo < hi)) throw std::invalid_argument("build_support_grid: empty start window");
    for (int round = 0; round < 80; ++round) {
        double peak = 0.0;
        for (std::size_t i = 0; i < spec.probe_points; ++i) {
            double x = lo + (hi - lo) * static_cast<double>(i) /
                                static_cast<double>(spec.probe_points - 1);
            peak = std::max(peak, f(x));
        }
        if (!(peak > 0.0)) {
            // Nothing visible yet; widen both sides and retry.
            double next_lo = center - 2.0 * (center - lo);
            double next_hi = center + 2.0 * (hi - center);
            lo = (next_lo <= bounds.lo) ? 0.5 * (lo + bounds.lo) : next_lo;
            hi = (next_hi >= bounds.hi) ? 0.5 * (hi + bounds.hi) : next_hi;
            continue;
        }
        double cut = spec.tail_fraction * peak;
        bool lo_done = f(lo) < cut ||
                       (std::isfinite(bounds.lo) &&
                        lo - bounds.lo <= 1e-12 * (1.0 + std::abs(bounds.lo)));
        bool hi_done = f(hi) < cut ||
                       (std::isfinite(bounds.hi) &&
                        bounds.hi - hi <= 1e-12 * (1.0 + std::abs(bounds.hi)));
        if (lo_done && hi_done) break;
        if (!lo_done) {
            double next_lo = center - 2.0 * (center - lo);
            lo = (next_lo <= bounds.lo) ? 0.5 * (lo + bounds.lo) : next_lo;
        }
        if (!hi_done) {
            double next_hi = center + 2.0 * (hi - center);
            hi = (next_hi >= bounds.hi) ? 0.5 * (hi + bounds.hi) : next_hi;
        }
    }
    return linspace(lo, hi, spec.points);
}

}  // namespace epiconf::numerics
