// Numerical kernels: adaptive quadrature, safeguarded root finding, the
// special functions the statistical modules need, and grid-density algebra.
// Everything here is pure and re-entrant.
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "errors.h"

namespace epiconf::numerics {

// ---- basic intervals ----

struct Interval {
    double lo;
    double hi;
    bool contains(double x) const { return x >= lo && x <= hi; }
    double width() const { return hi - lo; }
};

// ---- quadrature ----

// Adaptive Simpson on [a,b]. Relative error target rel_tol (floored by a tiny
// absolute term so odd integrands that cancel to ~0 still converge).
// Throws QuadratureFailure (carrying the best estimate) if the subdivision
// budget is exhausted.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-8);

// Trapezoid rule over tabulated values (grid strictly increasing).
double trapezoid(std::span<const double> grid, std::span<const double> values);

// ---- root finding ----

// Bisection-safeguarded secant. Requires g(lo)*g(hi) < 0, else throws
// BracketingError. Stops when the bracket width drops below tol.
double find_root(const std::function<double(double)>& g, double lo, double hi,
                 double tol = 1e-10);

// Expands [lo, hi] geometrically about a seed point until g changes sign,
// then calls find_root. bounds clips the search.
double find_root_expand(const std::function<double(double)>& g, double seed,
                        double step, Interval bounds, double tol = 1e-10);

// ---- special functions ----

double log_gamma(double x);                     // x > 0
double digamma(double x);                       // x > 0
double trigamma(double x);                      // x > 0
double reg_inc_beta(double x, double a, double b);   // I_x(a,b), x in [0,1], a,b > 0
double beta_pdf(double x, double a, double b);       // density of Beta(a,b)
double reg_inc_gamma_p(double a, double x);     // P(a,x), lower regularized
double normal_pdf(double x);
double normal_cdf(double x);
double normal_quantile(double p);               // p in (0,1)
double chisq_cdf(double x, double df);
// Poisson-weighted sum of central chi-square terms; accurate to ~1e-8.
double noncentral_chisq_cdf(double x, double df, double lambda);

// Name-based dispatcher (used by the C surface). Throws std::domain_error
// naming the function on bad arguments, ConfigError on unknown names.
double special(const std::string& name, std::span<const double> args);

// ---- grid densities ----

// A density tabulated on a strictly increasing grid (>= 2 points, values
// finite and >= 0). When `normalized` is set the trapezoid integral is 1
// within 1e-6 (enforced).
class GridDensity {
public:
    GridDensity(std::vector<double> grid, std::vector<double> values,
                bool normalized = false);

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    bool normalized() const { return normalized_; }
    std::size_t size() const { return grid_.size(); }

    double integral() const;          // trapezoid
    GridDensity normalize() const;    // throws IntegrabilityError on zero/inf mass
    double operator()(double x) const;  // linear interpolation, 0 outside grid
    double max_value() const;

private:
    std::vector<double> grid_;
    std::vector<double> values_;
    bool normalized_;
};

// Monotone grid CDF. values are nondecreasing, values.front() == 0,
// values.back() == 1.
struct GridCdf {
    std::vector<double> grid;
    std::vector<double> values;

    double operator()(double x) const;  // clamps outside the grid
    // Monotone linear-interpolation inverse. Accepts p in [0, 1]; the exact
    // endpoints map to the grid ends (the grid carries all the mass).
    // Outside [0,1] -> std::domain_error.
    double quantile(double p) const;
};

// Cumulative trapezoid of a normalized density; the final value is pinned to
// exactly 1 so quantile(1) is the last grid point.
GridCdf cdf_from_density(const GridDensity& d);

// Free-function form mirroring cdf_from_density; p strictly inside (0,1).
double quantile_from_cdf(const GridCdf& cdf, double p);

// ---- support grids ----

struct GridSpec {
    std::size_t points = 2001;      // final uniform grid size
    double tail_fraction = 1e-8;    // stop expanding when f(edge) < frac * max
    std::size_t probe_points = 129; // coarse samples per expansion round
};

// Builds a uniform grid covering the effective support of f: starts at
// [center - halfwidth, center + halfwidth], expands each side until the edge
// value drops below tail_fraction * max (or the side hits its bound; a finite
// bound is approached geometrically so open endpoints like theta > 0 work).
std::vector<double> build_support_grid(const std::function<double(double)>& f,
                                       double center, double halfwidth,
                                       Interval bounds, GridSpec spec = {});

std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace epiconf::numerics
