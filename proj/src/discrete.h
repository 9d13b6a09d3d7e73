#pragma once

// Mid-P confidence machinery for success-count data: the mid P-value and its
// closed-form confidence density for the binomial and negative-binomial
// stopping rules, equi-tailed intervals, the exact coverage-fluctuation
// experiment, and the exact enumeration of the two-by-two ancillary example.

#include <cstdint>
#include <vector>

#include "confidence.h"
#include "coverage.h"
#include "numerics.h"

namespace epiconf::discrete {

enum class Family {
    kBinomial,          // y successes in n trials, n fixed
    kNegativeBinomial,  // n trials needed to reach y successes, y fixed
};

const char* family_name(Family f);

// Observed success/trial counts. Binomial admits 0 <= y <= n (n >= 1);
// negative binomial admits 1 <= y <= n.
struct Observed {
    int y = 0;
    int n = 1;
};

// Mid P-value C(theta) = P_theta(T < t) + 1/2 P_theta(T = t), oriented so it
// is a proper CDF in theta on (0, 1):
//   binomial:  1/2 [ I_theta(y, n-y+1) + I_theta(y+1, n-y) ]
//   neg. bin.: 1/2 [ I_theta(y, n-y+1) + I_theta(y, n-y)   ]
// Boundary counts drop the degenerate incomplete-beta term for its exact
// limit: binomial y = 0 -> 1 - (1-theta)^n / 2, y = n -> theta^n / 2;
// negative binomial n = y -> theta^y / 2. theta in [0, 1]; the closed
// endpoints take the continuity limits.
double mid_pvalue(Family family, Observed obs, double theta);

// d/dtheta of mid_pvalue: an equal-weight mixture of the two Beta densities
// matching the incomplete-beta terms; a boundary count leaves the single
// surviving Beta term, renormalized to keep unit mass on (0, 1).
double midp_density(Family family, Observed obs, double theta);

// The density tabulated on an endpoint-clustered grid over [0, 1], sized so
// its trapezoid integral stays within 2e-7 of 1 (marked normalized).
// `points` is a floor; steep boundary-count cases get denser grids.
numerics::GridDensity midp_confidence_density(Family family, Observed obs,
                                              std::size_t points = 2001);

// Equi-tailed interval: root-solve mid_pvalue = (1 -+ gamma)/2, clipped to
// [0, 1] when the mass at an end cannot be split (boundary counts).
confidence::ConfidenceInterval midp_interval(Family family, Observed obs,
                                             double gamma);

// One family/size case of the coverage-fluctuation experiment.
struct MidpCoverageCase {
    Family family = Family::kBinomial;
    int size = 0;  // binomial: n; negative binomial: y
    coverage::CoverageReport report;
};

// Exact coverage of the gamma equi-tailed mid-P interval over theta_grid for
// each (family, size): binomial sums the full outcome lattice; negative
// binomial truncates its infinite support at cumulative mass 1 - 1e-10 (the
// omitted tail can move coverage by at most 1e-10). n_sim and seed are
// accepted for interface uniformity and echoed into the report; the
// computation is exact and uses neither.
std::vector<MidpCoverageCase> midp_coverage_experiment(
    const std::vector<std::pair<Family, int>>& cases, double gamma,
    const std::vector<double>& theta_grid, std::uint64_t n_sim,
    std::uint64_t seed);

// Exact tables for the two-by-two example with parameter label theta in
// {1, 2}: the joint law, both one-margin laws, the best-guess (maximum
// likelihood) map, its conditional correctness given either coordinate, and
// the likelihood at the observation (1, 1). Indices: [theta-1], [value-1].
struct EvansTables {
    double joint[2][2][2];           // [theta-1][y1-1][y2-1]
    double marginal_y1[2][2];        // P_theta(Y1 = k)
    double marginal_y2[2][2];        // P_theta(Y2 = k)
    int mle[2][2];                   // best guess at (y1, y2)
    double correct_given_y1[2][2];   // P_theta(guess = theta | Y1 = k)
    double correct_given_y2[2][2];   // P_theta(guess = theta | Y2 = k)
    double marginal_correct[2];      // P_theta(guess = theta)
    double likelihood_at_11[2];      // L(1), L(2) at y = (1, 1)
};

// Derived by enumeration from the registered evans_2x2 model (not retyped
// constants), so the tables and the model cannot drift apart.
EvansTables evans_enumeration();

}  // namespace epiconf::discrete
