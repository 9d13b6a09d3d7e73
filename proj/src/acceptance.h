// The release gate: ten named, timed criteria with explicit pass/fail
// verdicts. The `accept` experiment and the acceptance test binary both run
// these; each criterion prints one line and the suite exits nonzero when any
// fails. Numeric bands live in Tolerances so the CLI can override them.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace epiconf::acceptance {

struct Tolerances {
    double prior_flat_rel = 1e-6;          // normal-location prior flatness
    double mc_se_mult = 3.0;               // Monte Carlo acceptance bands
    double gamma_mle_abs = 1e-6;           // gamma-shape MLE vs 3.0
    double updating_rel = 0.02;            // c_f vs signed-root-based c_m
    double density_floor = 0.01;           // fraction of max density compared
    double prior_route_rel = 0.02;         // prior routes on theta in [1, 6]
    double curved_prior_rel = 1e-4;        // theta * c0 flatness, exact route
    double curved_prior_rel_pstar = 1e-3;  // ... approximate-MLE-density route
    double normalize_abs = 1e-6;           // density integral vs 1
    double cc_cf_rel = 1e-4;               // conditional vs full confidence
    double ratio_band_lo = 0.8;            // confidence / exact-P ratio band
    double ratio_band_hi = 1.25;
    int ratio_min_inside = 95;             // of 100 simulated datasets
    double fig2_rel = 0.05;                // three-prior agreement, N(theta,theta)

    // Assigns by field name ('-' and '_' interchangeable); false if unknown.
    bool set(const std::string& name, double value);
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;  // one-line diagnostics (worst margins, counts)
};

struct SuiteResult {
    std::vector<CriterionResult> results;
    bool all_pass = true;
};

// Criteria are numbered 1..criterion_count().
int criterion_count();

// Runs one criterion. Unknown ids throw ConfigError. Numeric failures inside
// a criterion (quadrature, bracketing) are caught and reported as a failed
// criterion, never as a crash.
CriterionResult run_criterion(int id, const Tolerances& tol,
                              std::uint64_t seed);

SuiteResult run_all(const Tolerances& tol, std::uint64_t seed);

// "PASS  1  example-1 exact enumeration        0.01s  detail" (one line).
std::string format_line(const CriterionResult& r);

}  // namespace epiconf::acceptance
