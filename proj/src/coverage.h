#pragma once

// Coverage estimation for interval procedures: exact enumeration where the
// sample space is finite, single-datum quadrature for pivot-style intervals,
// and seeded Monte Carlo otherwise; plus the relevant-subset scanner that
// looks for conditioning events with uniformly biased conditional coverage.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "models.h"
#include "numerics.h"

namespace epiconf::coverage {

// Maps a dataset to the claim [lo, hi] (degenerate interval = point guess).
// A throwing procedure marks the replicate failed; failures count as
// non-covering and are tallied in the report.
using CiProcedure = std::function<numerics::Interval(const models::Dataset&)>;

struct Cell {
    double theta = 0.0;
    int bin_id = -1;      // -1 = marginal (unconditional) row
    double bin_lo = 0.0;  // for discrete level bins, bin_lo == bin_hi == level
    double bin_hi = 0.0;
    std::uint64_t n = 0;  // replicates (MC) or outcomes (enumeration) in cell
    double bin_prob = 1.0;  // P(bin) at this theta (1 for marginal rows)
    double coverage = 0.0;
    double std_err = 0.0;  // 0 on exact paths
};

struct CoverageReport {
    std::string model;
    std::string statistic;  // conditioning statistic id ("" = marginal only)
    double gamma = 0.0;
    std::size_t sample_size = 1;
    std::vector<double> theta_grid;
    std::uint64_t n_sim = 0;  // 0 on exact paths
    std::uint64_t seed = 0;
    bool exact = false;
    std::uint64_t failures = 0;
    std::vector<Cell> cells;

    // The marginal cell for a given theta grid index.
    const Cell& marginal_cell(std::size_t theta_index) const;
};

enum class Method {
    kAuto,        // enumerate when the model can, else Monte Carlo
    kEnumerate,   // exact finite-sample-space sum (error if not enumerable)
    kQuadrature,  // exact n=1 path; requires both CI endpoints nondecreasing
                  // in y so {y : CI(y) covers theta} is an interval
    kMonteCarlo,
};

CoverageReport marginal_coverage(const models::ParametricModel& model,
                                 const CiProcedure& proc,
                                 const std::vector<double>& theta_grid,
                                 double gamma, std::size_t n,
                                 std::uint64_t n_sim, std::uint64_t seed,
                                 Method method = Method::kAuto,
                                 unsigned workers = 0);

// A conditioning statistic the scanner can test.
struct Candidate {
    std::string id;
    std::function<double(const models::Dataset&)> value;
    bool discrete = false;  // exact level bins instead of quantile bins
};

// range, min, max, mean, fractional part of the mean, and every named
// ancillary the model exposes.
std::vector<Candidate> builtin_candidates(const models::ParametricModel& model);

// Per-(theta, bin) coverage, conditioning on the candidate's value. Bins:
// exact levels for discrete candidates; for continuous ones, fixed sample-
// space bins with edges at the quantiles of a pilot sample pooled across the
// whole theta grid (so a bin is one fixed event R(y), not a theta-dependent
// pivot). Marginal rows (bin_id = -1) come from the same replicates, making
// the law of total probability exact within rounding.
CoverageReport conditional_coverage(const models::ParametricModel& model,
                                    const CiProcedure& proc,
                                    const Candidate& candidate,
                                    std::size_t bins,
                                    const std::vector<double>& theta_grid,
                                    double gamma, std::size_t n,
                                    std::uint64_t n_sim, std::uint64_t seed,
                                    Method method = Method::kAuto,
                                    unsigned workers = 0);

enum class Verdict {
    kRelevantPositive,
    kRelevantNegative,
    kNotRelevant,
    kInconclusive,
};

const char* verdict_name(Verdict v);

struct ScanPolicy {
    double abs_margin = 0.01;   // minimum |conditional - marginal| margin
    double se_mult = 3.0;       // ... or this many combined standard errors
    std::uint64_t min_n = 30;   // a bin never reaching this at any theta is
                                // inconclusive (MC paths only)
    std::size_t bins = 10;      // quantile bins for continuous candidates
};

struct BinVerdict {
    int bin_id = 0;
    Verdict verdict = Verdict::kInconclusive;
    double epsilon_hat = 0.0;  // min over theta of |margin|, for relevant bins
};

struct RelevantSubsetReport {
    std::string candidate;
    Verdict overall = Verdict::kNotRelevant;
    double epsilon_hat = 0.0;  // largest epsilon among relevant bins
    std::vector<BinVerdict> bins;
    CoverageReport detail;
};

// Verdict per candidate per bin: relevant_{positive,negative} only when the
// signed (conditional - marginal) margin clears max(abs_margin, se_mult *
// combined std err) at EVERY grid theta in one direction.
std::vector<RelevantSubsetReport> relevant_scan(
    const models::ParametricModel& model, const CiProcedure& proc,
    const std::vector<Candidate>& candidates,
    const std::vector<double>& theta_grid, double gamma, std::size_t n,
    std::uint64_t n_sim, std::uint64_t seed, ScanPolicy policy = {},
    Method method = Method::kAuto, unsigned workers = 0);

// ---- interval procedure builders ----

// Equi-tailed interval from the marginal confidence distribution.
CiProcedure marginal_ci_procedure(models::ModelPtr model, double gamma,
                                  std::size_t n);

// One-sided split (gamma1 mass above the interval, 1-gamma2 below).
CiProcedure marginal_split_ci_procedure(models::ModelPtr model, double gamma1,
                                        double gamma2, std::size_t n);

// [min y, max y] order-statistic interval.
CiProcedure minmax_procedure();

// Point guess at the maximum-likelihood estimate.
CiProcedure mle_guess_procedure(models::ModelPtr model);

// Equi-tailed interval from the conditional confidence distribution given
// the model's maximal ancillary.
CiProcedure conditional_ci_procedure(models::ModelPtr model, double gamma,
                                     std::size_t n);

// Equi-tailed interval from full confidence with an explicit prior shape.
CiProcedure full_confidence_ci_procedure(
    models::ModelPtr model, std::function<double(double)> prior, double gamma);

}  // namespace epiconf::coverage
