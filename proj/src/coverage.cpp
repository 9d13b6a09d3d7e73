#include "coverage.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "confidence.h"
#include "errors.h"
#include "rng.h"

namespace epiconf::coverage {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

unsigned resolve_workers(unsigned workers) {
    if (workers != 0) return workers;
    unsigned hw = std::thread::hardware_concurrency();
    return std::clamp(hw, 1u, 8u);
}

// Discrete statistic levels are matched by value; quantize so replicates and
// enumeration agree bit-for-bit on lattice data.
long long level_key(double v) {
    double scaled = v * 1e9;
    if (std::abs(scaled) >= 9.0e18) scaled = std::copysign(9.0e18, scaled);
    return std::llround(scaled);
}

double mc_std_err(double p, std::uint64_t n) {
    return n > 0 ? std::sqrt(std::max(0.0, p * (1.0 - p)) / double(n)) : 0.0;
}

struct Counts {
    std::uint64_t n = 0;
    std::uint64_t covered = 0;
    void add(bool cover) {
        ++n;
        if (cover) ++covered;
    }
    void merge(const Counts& o) {
        n += o.n;
        covered += o.covered;
    }
    double rate() const { return n > 0 ? double(covered) / double(n) : 0.0; }
};

// Per-theta accumulator: a marginal tally plus either fixed continuous bins
// or discovered discrete levels.
struct ThetaTally {
    Counts marginal;
    std::uint64_t failures = 0;
    std::vector<Counts> bins;              // continuous mode
    std::map<long long, Counts> levels;    // discrete mode
    void merge(const ThetaTally& o) {
        marginal.merge(o.marginal);
        failures += o.failures;
        if (bins.size() < o.bins.size()) bins.resize(o.bins.size());
        for (std::size_t i = 0; i < o.bins.size(); ++i) bins[i].merge(o.bins[i]);
        for (const auto& [k, c] : o.levels) levels[k].merge(c);
    }
};

struct BinLayout {
    bool conditioned = false;
    bool discrete = false;
    std::vector<double> edges;  // continuous: size bins+1 with +-inf outer
    int find(double v) const {
        auto it = std::upper_bound(edges.begin(), edges.end(), v);
        int idx = int(it - edges.begin()) - 1;
        return std::clamp(idx, 0, int(edges.size()) - 2);
    }
};

// Fixed sample-space bin edges from a pilot sample pooled over the whole
// theta grid; deterministic in the seed and independent of worker count.
BinLayout pilot_bins(const models::ParametricModel& model,
                     const Candidate& candidate, std::size_t bins,
                     const std::vector<double>& theta_grid, std::size_t n,
                     std::uint64_t seed) {
    constexpr std::size_t kPilotPerTheta = 500;
    std::vector<double> pooled;
    pooled.reserve(kPilotPerTheta * theta_grid.size());
    for (std::size_t ti = 0; ti < theta_grid.size(); ++ti) {
        for (std::size_t r = 0; r < kPilotPerTheta; ++r) {
            auto y = model.simulate(theta_grid[ti], n,
                                    rng::derive(seed, 0xB1C5, ti, r));
            pooled.push_back(candidate.value(y));
        }
    }
    std::sort(pooled.begin(), pooled.end());
    BinLayout layout;
    layout.conditioned = true;
    layout.discrete = false;
    layout.edges.push_back(-kInf);
    for (std::size_t k = 1; k < bins; ++k) {
        double e = pooled[k * pooled.size() / bins];
        if (e > layout.edges.back()) layout.edges.push_back(e);
    }
    layout.edges.push_back(kInf);
    return layout;
}

struct EstimateInputs {
    const models::ParametricModel& model;
    const CiProcedure& proc;
    const Candidate* candidate;  // nullptr = marginal only
    BinLayout layout;
    const std::vector<double>& theta_grid;
    std::size_t n;
    std::uint64_t n_sim;
    std::uint64_t seed;
    unsigned workers;
};

std::vector<ThetaTally> run_monte_carlo(const EstimateInputs& in) {
    std::size_t nt = in.theta_grid.size();
    unsigned workers = resolve_workers(in.workers);
    std::uint64_t chunk = (in.n_sim + workers - 1) / workers;

    std::vector<std::vector<ThetaTally>> partial(
        workers, std::vector<ThetaTally>(nt));
    auto body = [&](unsigned w) {
        std::uint64_t lo = w * chunk, hi = std::min<std::uint64_t>(
                                          in.n_sim, (w + 1) * chunk);
        auto& tallies = partial[w];
        for (std::size_t ti = 0; ti < nt; ++ti) {
            double theta = in.theta_grid[ti];
            auto& tally = tallies[ti];
            if (in.layout.conditioned && !in.layout.discrete)
                tally.bins.resize(in.layout.edges.size() - 1);
            for (std::uint64_t r = lo; r < hi; ++r) {
                auto y = in.model.simulate(theta, in.n,
                                           rng::derive(in.seed, ti, r));
                bool covered = false;
                try {
                    covered = in.proc(y).contains(theta);
                } catch (const std::exception&) {
                    ++tally.failures;
                }
                tally.marginal.add(covered);
                if (in.candidate) {
                    double v = in.candidate->value(y);
                    if (in.layout.discrete)
                        tally.levels[level_key(v)].add(covered);
                    else
                        tally.bins[in.layout.find(v)].add(covered);
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body, w);
    body(0);
    for (auto& t : pool) t.join();

    std::vector<ThetaTally> total(nt);
    for (unsigned w = 0; w < workers; ++w)
        for (std::size_t ti = 0; ti < nt; ++ti) total[ti].merge(partial[w][ti]);
    return total;
}

// Exact path: probability-weighted sums over the finite sample space. Tallies
// carry probabilities scaled to integers? No -- exact cells are built
// directly from probability sums below.
struct ExactCell {
    double prob = 0.0;
    double covered_prob = 0.0;
    std::uint64_t outcomes = 0;
};

struct ExactTally {
    ExactCell marginal;
    std::map<long long, ExactCell> levels;
};

ExactTally run_enumeration(const models::ParametricModel& model,
                           const CiProcedure& proc, const Candidate* candidate,
                           double theta, std::size_t n) {
    ExactTally tally;
    for (const auto& [y, p] : model.enumerate(theta, n)) {
        bool covered = proc(y).contains(theta);
        tally.marginal.prob += p;
        tally.marginal.covered_prob += covered ? p : 0.0;
        ++tally.marginal.outcomes;
        if (candidate) {
            auto& cell = tally.levels[level_key(candidate->value(y))];
            cell.prob += p;
            cell.covered_prob += covered ? p : 0.0;
            ++cell.outcomes;
        }
    }
    return tally;
}

// Exact single-datum path for monotone interval procedures: the covering set
// {y : CI(y) contains theta} is an interval whose endpoints are roots of the
// CI edges.
double quadrature_coverage(const models::ParametricModel& model,
                           const CiProcedure& proc, double theta) {
    numerics::Interval wide{-1e15, 1e15};
    auto upper_gap = [&](double yv) {
        return proc(models::Dataset{yv}).hi - theta;
    };
    auto lower_gap = [&](double yv) {
        return proc(models::Dataset{yv}).lo - theta;
    };
    double y_min = numerics::find_root_expand(upper_gap, theta, 1.0, wide, 1e-10);
    double y_max = numerics::find_root_expand(lower_gap, theta, 1.0, wide, 1e-10);
    if (y_max < y_min) std::swap(y_min, y_max);
    double f_hi = model.statistic_cdf(model.statistic({y_max}), theta, 1);
    double f_lo = model.statistic_cdf(model.statistic({y_min}), theta, 1);
    return std::clamp(f_hi - f_lo, 0.0, 1.0);
}

// Shared driver behind marginal_coverage and conditional_coverage.
CoverageReport estimate(const models::ParametricModel& model,
                        const CiProcedure& proc, const Candidate* candidate,
                        std::size_t bins, const std::vector<double>& theta_grid,
                        double gamma, std::size_t n, std::uint64_t n_sim,
                        std::uint64_t seed, Method method, unsigned workers) {
    if (theta_grid.empty())
        throw ConfigError("coverage: theta grid must not be empty");
    for (double th : theta_grid)
        if (!model.theta_valid(th))
            throw ConfigError("coverage: theta " + std::to_string(th) +
                              " is outside the parameter space of " +
                              model.name());

    CoverageReport report;
    report.model = model.name();
    report.statistic = candidate ? candidate->id : "";
    report.gamma = gamma;
    report.sample_size = n;
    report.theta_grid = theta_grid;
    report.seed = seed;

    if (method == Method::kAuto)
        method = model.enumerable(n) ? Method::kEnumerate : Method::kMonteCarlo;

    if (method == Method::kQuadrature) {
        if (candidate)
            throw CapabilityError(
                "coverage: the quadrature path is marginal-only");
        if (n != 1 || !model.has_statistic_law(1))
            throw CapabilityError(
                "coverage: quadrature path needs n = 1 and a statistic law");
        report.exact = true;
        for (double th : theta_grid) {
            Cell cell;
            cell.theta = th;
            cell.coverage = quadrature_coverage(model, proc, th);
            cell.n = 0;
            report.cells.push_back(cell);
        }
        return report;
    }

    if (method == Method::kEnumerate) {
        if (!model.enumerable(n))
            throw CapabilityError("coverage: " + model.name() +
                                  " is not enumerable at this sample size");
        report.exact = true;
        std::vector<ExactTally> tallies;
        tallies.reserve(theta_grid.size());
        for (double th : theta_grid)
            tallies.push_back(run_enumeration(model, proc, candidate, th, n));
        // Unified level list across theta so bin ids line up.
        std::map<long long, int> level_ids;
        for (const auto& t : tallies)
            for (const auto& [k, cell] : t.levels) level_ids.emplace(k, 0);
        int next_id = 0;
        for (auto& [k, id] : level_ids) id = next_id++;
        for (std::size_t ti = 0; ti < theta_grid.size(); ++ti) {
            const auto& t = tallies[ti];
            Cell marg;
            marg.theta = theta_grid[ti];
            marg.n = t.marginal.outcomes;
            marg.coverage = t.marginal.prob > 0.0
                                ? t.marginal.covered_prob / t.marginal.prob
                                : 0.0;
            report.cells.push_back(marg);
            for (const auto& [k, id] : level_ids) {
                Cell cell;
                cell.theta = theta_grid[ti];
                cell.bin_id = id;
                double level = double(k) / 1e9;
                cell.bin_lo = cell.bin_hi = level;
                auto it = t.levels.find(k);
                if (it != t.levels.end()) {
                    cell.n = it->second.outcomes;
                    cell.bin_prob = it->second.prob;
                    cell.coverage = it->second.prob > 0.0
                                        ? it->second.covered_prob / it->second.prob
                                        : 0.0;
                } else {
                    cell.n = 0;
                    cell.bin_prob = 0.0;
                }
                report.cells.push_back(cell);
            }
        }
        return report;
    }

    // Monte Carlo.
    if (n_sim == 0) throw ConfigError("coverage: n_sim must be positive");
    report.n_sim = n_sim;
    EstimateInputs in{model, proc, candidate, BinLayout{}, theta_grid,
                      n,     n_sim, seed,      workers};
    if (candidate) {
        if (candidate->discrete) {
            in.layout.conditioned = true;
            in.layout.discrete = true;
        } else {
            in.layout =
                pilot_bins(model, *candidate, bins, theta_grid, n, seed);
        }
    }
    auto tallies = run_monte_carlo(in);

    std::map<long long, int> level_ids;
    if (candidate && in.layout.discrete) {
        for (const auto& t : tallies)
            for (const auto& [k, c] : t.levels) level_ids.emplace(k, 0);
        int next_id = 0;
        for (auto& [k, id] : level_ids) id = next_id++;
    }

    for (std::size_t ti = 0; ti < theta_grid.size(); ++ti) {
        const auto& t = tallies[ti];
        report.failures += t.failures;
        Cell marg;
        marg.theta = theta_grid[ti];
        marg.n = t.marginal.n;
        marg.coverage = t.marginal.rate();
        marg.std_err = mc_std_err(marg.coverage, marg.n);
        report.cells.push_back(marg);
        if (!candidate) continue;
        if (in.layout.discrete) {
            for (const auto& [k, id] : level_ids) {
                Cell cell;
                cell.theta = theta_grid[ti];
                cell.bin_id = id;
                double level = double(k) / 1e9;
                cell.bin_lo = cell.bin_hi = level;
                auto it = t.levels.find(k);
                if (it != t.levels.end()) {
                    cell.n = it->second.n;
                    cell.coverage = it->second.rate();
                    cell.std_err = mc_std_err(cell.coverage, cell.n);
                    cell.bin_prob = double(cell.n) / double(t.marginal.n);
                } else {
                    cell.n = 0;
                    cell.bin_prob = 0.0;
                }
                report.cells.push_back(cell);
            }
        } else {
            for (std::size_t b = 0; b < t.bins.size(); ++b) {
                Cell cell;
                cell.theta = theta_grid[ti];
                cell.bin_id = int(b);
                cell.bin_lo = in.layout.edges[b];
                cell.bin_hi = in.layout.edges[b + 1];
                cell.n = t.bins[b].n;
                cell.coverage = t.bins[b].rate();
                cell.std_err = mc_std_err(cell.coverage, cell.n);
                cell.bin_prob =
                    t.marginal.n > 0 ? double(cell.n) / double(t.marginal.n)
                                     : 0.0;
                report.cells.push_back(cell);
            }
        }
    }
    return report;
}

}  // namespace

const Cell& CoverageReport::marginal_cell(std::size_t theta_index) const {
    for (const auto& cell : cells)
        if (cell.bin_id == -1 &&
            cell.theta == theta_grid.at(theta_index))
            return cell;
    throw ConfigError("coverage report: no marginal cell for theta index");
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::kRelevantPositive: return "relevant_positive";
        case Verdict::kRelevantNegative: return "relevant_negative";
        case Verdict::kNotRelevant: return "not_relevant";
        case Verdict::kInconclusive: return "inconclusive";
    }
    return "inconclusive";
}

CoverageReport marginal_coverage(const models::ParametricModel& model,
                                 const CiProcedure& proc,
                                 const std::vector<double>& theta_grid,
                                 double gamma, std::size_t n,
                                 std::uint64_t n_sim, std::uint64_t seed,
                                 Method method, unsigned workers) {
    return estimate(model, proc, nullptr, 0, theta_grid, gamma, n, n_sim, seed,
                    method, workers);
}

CoverageReport conditional_coverage(const models::ParametricModel& model,
                                    const CiProcedure& proc,
                                    const Candidate& candidate,
                                    std::size_t bins,
                                    const std::vector<double>& theta_grid,
                                    double gamma, std::size_t n,
                                    std::uint64_t n_sim, std::uint64_t seed,
                                    Method method, unsigned workers) {
    if (!candidate.discrete && bins < 2)
        throw ConfigError("conditional_coverage: need at least 2 bins");
    return estimate(model, proc, &candidate, bins, theta_grid, gamma, n, n_sim,
                    seed, method, workers);
}

std::vector<Candidate> builtin_candidates(const models::ParametricModel& model) {
    bool discrete = model.capabilities().discrete_data;
    auto minmax = [](const models::Dataset& y) {
        return std::minmax_element(y.begin(), y.end());
    };
    std::vector<Candidate> out;
    out.push_back({"range",
                   [minmax](const models::Dataset& y) {
                       auto [lo, hi] = minmax(y);
                       return *hi - *lo;
                   },
                   discrete});
    out.push_back({"min",
                   [](const models::Dataset& y) {
                       return *std::min_element(y.begin(), y.end());
                   },
                   discrete});
    out.push_back({"max",
                   [](const models::Dataset& y) {
                       return *std::max_element(y.begin(), y.end());
                   },
                   discrete});
    auto mean = [](const models::Dataset& y) {
        double s = 0.0;
        for (double v : y) s += v;
        return s / double(y.size());
    };
    out.push_back({"mean", mean, discrete});
    out.push_back({"fractional_part",
                   [mean](const models::Dataset& y) {
                       double m = mean(y);
                       return m - std::floor(m);
                   },
                   discrete});
    for (const auto& name : model.ancillary_names()) {
        out.push_back({"ancillary:" + name,
                       [&model, name](const models::Dataset& y) {
                           return model.ancillary_named(name, y);
                       },
                       discrete});
    }
    return out;
}

namespace {

RelevantSubsetReport judge(const std::string& candidate_id,
                           CoverageReport detail, const ScanPolicy& policy) {
    RelevantSubsetReport out;
    out.candidate = candidate_id;

    // Collect bin ids present in the report.
    std::vector<int> bin_ids;
    for (const auto& cell : detail.cells)
        if (cell.bin_id >= 0 &&
            std::find(bin_ids.begin(), bin_ids.end(), cell.bin_id) ==
                bin_ids.end())
            bin_ids.push_back(cell.bin_id);
    std::sort(bin_ids.begin(), bin_ids.end());

    auto cell_at = [&](double theta, int bin) -> const Cell* {
        for (const auto& cell : detail.cells)
            if (cell.bin_id == bin && cell.theta == theta) return &cell;
        return nullptr;
    };

    bool any_relevant = false;
    bool any_inconclusive = false;
    for (int bin : bin_ids) {
        bool pos = true, neg = true, ever_populated = false, ever_solid = false;
        double eps = kInf;
        for (double theta : detail.theta_grid) {
            const Cell* marg = cell_at(theta, -1);
            const Cell* cond = cell_at(theta, bin);
            if (!cond || cond->n == 0) {
                pos = neg = false;
                continue;
            }
            ever_populated = true;
            if (detail.exact || cond->n >= policy.min_n) ever_solid = true;
            double d = cond->coverage - marg->coverage;
            double se = std::sqrt(cond->std_err * cond->std_err +
                                  marg->std_err * marg->std_err);
            double threshold = std::max(policy.abs_margin, policy.se_mult * se);
            if (!(d > threshold)) pos = false;
            if (!(-d > threshold)) neg = false;
            eps = std::min(eps, std::abs(d));
        }
        if (!ever_populated) continue;  // empty at every theta: excluded
        BinVerdict bv;
        bv.bin_id = bin;
        if (pos || neg) {
            bv.verdict = pos ? Verdict::kRelevantPositive
                             : Verdict::kRelevantNegative;
            bv.epsilon_hat = eps;
            any_relevant = true;
            if (eps > out.epsilon_hat) {
                out.epsilon_hat = eps;
                out.overall = bv.verdict;
            }
        } else if (ever_solid) {
            bv.verdict = Verdict::kNotRelevant;
        } else {
            bv.verdict = Verdict::kInconclusive;
            any_inconclusive = true;
        }
        out.bins.push_back(bv);
    }
    if (!any_relevant)
        out.overall = any_inconclusive ? Verdict::kInconclusive
                                       : Verdict::kNotRelevant;
    out.detail = std::move(detail);
    return out;
}

}  // namespace

std::vector<RelevantSubsetReport> relevant_scan(
    const models::ParametricModel& model, const CiProcedure& proc,
    const std::vector<Candidate>& candidates,
    const std::vector<double>& theta_grid, double gamma, std::size_t n,
    std::uint64_t n_sim, std::uint64_t seed, ScanPolicy policy, Method method,
    unsigned workers) {
    std::vector<RelevantSubsetReport> out;
    out.reserve(candidates.size());
    for (const auto& candidate : candidates) {
        auto detail =
            conditional_coverage(model, proc, candidate, policy.bins,
                                 theta_grid, gamma, n, n_sim, seed, method,
                                 workers);
        out.push_back(judge(candidate.id, std::move(detail), policy));
    }
    return out;
}

// ---- interval procedure builders ----

CiProcedure marginal_ci_procedure(models::ModelPtr model, double gamma,
                                  std::size_t n) {
    double g1 = 0.5 * (1.0 - gamma), g2 = 0.5 * (1.0 + gamma);
    return marginal_split_ci_procedure(std::move(model), g1, g2, n);
}

CiProcedure marginal_split_ci_procedure(models::ModelPtr model, double gamma1,
                                        double gamma2, std::size_t n) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return [model = std::move(model), gamma1, gamma2, n,
            nan](const models::Dataset& y) {
        double t = model->statistic(y);
        auto ci = confidence::marginal_interval(*model, t, gamma2 - gamma1,
                                                gamma1, gamma2, n, nan);
        return numerics::Interval{ci.lower, ci.upper};
    };
}

CiProcedure minmax_procedure() {
    return [](const models::Dataset& y) {
        auto [lo, hi] = std::minmax_element(y.begin(), y.end());
        return numerics::Interval{*lo, *hi};
    };
}

CiProcedure mle_guess_procedure(models::ModelPtr model) {
    return [model = std::move(model)](const models::Dataset& y) {
        double g = model->mle(y);
        return numerics::Interval{g, g};
    };
}

CiProcedure conditional_ci_procedure(models::ModelPtr model, double gamma,
                                     std::size_t n) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return [model = std::move(model), gamma, n, nan](const models::Dataset& y) {
        double t = model->conditional_statistic(y);
        double a = model->ancillary(y);
        double lo = confidence::conditional_quantile(*model, t, a,
                                                     0.5 * (1.0 - gamma), n, nan);
        double hi = confidence::conditional_quantile(*model, t, a,
                                                     0.5 * (1.0 + gamma), n, nan);
        return numerics::Interval{lo, hi};
    };
}

CiProcedure full_confidence_ci_procedure(models::ModelPtr model,
                                         std::function<double(double)> prior,
                                         double gamma) {
    return [model = std::move(model), prior = std::move(prior),
            gamma](const models::Dataset& y) {
        auto cd = confidence::full_confidence(prior, *model, y);
        auto ci = confidence::interval(cd, gamma);
        return numerics::Interval{ci.lower, ci.upper};
    };
}

}  // namespace epiconf::coverage
