#include "acceptance.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "asymptotics.h"
#include "confidence.h"
#include "coverage.h"
#include "discrete.h"
#include "dutchbook.h"
#include "errors.h"
#include "models.h"
#include "numerics.h"
#include "rng.h"

namespace epiconf::acceptance {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Wall-clock budgets (seconds); 0 = no budget for this criterion.
double budget_for(int id) {
    switch (id) {
        case 1: return 1.0;
        case 2: return 30.0;
        case 3: return 60.0;
        case 5: return 300.0;
        case 7: return 10.0;
        case 9: return 60.0;
        default: return 0.0;
    }
}

const char* title_for(int id) {
    switch (id) {
        case 1: return "three-point uniform exact enumeration";
        case 2: return "normal-location prior and coverage";
        case 3: return "gamma-shape updating and prior routes";
        case 4: return "curved-normal prior and conditional";
        case 5: return "conditional p-value ratio bands";
        case 6: return "mean-variance normal agreement";
        case 7: return "mid-p coverage oscillation";
        case 8: return "two-by-two conditional correctness";
        case 9: return "betting-market arbitrage";
        case 10: return "structural properties";
        default: return "";
    }
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Collects sub-check failures and one-line diagnostics for a criterion.
struct Check {
    std::vector<std::string> fails;
    std::string notes;

    void require(bool ok, const std::string& label) {
        if (!ok) fails.push_back(label);
    }
    void note(const std::string& s) {
        if (!notes.empty()) notes += "; ";
        notes += s;
    }
    std::string detail() const {
        std::string out;
        for (const auto& f : fails) {
            if (!out.empty()) out += "; ";
            out += "FAIL " + f;
        }
        if (!notes.empty()) {
            if (!out.empty()) out += "; ";
            out += notes;
        }
        return out;
    }
};

double median_of(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// max over i of |other[i] - ref[i]| / ref[i], restricted to points where
// ref exceeds floor_frac * max(ref).
double max_rel_gap(const std::vector<double>& ref,
                   const std::vector<double>& other, double floor_frac) {
    double peak = 0.0;
    for (double r : ref) peak = std::max(peak, r);
    const double floor = floor_frac * peak;
    double worst = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        if (ref[i] > floor)
            worst = std::max(worst, std::abs(other[i] - ref[i]) / ref[i]);
    }
    return worst;
}

// max/min - 1 over the values (all must be finite and > 0; else +inf).
double flatness(const std::vector<double>& vals) {
    double lo = kInf, hi = 0.0;
    for (double v : vals) {
        if (!(v > 0.0) || !std::isfinite(v)) return kInf;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return vals.empty() ? kInf : hi / lo - 1.0;
}

double derivative5(const std::function<double(double)>& f, double x, double h) {
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) /
           (12 * h);
}

const coverage::Cell* cell_at(const coverage::CoverageReport& rep, double theta,
                              int bin_id) {
    for (const auto& c : rep.cells)
        if (c.theta == theta && c.bin_id == bin_id) return &c;
    return nullptr;
}

// Grid points of a confidence-distribution support restricted to its central
// mass (default: the 0.1%..99.9% confidence window), paired with the stored
// density values so no interpolation enters the comparison.
std::vector<std::size_t> central_indices(const numerics::GridDensity& d,
                                         const confidence::ConfidenceDistribution& cd,
                                         double tail = 1e-3) {
    const double lo = cd.quantile(tail), hi = cd.quantile(1.0 - tail);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d.grid()[i] >= lo && d.grid()[i] <= hi) idx.push_back(i);
    return idx;
}

// ---- criterion 1: three-point discrete uniform, everything by enumeration ----

void crit1(const Tolerances&, std::uint64_t, Check& ck) {
    auto model = models::make_model("discrete_uniform_triple");
    auto proc = coverage::minmax_procedure();
    const std::vector<double> grid{4.0};
    const double gamma = 7.0 / 9.0;

    auto marg = coverage::marginal_coverage(*model, proc, grid, gamma, 2, 0, 0,
                                            coverage::Method::kEnumerate);
    ck.require(marg.exact, "marginal run is not exact enumeration");
    const double cov = marg.marginal_cell(0).coverage;
    ck.require(std::abs(cov - 7.0 / 9.0) <= 1e-12,
               "marginal coverage " + num(cov) + " != 7/9");

    auto cands = coverage::builtin_candidates(*model);
    auto it = std::find_if(cands.begin(), cands.end(),
                           [](const coverage::Candidate& c) { return c.id == "range"; });
    ck.require(it != cands.end(), "no built-in range candidate");
    if (it == cands.end()) return;

    auto cond = coverage::conditional_coverage(*model, proc, *it, 10, grid,
                                               gamma, 2, 0, 0,
                                               coverage::Method::kEnumerate);
    const double want[3] = {1.0 / 3.0, 1.0, 1.0};  // coverage given R = 0, 1, 2
    int seen = 0;
    for (const auto& c : cond.cells) {
        if (c.bin_id < 0) continue;
        int level = static_cast<int>(std::lround(c.bin_lo));
        if (level < 0 || level > 2) {
            ck.require(false, "unexpected range level " + num(c.bin_lo));
            continue;
        }
        ++seen;
        ck.require(std::abs(c.coverage - want[level]) <= 1e-12,
                   "coverage given R=" + std::to_string(level) + " is " +
                       num(c.coverage) + " not " + num(want[level]));
    }
    ck.require(seen == 3, "expected 3 range levels, saw " + std::to_string(seen));

    auto scans = coverage::relevant_scan(*model, proc, cands, grid, gamma, 2, 0,
                                         0, {}, coverage::Method::kEnumerate);
    bool found_range = false;
    for (const auto& rep : scans) {
        if (rep.candidate != "range") continue;
        found_range = true;
        ck.require(rep.overall == coverage::Verdict::kRelevantNegative,
                   std::string("range overall verdict is ") +
                       coverage::verdict_name(rep.overall));
        ck.require(std::abs(rep.epsilon_hat - 4.0 / 9.0) <= 1e-12,
                   "range epsilon_hat " + num(rep.epsilon_hat) + " != 4/9");
        bool r0_negative = false;
        for (const auto& bv : rep.bins) {
            const coverage::Cell* c = cell_at(rep.detail, 4.0, bv.bin_id);
            if (c && std::lround(c->bin_lo) == 0)
                r0_negative = bv.verdict == coverage::Verdict::kRelevantNegative;
        }
        ck.require(r0_negative, "R=0 bin not flagged relevant_negative");
    }
    ck.require(found_range, "scan returned no range candidate");
    ck.note("marginal=" + num(cov) + " cond=(1/3,1,1) eps_hat=4/9");
}

// ---- criterion 2: normal location prior flatness, coverage band, null scan ----

void crit2(const Tolerances& tol, std::uint64_t seed, Check& ck) {
    auto model = models::make_model("normal_location");

    auto prior = confidence::implied_prior(*model, {0.0}, false,
                                           confidence::PriorRoute::kDataLikelihood);
    auto cm = confidence::marginal_distribution(*model, 0.0, 1);
    std::vector<double> vals;
    for (std::size_t i : central_indices(prior.density, cm))
        vals.push_back(prior.density.values()[i]);
    const double flat = flatness(vals);
    ck.require(flat <= tol.prior_flat_rel,
               "implied prior varies by " + num(flat) + " > " +
                   num(tol.prior_flat_rel));

    auto proc = coverage::marginal_split_ci_procedure(model, 0.025, 0.975, 1);
    auto rep = coverage::marginal_coverage(*model, proc, {0.7}, 0.95, 1, 100000,
                                           rng::derive(seed, 2, 1),
                                           coverage::Method::kMonteCarlo);
    const auto& cell = rep.marginal_cell(0);
    const double dev = std::abs(cell.coverage - 0.95);
    ck.require(cell.std_err > 0.0, "Monte Carlo cell has zero std err");
    ck.require(dev <= tol.mc_se_mult * cell.std_err,
               "coverage " + num(cell.coverage) + " off 0.95 by " + num(dev) +
                   " > " + num(tol.mc_se_mult) + "*se(" + num(cell.std_err) + ")");

    const std::vector<double> sgrid{-4.5, -3.0, -1.5, 0.0, 1.5, 3.0, 4.5};
    auto scans = coverage::relevant_scan(*model, proc,
                                         coverage::builtin_candidates(*model),
                                         sgrid, 0.95, 1, 40000,
                                         rng::derive(seed, 2, 2), {},
                                         coverage::Method::kMonteCarlo);
    for (const auto& s : scans)
        ck.require(s.overall == coverage::Verdict::kNotRelevant,
                   "candidate " + s.candidate + " verdict " +
                       coverage::verdict_name(s.overall));
    ck.note("prior_flatness=" + num(flat) + " coverage=" + num(cell.coverage) +
            " se=" + num(cell.std_err) + " candidates=" +
            std::to_string(scans.size()) + " all not_relevant");
}

// ---- criterion 3: gamma shape, updating formula and the two prior routes ----

void crit3(const Tolerances& tol, std::uint64_t, Check& ck) {
    const std::size_t n = 5;
    // Exact preimage of MLE 3: mean of log y_i - y_i at the stationary point.
    const double sum_t = n * (numerics::digamma(3.0) - std::log(3.0) - 1.0);
    auto model = models::make_model("gamma_shape");

    const double theta_hat = models::gamma_shape_mle(n, sum_t);
    ck.require(std::abs(theta_hat - 3.0) <= tol.gamma_mle_abs,
               "MLE " + num(theta_hat) + " off 3 by " + num(theta_hat - 3.0));

    // Single-observation preimage y1 of t1 = sum_t / n on (0, 1).
    const double t1 = sum_t / n;
    const double y1 = numerics::find_root(
        [&](double y) { return std::log(y) - y - t1; }, 1e-12, 1.0);
    auto prior = confidence::implied_prior(*model, {y1}, false,
                                           confidence::PriorRoute::kDataLikelihood);
    auto loglik = [n, sum_t](double th) {
        return models::gamma_shape_loglik(th, n, sum_t);
    };
    const double halfwidth = 4.0 / std::sqrt(asymptotics::gamma_info(theta_hat, n));
    auto cf = confidence::full_confidence(
        [prior](double th) { return prior(th); }, loglik, theta_hat, halfwidth,
        numerics::Interval{0.0, kInf});

    auto summary = asymptotics::gamma_summary(n, sum_t);
    auto cm_rstar = [&summary](double th) {
        double h = std::min(1e-4 * std::max(1.0, th), 0.49 * th);
        double d = derivative5(
            [&summary](double x) { return asymptotics::rstar_pvalue(summary, x); },
            th, h);
        return std::max(d, 0.0);
    };

    // (b) updating-formula density vs the r* marginal density on the c_f grid.
    const auto& tg = cf.density().grid();
    const auto& cfv = cf.density().values();
    std::vector<double> cmv(tg.size());
    for (std::size_t i = 0; i < tg.size(); ++i) cmv[i] = cm_rstar(tg[i]);
    const double mass = numerics::trapezoid(tg, cmv);
    ck.require(mass > 0.0, "r* density has zero mass on the c_f grid");
    for (double& v : cmv) v /= mass;
    const double gap_b = max_rel_gap(cfv, cmv, tol.density_floor);
    ck.require(gap_b <= tol.updating_rel,
               "c_f vs r* density gap " + num(gap_b) + " > " + num(tol.updating_rel));

    // (a) the two implied-prior routes, each normalized to 1 at the MLE.
    const double pr_hat = prior(theta_hat);
    const double rs_hat = cm_rstar(theta_hat);
    ck.require(pr_hat > 0.0 && rs_hat > 0.0, "prior vanishes at the MLE");
    double gap_a = 0.0;
    if (pr_hat > 0.0 && rs_hat > 0.0) {
        const double ll_hat = loglik(theta_hat);
        for (double th : numerics::linspace(1.0, 6.0, 501)) {
            const double a = prior(th) / pr_hat;
            const double b =
                cm_rstar(th) * std::exp(ll_hat - loglik(th)) / rs_hat;
            if (!(a > 0.0)) {
                ck.require(false, "datum-route prior vanishes at theta=" + num(th));
                break;
            }
            gap_a = std::max(gap_a, std::abs(b - a) / a);
        }
        ck.require(gap_a <= tol.prior_route_rel,
                   "prior route gap " + num(gap_a) + " > " + num(tol.prior_route_rel));
    }
    ck.note("mle=" + num(theta_hat) + " updating_gap=" + num(gap_b) +
            " route_gap=" + num(gap_a));
}

// ---- criterion 4: curved normal N(theta, theta^2) ----

void crit4(const Tolerances& tol, std::uint64_t, Check& ck) {
    auto model = models::make_model("curved_normal");
    const models::Dataset y{1.0, 1.0};
    const std::size_t n = 2;
    const double theta_hat = model->mle(y);
    const double t = model->conditional_statistic(y);
    const double a = model->ancillary(y);

    auto cc = confidence::conditional_distribution(*model, y);

    // (a) exact conditional route: theta * c0(theta) constant.
    auto prior = confidence::implied_prior(*model, y, true,
                                           confidence::PriorRoute::kDataLikelihood);
    auto idx = central_indices(prior.density, cc);
    std::vector<double> m_exact, m_pstar;
    const double ll_hat = model->log_likelihood(theta_hat, y);
    for (std::size_t i : idx) {
        const double th = prior.density.grid()[i];
        m_exact.push_back(th * prior.density.values()[i]);
        const double dens =
            asymptotics::bn_confidence_density(*model, th, theta_hat, a, n);
        const double lik = std::exp(model->log_likelihood(th, y) - ll_hat);
        m_pstar.push_back(th * dens / lik);
    }
    const double flat_exact = flatness(m_exact);
    const double flat_pstar = flatness(m_pstar);
    ck.require(flat_exact <= tol.curved_prior_rel,
               "theta*c0 (exact route) varies by " + num(flat_exact) + " > " +
                   num(tol.curved_prior_rel));
    ck.require(flat_pstar <= tol.curved_prior_rel_pstar,
               "theta*c0 (approximate-MLE route) varies by " + num(flat_pstar) +
                   " > " + num(tol.curved_prior_rel_pstar));

    // (b) the exact conditional pivot density has unit mass.
    const double mass = numerics::integrate(
        [a, n](double w) { return asymptotics::hinkley_density(w, a, n); }, 0.0,
        a + 14.0, 1e-10);
    ck.require(std::abs(mass - 1.0) <= tol.normalize_abs,
               "conditional pivot density mass " + num(mass));

    // (c) conditional density equals full confidence under the 1/theta prior,
    // compared at the c_f grid nodes against the closed-form conditional law.
    auto cf = confidence::full_confidence(
        [](double th) { return th > 0.0 ? 1.0 / th : 0.0; }, *model, y);
    const auto& fg = cf.density().grid();
    const auto& fv = cf.density().values();
    std::vector<double> cc_exact(fg.size(), 0.0);
    for (std::size_t i = 0; i < fg.size(); ++i) {
        const double th = fg[i];
        if (th > 0.0)
            cc_exact[i] =
                asymptotics::hinkley_density(t / th, a, n) * t / (th * th);
    }
    const double gap = max_rel_gap(cc_exact, fv, tol.density_floor);
    ck.require(gap <= tol.cc_cf_rel,
               "c_c vs c_f gap " + num(gap) + " > " + num(tol.cc_cf_rel));
    ck.note("flat_exact=" + num(flat_exact) + " flat_pstar=" + num(flat_pstar) +
            " pivot_mass=" + num(mass) + " cc_cf_gap=" + num(gap));
}

// ---- criterion 5: ratio of full confidence to the exact conditional P ----

void crit5(const Tolerances& tol, std::uint64_t seed, Check& ck) {
    auto model = models::make_model("curved_normal");
    const std::size_t n = 5;
    const double theta_true = 1.2, theta0 = 1.0;
    const int n_datasets = 100;

    auto prior_recip = [](double th) { return th > 0.0 ? 1.0 / th : 0.0; };
    auto prior_const = [](double) { return 1.0; };

    int in_recip = 0, in_const = 0, in_score = 0;
    std::vector<double> lr_recip, lr_const, lr_score;
    auto tally = [&](double p, double exact, int& inside,
                     std::vector<double>& logs) {
        const double ratio = p / exact;
        if (std::isfinite(ratio) && ratio >= tol.ratio_band_lo &&
            ratio <= tol.ratio_band_hi)
            ++inside;
        logs.push_back(std::isfinite(ratio) && ratio > 0.0
                           ? std::abs(std::log(ratio))
                           : kInf);
    };

    for (int r = 0; r < n_datasets; ++r) {
        auto y = model->simulate(theta_true, n,
                                 rng::derive(seed, 5, static_cast<std::uint64_t>(r)));
        const double t = model->conditional_statistic(y);
        const double a = model->ancillary(y);
        const double exact_p =
            asymptotics::hinkley_conditional_pvalue(theta0, t, a, n);
        if (!(exact_p > 0.0) || !(exact_p < 1.0)) {
            ck.require(false, "degenerate exact conditional P at dataset " +
                                  std::to_string(r));
            continue;
        }
        tally(confidence::full_confidence(prior_recip, *model, y).cdf_at(theta0),
              exact_p, in_recip, lr_recip);
        tally(confidence::full_confidence(prior_const, *model, y).cdf_at(theta0),
              exact_p, in_const, lr_const);
        tally(asymptotics::score_pvalue(*model, theta0, y), exact_p, in_score,
              lr_score);
    }

    const double med_recip = median_of(lr_recip);
    const double med_const = median_of(lr_const);
    const double med_score = median_of(lr_score);
    ck.require(in_recip >= tol.ratio_min_inside,
               "only " + std::to_string(in_recip) + "/100 ratios inside [" +
                   num(tol.ratio_band_lo) + "," + num(tol.ratio_band_hi) + "]");
    ck.require(in_const < in_recip,
               "constant prior not strictly worse by violations (" +
                   std::to_string(in_const) + " vs " + std::to_string(in_recip) + ")");
    ck.require(in_score < in_recip,
               "score test not strictly worse by violations (" +
                   std::to_string(in_score) + " vs " + std::to_string(in_recip) + ")");
    ck.require(med_const > med_recip,
               "constant prior median |log ratio| " + num(med_const) +
                   " not above " + num(med_recip));
    ck.require(med_score > med_recip,
               "score median |log ratio| " + num(med_score) + " not above " +
                   num(med_recip));
    ck.note("inside=" + std::to_string(in_recip) + "/" + std::to_string(in_const) +
            "/" + std::to_string(in_score) + " median_log=" + num(med_recip) + "/" +
            num(med_const) + "/" + num(med_score) + " (1/theta, const, score)");
}

// ---- criterion 6: N(theta, theta), one prior per datum ----

void crit6(const Tolerances& tol, std::uint64_t, Check& ck) {
    auto model = models::make_model("normal_mean_eq_var");
    const models::Dataset y{0.9, 1.0, 1.5};

    std::vector<confidence::ConfidenceDistribution> cfs;
    for (double yi : y) {
        auto prior = confidence::implied_prior(*model, {yi}, false,
                                               confidence::PriorRoute::kDataLikelihood);
        cfs.push_back(confidence::full_confidence(prior, *model, y));
        const double mass = cfs.back().density().integral();
        ck.require(std::abs(mass - 1.0) <= tol.normalize_abs,
                   "c_f from datum " + num(yi) + " has mass " + num(mass));
    }

    double worst = 0.0;
    for (std::size_t i = 0; i < cfs.size(); ++i) {
        for (std::size_t j = 0; j < cfs.size(); ++j) {
            if (i == j) continue;
            const auto& g = cfs[i].density().grid();
            const auto& v = cfs[i].density().values();
            std::vector<double> w(g.size());
            for (std::size_t k = 0; k < g.size(); ++k)
                w[k] = cfs[j].density_at(g[k]);
            worst = std::max(worst, max_rel_gap(v, w, tol.density_floor));
        }
    }
    ck.require(worst <= tol.fig2_rel,
               "per-datum densities differ by " + num(worst) + " > " +
                   num(tol.fig2_rel));
    ck.note("max_pairwise_gap=" + num(worst));
}

// ---- criterion 7: mid-P coverage fluctuation, exact lattice sums ----

void crit7(const Tolerances&, std::uint64_t, Check& ck) {
    std::vector<double> grid;
    for (int i = 0; i <= 90; ++i) grid.push_back(0.05 + 0.01 * i);
    auto cases = discrete::midp_coverage_experiment(
        {{discrete::Family::kBinomial, 10}, {discrete::Family::kBinomial, 100}},
        0.95, grid, 0, 0);
    ck.require(cases.size() == 2, "expected 2 experiment cases");
    if (cases.size() != 2) return;

    auto stats = [&](const coverage::CoverageReport& rep, int& sign_changes,
                     double& max_dev) {
        sign_changes = 0;
        max_dev = 0.0;
        int last = 0;
        for (std::size_t i = 0; i < rep.theta_grid.size(); ++i) {
            const double d = rep.marginal_cell(i).coverage - rep.gamma;
            max_dev = std::max(max_dev, std::abs(d));
            const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
            if (s != 0) {
                if (last != 0 && s != last) ++sign_changes;
                last = s;
            }
        }
    };
    int sc10 = 0, sc100 = 0;
    double dev10 = 0.0, dev100 = 0.0;
    stats(cases[0].report, sc10, dev10);
    stats(cases[1].report, sc100, dev100);
    ck.require(cases[0].report.exact && cases[1].report.exact,
               "coverage runs are not exact");
    ck.require(sc10 >= 2, "n=10 coverage shows " + std::to_string(sc10) +
                              " sign changes (< 2)");
    ck.require(dev100 < dev10, "max deviation at n=100 (" + num(dev100) +
                                   ") not below n=10 (" + num(dev10) + ")");
    ck.note("sign_changes=" + std::to_string(sc10) + "/" + std::to_string(sc100) +
            " max_dev=" + num(dev10) + "/" + num(dev100) + " (n=10, n=100)");
}

// ---- criterion 8: two-by-two enumeration, conditional correctness ----

void crit8(const Tolerances&, std::uint64_t, Check& ck) {
    auto tab = discrete::evans_enumeration();
    const double eps = 1e-12;

    struct Want {
        const char* label;
        double got, want;
    };
    const Want wants[] = {
        {"P(correct | Y1=1, theta=1)", tab.correct_given_y1[0][0], 1.0 / 2.0},
        {"P(correct | Y1=1, theta=2)", tab.correct_given_y1[1][0], 3.0 / 4.0},
        {"P(correct | Y2=1, theta=1)", tab.correct_given_y2[0][0], 1.0 / 3.0},
        {"P(correct | Y2=1, theta=2)", tab.correct_given_y2[1][0], 5.0 / 6.0},
    };
    for (const auto& w : wants)
        ck.require(std::abs(w.got - w.want) <= eps,
                   std::string(w.label) + " = " + num(w.got) + " not " +
                       num(w.want));

    // Neither conditioning admits a level whose correctness margin keeps one
    // strict sign across both parameter values.
    auto uniform_bias = [&](const double cg[2][2], int level) {
        const double d1 = cg[0][level] - tab.marginal_correct[0];
        const double d2 = cg[1][level] - tab.marginal_correct[1];
        return (d1 > eps && d2 > eps) || (d1 < -eps && d2 < -eps);
    };
    for (int level = 0; level < 2; ++level) {
        ck.require(!uniform_bias(tab.correct_given_y1, level),
                   "Y1=" + std::to_string(level + 1) +
                       " uniformly biased across both theta");
        ck.require(!uniform_bias(tab.correct_given_y2, level),
                   "Y2=" + std::to_string(level + 1) +
                       " uniformly biased across both theta");
    }
    ck.note("correctness=(1/2,3/4,1/3,5/6) marginal=(" +
            num(tab.marginal_correct[0]) + "," + num(tab.marginal_correct[1]) +
            ") no one-directional level");
}

// ---- criterion 9: the betting market ----

void crit9(const Tolerances& tol, std::uint64_t seed, Check& ck) {
    // Fixture: agent quotes 0.10, market knows 0.25.
    auto fix = dutchbook::arbitrage(0.10, 0.25);
    ck.require(fix.profit == 0.15,
               "fixture profit " + num(fix.profit) + " != 0.15");
    ck.require(fix.settle_if_cover == fix.settle_if_miss,
               "fixture settlement depends on the outcome");

    auto model = models::make_model("discrete_uniform_triple");
    auto proc = coverage::minmax_procedure();
    const double theta = 4.0;
    const std::uint64_t rounds = 10000;

    // Oracle from the exact 9-outcome enumeration: per-round profit against a
    // marginal-price agent is |p_c(R) - p_m| with R the sample range.
    auto outcomes = model->enumerate(theta, 2);
    std::map<long, std::pair<double, double>> by_range;  // R -> (P, P & cover)
    double p_m = 0.0;
    for (const auto& [yy, p] : outcomes) {
        auto [mn, mx] = std::minmax_element(yy.begin(), yy.end());
        const long r = std::lround(*mx - *mn);
        const bool cover = proc(yy).contains(theta);
        by_range[r].first += p;
        if (cover) by_range[r].second += p;
        if (cover) p_m += p;
    }
    double mean = 0.0, mean_sq = 0.0;
    for (const auto& [r, pp] : by_range) {
        const double gap = std::abs(pp.second / pp.first - p_m);
        mean += pp.first * gap;
        mean_sq += pp.first * gap * gap;
    }
    const double var = mean_sq - mean * mean;
    const double expect = rounds * mean;
    const double band = tol.mc_se_mult * std::sqrt(rounds * var);

    std::vector<dutchbook::Agent> agents{
        {"marginal", dutchbook::Policy::kMarginal, ""},
        {"full", dutchbook::Policy::kFullConfidence, ""}};
    auto led = dutchbook::simulate_market(*model, proc, theta, agents, rounds, 2,
                                          rng::derive(seed, 9, 1));
    ck.require(led.failures == 0, std::to_string(led.failures) + " failed rounds");
    const double cum = led.cumulative_of("marginal");
    ck.require(std::abs(cum - expect) <= band,
               "marginal-agent profit " + num(cum) + " outside " + num(expect) +
                   " +- " + num(band));

    std::uint64_t settle_breaks = 0;
    for (const auto& row : led.rows)
        if (row.settle_if_cover != row.settle_if_miss) ++settle_breaks;
    ck.require(settle_breaks == 0,
               std::to_string(settle_breaks) + " rounds settle outcome-dependently");

    const double cum_full = led.cumulative_of("full");
    ck.require(cum_full == 0.0,
               "full-confidence agent profit " + num(cum_full) + " != 0");

    auto led2 = dutchbook::simulate_two_agent(
        *model, proc, theta, {"marginal", dutchbook::Policy::kMarginal, ""},
        {"conditional", dutchbook::Policy::kConditional, ""}, rounds, 2,
        rng::derive(seed, 9, 2));
    const double cum2 = led2.cumulative_of("conditional");
    bool losing = false;
    for (const auto& row : led2.rows)
        if (row.traded && row.profit < 0.0) losing = true;
    ck.require(cum2 > 0.0, "informed-agent long-run profit " + num(cum2) + " <= 0");
    ck.require(losing, "informed agent never loses a round");
    ck.note("fixture=0.15 marginal_profit=" + num(cum) + " (expect " + num(expect) +
            " +- " + num(band) + ") full_profit=" + num(cum_full) +
            " informed_profit=" + num(cum2));
}

// ---- criterion 10: structural properties ----

void crit10(const Tolerances& tol, std::uint64_t seed, Check& ck) {
    // (a) normalization and monotone CDFs across distribution kinds.
    auto normal = models::make_model("normal_location");
    auto gamma = models::make_model("gamma_shape");
    auto curved = models::make_model("curved_normal");
    std::vector<std::pair<std::string, confidence::ConfidenceDistribution>> battery;
    battery.emplace_back("normal marginal",
                         confidence::marginal_distribution(*normal, 0.0, 1));
    battery.emplace_back(
        "gamma marginal",
        confidence::marginal_distribution(*gamma, models::gamma_shape_t(0.7), 1));
    battery.emplace_back("curved conditional",
                         confidence::conditional_distribution(*curved, {1.0, 1.0}));
    battery.emplace_back(
        "curved full",
        confidence::full_confidence(
            [](double th) { return th > 0.0 ? 1.0 / th : 0.0; }, *curved,
            {1.0, 1.0}));
    battery.emplace_back(
        "normal full",
        confidence::full_confidence(
            confidence::implied_prior(*normal, {0.3}), *normal,
            {0.3, -0.2, 0.5}));
    for (const auto& [label, cd] : battery) {
        const double mass = cd.density().integral();
        ck.require(std::abs(mass - 1.0) <= tol.normalize_abs,
                   label + " mass " + num(mass));
        const auto& g = cd.density().grid();
        double prev = -kInf;
        bool monotone = true;
        for (double x : numerics::linspace(g.front(), g.back(), 512)) {
            const double c = cd.cdf_at(x);
            if (c < prev - 1e-12) monotone = false;
            prev = c;
        }
        ck.require(monotone, label + " CDF not monotone");
    }

    // (b) law of total probability on conditional coverage scans.
    auto check_ltp = [&](const coverage::CoverageReport& rep, double eps,
                         const std::string& label) {
        for (std::size_t ti = 0; ti < rep.theta_grid.size(); ++ti) {
            const double th = rep.theta_grid[ti];
            double total = 0.0;
            for (const auto& c : rep.cells)
                if (c.theta == th && c.bin_id >= 0 && c.n > 0)
                    total += c.bin_prob * c.coverage;
            const double gap = std::abs(total - rep.marginal_cell(ti).coverage);
            ck.require(gap <= eps, label + " total-probability gap " + num(gap) +
                                       " at theta=" + num(th));
        }
    };
    auto triple = models::make_model("discrete_uniform_triple");
    auto cands3 = coverage::builtin_candidates(*triple);
    auto range3 = std::find_if(cands3.begin(), cands3.end(),
                               [](const auto& c) { return c.id == "range"; });
    ck.require(range3 != cands3.end(), "no range candidate on the triple model");
    if (range3 != cands3.end())
        check_ltp(coverage::conditional_coverage(
                      *triple, coverage::minmax_procedure(), *range3, 10, {4.0},
                      7.0 / 9.0, 2, 0, 0, coverage::Method::kEnumerate),
                  1e-12, "exact scan");

    auto proc = coverage::marginal_split_ci_procedure(normal, 0.025, 0.975, 1);
    auto candsN = coverage::builtin_candidates(*normal);
    auto meanN = std::find_if(candsN.begin(), candsN.end(),
                              [](const auto& c) { return c.id == "mean"; });
    ck.require(meanN != candsN.end(), "no mean candidate on the normal model");
    if (meanN != candsN.end())
        check_ltp(coverage::conditional_coverage(
                      *normal, proc, *meanN, 10, {0.0, 1.0}, 0.95, 1, 10000,
                      rng::derive(seed, 10, 1), coverage::Method::kMonteCarlo),
                  1e-12, "Monte Carlo scan");

    // (c) bit-reproducibility across worker counts and repeated runs.
    auto cells_equal = [](const coverage::CoverageReport& x,
                          const coverage::CoverageReport& y) {
        if (x.cells.size() != y.cells.size()) return false;
        for (std::size_t i = 0; i < x.cells.size(); ++i) {
            const auto& a = x.cells[i];
            const auto& b = y.cells[i];
            if (a.theta != b.theta || a.bin_id != b.bin_id || a.n != b.n ||
                a.bin_lo != b.bin_lo || a.bin_hi != b.bin_hi ||
                a.bin_prob != b.bin_prob || a.coverage != b.coverage ||
                a.std_err != b.std_err)
                return false;
        }
        return true;
    };
    const std::uint64_t s2 = rng::derive(seed, 10, 2);
    auto base = coverage::marginal_coverage(*normal, proc, {0.0, 1.0}, 0.95, 1,
                                            20000, s2,
                                            coverage::Method::kMonteCarlo, 1);
    for (unsigned workers : {3u, 8u}) {
        auto other = coverage::marginal_coverage(*normal, proc, {0.0, 1.0}, 0.95,
                                                 1, 20000, s2,
                                                 coverage::Method::kMonteCarlo,
                                                 workers);
        ck.require(cells_equal(base, other),
                   "marginal cells differ at workers=" + std::to_string(workers));
    }
    if (meanN != candsN.end()) {
        const std::uint64_t s3 = rng::derive(seed, 10, 3);
        auto cbase = coverage::conditional_coverage(
            *normal, proc, *meanN, 10, {0.0, 1.0}, 0.95, 1, 10000, s3,
            coverage::Method::kMonteCarlo, 1);
        auto cother = coverage::conditional_coverage(
            *normal, proc, *meanN, 10, {0.0, 1.0}, 0.95, 1, 10000, s3,
            coverage::Method::kMonteCarlo, 5);
        ck.require(cells_equal(cbase, cother),
                   "conditional cells differ at workers=5");
    }
    ck.note(std::to_string(battery.size()) +
            " distributions normalized and monotone; total probability exact; "
            "cells bit-identical across workers");
}

using CriterionFn = void (*)(const Tolerances&, std::uint64_t, Check&);

CriterionFn criterion_fn(int id) {
    switch (id) {
        case 1: return crit1;
        case 2: return crit2;
        case 3: return crit3;
        case 4: return crit4;
        case 5: return crit5;
        case 6: return crit6;
        case 7: return crit7;
        case 8: return crit8;
        case 9: return crit9;
        case 10: return crit10;
        default: return nullptr;
    }
}

}  // namespace

bool Tolerances::set(const std::string& name, double value) {
    std::string key = name;
    std::replace(key.begin(), key.end(), '-', '_');
    if (key == "prior_flat_rel") prior_flat_rel = value;
    else if (key == "mc_se_mult") mc_se_mult = value;
    else if (key == "gamma_mle_abs") gamma_mle_abs = value;
    else if (key == "updating_rel") updating_rel = value;
    else if (key == "density_floor") density_floor = value;
    else if (key == "prior_route_rel") prior_route_rel = value;
    else if (key == "curved_prior_rel") curved_prior_rel = value;
    else if (key == "curved_prior_rel_pstar") curved_prior_rel_pstar = value;
    else if (key == "normalize_abs") normalize_abs = value;
    else if (key == "cc_cf_rel") cc_cf_rel = value;
    else if (key == "ratio_band_lo") ratio_band_lo = value;
    else if (key == "ratio_band_hi") ratio_band_hi = value;
    else if (key == "ratio_min_inside") ratio_min_inside = static_cast<int>(value);
    else if (key == "fig2_rel") fig2_rel = value;
    else return false;
    return true;
}

int criterion_count() { return 10; }

CriterionResult run_criterion(int id, const Tolerances& tol, std::uint64_t seed) {
    CriterionFn fn = criterion_fn(id);
    if (!fn) throw ConfigError("unknown acceptance criterion " + std::to_string(id));

    CriterionResult r;
    r.id = id;
    r.title = title_for(id);
    Check ck;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        fn(tol, seed, ck);
    } catch (const std::exception& e) {
        ck.require(false, std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
    const double budget = budget_for(id);
    if (budget > 0.0 && r.seconds > budget)
        ck.require(false, "runtime " + num(r.seconds) + "s over the " +
                              num(budget) + "s budget");
    r.pass = ck.fails.empty();
    r.detail = ck.detail();
    return r;
}

SuiteResult run_all(const Tolerances& tol, std::uint64_t seed) {
    SuiteResult out;
    for (int id = 1; id <= criterion_count(); ++id) {
        out.results.push_back(run_criterion(id, tol, seed));
        out.all_pass = out.all_pass && out.results.back().pass;
    }
    return out;
}

std::string format_line(const CriterionResult& r) {
    char head[80];
    std::snprintf(head, sizeof head, "%s %2d  %-40s %7.2fs",
                  r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds);
    std::string line = head;
    if (!r.detail.empty()) line += "  " + r.detail;
    return line;
}

}  // namespace epiconf::acceptance
