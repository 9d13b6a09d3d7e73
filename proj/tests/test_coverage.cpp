#include <cmath>
#include <vector>

#include "coverage.h"
#include "approx.h"
#include "doctest.h"
#include "models.h"
#include "numerics.h"
#include "rng.h"

using namespace epiconf;
using testutil::Approx;

TEST_CASE("exact coverage of [min, max] on the three-point uniform") {
    auto triple = models::make_model("discrete_uniform_triple");
    auto minmax = coverage::minmax_procedure();
    const std::vector<double> grid{2.0, 4.0, 7.0};

    auto rep = coverage::marginal_coverage(*triple, minmax, grid, 7.0 / 9.0, 2,
                                           0, 1, coverage::Method::kAuto);
    CHECK(rep.exact);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(rep.marginal_cell(i).coverage ==
              Approx(7.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("exact conditional coverage given the range") {
    auto triple = models::make_model("discrete_uniform_triple");
    auto minmax = coverage::minmax_procedure();
    const std::vector<double> grid{2.0, 4.0, 7.0};
    coverage::Candidate range{
        "range",
        [&](const models::Dataset& y) { return triple->ancillary(y); }, true};

    auto rep = coverage::conditional_coverage(*triple, minmax, range, 10, grid,
                                              7.0 / 9.0, 2, 0, 1);
    CHECK(rep.exact);
    const double want[3] = {1.0 / 3.0, 1.0, 1.0};
    const double prob[3] = {3.0 / 9.0, 4.0 / 9.0, 2.0 / 9.0};
    int seen = 0;
    for (const auto& cell : rep.cells) {
        if (cell.bin_id < 0) continue;
        const int r = static_cast<int>(std::lround(cell.bin_lo));
        REQUIRE(r >= 0);
        REQUIRE(r <= 2);
        CHECK(cell.coverage == Approx(want[r]).epsilon(1e-15));
        CHECK(cell.bin_prob == Approx(prob[r]).epsilon(1e-15));
        ++seen;
    }
    CHECK(seen == 9);

    // law of total probability is exact on the shared tallies
    for (std::size_t ti = 0; ti < grid.size(); ++ti) {
        double total = 0.0;
        for (const auto& cell : rep.cells)
            if (cell.theta == grid[ti] && cell.bin_id >= 0)
                total += cell.bin_prob * cell.coverage;
        CHECK(total ==
              Approx(rep.marginal_cell(ti).coverage).epsilon(1e-13));
    }
}

TEST_CASE("scanner flags the negatively biased range subset exactly") {
    auto triple = models::make_model("discrete_uniform_triple");
    auto reports = coverage::relevant_scan(
        *triple, coverage::minmax_procedure(),
        coverage::builtin_candidates(*triple), {2.0, 4.0, 7.0}, 7.0 / 9.0, 2, 0,
        1);
    bool found = false;
    for (const auto& rep : reports) {
        if (rep.candidate != "range") continue;
        found = true;
        CHECK(rep.overall == coverage::Verdict::kRelevantNegative);
        CHECK(rep.epsilon_hat == Approx(4.0 / 9.0).epsilon(1e-12));
    }
    CHECK(found);
}

TEST_CASE("Monte Carlo agrees with enumeration and ignores worker count") {
    auto triple = models::make_model("discrete_uniform_triple");
    auto minmax = coverage::minmax_procedure();
    const std::vector<double> grid{2.0, 4.0, 7.0};
    auto mc1 = coverage::marginal_coverage(*triple, minmax, grid, 7.0 / 9.0, 2,
                                           20000, 99,
                                           coverage::Method::kMonteCarlo, 1);
    auto mc7 = coverage::marginal_coverage(*triple, minmax, grid, 7.0 / 9.0, 2,
                                           20000, 99,
                                           coverage::Method::kMonteCarlo, 7);
    CHECK_FALSE(mc1.exact);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& a = mc1.marginal_cell(i);
        const auto& b = mc7.marginal_cell(i);
        CHECK(a.coverage == b.coverage);
        CHECK(a.std_err == b.std_err);
        CHECK(a.n == b.n);
        CHECK(std::abs(a.coverage - 7.0 / 9.0) <= 3.0 * a.std_err + 1e-12);
    }
}

TEST_CASE("quadrature path: shifted-uniform interval with known coverage") {
    auto us = models::make_model("uniform_shift");
    coverage::CiProcedure proc = [](const models::Dataset& y) {
        return numerics::Interval{y[0] - 0.9, y[0]};
    };
    auto rep = coverage::marginal_coverage(*us, proc, {3.3}, 0.9, 1, 0, 1,
                                           coverage::Method::kQuadrature);
    CHECK(rep.exact);
    CHECK(rep.marginal_cell(0).coverage == Approx(0.9).margin(1e-9));
}

TEST_CASE("builtin candidates cover the standard statistics") {
    auto normal = models::make_model("normal_location");
    auto cands = coverage::builtin_candidates(*normal);
    auto has = [&](const std::string& id) {
        for (const auto& c : cands)
            if (c.id == id) return true;
        return false;
    };
    CHECK(has("range"));
    CHECK(has("min"));
    CHECK(has("max"));
    CHECK(has("mean"));
    CHECK(has("fractional_part"));
}

TEST_CASE("location model shows no relevant subsets") {
    auto normal = models::make_model("normal_location");
    auto proc = coverage::marginal_split_ci_procedure(normal, 0.025, 0.975, 1);
    auto reports = coverage::relevant_scan(
        *normal, proc, coverage::builtin_candidates(*normal),
        {-4.5, -3.0, -1.5, 0.0, 1.5, 3.0, 4.5}, 0.95, 1, 5000, 314, {},
        coverage::Method::kMonteCarlo);
    REQUIRE(!reports.empty());
    for (const auto& rep : reports) {
        INFO(rep.candidate);
        CHECK(rep.overall == coverage::Verdict::kNotRelevant);
    }
}

TEST_CASE("Monte Carlo conditional scan keeps total probability exact") {
    auto normal = models::make_model("normal_location");
    auto proc = coverage::marginal_split_ci_procedure(normal, 0.025, 0.975, 1);
    auto cands = coverage::builtin_candidates(*normal);
    const coverage::Candidate* mean = nullptr;
    for (const auto& c : cands)
        if (c.id == "mean") mean = &c;
    REQUIRE(mean != nullptr);

    auto rep = coverage::conditional_coverage(*normal, proc, *mean, 10,
                                              {0.0, 1.0}, 0.95, 1, 8000, 2718,
                                              coverage::Method::kMonteCarlo);
    for (std::size_t ti = 0; ti < rep.theta_grid.size(); ++ti) {
        double total = 0.0, prob = 0.0;
        for (const auto& cell : rep.cells) {
            if (cell.theta != rep.theta_grid[ti] || cell.bin_id < 0) continue;
            total += cell.bin_prob * cell.coverage;
            prob += cell.bin_prob;
        }
        CHECK(prob == Approx(1.0).epsilon(1e-12));
        CHECK(total == Approx(rep.marginal_cell(ti).coverage).epsilon(1e-12));
    }
}
