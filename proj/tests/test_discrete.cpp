#include <cmath>
#include <utility>
#include <vector>

#include "discrete.h"
#include "approx.h"
#include "doctest.h"

using namespace epiconf;
using discrete::Family;
using testutil::Approx;

TEST_CASE("mid-P value: symmetry, endpoints, stopping-rule dependence") {
    CHECK(discrete::mid_pvalue(Family::kBinomial, {1, 2}, 0.5) ==
          Approx(0.5).epsilon(1e-12));
    CHECK(discrete::mid_pvalue(Family::kBinomial, {1, 2}, 0.0) == 0.0);
    CHECK(discrete::mid_pvalue(Family::kBinomial, {1, 2}, 1.0) == 1.0);

    // same counts, different stopping rule, different inference
    const double b = discrete::mid_pvalue(Family::kBinomial, {3, 7}, 0.4);
    const double nb =
        discrete::mid_pvalue(Family::kNegativeBinomial, {3, 7}, 0.4);
    CHECK(std::abs(b - nb) > 1e-3);

    // boundary counts take the closed limits
    CHECK(discrete::mid_pvalue(Family::kBinomial, {0, 5}, 0.3) ==
          Approx(1.0 - 0.5 * std::pow(0.7, 5)).epsilon(1e-12));
    CHECK(discrete::mid_pvalue(Family::kBinomial, {5, 5}, 0.3) ==
          Approx(0.5 * std::pow(0.3, 5)).epsilon(1e-12));
    CHECK(discrete::mid_pvalue(Family::kNegativeBinomial, {4, 4}, 0.3) ==
          Approx(0.5 * std::pow(0.3, 4)).epsilon(1e-12));
}

TEST_CASE("mid-P density matches the P-value derivative and has unit mass") {
    for (double th : {0.1, 0.3, 0.62, 0.9}) {
        const double h = 1e-5;
        auto f = [](double x) {
            return discrete::mid_pvalue(Family::kBinomial, {3, 10}, x);
        };
        const double num =
            (-f(th + 2 * h) + 8 * f(th + h) - 8 * f(th - h) + f(th - 2 * h)) /
            (12 * h);
        CHECK(discrete::midp_density(Family::kBinomial, {3, 10}, th) ==
              Approx(num).margin(1e-6));
    }

    auto gd = discrete::midp_confidence_density(Family::kBinomial, {3, 10});
    CHECK(gd.integral() == Approx(1.0).margin(5e-7));
    const discrete::Observed hard[] = {{0, 100}, {100, 100}, {50, 100}, {1, 10}};
    for (auto obs : hard) {
        auto g = discrete::midp_confidence_density(Family::kBinomial, obs);
        CHECK(g.integral() == Approx(1.0).margin(5e-7));
    }

    // mean of the Beta mixture for y=3, n=10: (3/11 + 4/11) / 2
    double mean = 0.0;
    const auto& g = gd.grid();
    const auto& v = gd.values();
    for (std::size_t i = 0; i + 1 < g.size(); ++i)
        mean += 0.5 * (g[i + 1] - g[i]) * (g[i] * v[i] + g[i + 1] * v[i + 1]);
    CHECK(mean == Approx(0.5 * (3.0 / 11.0 + 4.0 / 11.0)).margin(1e-6));
}

TEST_CASE("mid-P intervals invert the P-value") {
    auto ci = discrete::midp_interval(Family::kBinomial, {3, 10}, 0.95);
    CHECK(ci.gamma == Approx(0.95).epsilon(1e-12));
    CHECK(discrete::mid_pvalue(Family::kBinomial, {3, 10}, ci.lower) ==
          Approx(0.025).margin(1e-8));
    CHECK(discrete::mid_pvalue(Family::kBinomial, {3, 10}, ci.upper) ==
          Approx(0.975).margin(1e-8));
}

TEST_CASE("exact coverage fluctuation: oscillation and shrinkage") {
    std::vector<double> grid;
    for (int i = 5; i <= 95; ++i) grid.push_back(i / 100.0);
    auto cases = discrete::midp_coverage_experiment(
        {{Family::kBinomial, 10},
         {Family::kBinomial, 100},
         {Family::kNegativeBinomial, 10}},
        0.95, grid, 0, 7);
    REQUIRE(cases.size() == 3);

    double mean10 = 0.0, dev10 = 0.0, dev100 = 0.0;
    bool below = false, above = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double c10 = cases[0].report.marginal_cell(i).coverage;
        const double c100 = cases[1].report.marginal_cell(i).coverage;
        mean10 += c10 / static_cast<double>(grid.size());
        dev10 = std::max(dev10, std::abs(c10 - 0.95));
        dev100 = std::max(dev100, std::abs(c100 - 0.95));
        below = below || c10 < 0.95;
        above = above || c10 > 0.95;
    }
    CHECK(mean10 > 0.93);
    CHECK(mean10 < 0.97);
    CHECK(below);
    CHECK(above);
    CHECK(dev100 < dev10);

    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double c = cases[2].report.marginal_cell(i).coverage;
        CHECK(c > 0.85);
        CHECK(c <= 1.0);
    }
}

TEST_CASE("two-by-two enumeration tables") {
    auto t = discrete::evans_enumeration();

    CHECK(t.marginal_y1[0][0] == Approx(1.0 / 3.0).margin(1e-12));
    CHECK(t.marginal_y1[1][0] == Approx(1.0 / 3.0).margin(1e-12));
    CHECK(t.marginal_y2[0][0] == Approx(0.5).margin(1e-12));
    CHECK(t.marginal_y2[1][0] == Approx(0.5).margin(1e-12));

    CHECK(t.correct_given_y1[0][0] == Approx(0.5).margin(1e-12));
    CHECK(t.correct_given_y1[1][0] == Approx(0.75).margin(1e-12));
    CHECK(t.correct_given_y2[0][0] == Approx(1.0 / 3.0).margin(1e-12));
    CHECK(t.correct_given_y2[1][0] == Approx(5.0 / 6.0).margin(1e-12));
    CHECK(t.correct_given_y1[0][1] == Approx(0.5).margin(1e-12));
    CHECK(t.correct_given_y1[1][1] == Approx(0.625).margin(1e-12));
    CHECK(t.correct_given_y2[0][1] == Approx(2.0 / 3.0).margin(1e-12));
    CHECK(t.correct_given_y2[1][1] == Approx(0.5).margin(1e-12));

    CHECK(t.marginal_correct[0] == Approx(0.5).margin(1e-12));
    CHECK(t.marginal_correct[1] == Approx(2.0 / 3.0).margin(1e-12));
    CHECK(t.likelihood_at_11[0] == 1.0);
    CHECK(t.likelihood_at_11[1] == Approx(0.5).margin(1e-12));

    for (int th = 0; th < 2; ++th) {
        const double total =
            t.correct_given_y1[th][0] * t.marginal_y1[th][0] +
            t.correct_given_y1[th][1] * t.marginal_y1[th][1];
        CHECK(total == Approx(t.marginal_correct[th]).margin(1e-12));
    }
}
