#include <cmath>
#include <limits>
#include <vector>

#include "confidence.h"
#include "approx.h"
#include "doctest.h"
#include "models.h"
#include "numerics.h"

using namespace epiconf;
using testutil::Approx;

TEST_CASE("normal marginal confidence: intervals and CDF") {
    auto m = models::make_model("normal_location");
    // C_m(theta; t=0, n=1) = Phi(theta)
    CHECK(confidence::marginal_cdf(*m, 0.0, 0.5, 1) ==
          Approx(numerics::normal_cdf(0.5)).epsilon(1e-12));

    auto ci = confidence::marginal_interval(*m, 0.0, 0.95, 0.025, 0.975, 1, 0.0);
    CHECK(ci.lower == Approx(-1.959963984540054).margin(1e-6));
    CHECK(ci.upper == Approx(+1.959963984540054).margin(1e-6));
    CHECK(ci.gamma == Approx(0.95).epsilon(1e-12));

    auto cd = confidence::marginal_distribution(*m, 0.0, 1);
    CHECK(cd.density().integral() == Approx(1.0).margin(1e-6));
    CHECK(cd.density_at(0.0) ==
          Approx(numerics::normal_pdf(0.0)).epsilon(1e-6));
}

TEST_CASE("uniform shift confidence is the unit box") {
    auto m = models::make_model("uniform_shift");
    auto cd = confidence::marginal_distribution(*m, 1.9, 1);
    CHECK(cd.quantile(0.1) == Approx(1.0).margin(1e-9));
    CHECK(cd.quantile(1.0) == Approx(1.9).margin(1e-9));

    auto ci = confidence::interval_split(cd, 0.0, 0.9);
    CHECK(ci.lower == Approx(1.0).margin(1e-9));
    CHECK(ci.upper == Approx(1.9).margin(1e-9));
    CHECK(confidence::confidence_of(cd, 0.9, 1.9) == Approx(1.0).margin(1e-9));
    CHECK(confidence::confidence_of(cd, 1.45, 1.9) ==
          Approx(0.5).margin(1e-9));

    CHECK(confidence::floor_guess_coverage(1.2) == Approx(0.8).epsilon(1e-12));
    CHECK(confidence::floor_guess_coverage(1.6) == Approx(0.4).epsilon(1e-12));
}

TEST_CASE("implied priors: flatness and data dependence") {
    auto normal = models::make_model("normal_location");
    auto prior = confidence::implied_prior(*normal, {0.0});
    CHECK_FALSE(prior.data_dependent);
    const auto& g = prior.density.grid();
    const auto& v = prior.density.values();
    double lo = 1e300, hi = 0.0;
    for (std::size_t i = g.size() / 200; i < g.size() - g.size() / 200; ++i) {
        lo = std::min(lo, v[i]);
        hi = std::max(hi, v[i]);
    }
    CHECK(hi / lo - 1.0 <= 1e-6);  // location model: constant prior

    // curved normal via the statistic route: theta * c0 constant
    auto curved = models::make_model("curved_normal");
    auto cprior = confidence::implied_prior(
        *curved, {1.3}, false, confidence::PriorRoute::kStatisticLikelihood);
    const auto& cg = cprior.density.grid();
    double ref = cg[cg.size() / 2] * cprior(cg[cg.size() / 2]);
    for (std::size_t i = cg.size() / 10; i < cg.size() * 9 / 10;
         i += cg.size() / 50)
        CHECK(cg[i] * cprior(cg[i]) == Approx(ref).epsilon(1e-3));

    // N(theta, theta): the data route depends on which datum is used
    auto mev = models::make_model("normal_mean_eq_var");
    CHECK(confidence::implied_prior(*mev, {1.0, 2.0, 0.5}).data_dependent);
    CHECK_FALSE(
        confidence::implied_prior(*normal, {0.3, -0.2}).data_dependent);
}

TEST_CASE("updating formula collapses to the marginal under sufficiency") {
    auto m = models::make_model("normal_location");
    models::Dataset y{0.4, -0.1, 0.9};
    const double t = m->statistic(y);
    auto prior = confidence::implied_prior(*m, y);
    auto cf = confidence::full_confidence(prior, *m, y);
    CHECK(cf.density().integral() == Approx(1.0).margin(1e-6));
    double worst = 0.0;
    const auto& g = cf.density().grid();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double p = cf.cdf_at(g[i]);
        if (p < 0.01 || p > 0.99) continue;
        const double exact = confidence::marginal_density_at(*m, t, g[i], 3);
        worst = std::max(worst, std::abs(cf.density_at(g[i]) / exact - 1.0));
    }
    CHECK(worst <= 1e-3);
}

TEST_CASE("conditional prior rebuilds the conditional distribution") {
    auto m = models::make_model("curved_normal");
    models::Dataset y{1.3};
    const double t = m->conditional_statistic(y);
    const double a = m->ancillary(y);
    auto prior = confidence::implied_prior(*m, y, true);
    auto cf = confidence::full_confidence(prior, *m, y);
    double worst = 0.0;
    const auto& g = cf.density().grid();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double p = cf.cdf_at(g[i]);
        if (p < 0.01 || p > 0.99) continue;
        const double exact = m->conditional_density(g[i], t, a, 1);
        worst = std::max(worst, std::abs(cf.density_at(g[i]) / exact - 1.0));
    }
    CHECK(worst <= 1e-3);

    auto cc = confidence::conditional_distribution(*m, y);
    for (double th : {0.8, 1.0, 1.3, 1.9, 2.6})
        CHECK(cc.density_at(th) ==
              Approx(m->conditional_density(th, t, a, 1)).epsilon(5e-3));
}

TEST_CASE("discrete full-confidence tables") {
    auto triple = models::make_model("discrete_uniform_triple");
    auto w33 = confidence::discrete_full_confidence(*triple, {3.0, 3.0});
    REQUIRE(w33.size() == 3);
    for (const auto& [th, w] : w33) {
        CHECK(th >= 2.0);
        CHECK(th <= 4.0);
        CHECK(w == Approx(1.0 / 3.0).epsilon(1e-14));
    }
    auto w35 = confidence::discrete_full_confidence(*triple, {3.0, 5.0});
    REQUIRE(w35.size() == 1);
    CHECK(w35[0].first == 4.0);
    CHECK(w35[0].second == 1.0);

    auto evans = models::make_model("evans_2x2");
    auto w11 = confidence::discrete_full_confidence(*evans, {1.0, 1.0});
    REQUIRE(w11.size() == 2);
    CHECK(w11[0].first == 1.0);
    CHECK(w11[0].second == Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(w11[1].second == Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("functional full confidence matches a hand-built posterior") {
    // flat prior x standard-normal likelihood centered at 0
    auto cf = confidence::full_confidence(
        [](double) { return 1.0; },
        [](double th) { return -0.5 * th * th; }, 0.0, 4.0,
        numerics::Interval{-std::numeric_limits<double>::infinity(),
                           std::numeric_limits<double>::infinity()});
    CHECK(cf.density().integral() == Approx(1.0).margin(1e-6));
    CHECK(cf.density_at(0.0) ==
          Approx(numerics::normal_pdf(0.0)).epsilon(1e-5));
    CHECK(cf.cdf_at(0.0) == Approx(0.5).margin(1e-6));
}
