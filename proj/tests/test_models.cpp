#include <cmath>
#include <limits>
#include <vector>

#include "asymptotics.h"
#include "approx.h"
#include "doctest.h"
#include "errors.h"
#include "models.h"
#include "numerics.h"

using namespace epiconf;
using testutil::Approx;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("normal location basics") {
    auto m = models::make_model("normal_location");
    CHECK(m->name() == "normal_location");
    CHECK(m->capabilities().has_sufficient_T);
    CHECK_FALSE(m->capabilities().discrete_data);
    CHECK_FALSE(m->capabilities().discrete_parameter);

    models::Dataset y{0.4, -0.1, 0.9};
    CHECK(m->statistic(y) == Approx(0.4).epsilon(1e-14));  // the mean
    CHECK(m->mle(y) == Approx(m->statistic(y)).epsilon(1e-12));

    const double theta = 0.25;
    double want = -1.5 * std::log(2.0 * kPi);
    for (double yi : y) want -= 0.5 * (yi - theta) * (yi - theta);
    CHECK(m->log_likelihood(theta, y) == Approx(want).epsilon(1e-13));

    auto d1 = m->simulate(0.7, 5, 42);
    auto d2 = m->simulate(0.7, 5, 42);
    auto d3 = m->simulate(0.7, 5, 43);
    REQUIRE(d1.size() == 5);
    CHECK(d1 == d2);
    CHECK(d1 != d3);
    double mean = 0.0;
    auto big = m->simulate(0.7, 20000, 7);
    for (double v : big) mean += v / 20000.0;
    CHECK(mean == Approx(0.7).margin(0.03));
}

TEST_CASE("gamma shape statistic and MLE") {
    auto m = models::make_model("gamma_shape");
    CHECK(models::gamma_shape_t(2.0) ==
          Approx(std::log(2.0) - 2.0).epsilon(1e-15));
    CHECK(m->has_statistic_loglik(1));
    CHECK_FALSE(m->has_statistic_loglik(5));

    const double sum_t = 5.0 * (numerics::digamma(3.0) - std::log(3.0) - 1.0);
    CHECK(models::gamma_shape_mle(5, sum_t) == Approx(3.0).margin(1e-9));

    // mean-one gamma, shape 2, at y = 1: 2 log 2 - 2 - log Gamma(2)
    CHECK(m->log_likelihood(2.0, {1.0}) ==
          Approx(2.0 * std::log(2.0) - 2.0).epsilon(1e-13));

    auto y = m->simulate(3.0, 4000, 11);
    double mean = 0.0;
    for (double v : y) {
        CHECK(v > 0.0);
        mean += v / 4000.0;
    }
    CHECK(mean == Approx(1.0).margin(0.05));  // mean-one family
}

TEST_CASE("curved normal statistics and conditional law") {
    auto m = models::make_model("curved_normal");
    CHECK(m->capabilities().has_ancillary);
    CHECK(m->capabilities().has_exact_conditional);

    models::Dataset y{1.0, 1.0};
    const double t = m->conditional_statistic(y);
    const double a = m->ancillary(y);
    CHECK(t == Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(a == Approx(std::sqrt(2.0)).epsilon(1e-14));

    const double that = m->mle(y);
    CHECK(m->log_likelihood(that, y) >= m->log_likelihood(that * 1.01, y));
    CHECK(m->log_likelihood(that, y) >= m->log_likelihood(that * 0.99, y));

    // exact conditional density in theta == Hinkley pivot density mapped
    for (double th : {0.6, 1.0, 1.7, 2.5}) {
        const double direct = m->conditional_density(th, t, a, 2);
        const double pivot =
            asymptotics::hinkley_density(t / th, a, 2) * t / (th * th);
        CHECK(direct == Approx(pivot).epsilon(1e-9));
    }

    // raw-y marginal confidence limit: 1 - Phi(-1)
    CHECK(models::curved_normal_raw_marginal(1e9, 1.0) ==
          Approx(1.0 - numerics::normal_cdf(-1.0)).margin(1e-4));
}

TEST_CASE("three-point discrete uniform enumeration") {
    auto m = models::make_model("discrete_uniform_triple");
    CHECK(m->capabilities().discrete_data);
    CHECK(m->enumerable(2));

    auto outcomes = m->enumerate(4.0, 2);
    REQUIRE(outcomes.size() == 9);
    double total = 0.0;
    for (const auto& [yy, p] : outcomes) {
        CHECK(p == Approx(1.0 / 9.0).epsilon(1e-15));
        total += p;
        for (double v : yy) {
            CHECK(v >= 3.0);
            CHECK(v <= 5.0);
        }
    }
    CHECK(total == Approx(1.0).epsilon(1e-14));

    // range 2 pins theta exactly
    auto cands = m->parameter_candidates({3.0, 5.0});
    REQUIRE(cands.size() == 1);
    CHECK(cands[0] == 4.0);
    CHECK(m->parameter_candidates({3.0, 3.0}).size() == 3);
    CHECK(m->ancillary({3.0, 5.0}) == 2.0);
}

TEST_CASE("uniform models have exact box likelihoods") {
    auto shift = models::make_model("uniform_shift");
    CHECK(shift->statistic({1.9}) == 1.9);
    CHECK(shift->log_likelihood(1.0, {1.9}) == 0.0);
    CHECK(shift->log_likelihood(0.5, {1.9}) ==
          -std::numeric_limits<double>::infinity());

    auto width2 = models::make_model("uniform_width2");
    CHECK(width2->log_likelihood(1.0, {0.5, 1.5}) ==
          Approx(-2.0 * std::log(2.0)).epsilon(1e-15));
    CHECK(width2->log_likelihood(3.0, {0.5, 1.5}) ==
          -std::numeric_limits<double>::infinity());
}

TEST_CASE("two-by-two model is a discrete-parameter family") {
    auto m = models::make_model("evans_2x2");
    CHECK(m->capabilities().discrete_parameter);
    auto cands = m->parameter_candidates({1.0, 1.0});
    REQUIRE(cands.size() == 2);
    CHECK(cands[0] == 1.0);
    CHECK(cands[1] == 2.0);
}

TEST_CASE("unknown model names are configuration errors") {
    CHECK_THROWS_AS(models::make_model("no_such_model"), ConfigError);
}
