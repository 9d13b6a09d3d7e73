#include <cmath>
#include <vector>

#include "asymptotics.h"
#include "approx.h"
#include "doctest.h"
#include "models.h"
#include "numerics.h"

using namespace epiconf;
using testutil::Approx;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("gamma likelihood summary") {
    // observed information of the mean-one gamma shape: n * trigamma(theta)
    CHECK(asymptotics::gamma_info(3.0, 5) ==
          Approx(5.0 * numerics::trigamma(3.0)).epsilon(1e-9));

    const double sum_t = 5.0 * (numerics::digamma(3.0) - std::log(3.0) - 1.0);
    const double that = models::gamma_shape_mle(5, sum_t);
    CHECK(asymptotics::gamma_w(that, that, 5, sum_t) ==
          Approx(0.0).margin(1e-12));
    CHECK(asymptotics::gamma_w(2.0, that, 5, sum_t) > 0.0);
    CHECK(asymptotics::gamma_w(4.0, that, 5, sum_t) > 0.0);

    auto s = asymptotics::gamma_summary(5, sum_t);
    CHECK(s.theta_hat == Approx(3.0).margin(1e-9));
    CHECK(s.n == 5);
    CHECK(s.info_at_mle == Approx(asymptotics::gamma_info(that, 5)).epsilon(1e-12));
}

TEST_CASE("signed-root P-value behaves like a CDF in theta") {
    const double sum_t = 5.0 * (numerics::digamma(3.0) - std::log(3.0) - 1.0);
    auto s = asymptotics::gamma_summary(5, sum_t);

    bool near = false;
    const double at_mle = asymptotics::rstar_pvalue(s, s.theta_hat, &near);
    CHECK(near);
    CHECK(at_mle == Approx(0.5).margin(1e-3));

    double prev = 0.0;
    for (double th : numerics::linspace(0.8, 9.0, 60)) {
        const double p = asymptotics::rstar_pvalue(s, th);
        CHECK(p >= prev - 1e-12);  // nondecreasing in theta
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        prev = p;
    }

    // large-sample check: at theta_hat +- z / sqrt(info) the P-value is near
    // Phi(+-z)
    const double sum_t_big = 400.0 * (numerics::digamma(3.0) - std::log(3.0) - 1.0);
    auto sb = asymptotics::gamma_summary(400, sum_t_big);
    const double se = 1.0 / std::sqrt(sb.info_at_mle);
    CHECK(asymptotics::rstar_pvalue(sb, sb.theta_hat + 1.959963984540054 * se) ==
          Approx(0.975).margin(0.01));
    CHECK(asymptotics::rstar_pvalue(sb, sb.theta_hat - 1.959963984540054 * se) ==
          Approx(0.025).margin(0.01));
}

TEST_CASE("Hinkley conditional law for the curved normal") {
    // n = 1: the normalizer is sqrt(2 pi) Phi(a)
    CHECK(asymptotics::hinkley_normalizer(2.0, 1) ==
          Approx(std::sqrt(2.0 * kPi) * numerics::normal_cdf(2.0))
              .epsilon(1e-9));

    const double a = 2.0;
    const std::size_t n = 5;
    const double mass = numerics::integrate(
        [a, n](double w) { return asymptotics::hinkley_density(w, a, n); }, 0.0,
        a + 14.0, 1e-10);
    CHECK(mass == Approx(1.0).margin(1e-8));

    double prev = 0.0;
    for (double w : numerics::linspace(0.0, 8.0, 33)) {
        const double c = asymptotics::hinkley_cdf(w, a, n);
        CHECK(c >= prev - 1e-12);
        prev = c;
    }
    CHECK(asymptotics::hinkley_cdf(a + 13.0, a, n) == Approx(1.0).margin(1e-9));

    // P_theta(T >= t | a) = 1 - F_a(t / theta)
    const double t = 2.2;
    CHECK(asymptotics::hinkley_conditional_pvalue(1.0, t, a, n) ==
          Approx(1.0 - asymptotics::hinkley_cdf(t, a, n)).epsilon(1e-10));
}

TEST_CASE("approximate MLE density yields a unit-mass confidence density") {
    auto m = models::make_model("curved_normal");
    models::Dataset y{1.0, 1.0};
    const double that = m->mle(y);
    const double a = m->ancillary(y);

    const double mass = numerics::integrate(
        [&](double th) {
            return asymptotics::bn_confidence_density(*m, th, that, a, 2);
        },
        that / 40.0, that * 60.0, 1e-8);
    CHECK(mass == Approx(1.0).margin(1e-4));
}

TEST_CASE("score test is exact for the normal location model") {
    auto m = models::make_model("normal_location");
    std::vector<double> y{0.4, -0.1, 0.9};
    const double theta0 = 0.2;
    double u = 0.0;
    for (double v : y) u += v - theta0;
    const double want = 1.0 - numerics::normal_cdf(u / std::sqrt(3.0));
    CHECK(asymptotics::score_pvalue(*m, theta0, y) ==
          Approx(want).epsilon(1e-12));
}
