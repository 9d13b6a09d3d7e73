#include <cmath>
#include <limits>
#include <vector>

#include "approx.h"
#include "doctest.h"
#include "errors.h"
#include "numerics.h"
#include "rng.h"

using namespace epiconf;
using testutil::Approx;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("special functions against closed forms") {
    CHECK(numerics::log_gamma(5.0) == Approx(std::log(24.0)).epsilon(1e-14));
    CHECK(numerics::log_gamma(0.5) ==
          Approx(0.5 * std::log(kPi)).epsilon(1e-14));
    // digamma(3) = 1 + 1/2 - euler_gamma
    CHECK(numerics::digamma(3.0) == Approx(0.9227843350984671).epsilon(1e-13));
    CHECK(numerics::trigamma(1.0) ==
          Approx(kPi * kPi / 6.0).epsilon(1e-12));
    CHECK(numerics::trigamma(3.0) ==
          Approx(kPi * kPi / 6.0 - 1.25).epsilon(1e-12));

    CHECK(numerics::reg_inc_beta(0.5, 2.0, 2.0) == Approx(0.5).epsilon(1e-12));
    CHECK(numerics::reg_inc_beta(0.37, 1.0, 1.0) ==
          Approx(0.37).epsilon(1e-12));
    // Beta(2,5) density: 30 x (1-x)^4
    CHECK(numerics::beta_pdf(0.3, 2.0, 5.0) ==
          Approx(30.0 * 0.3 * std::pow(0.7, 4)).epsilon(1e-12));
    // P(1, x) = 1 - exp(-x)
    CHECK(numerics::reg_inc_gamma_p(1.0, 2.0) ==
          Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));

    CHECK(numerics::normal_cdf(0.0) == Approx(0.5).epsilon(1e-15));
    CHECK(numerics::normal_quantile(0.975) ==
          Approx(1.959963984540054).epsilon(1e-10));
    CHECK(numerics::normal_cdf(numerics::normal_quantile(0.31)) ==
          Approx(0.31).epsilon(1e-12));
    CHECK(numerics::normal_pdf(0.0) ==
          Approx(1.0 / std::sqrt(2.0 * kPi)).epsilon(1e-14));

    // chi-square with 2 df is Exp(1/2)
    CHECK(numerics::chisq_cdf(2.0, 2.0) ==
          Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    // zero noncentrality reduces to the central law
    CHECK(numerics::noncentral_chisq_cdf(3.0, 2.0, 0.0) ==
          Approx(numerics::chisq_cdf(3.0, 2.0)).epsilon(1e-7));
    // df = 1: P(Z^2 <= x), Z ~ N(sqrt(lambda), 1)
    const double x = 3.0, lam = 2.0;
    const double want = numerics::normal_cdf(std::sqrt(x) - std::sqrt(lam)) -
                        numerics::normal_cdf(-std::sqrt(x) - std::sqrt(lam));
    CHECK(numerics::noncentral_chisq_cdf(x, 1.0, lam) ==
          Approx(want).epsilon(1e-7));
}

TEST_CASE("special-function dispatcher") {
    const double args[] = {3.0};
    CHECK(numerics::special("digamma", {args, 1}) ==
          Approx(numerics::digamma(3.0)).epsilon(1e-15));
    CHECK_THROWS_AS(numerics::special("no_such_function", {args, 1}),
                    ConfigError);
    CHECK_THROWS(numerics::special("digamma", {args, 0}));
}

TEST_CASE("quadrature, roots, trapezoid") {
    CHECK(numerics::integrate([](double x) { return std::sin(x); }, 0.0, kPi) ==
          Approx(2.0).epsilon(1e-8));
    CHECK(numerics::find_root([](double x) { return std::cos(x); }, 0.0, 2.0) ==
          Approx(kPi / 2.0).epsilon(1e-9));
    CHECK(numerics::find_root_expand(
              [](double x) { return x * x - 4.0; }, 1.0, 0.5,
              numerics::Interval{0.0, 100.0}) == Approx(2.0).epsilon(1e-9));

    auto g = numerics::linspace(0.0, 1.0, 101);
    REQUIRE(g.size() == 101);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 1.0);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = 2.0 * g[i];  // area 1
    CHECK(numerics::trapezoid(g, v) == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("grid densities and CDFs") {
    numerics::GridDensity d({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0});
    CHECK(d.integral() == Approx(2.0).epsilon(1e-15));
    auto n = d.normalize();
    CHECK(n.integral() == Approx(1.0).epsilon(1e-12));
    CHECK(n(0.5) == Approx(0.5).epsilon(1e-12));  // interpolated uniform
    CHECK(n(-0.1) == 0.0);                        // zero outside the grid
    CHECK(n(2.1) == 0.0);
    CHECK(n.max_value() == Approx(0.5).epsilon(1e-12));

    auto cdf = numerics::cdf_from_density(n);
    CHECK(cdf(0.0) == 0.0);
    CHECK(cdf(2.0) == 1.0);
    CHECK(cdf(1.0) == Approx(0.5).epsilon(1e-12));
    CHECK(cdf.quantile(0.25) == Approx(0.5).epsilon(1e-12));
    CHECK(cdf.quantile(0.0) == 0.0);
    CHECK(cdf.quantile(1.0) == 2.0);
    CHECK_THROWS_AS(cdf.quantile(1.5), std::domain_error);
}

TEST_CASE("support grid expands to the tails") {
    auto f = [](double x) { return std::exp(-0.5 * (x - 3.0) * (x - 3.0)); };
    auto g = numerics::build_support_grid(f, 3.0, 1.0,
                                          numerics::Interval{-kInf, kInf});
    REQUIRE(g.size() >= 2);
    // f < 1e-8 of max needs |x-3| > ~6.07
    CHECK(g.front() < 3.0 - 6.0);
    CHECK(g.back() > 3.0 + 6.0);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
}

TEST_CASE("counter-based rng") {
    CHECK(rng::derive(7, 1) == rng::derive(7, 1));
    CHECK(rng::derive(7, 1) != rng::derive(7, 2));
    CHECK(rng::derive(7, 1, 2) != rng::derive(7, 2, 1));
    const double u = rng::to_unit(rng::mix64(123456789));
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    rng::Stream a(11), b(11), c(12);
    const auto w1 = a.next_word();
    CHECK(w1 == b.next_word());
    CHECK(a.next_word() == b.next_word());
    CHECK(w1 != c.next_word());
}
