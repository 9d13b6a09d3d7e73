#include <cmath>
#include <cstdlib>
#include <vector>

#include "coverage.h"
#include "approx.h"
#include "doctest.h"
#include "dutchbook.h"
#include "models.h"
#include "rng.h"

using namespace epiconf;
using testutil::Approx;

TEST_CASE("arbitrage fixture: hedged trade is risk-free") {
    // agent quotes 0.10, market knows 0.25: buy low from the agent,
    // sell high to the market, pocket the spread under either outcome
    auto a = dutchbook::arbitrage(0.10, 0.25);
    CHECK(a.profit == 0.15);
    CHECK(a.claims_from_agent == 1);
    CHECK(a.settle_if_cover == a.settle_if_miss);
    CHECK(a.settle_if_cover == Approx(0.15).margin(1e-15));

    // reversed direction: sell the overpriced claim to the agent
    auto b = dutchbook::arbitrage(7.0 / 9.0, 1.0 / 3.0);
    CHECK(b.profit == Approx(4.0 / 9.0).margin(1e-15));
    CHECK(b.claims_from_agent == -1);
    CHECK(b.settle_if_cover == Approx(b.settle_if_miss).margin(1e-15));

    // identical prices: no trade
    auto c = dutchbook::arbitrage(0.4, 0.4);
    CHECK(c.profit == 0.0);
    CHECK(c.claims_from_agent == 0);
}

TEST_CASE("market price: exact enumeration prices for the three-point model") {
    auto model = models::make_model("discrete_uniform_triple");
    auto proc = coverage::minmax_procedure();

    // conditional prices match the exact conditional coverage by range
    const models::Dataset spread{3.0, 5.0};   // range 2 -> certain cover
    const models::Dataset tied{3.0, 3.0};     // range 0 -> 1/3
    CHECK(dutchbook::market_price(*model, proc, spread, 4.0,
                                  dutchbook::Policy::kConditional, "", 2) ==
          Approx(1.0).margin(1e-12));
    CHECK(dutchbook::market_price(*model, proc, tied, 4.0,
                                  dutchbook::Policy::kConditional, "", 2) ==
          Approx(1.0 / 3.0).margin(1e-12));

    // the marginal price ignores the data entirely
    for (const auto* y : {&spread, &tied}) {
        CHECK(dutchbook::market_price(*model, proc, *y, 4.0,
                                      dutchbook::Policy::kMarginal, "", 2) ==
              Approx(7.0 / 9.0).margin(1e-12));
    }
}

TEST_CASE("market mode: marginal quoting leaks, matching conditioning does not") {
    auto model = models::make_model("discrete_uniform_triple");
    auto proc = coverage::minmax_procedure();
    std::vector<dutchbook::Agent> agents = {
        {"naive", dutchbook::Policy::kMarginal, ""},
        {"full", dutchbook::Policy::kFullConfidence, ""},
    };
    const std::uint64_t rounds = 20000;
    auto led = dutchbook::simulate_market(*model, proc, 4.0, agents, rounds,
                                          2, 17);
    CHECK(led.failures == 0);
    CHECK(led.no_trade_rounds == 0);
    REQUIRE(led.rows.size() == 2 * rounds);

    // expected leak per round: sum_R P(R) |p_c(R) - 7/9| = 8/27
    const double leak = led.cumulative_of("naive") / static_cast<double>(rounds);
    CHECK(leak == Approx(8.0 / 27.0).margin(0.01));

    // the full-confidence quote equals the conditional coverage here, so the
    // spread is exactly zero every round, not merely small
    CHECK(led.cumulative_of("full") == 0.0);

    for (const auto& row : led.rows) {
        CHECK(row.settle_if_cover == row.settle_if_miss);
        if (row.agent_id == "full") CHECK(row.profit == 0.0);
        if (row.agent_id == "naive") CHECK(row.profit >= 0.0);
    }
}

TEST_CASE("two-agent mode: edge in expectation, not per round, zero-sum") {
    auto model = models::make_model("discrete_uniform_triple");
    auto proc = coverage::minmax_procedure();
    dutchbook::Agent naive{"naive", dutchbook::Policy::kMarginal, ""};
    dutchbook::Agent informed{"informed", dutchbook::Policy::kConditional, ""};
    const std::uint64_t rounds = 20000;
    auto led = dutchbook::simulate_two_agent(*model, proc, 4.0, naive,
                                             informed, rounds, 2, 23);
    CHECK(led.failures == 0);

    const double mean =
        led.cumulative_of("informed") / static_cast<double>(rounds);
    CHECK(mean > 0.2);

    bool losing_round = false, outcome_dependent = false;
    for (const auto& row : led.rows) {
        if (row.traded && row.profit < 0.0) losing_round = true;
        if (row.traded && row.settle_if_cover != row.settle_if_miss)
            outcome_dependent = true;
    }
    CHECK(losing_round);
    CHECK(outcome_dependent);

    // whatever the informed agent wins, the quoting agent loses
    CHECK(std::abs(led.cumulative_of("informed") +
                   led.cumulative_of("naive")) <= 1e-9);
}

TEST_CASE("ambiguous maximal ancillary: market refuses, explicit choice runs") {
    auto model = models::make_model("evans_2x2");
    auto proc = coverage::mle_guess_procedure(model);
    std::vector<dutchbook::Agent> agents = {
        {"naive", dutchbook::Policy::kMarginal, ""},
    };
    auto led = dutchbook::simulate_market(*model, proc, 1.0, agents, 50, 1, 5);
    CHECK(led.no_trade_rounds == 50);
    CHECK(led.cumulative_of("naive") == 0.0);

    // naming the conditioning coordinate resolves the ambiguity; at
    // theta_true = 2 the Y1-conditional correctness (3/4, 5/8) straddles the
    // marginal 2/3, so the informed side trades every round with a 1/18
    // per-round edge
    dutchbook::Agent informed{"informed", dutchbook::Policy::kConditional,
                              "Y1"};
    auto duel = dutchbook::simulate_two_agent(*model, proc, 2.0, agents[0],
                                              informed, 5000, 1, 29);
    CHECK(duel.failures == 0);
    CHECK(duel.rows.size() > 0);
    CHECK(duel.cumulative_of("informed") > 0.0);
}

TEST_CASE("ledger determinism: same seed reproduces every row") {
    auto model = models::make_model("discrete_uniform_triple");
    auto proc = coverage::minmax_procedure();
    std::vector<dutchbook::Agent> agents = {
        {"naive", dutchbook::Policy::kMarginal, ""},
    };
    auto a = dutchbook::simulate_market(*model, proc, 4.0, agents, 200, 2, 31);
    auto b = dutchbook::simulate_market(*model, proc, 4.0, agents, 200, 2, 31);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].profit == b.rows[i].profit);
        CHECK(a.rows[i].agent_price == b.rows[i].agent_price);
        CHECK(a.rows[i].market_price == b.rows[i].market_price);
        CHECK(a.rows[i].outcome == b.rows[i].outcome);
    }
    CHECK(a.cumulative_of("naive") == b.cumulative_of("naive"));
}
