#pragma once

// Betting-market simulator: each round a dataset is drawn, the claim
// "theta_true lies in CI(y)" is put on the market, and price-setters quote
// their probability for it. A market maker quoting the finest implemented
// conditioning (the model's maximal ancillary) extracts risk-free arbitrage
// from any agent quoting coarser information; the hedged trade's profit is
// exactly |agent - market| under either outcome. A two-agent variant has the
// informed player trade directly against a quoting agent: profitable only in
// expectation, not per round.

#include <cstdint>
#include <string>
#include <vector>

#include "coverage.h"
#include "models.h"

namespace epiconf::dutchbook {

enum class Policy {
    kMarginal,         // unconditional coverage at theta_true
    kConditional,      // coverage given an ancillary (statistic names one)
    kFullConfidence,   // the agent's own full-confidence mass of CI(y)
};

struct Agent {
    std::string id;
    Policy policy = Policy::kMarginal;
    // Ancillary name for kConditional; "" = the model's unique maximal
    // ancillary (an ambiguity there is an error for agents, a refusal to
    // quote for the market).
    std::string statistic;
};

// One hedged trade: buy the claim from whichever side quotes low, sell to
// the other. The claim legs cancel in units, so the settlement is the cash
// difference under either outcome -- that is the risk-free profit.
struct Arbitrage {
    double profit = 0.0;          // |agent - market|; 0 = no trade
    int claims_from_agent = 0;    // +1 bought from the agent, -1 sold to them
    double cash = 0.0;            // net cash at trade time
    double settle_if_cover = 0.0; // net wealth if the claim pays
    double settle_if_miss = 0.0;  // net wealth if it does not
};

Arbitrage arbitrage(double agent_price, double market_price);

struct LedgerRow {
    std::uint64_t round = 0;
    double r_bin = 0.0;  // conditioning statistic value (NaN when none)
    std::string agent_id;
    double agent_price = 0.0;
    double market_price = 0.0;  // two-agent mode: the informed side's price
    double profit = 0.0;
    bool traded = false;
    bool outcome = false;  // theta_true in CI(y)
    double settle_if_cover = 0.0;
    double settle_if_miss = 0.0;
};

struct MarketLedger {
    std::string model;
    double theta_true = 0.0;
    std::size_t sample_size = 1;
    std::uint64_t n_rounds = 0;
    std::uint64_t seed = 0;
    std::uint64_t no_trade_rounds = 0;
    std::uint64_t failures = 0;  // CI procedure threw (claim settles false)
    std::vector<LedgerRow> rows;
    // Cumulative profit extracted against each agent (market mode) or earned
    // by the informed agent (two-agent mode).
    std::vector<std::pair<std::string, double>> cumulative;

    double cumulative_of(const std::string& agent_id) const;
};

// Coverage probability of the claim under the named information policy, at
// theta_true: exact by enumeration where the model allows it, otherwise
// Monte Carlo with n_sim replicates on a seed stream independent of any
// round stream. Continuous conditioning statistics are binned (pooled-pilot
// quantile bins); the price is the bin's coverage. All quoted prices are
// rounded to a 1e-12 tick so that price-setters with identical information
// quote bit-identical prices (zero arbitrage holds exactly, not merely up to
// floating-point noise in mathematically equal expressions).
double market_price(const models::ParametricModel& model,
                    const coverage::CiProcedure& proc,
                    const models::Dataset& y, double theta_true,
                    Policy policy, const std::string& statistic = "",
                    std::size_t n = 1, std::uint64_t n_sim = 100000,
                    std::uint64_t seed = 1);

// Market mode: every agent trades each round against a market maker quoting
// the finest conditioning. A model with several maximal ancillaries has no
// unambiguous finest price; the market refuses to quote and the round is
// recorded as no-trade. Rounds are seeded independently from (seed, round).
MarketLedger simulate_market(const models::ParametricModel& model,
                             const coverage::CiProcedure& proc,
                             double theta_true,
                             const std::vector<Agent>& agents,
                             std::uint64_t n_rounds, std::size_t n,
                             std::uint64_t seed,
                             std::uint64_t price_n_sim = 100000);

// Two-agent mode (no market maker): `quoting` posts a price, `informed`
// buys when its own price is higher, sells when lower, abstains on ties.
// Settlement is outcome-dependent; the edge shows up only in the long-run
// mean.
MarketLedger simulate_two_agent(const models::ParametricModel& model,
                                const coverage::CiProcedure& proc,
                                double theta_true, const Agent& quoting,
                                const Agent& informed, std::uint64_t n_rounds,
                                std::size_t n, std::uint64_t seed,
                                std::uint64_t price_n_sim = 100000);

}  // namespace epiconf::dutchbook
