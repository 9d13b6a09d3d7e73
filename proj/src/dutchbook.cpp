#include "dutchbook.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include "confidence.h"
#include "errors.h"
#include "rng.h"

namespace epiconf::dutchbook {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

long long level_key(double v) {
    double scaled = v * 1e9;
    if (std::abs(scaled) >= 9.0e18) scaled = std::copysign(9.0e18, scaled);
    return std::llround(scaled);
}

void check_price(double p, const char* who) {
    if (!(p >= 0.0 && p <= 1.0))
        throw ConfigError(std::string(who) + " price must lie in [0, 1]");
}

// A per-statistic conditional coverage table at theta_true; exact where the
// model enumerates, Monte Carlo with quantile bins otherwise.
struct Table {
    coverage::Candidate candidate;
    coverage::CoverageReport report;

    double price_for(const models::Dataset& y) const {
        double v = candidate.value(y);
        for (const auto& cell : report.cells) {
            if (cell.bin_id < 0) continue;
            bool hit = cell.bin_lo == cell.bin_hi
                           ? level_key(cell.bin_lo) == level_key(v)
                           : (v >= cell.bin_lo && v < cell.bin_hi);
            if (hit) return cell.coverage;
        }
        throw ConfigError("market price: conditioning value " +
                          std::to_string(v) +
                          " was never seen while estimating the table");
    }
};

constexpr std::size_t kPriceBins = 10;  // quantile bins, continuous statistics

// Quoted prices are rounded to a fixed tick. Two price-setters whose
// information coincides then quote bit-identical prices even when their
// probabilities were computed through different (mathematically equal)
// expressions, so "equal information, zero arbitrage" holds exactly rather
// than up to floating-point noise. No two genuinely different prices in this
// artifact are anywhere near one tick apart.
constexpr double kPriceTick = 1e-12;

double quantize(double price) {
    return std::round(price / kPriceTick) * kPriceTick;
}

class PriceEngine {
public:
    PriceEngine(const models::ParametricModel& model,
                const coverage::CiProcedure& proc, double theta_true,
                std::size_t n, std::uint64_t n_sim, std::uint64_t seed)
        : model_(model), proc_(proc), theta_(theta_true), n_(n),
          n_sim_(n_sim), seed_(seed), names_(model.ancillary_names()) {}

    // The market quotes the finest unambiguous conditioning: the unique
    // maximal ancillary when there is one, the marginal law when none is
    // implemented, and nothing at all when several maximal ancillaries
    // compete.
    bool market_quotes() const { return names_.size() < 2; }

    double market(const models::Dataset& y) {
        if (!market_quotes())
            throw ConfigError("market price: several maximal ancillaries");
        return quantize(names_.empty() ? marginal()
                                       : table(names_[0]).price_for(y));
    }

    double market_level(const models::Dataset& y) const {
        return names_.size() == 1 ? model_.ancillary_named(names_[0], y) : kNan;
    }

    double price(const Agent& agent, const models::Dataset& y,
                 numerics::Interval ci) {
        switch (agent.policy) {
            case Policy::kMarginal:
                return quantize(marginal());
            case Policy::kConditional:
                return quantize(table(resolve(agent)).price_for(y));
            case Policy::kFullConfidence:
                return quantize(full_confidence_price(y, ci));
        }
        throw ConfigError("unknown pricing policy");
    }

    double marginal() {
        if (!marginal_) {
            auto report = coverage::marginal_coverage(
                model_, proc_, {theta_}, 0.0, n_, n_sim_,
                rng::derive(seed_, 0xAEB5), coverage::Method::kAuto);
            marginal_ = report.marginal_cell(0).coverage;
        }
        return *marginal_;
    }

private:
    std::string resolve(const Agent& agent) const {
        if (!agent.statistic.empty()) {
            if (std::find(names_.begin(), names_.end(), agent.statistic) ==
                names_.end())
                throw ConfigError("agent '" + agent.id + "': " + model_.name() +
                                  " has no ancillary named '" +
                                  agent.statistic + "'");
            return agent.statistic;
        }
        if (names_.size() == 1) return names_[0];
        throw ConfigError("agent '" + agent.id + "': conditional pricing on " +
                          model_.name() +
                          " needs an explicit ancillary name");
    }

    Table& table(const std::string& stat) {
        auto it = tables_.find(stat);
        if (it != tables_.end()) return it->second;
        Table t;
        t.candidate = {"ancillary:" + stat,
                       [this, stat](const models::Dataset& y) {
                           return model_.ancillary_named(stat, y);
                       },
                       model_.capabilities().discrete_data};
        t.report = coverage::conditional_coverage(
            model_, proc_, t.candidate, kPriceBins, {theta_}, 0.0, n_, n_sim_,
            rng::derive(seed_, 0x7AB1E, tables_.size()),
            coverage::Method::kAuto);
        return tables_.emplace(stat, std::move(t)).first->second;
    }

    double full_confidence_price(const models::Dataset& y,
                                 numerics::Interval ci) {
        if (!(ci.lo <= ci.hi))
            throw ConfigError("full-confidence price: claim interval unset");
        if (model_.capabilities().discrete_parameter) {
            double mass = 0.0;
            for (const auto& [th, w] :
                 confidence::discrete_full_confidence(model_, y))
                if (ci.contains(th)) mass += w;
            return mass;
        }
        auto prior = confidence::implied_prior(model_, y);
        auto cd = confidence::full_confidence(prior, model_, y);
        return confidence::confidence_of(cd, ci.lo, ci.hi);
    }

    const models::ParametricModel& model_;
    const coverage::CiProcedure& proc_;
    double theta_;
    std::size_t n_;
    std::uint64_t n_sim_, seed_;
    std::vector<std::string> names_;
    std::optional<double> marginal_;
    std::map<std::string, Table> tables_;
};

void add_cumulative(MarketLedger& ledger, const std::string& id,
                    double profit) {
    for (auto& [agent, total] : ledger.cumulative)
        if (agent == id) {
            total += profit;
            return;
        }
    ledger.cumulative.emplace_back(id, profit);
}

}  // namespace

double MarketLedger::cumulative_of(const std::string& agent_id) const {
    for (const auto& [agent, total] : cumulative)
        if (agent == agent_id) return total;
    throw ConfigError("ledger: no agent named '" + agent_id + "'");
}

Arbitrage arbitrage(double agent_price, double market_price) {
    check_price(agent_price, "agent");
    check_price(market_price, "market");
    Arbitrage out;
    if (agent_price == market_price) return out;  // no trade
    // Buy the claim on the cheap side, sell it on the dear side: one claim
    // held, one owed, so the claim legs cancel regardless of the outcome and
    // the settlement is the cash collected up front.
    out.claims_from_agent = market_price > agent_price ? +1 : -1;
    out.cash = std::abs(agent_price - market_price);
    int net_claims = 0;  // +1 bought, -1 sold
    out.settle_if_cover = out.cash + net_claims * 1.0;
    out.settle_if_miss = out.cash + net_claims * 0.0;
    out.profit = out.cash;
    return out;
}

double market_price(const models::ParametricModel& model,
                    const coverage::CiProcedure& proc,
                    const models::Dataset& y, double theta_true,
                    Policy policy, const std::string& statistic,
                    std::size_t n, std::uint64_t n_sim, std::uint64_t seed) {
    PriceEngine engine(model, proc, theta_true, n, n_sim, seed);
    numerics::Interval ci{kNan, kNan};
    if (policy == Policy::kFullConfidence) ci = proc(y);
    return engine.price(Agent{"query", policy, statistic}, y, ci);
}

MarketLedger simulate_market(const models::ParametricModel& model,
                             const coverage::CiProcedure& proc,
                             double theta_true,
                             const std::vector<Agent>& agents,
                             std::uint64_t n_rounds, std::size_t n,
                             std::uint64_t seed, std::uint64_t price_n_sim) {
    if (agents.empty())
        throw ConfigError("simulate_market: need at least one agent");
    PriceEngine engine(model, proc, theta_true, n, price_n_sim,
                       rng::derive(seed, 0x9121CE5));
    MarketLedger ledger;
    ledger.model = model.name();
    ledger.theta_true = theta_true;
    ledger.sample_size = n;
    ledger.n_rounds = n_rounds;
    ledger.seed = seed;
    for (const auto& agent : agents) ledger.cumulative.emplace_back(agent.id, 0.0);

    for (std::uint64_t r = 0; r < n_rounds; ++r) {
        auto y = model.simulate(theta_true, n, rng::derive(seed, r));
        numerics::Interval ci{kNan, kNan};
        bool ok = true, outcome = false;
        try {
            ci = proc(y);
            outcome = ci.contains(theta_true);
        } catch (const std::exception&) {
            ok = false;
            ++ledger.failures;
        }
        bool quoted = ok && engine.market_quotes();
        double mkt = quoted ? engine.market(y) : kNan;
        if (!quoted) ++ledger.no_trade_rounds;
        double lvl = engine.market_level(y);
        for (const auto& agent : agents) {
            LedgerRow row;
            row.round = r;
            row.r_bin = lvl;
            row.agent_id = agent.id;
            row.market_price = mkt;
            row.outcome = outcome;
            row.agent_price = ok ? engine.price(agent, y, ci) : kNan;
            if (quoted) {
                auto trade = arbitrage(row.agent_price, mkt);
                row.traded = trade.claims_from_agent != 0;
                row.profit = trade.profit;
                row.settle_if_cover = trade.settle_if_cover;
                row.settle_if_miss = trade.settle_if_miss;
                add_cumulative(ledger, agent.id, trade.profit);
            }
            ledger.rows.push_back(std::move(row));
        }
    }
    return ledger;
}

MarketLedger simulate_two_agent(const models::ParametricModel& model,
                                const coverage::CiProcedure& proc,
                                double theta_true, const Agent& quoting,
                                const Agent& informed, std::uint64_t n_rounds,
                                std::size_t n, std::uint64_t seed,
                                std::uint64_t price_n_sim) {
    PriceEngine engine(model, proc, theta_true, n, price_n_sim,
                       rng::derive(seed, 0x9121CE5));
    MarketLedger ledger;
    ledger.model = model.name();
    ledger.theta_true = theta_true;
    ledger.sample_size = n;
    ledger.n_rounds = n_rounds;
    ledger.seed = seed;
    ledger.cumulative.emplace_back(quoting.id, 0.0);
    ledger.cumulative.emplace_back(informed.id, 0.0);

    for (std::uint64_t r = 0; r < n_rounds; ++r) {
        auto y = model.simulate(theta_true, n, rng::derive(seed, r));
        numerics::Interval ci{kNan, kNan};
        bool ok = true, outcome = false;
        try {
            ci = proc(y);
            outcome = ci.contains(theta_true);
        } catch (const std::exception&) {
            ok = false;
            ++ledger.failures;
        }
        LedgerRow row;
        row.round = r;
        row.r_bin = engine.market_level(y);
        row.agent_id = informed.id;
        row.outcome = outcome;
        if (ok) {
            double quote = engine.price(quoting, y, ci);
            double own = engine.price(informed, y, ci);
            row.agent_price = quote;
            row.market_price = own;
            // Unhedged: the informed side takes a position in the claim
            // itself, so settlement depends on the outcome.
            int units = own > quote ? +1 : (own < quote ? -1 : 0);
            double cash = -units * quote;
            row.traded = units != 0;
            row.settle_if_cover = cash + units * 1.0;
            row.settle_if_miss = cash + units * 0.0;
            row.profit = cash + units * (outcome ? 1.0 : 0.0);
        } else {
            row.agent_price = row.market_price = kNan;
        }
        if (!row.traded) ++ledger.no_trade_rounds;
        add_cumulative(ledger, informed.id, row.profit);
        add_cumulative(ledger, quoting.id, -row.profit);
        ledger.rows.push_back(std::move(row));
    }
    return ledger;
}

}  // namespace epiconf::dutchbook
