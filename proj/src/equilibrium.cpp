#include "ppcf/equilibrium.hpp"

#include <algorithm>
#include <cmath>

namespace ppcf {

Currency scheme_constant(const SchemeParams& scheme) {
    if (const Pprg* g = std::get_if<Pprg>(&scheme)) return g->k1();
    if (const Ppre* e = std::get_if<Ppre>(&scheme)) return e->k2;
    if (const Pprp* p = std::get_if<Pprp>(&scheme)) return p->k3;
    raise(Errc::unsupported_scheme,
          "no decay constant for " + scheme_name(scheme) + " (needs PPRG, PPRE or PPRP)");
}

BudgetBound max_budget(const SchemeParams& scheme, Currency provision_point, Currency theta_sum) {
    validate_scheme(scheme);
    require(provision_point > 0.0, Errc::invalid_argument, "provision point H must be > 0");
    require(theta_sum >= 0.0, Errc::invalid_argument, "theta sum must be >= 0");
    const Currency h = provision_point;
    const Currency k = scheme_constant(scheme);
    const Currency bound = ((h + k) * theta_sum - h * h - h * k) / (h + k);
    require(bound > 0.0, Errc::no_valid_budget,
            "no positive budget exists: total valuation does not exceed the provision point");
    return BudgetBound{bound};
}

Currency equilibrium_cap(const SchemeParams& scheme, Currency valuation,
                         double position_or_arrival, Currency provision_point, Currency budget) {
    validate_scheme(scheme);
    require(valuation >= 0.0, Errc::invalid_argument, "valuation must be >= 0");
    require(budget >= 0.0, Errc::invalid_argument, "budget must be >= 0");
    const Currency h = provision_point;

    Currency cap;
    if (std::holds_alternative<Ppr>(scheme)) {
        cap = valuation * h / (h + budget);
    } else if (const Pprg* g = std::get_if<Pprg>(&scheme)) {
        const double bonus = g->a * std::pow(1.0 / g->gamma, position_or_arrival - 1.0);
        cap = (valuation * (h + g->k1()) - budget * bonus) / (h + g->k1() + budget);
    } else if (const Ppre* e = std::get_if<Ppre>(&scheme)) {
        const double bonus = e->k2 * std::exp(-position_or_arrival);
        cap = (valuation * (h + e->k2) - budget * bonus) / (h + e->k2 + budget);
    } else if (const Pprp* p = std::get_if<Pprp>(&scheme)) {
        const double i = position_or_arrival;
        const double bonus = p->k3 / (i * (i + 1.0));
        cap = (valuation * (h + p->k3) - budget * bonus) / (h + p->k3 + budget);
    } else {
        raise(Errc::unsupported_scheme,
              "no equilibrium cap for " + scheme_name(scheme) + " (needs PPR, PPRG, PPRE or PPRP)");
    }
    return std::max(cap, 0.0);
}

namespace {

EquilibriumResult solve_impl(const SchemeParams& scheme, const std::vector<Player>& players,
                             Currency provision_point, Currency budget) {
    for (std::size_t i = 1; i < players.size(); ++i)
        require(players[i - 1].arrival <= players[i].arrival, Errc::invalid_argument,
                "players must be sorted by arrival");

    EquilibriumResult result;
    result.caps.reserve(players.size());
    std::vector<Pledge> pledges;

    Currency remaining = provision_point;  // h^{y_i}
    int next_seq = 1;
    for (const Player& pl : players) {
        EquilibriumCap entry{pl.id, 0.0, 0.0, CapBinding::zero_remaining};
        if (remaining > 0.0) {
            const double position = std::holds_alternative<Ppre>(scheme)
                                        ? pl.arrival
                                        : static_cast<double>(next_seq);
            entry.unconstrained_cap =
                equilibrium_cap(scheme, pl.valuation, position, provision_point, budget);
            entry.cap = std::min(entry.unconstrained_cap, remaining);
            entry.binding = entry.unconstrained_cap <= remaining
                                ? CapBinding::interior
                                : CapBinding::capped_by_remaining;
            if (entry.cap > 0.0) {
                pledges.push_back(Pledge{pl.id, entry.cap, pl.arrival});
                remaining -= entry.cap;
                result.total += entry.cap;
                ++next_seq;
            }
        }
        result.caps.push_back(entry);
    }
    result.profile = StrategyProfile::build(players, pledges);
    return result;
}

}  // namespace

EquilibriumResult equilibrium_solve(const SchemeParams& scheme, const std::vector<Player>& players,
                                    Currency provision_point, Currency budget) {
    validate_scheme(scheme);
    require(provision_point > 0.0, Errc::invalid_argument, "provision point H must be > 0");
    require(budget >= 0.0, Errc::invalid_argument, "budget must be >= 0");
    return solve_impl(scheme, players, provision_point, budget);
}

StrategyProfile equilibrium_profile(const SchemeParams& scheme, const std::vector<Player>& players,
                                    Currency provision_point, Currency budget) {
    return equilibrium_solve(scheme, players, provision_point, budget).profile;
}

}  // namespace ppcf
