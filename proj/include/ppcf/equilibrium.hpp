#pragma once

// Sub-game-perfect equilibrium structure of the refund mechanisms: the
// largest budget for which a Nash equilibrium exists, each player's
// equilibrium contribution cap, and construction of the full profile by
// arrival-order induction (everyone contributes min(cap, remaining) the
// moment they arrive).

#include <vector>

#include "ppcf/mechanisms.hpp"

namespace ppcf {

enum class CapBinding {
    interior,             // contributed the cap itself
    capped_by_remaining,  // cap exceeded what was left to fund
    zero_remaining,       // arrived after provision; contributes nothing
};

struct EquilibriumCap {
    int player_id{0};
    Currency cap{0};                // realized equilibrium contribution, <= H
    Currency unconstrained_cap{0};  // raw closed-form value, may exceed h
    CapBinding binding{CapBinding::interior};
};

struct BudgetBound {
    Currency max_budget{0};
};

// Scheme decay constant K (K1, K2 or K3). Errc::unsupported_scheme for
// PPM/PPR/PPS.
Currency scheme_constant(const SchemeParams& scheme);

// Largest budget admitting a Nash equilibrium: ((H+K)*theta - H^2 - H*K)/(H+K),
// which collapses to theta - H. Errc::no_valid_budget when theta_sum <= H.
BudgetBound max_budget(const SchemeParams& scheme, Currency provision_point, Currency theta_sum);

// Equilibrium contribution cap for one player. position_or_arrival is the
// 1-based contribution sequence for PPRG/PPRP, the arrival time for PPRE,
// and ignored for PPR. Negative caps clamp to zero.
Currency equilibrium_cap(const SchemeParams& scheme, Currency valuation,
                         double position_or_arrival, Currency provision_point, Currency budget);

struct EquilibriumResult {
    StrategyProfile profile;
    std::vector<EquilibriumCap> caps;  // one per player, arrival order
    Currency total{0};                 // realized C
};

// Players must already be sorted by arrival (ties broken by caller order).
// Each player contributes min(cap, h) at its arrival; zero contributions do
// not consume a sequence position.
EquilibriumResult equilibrium_solve(const SchemeParams& scheme, const std::vector<Player>& players,
                                    Currency provision_point, Currency budget);

StrategyProfile equilibrium_profile(const SchemeParams& scheme, const std::vector<Player>& players,
                                    Currency provision_point, Currency budget);

}  // namespace ppcf
