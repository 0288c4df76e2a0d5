#pragma once

// Monte-Carlo sequential-game engine. Players arrive over time, observe only
// the provision point, the budget, the amount still missing and the clock,
// and act according to a pluggable policy: the closed-form equilibrium play,
// a mix of equilibrium players and free riders, or tabular Q-learners that
// pick a contribution fraction and a delay. Provision accuracy is measured
// across budget sweeps.

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ppcf/equilibrium.hpp"
#include "ppcf/mechanisms.hpp"
#include "ppcf/rng.hpp"

namespace ppcf {

// ----------------------------------------------------------------- agents --

struct LearnerState {
    static constexpr int kRemainingBuckets = 5;  // h^{y}/H
    static constexpr int kTimeBuckets = 5;       // y/T
    static constexpr int kStates = kRemainingBuckets * kTimeBuckets;

    static constexpr std::array<double, 5> kContribFractions{0.0, 0.25, 0.5, 0.75, 1.0};
    static constexpr std::array<double, 3> kDelayFractions{0.0, 0.5, 1.0};
    static constexpr int kActions =
        static_cast<int>(kContribFractions.size() * kDelayFractions.size());

    std::array<double, kStates * kActions> q_table{};
    double epsilon{0.3};
    double alpha{0.1};

    static int state_index(double remaining_frac, double time_frac);
    static double contrib_fraction(int action) {
        return kContribFractions[static_cast<std::size_t>(action) % kContribFractions.size()];
    }
    static double delay_fraction(int action) {
        return kDelayFractions[static_cast<std::size_t>(action) / kContribFractions.size()];
    }

    int greedy_action(int state) const;          // lowest index wins ties
    int pick_action(int state, Rng& rng) const;  // epsilon-greedy
    void update(int state, int action, double reward);
};

// ---------------------------------------------------------------- policies --

struct EquilibriumPolicy {};

// Each player independently free rides with probability p, otherwise plays
// the equilibrium contribution (min(theta, h) for schemes without a cap).
struct FreeRiderMix {
    double p{1.0};
};

// One learner per player slot; non-owning. greedy disables exploration.
struct LearnerPolicy {
    std::vector<LearnerState>* learners{nullptr};
    bool greedy{false};
};

using Policy = std::variant<EquilibriumPolicy, FreeRiderMix, LearnerPolicy>;

// ------------------------------------------------------------------ config --

enum class ValuationDistribution { uniform, exponential };

struct SimConfig {
    int n_players{25};
    double valuation_multiplier{5.0};  // E[sum of valuations] = multiplier * H
    ValuationDistribution valuation_distribution{ValuationDistribution::uniform};
    std::vector<double> budget_fractions{0.1, 0.25, 0.5, 0.75, 1.0};
    int runs_per_point{200};
    int episodes{2000};  // training episodes per (mechanism, fraction) point
    std::uint64_t seed{1};
    Policy policy{EquilibriumPolicy{}};
    Currency provision_point{100.0};
    Time deadline{300.0};
    std::vector<SchemeParams> mechanisms{Pprg{}, Ppre{}, Pprp{}};
    double alpha{0.1};
    double epsilon_start{0.3};
    double epsilon_end{0.01};
    int threads{0};  // parallelism across sweep points; 0 = hardware

    void validate() const;
};

struct AccuracyRow {
    std::string mechanism;
    double budget_fraction{0};
    double accuracy{0};  // provisioned runs / runs
    int runs{0};
    std::uint64_t seed{0};
};

struct AccuracyResult {
    std::vector<AccuracyRow> rows;
};

std::string to_csv(const AccuracyResult& result);

// ------------------------------------------------------------- operations --

// n i.i.d. players: valuations with mean multiplier*H/n (uniform on
// [0, 2*mean] or exponential), arrivals uniform on [0, T]; ids in draw order.
std::vector<Player> sample_players(const SimConfig& config, Rng& rng);

struct AgentDecision {
    int player_id{-1};
    int state{-1};  // learner bookkeeping; -1 for closed-form policies
    int action{-1};
};

struct PlayedGame {
    StrategyProfile profile;  // players in arrival order
    Outcome outcome;
    std::vector<AgentDecision> decisions;
};

// Plays one game: sorts players by arrival (ties keep caller order), lets the
// policy decide each contribution as its player arrives, settles delayed
// contributions in landing order, and scores the final profile.
PlayedGame play_game(const ProjectSpec& spec, const std::vector<Player>& players,
                     const Policy& policy, Rng& rng);

Outcome run_game(const ProjectSpec& spec, const std::vector<Player>& players,
                 const Policy& policy, Rng& rng);

// Liquidity b such that the PPS market's maximum total refund (all of H
// contributed just before the deadline) matches the budget; the attainable
// range is (0, H), so targets at or above H saturate.
double calibrate_pps_liquidity(Currency provision_point, Currency budget);

// Budget sweep. For every (mechanism, budget fraction) point, learner
// policies train fresh agents for config.episodes episodes, then accuracy is
// measured over runs_per_point greedy runs; closed-form policies skip
// training. Each run's budget is fraction * (theta_sum - H) for the realized
// players. Deterministic given the config, including across thread counts.
AccuracyResult train_and_evaluate(const SimConfig& config);

}  // namespace ppcf
