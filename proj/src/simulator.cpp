#include "ppcf/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "ppcf/csv.hpp"

namespace ppcf {

// ----------------------------------------------------------------- agents --

int LearnerState::state_index(double remaining_frac, double time_frac) {
    const auto bucket = [](double v, int buckets) {
        const int b = static_cast<int>(v * buckets);
        return std::clamp(b, 0, buckets - 1);
    };
    return bucket(remaining_frac, kRemainingBuckets) * kTimeBuckets +
           bucket(time_frac, kTimeBuckets);
}

int LearnerState::greedy_action(int state) const {
    const double* row = q_table.data() + static_cast<std::size_t>(state) * kActions;
    int best = 0;
    for (int a = 1; a < kActions; ++a)
        if (row[a] > row[best]) best = a;
    return best;
}

int LearnerState::pick_action(int state, Rng& rng) const {
    if (epsilon > 0.0 && rng.uniform01() < epsilon)
        return static_cast<int>(rng.uniform_int(0, kActions - 1));
    return greedy_action(state);
}

void LearnerState::update(int state, int action, double reward) {
    double& q = q_table[static_cast<std::size_t>(state) * kActions + action];
    q = (1.0 - alpha) * q + alpha * reward;
}

// ------------------------------------------------------------------ config --

void SimConfig::validate() const {
    require(n_players >= 1, Errc::invalid_argument, "need at least one player");
    require(valuation_multiplier > 0.0, Errc::invalid_argument, "valuation multiplier must be > 0");
    require(provision_point > 0.0, Errc::invalid_argument, "provision point must be > 0");
    require(deadline > 0.0, Errc::invalid_argument, "deadline must be > 0");
    require(!budget_fractions.empty(), Errc::invalid_argument, "budget_fractions must be non-empty");
    for (double f : budget_fractions)
        require(f > 0.0 && f <= 1.0, Errc::invalid_argument, "budget fractions must lie in (0, 1]");
    require(runs_per_point >= 1, Errc::invalid_argument, "runs_per_point must be >= 1");
    require(episodes >= 1, Errc::invalid_argument, "episodes must be >= 1");
    require(!mechanisms.empty(), Errc::invalid_argument, "mechanisms must be non-empty");
    for (const SchemeParams& s : mechanisms) validate_scheme(s);
    require(alpha > 0.0 && alpha <= 1.0, Errc::invalid_argument, "alpha must lie in (0, 1]");
    require(epsilon_start >= 0.0 && epsilon_start <= 1.0 && epsilon_end >= 0.0 &&
                epsilon_end <= 1.0,
            Errc::invalid_argument, "epsilon bounds must lie in [0, 1]");
    if (const FreeRiderMix* mix = std::get_if<FreeRiderMix>(&policy))
        require(mix->p >= 0.0 && mix->p <= 1.0, Errc::invalid_argument,
                "free rider probability must lie in [0, 1]");
}

std::string to_csv(const AccuracyResult& result) {
    std::string out = "mechanism,budget_fraction,accuracy,runs,seed\n";
    for (const AccuracyRow& r : result.rows) {
        out += r.mechanism;
        out += ',';
        out += format_g9(r.budget_fraction);
        out += ',';
        out += format_g9(r.accuracy);
        out += ',';
        out += std::to_string(r.runs);
        out += ',';
        out += std::to_string(r.seed);
        out += '\n';
    }
    return out;
}

// ------------------------------------------------------------- operations --

std::vector<Player> sample_players(const SimConfig& config, Rng& rng) {
    const double mean = config.valuation_multiplier * config.provision_point /
                        static_cast<double>(config.n_players);
    std::vector<Player> players;
    players.reserve(static_cast<std::size_t>(config.n_players));
    for (int i = 0; i < config.n_players; ++i) {
        Player p;
        p.id = i;
        p.valuation = config.valuation_distribution == ValuationDistribution::uniform
                          ? rng.uniform(0.0, 2.0 * mean)
                          : rng.exponential(mean);
        p.arrival = rng.uniform(0.0, config.deadline);
        players.push_back(p);
    }
    return players;
}

namespace {

bool has_equilibrium_cap(const SchemeParams& scheme) {
    return std::holds_alternative<Ppr>(scheme) || std::holds_alternative<Pprg>(scheme) ||
           std::holds_alternative<Ppre>(scheme) || std::holds_alternative<Pprp>(scheme);
}

// Pending contribution that lands at `at`.
struct Landing {
    Time at{0};
    int order{0};  // decision order, stabilizes equal landing times
    int player_id{0};
    Currency amount{0};
};

}  // namespace

PlayedGame play_game(const ProjectSpec& spec, const std::vector<Player>& players,
                     const Policy& policy, Rng& rng) {
    spec.validate();

    std::vector<Player> sorted = players;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Player& a, const Player& b) { return a.arrival < b.arrival; });

    const Currency h_total = spec.provision_point;
    std::vector<Landing> pending;  // kept sorted by (at, order)
    std::size_t settled = 0;
    // h^t tracked by sequential subtraction, matching equilibrium_solve
    Currency remaining_raw = h_total;

    PlayedGame game;
    int next_seq = 1;

    for (const Player& pl : sorted) {
        while (settled < pending.size() && pending[settled].at <= pl.arrival)
            remaining_raw -= pending[settled++].amount;
        const Currency remaining = std::max(remaining_raw, 0.0);

        Currency amount = 0.0;
        Time at = pl.arrival;
        AgentDecision decision{pl.id, -1, -1};

        if (std::holds_alternative<EquilibriumPolicy>(policy) ||
            std::holds_alternative<FreeRiderMix>(policy)) {
            bool rides_free = false;
            if (const FreeRiderMix* mix = std::get_if<FreeRiderMix>(&policy))
                rides_free = rng.uniform01() < mix->p;
            if (!rides_free && remaining > 0.0) {
                Currency cap;
                if (has_equilibrium_cap(spec.scheme)) {
                    const double position = std::holds_alternative<Ppre>(spec.scheme)
                                                ? pl.arrival
                                                : static_cast<double>(next_seq);
                    cap = equilibrium_cap(spec.scheme, pl.valuation, position,
                                          spec.provision_point, spec.budget);
                } else {
                    cap = std::min(pl.valuation, remaining);  // PPM/PPS baseline
                }
                amount = std::min(cap, remaining);
            }
        } else {
            const LearnerPolicy& lp = std::get<LearnerPolicy>(policy);
            require(lp.learners && lp.learners->size() >= sorted.size(), Errc::invalid_argument,
                    "learner policy needs one learner per player");
            LearnerState& learner = (*lp.learners)[static_cast<std::size_t>(pl.id)];
            decision.state = LearnerState::state_index(remaining / h_total,
                                                       pl.arrival / spec.deadline);
            decision.action = lp.greedy ? learner.greedy_action(decision.state)
                                        : learner.pick_action(decision.state, rng);
            const double cf = LearnerState::contrib_fraction(decision.action);
            const double df = LearnerState::delay_fraction(decision.action);
            amount = cf * std::min(pl.valuation, remaining);
            at = pl.arrival + df * (spec.deadline - pl.arrival);
        }

        game.decisions.push_back(decision);
        if (amount > 0.0) {
            Landing landing{at, static_cast<int>(pending.size()), pl.id, amount};
            pending.insert(std::upper_bound(pending.begin() + static_cast<std::ptrdiff_t>(settled),
                                            pending.end(), landing,
                                            [](const Landing& a, const Landing& b) {
                                                return a.at < b.at ||
                                                       (a.at == b.at && a.order < b.order);
                                            }),
                           landing);
            ++next_seq;
        }
    }

    std::vector<Pledge> pledges;
    pledges.reserve(pending.size());
    for (const Landing& l : pending) pledges.push_back(Pledge{l.player_id, l.amount, l.at});

    game.profile = StrategyProfile::build(sorted, pledges);
    game.outcome = payoffs(spec, game.profile);
    return game;
}

Outcome run_game(const ProjectSpec& spec, const std::vector<Player>& players,
                 const Policy& policy, Rng& rng) {
    return play_game(spec, players, policy, rng).outcome;
}

double calibrate_pps_liquidity(Currency provision_point, Currency budget) {
    require(provision_point > 0.0, Errc::invalid_argument, "provision point must be > 0");
    require(budget > 0.0, Errc::invalid_argument, "budget must be > 0");
    const double target = std::min(budget, 0.99 * provision_point);
    const auto max_refund = [&](double b) {
        return pps_cost_inverse(provision_point + pps_cost(0.0, b), b) - provision_point;
    };
    double lo = 1e-9 * provision_point, hi = 1e6 * provision_point;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (max_refund(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

struct SweepPoint {
    std::size_t mech_index{0};
    std::size_t fraction_index{0};
};

AccuracyRow evaluate_point(const SimConfig& config, const SweepPoint& point) {
    const SchemeParams& base_scheme = config.mechanisms[point.mech_index];
    const double fraction = config.budget_fractions[point.fraction_index];
    const std::uint64_t point_tag =
        point.mech_index * config.budget_fractions.size() + point.fraction_index;

    const bool learning = std::holds_alternative<LearnerPolicy>(config.policy);
    std::vector<LearnerState> learners;
    if (learning) {
        learners.assign(static_cast<std::size_t>(config.n_players), LearnerState{});
        for (LearnerState& l : learners) l.alpha = config.alpha;
    }

    const auto episode_spec = [&](const std::vector<Player>& players) {
        Currency theta_sum = 0.0;
        for (const Player& p : players) theta_sum += p.valuation;
        const Currency budget = fraction * std::max(theta_sum - config.provision_point, 0.0);
        ProjectSpec spec;
        spec.provision_point = config.provision_point;
        spec.deadline = config.deadline;
        spec.budget = budget;
        spec.scheme = base_scheme;
        if (std::holds_alternative<Pps>(base_scheme) && budget > 0.0)
            spec.scheme = Pps{calibrate_pps_liquidity(config.provision_point, budget)};
        return spec;
    };

    if (learning) {
        for (int e = 0; e < config.episodes; ++e) {
            const double anneal = config.episodes > 1
                                      ? static_cast<double>(e) / (config.episodes - 1)
                                      : 1.0;
            const double eps =
                config.epsilon_start + (config.epsilon_end - config.epsilon_start) * anneal;
            for (LearnerState& l : learners) l.epsilon = eps;

            Rng rng(derive_seed(config.seed, point_tag, static_cast<std::uint64_t>(e), 0));
            const std::vector<Player> players = sample_players(config, rng);
            const ProjectSpec spec = episode_spec(players);
            const PlayedGame game =
                play_game(spec, players, LearnerPolicy{&learners, false}, rng);

            for (const AgentDecision& d : game.decisions) {
                if (d.state < 0) continue;
                const std::size_t idx = game.profile.player_index(d.player_id);
                learners[static_cast<std::size_t>(d.player_id)].update(
                    d.state, d.action, game.outcome.payoffs[idx]);
            }
        }
    }

    int provisioned = 0;
    for (int r = 0; r < config.runs_per_point; ++r) {
        Rng rng(derive_seed(config.seed, point_tag, static_cast<std::uint64_t>(r), 1));
        const std::vector<Player> players = sample_players(config, rng);
        const ProjectSpec spec = episode_spec(players);
        Policy eval_policy = config.policy;
        if (learning) eval_policy = LearnerPolicy{&learners, true};
        const Outcome outcome = run_game(spec, players, eval_policy, rng);
        if (outcome.provisioned) ++provisioned;
    }

    AccuracyRow row;
    row.mechanism = scheme_name(base_scheme);
    row.budget_fraction = fraction;
    row.accuracy = static_cast<double>(provisioned) / config.runs_per_point;
    row.runs = config.runs_per_point;
    row.seed = config.seed;
    return row;
}

}  // namespace

AccuracyResult train_and_evaluate(const SimConfig& config) {
    config.validate();

    std::vector<SweepPoint> points;
    for (std::size_t m = 0; m < config.mechanisms.size(); ++m)
        for (std::size_t f = 0; f < config.budget_fractions.size(); ++f)
            points.push_back(SweepPoint{m, f});

    AccuracyResult result;
    result.rows.resize(points.size());

    unsigned n_threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                            : std::thread::hardware_concurrency();
    n_threads = std::max(1u, std::min<unsigned>(n_threads, points.size()));

    if (n_threads == 1) {
        for (std::size_t i = 0; i < points.size(); ++i)
            result.rows[i] = evaluate_point(config, points[i]);
        return result;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    for (unsigned w = 0; w < n_threads; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1))
                result.rows[i] = evaluate_point(config, points[i]);
        });
    }
    for (std::thread& t : workers) t.join();
    return result;
}

}  // namespace ppcf
