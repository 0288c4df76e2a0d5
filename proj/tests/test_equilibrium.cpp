#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "ppcf/equilibrium.hpp"
#include "test_util.hpp"

using namespace ppcf;
using ppcf::testing::close_abs_or_rel;
using ppcf::testing::close_rel;

namespace {

// criterion-style random instance: n players, total valuation theta_sum split
// by random weights bounded away from zero (near-zero valuations clamp and
// lose the razor-thin slack at budgets near the bound), arrivals uniform over
// a horizon long enough that the exponential bonus weights sum below K2.
std::vector<Player> random_instance(Rng& rng, int n, Currency theta_sum, Time horizon) {
    std::vector<double> w(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (double& x : w) {
        x = rng.uniform(0.3, 1.0);
        sum += x;
    }
    std::vector<Player> players;
    players.reserve(w.size());
    for (int i = 0; i < n; ++i)
        players.push_back(
            Player{i, theta_sum * w[static_cast<std::size_t>(i)] / sum, rng.uniform(0.0, horizon)});
    std::stable_sort(players.begin(), players.end(),
                     [](const Player& a, const Player& b) { return a.arrival < b.arrival; });
    return players;
}

double bisect(double lo, double hi, const std::function<double(double)>& f) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("max_budget evaluates the unsimplified bound") {
    // PPRG: a=1, gamma=2 -> K1=2; (102*200 - 10000 - 200)/102
    CHECK(max_budget(Pprg{1.0, 2.0}, 100.0, 200.0).max_budget ==
          doctest::Approx(100.0).epsilon(1e-12));
    // PPRE: K2=5; (105*150 - 10000 - 500)/105
    CHECK(max_budget(Ppre{5.0}, 100.0, 150.0).max_budget ==
          doctest::Approx(50.0).epsilon(1e-12));
    CHECK(max_budget(Pprp{3.0}, 100.0, 400.0).max_budget ==
          doctest::Approx(300.0).epsilon(1e-12));

    CHECK_THROWS_WITH_AS(max_budget(Pprg{1.0, 2.0}, 100.0, 100.0).max_budget, doctest::Contains("no valid budget"),
                         Error);
    CHECK_THROWS_AS(max_budget(Pprg{1.0, 2.0}, 100.0, 50.0), Error);
    CHECK_THROWS_AS(max_budget(Ppm{}, 100.0, 200.0), Error);
    CHECK_THROWS_AS(max_budget(Ppr{}, 100.0, 200.0), Error);
    CHECK_THROWS_AS(max_budget(Pps{1.0}, 100.0, 200.0), Error);
}

TEST_CASE("max_budget equals theta_sum - H for all schemes") {
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        const double h = rng.uniform(1.0, 1000.0);
        const double k = rng.uniform(0.01, 50.0);
        const double theta = h * rng.uniform(1.01, 20.0);
        const double gamma = rng.uniform(1.2, 5.0);
        const Pprg pprg{k * (gamma - 1.0) / gamma, gamma};  // gives K1 == k

        for (const SchemeParams scheme :
             {SchemeParams{pprg}, SchemeParams{Ppre{k}}, SchemeParams{Pprp{k}}}) {
            const double bound = max_budget(scheme, h, theta).max_budget;
            CHECK(close_rel(bound, theta - h, 1e-9));
        }
    }
}

TEST_CASE("equilibrium_cap closed forms") {
    // PPRG: (10*102 - 1*50*1)/(102+50)
    CHECK(equilibrium_cap(Pprg{1.0, 2.0}, 10.0, 1.0, 100.0, 50.0) ==
          doctest::Approx(6.3815789473684211).epsilon(1e-12));
    // PPR caps at theta*H/(H+B)
    CHECK(equilibrium_cap(Ppr{}, 10.0, 1.0, 100.0, 50.0) ==
          doctest::Approx(6.6666666666666667).epsilon(1e-12));
    // zero valuation contributes nothing
    CHECK(equilibrium_cap(Pprg{1.0, 2.0}, 0.0, 1.0, 100.0, 50.0) == 0.0);
    CHECK(equilibrium_cap(Ppre{1.0}, 0.0, 0.0, 100.0, 50.0) == 0.0);
    // the formula clamps instead of going negative
    CHECK(equilibrium_cap(Pprg{1.0, 2.0}, 0.001, 1.0, 100.0, 50.0) == 0.0);
    CHECK_THROWS_AS(equilibrium_cap(Ppm{}, 10.0, 1.0, 100.0, 50.0), Error);
    CHECK_THROWS_AS(equilibrium_cap(Pps{1.0}, 10.0, 1.0, 100.0, 50.0), Error);
}

TEST_CASE("PPR cap agrees with a root solve of the indifference equation") {
    // theta - x = (x/H) * B at C = H
    const double theta = 10.0, h = 100.0, budget = 50.0;
    const double solved =
        bisect(0.0, theta, [&](double x) { return x / h * budget - (theta - x); });
    CHECK(close_rel(solved, equilibrium_cap(Ppr{}, theta, 1.0, h, budget), 1e-9));

    // and for PPRE: theta - x = (x + K2 e^{-y})/(H + K2) * B at C = H
    const double k2 = 1.0, y = 0.7;
    const double solved_e = bisect(0.0, theta, [&](double x) {
        return (x + k2 * std::exp(-y)) / (h + k2) * budget - (theta - x);
    });
    CHECK(close_rel(solved_e, equilibrium_cap(Ppre{k2}, theta, y, h, budget), 1e-9));
}

TEST_CASE("equilibrium profile: two players, the first funds everything") {
    std::vector<Player> players{{0, 200.0, 0.0}, {1, 50.0, 1.0}};
    const EquilibriumResult res = equilibrium_solve(Pprg{1.0, 2.0}, players, 100.0, 10.0);

    CHECK(res.caps[0].unconstrained_cap == doctest::Approx(20390.0 / 112.0).epsilon(1e-12));
    CHECK(res.caps[0].binding == CapBinding::capped_by_remaining);
    CHECK(res.caps[0].cap == 100.0);
    CHECK(res.caps[1].binding == CapBinding::zero_remaining);
    CHECK(res.caps[1].cap == 0.0);

    CHECK(res.total == 100.0);
    CHECK(res.profile.contributions().size() == 1);
    CHECK(res.profile.by_seq(1).player_id == 0);
    CHECK(res.profile.by_seq(1).at == 0.0);
}

TEST_CASE("equilibrium profile: zero valuations contribute nothing") {
    std::vector<Player> players{{0, 0.0, 0.0}, {1, 0.0, 1.0}};
    const EquilibriumResult res = equilibrium_solve(Pprg{1.0, 2.0}, players, 100.0, 10.0);
    CHECK(res.total == 0.0);
    CHECK(res.profile.contributions().empty());
}

TEST_CASE("equilibrium profile rejects unsorted players") {
    std::vector<Player> players{{0, 10.0, 5.0}, {1, 10.0, 1.0}};
    CHECK_THROWS_AS(equilibrium_profile(Pprg{1.0, 2.0}, players, 100.0, 10.0), Error);
}

TEST_CASE("random instances provision exactly and rationally") {
    const double h = 100.0;
    Rng rng(313);
    const SchemeParams schemes[] = {SchemeParams{Pprg{1.0, 2.0}}, SchemeParams{Ppre{1.0}},
                                    SchemeParams{Pprp{1.0}}};
    for (int i = 0; i < 30; ++i) {
        const SchemeParams& scheme = schemes[i % 3];
        const double theta_sum = h * rng.uniform(1.5, 20.0);
        const std::vector<Player> players = random_instance(rng, 25, theta_sum, 300.0);
        const double budget = 0.5 * max_budget(scheme, h, theta_sum).max_budget;

        const EquilibriumResult res = equilibrium_solve(scheme, players, h, budget);
        CHECK(std::abs(res.total - h) <= 1e-9 * h);

        // early contribution: t_i == y_i exactly
        for (const Contribution& c : res.profile.contributions()) {
            const Player& pl = res.profile.players()[res.profile.player_index(c.player_id)];
            CHECK(c.at == pl.arrival);
        }

        // provisioned payoff at the cap is never beaten by the refund share
        for (const Contribution& c : res.profile.contributions()) {
            const Player& pl = res.profile.players()[res.profile.player_index(c.player_id)];
            const double refund = refund_share(scheme, res.profile, budget, c.seq);
            CHECK(pl.valuation - c.amount + 1e-9 * std::max(1.0, pl.valuation) >= refund);
        }
    }
}

TEST_CASE("PPRG tail identity at the maximum budget") {
    Rng rng(99);
    const int n = 25;
    for (int i = 0; i < 20; ++i) {
        const double h = rng.uniform(50.0, 500.0);
        const double gamma = rng.uniform(1.05, 1.3);
        const double a = rng.uniform(0.5, 1.0);
        const Pprg scheme{a, gamma};
        const double k1 = scheme.k1();

        std::vector<double> thetas(n);
        double theta_sum = 0.0;
        for (double& t : thetas) {
            t = h * rng.uniform(0.3, 0.5);
            theta_sum += t;
        }
        const double b_star = max_budget(scheme, h, theta_sum).max_budget;

        // with every cap interior the finite GP tail is the exact residue
        double cap_sum = 0.0;
        bool interior = true;
        for (int p = 0; p < n; ++p) {
            const double cap = equilibrium_cap(scheme, thetas[static_cast<std::size_t>(p)],
                                               p + 1.0, h, b_star);
            interior = interior && cap > 0.0;
            cap_sum += cap;
        }
        REQUIRE(interior);

        const double tail = a * std::pow(1.0 / gamma, n) * gamma / (gamma - 1.0);
        const double expected = b_star * tail / (h + k1 + b_star);
        CHECK(close_rel(cap_sum - h, expected, 1e-9));
    }
}

TEST_CASE("short valuations leave the project underfunded") {
    // theta_sum < H: everyone plays their cap and C = sum of caps < H
    std::vector<Player> players{{0, 30.0, 0.0}, {1, 20.0, 1.0}};
    const EquilibriumResult res = equilibrium_solve(Pprg{1.0, 2.0}, players, 100.0, 5.0);
    double cap_sum = 0.0;
    for (const EquilibriumCap& c : res.caps) cap_sum += c.cap;
    CHECK(res.total == doctest::Approx(cap_sum).epsilon(1e-12));
    CHECK(res.total < 100.0);
    for (const EquilibriumCap& c : res.caps) CHECK(c.binding == CapBinding::interior);
}
