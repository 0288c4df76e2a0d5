#pragma once

// Provision-point game model and the refund bonus schemes.
//
// A project with provision point H, deadline T and bonus budget B collects
// voluntary contributions; if the total C reaches H by T the project runs and
// contributors pay, otherwise contributions are returned together with a
// refund bonus distributed according to the configured scheme.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ppcf/errors.hpp"

namespace ppcf {

using Currency = double;
using Time = double;

// ---------------------------------------------------------------- schemes --

struct Ppm {};  // no refund
struct Ppr {};  // proportional refund x_i/C * B

// geometric-progression bonus: (x_i + a*(1/gamma)^(i-1)) / (C + K1) * B
struct Pprg {
    Currency a{1.0};
    double gamma{2.0};
    Currency k1() const { return a * gamma / (gamma - 1.0); }
};

// exponential time-decay bonus: (x_i + K2*e^{-t_i}) / (C + K2) * B
struct Ppre {
    Currency k2{1.0};
};

// polynomial sequence-decay bonus: (x_i + K3/(i(i+1))) / (C + K3) * B
struct Pprp {
    Currency k3{1.0};
};

// security-market refund; the market maker uses cost C0(q) = b*ln(1+e^{q/b})
struct Pps {
    double liquidity{1.0};  // b
};

using SchemeParams = std::variant<Ppm, Ppr, Pprg, Ppre, Pprp, Pps>;

// Throws Errc::invalid_argument on parameter violations (a <= 0, gamma <= 1, ...).
void validate_scheme(const SchemeParams& scheme);

std::string scheme_name(const SchemeParams& scheme);

// True for PPRG/PPRP, whose bonus term is indexed by contribution sequence;
// PPRE is indexed by wall-clock time, PPS by outstanding securities.
bool scheme_uses_sequence(const SchemeParams& scheme);

// ----------------------------------------------------------------- project --

struct ProjectSpec {
    Currency provision_point{0};  // H > 0
    Time deadline{0};             // T > 0
    Currency budget{0};           // B >= 0
    SchemeParams scheme{Ppm{}};

    void validate() const;
};

struct Player {
    int id{0};
    Currency valuation{0};  // theta_i >= 0
    Time arrival{0};        // y_i in [0, T]
};

struct Contribution {
    int player_id{0};
    Currency amount{0};  // x_i in [0, H]
    Time at{0};          // t_i in [y_i, T]
    int seq{0};          // 1-based position in contribution order
};

// Input form before sequence numbers are assigned.
struct Pledge {
    int player_id{0};
    Currency amount{0};
    Time at{0};
};

// An ordered strategy profile: one contribution per player at most, stored in
// non-decreasing time order with seq = 1..m (ties keep insertion order).
class StrategyProfile {
  public:
    StrategyProfile() = default;

    // Validates: known unique player ids, amount >= 0, at >= player's arrival.
    // Spec-dependent bounds (amount <= H, at <= T) are checked by
    // validate_against().
    static StrategyProfile build(std::vector<Player> players, const std::vector<Pledge>& pledges);

    const std::vector<Player>& players() const { return players_; }
    const std::vector<Contribution>& contributions() const { return contributions_; }

    Currency total() const { return total_; }  // C

    const Contribution& by_seq(int seq) const;

    // index into players() for a player id
    std::size_t player_index(int player_id) const;
    bool contributed(int player_id) const;
    int contribution_seq(int player_id) const;  // 0 when the player sat out

    void validate_against(const ProjectSpec& spec) const;

  private:
    std::vector<Player> players_;
    std::vector<Contribution> contributions_;
    std::vector<std::int32_t> contribution_of_player_;  // players() index -> seq or 0
    Currency total_{0};
};

struct Outcome {
    bool provisioned{false};
    std::vector<Currency> refunds;  // indexed like profile.players()
    std::vector<Currency> payoffs;
};

// ------------------------------------------------------------- operations --

// Coordinates of one contribution inside a (possibly hypothetical) profile,
// spelled out so condition checks can perturb them independently.
struct RefundPoint {
    Currency amount{0};      // x_i
    Time at{0};              // t_i
    int seq{1};              // i
    Currency total{0};       // C
    double outstanding{0};   // q^{t_i}, PPS only
};

// Scheme formula evaluated at explicit coordinates.
Currency refund_at(const SchemeParams& scheme, Currency budget, const RefundPoint& point);

// Refund share of the contribution with the given seq, per the scheme.
// PPR with C == 0 raises Errc::empty_profile; a bad seq raises Errc::invalid_seq.
Currency refund_share(const SchemeParams& scheme, const StrategyProfile& profile, Currency budget,
                      int seq);

// Amount still missing at time t: max(H - sum_{t_i <= t} x_i, 0).
Currency remaining_amount(const ProjectSpec& spec, const StrategyProfile& profile, Time t);

// Full payoff vector: provisioned contributors earn theta_i - x_i, otherwise
// they earn their refund share; non-contributors earn theta_i / 0.
Outcome payoffs(const ProjectSpec& spec, const StrategyProfile& profile);

// Provision test used everywhere: C >= H up to a 1e-9*H slack.
bool provision_reached(Currency total, Currency provision_point);

// ------------------------------------------------------------- PPS market --

// C0(q) = b*ln(1 + e^{q/b}), evaluated in softplus form for stability.
Currency pps_cost(double quantity, double liquidity);

// q with C0(q) = c; requires c >= C0(0) = b*ln 2 (Errc::out_of_range below).
double pps_cost_inverse(Currency cost, double liquidity);

// Securities issued for a payment of x at market state q.
double pps_securities(Currency amount, double outstanding, double liquidity);

// Eq-3 refund: C0^{-1}(x + C0(q)) - q - x.
Currency pps_refund(Currency amount, double outstanding, double liquidity);

// Outstanding securities before the contribution with the given seq.
double pps_outstanding_before(const StrategyProfile& profile, int seq, double liquidity);

}  // namespace ppcf
