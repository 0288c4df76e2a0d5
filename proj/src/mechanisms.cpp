#include "ppcf/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ppcf {

const char* errc_name(Errc c) noexcept {
    switch (c) {
        case Errc::invalid_argument: return "invalid argument";
        case Errc::empty_profile: return "empty profile";
        case Errc::invalid_seq: return "invalid seq";
        case Errc::time_out_of_range: return "time out of range";
        case Errc::invalid_liquidity: return "invalid liquidity";
        case Errc::out_of_range: return "out of range";
        case Errc::no_valid_budget: return "no valid budget";
        case Errc::unsupported_scheme: return "unsupported scheme";
        case Errc::unsupported_mechanism: return "unsupported mechanism";
        case Errc::domain_error: return "domain error";
        case Errc::bad_config: return "bad config";
        case Errc::io_error: return "io error";
    }
    return "error";
}

// ---------------------------------------------------------------- schemes --

void validate_scheme(const SchemeParams& scheme) {
    std::visit(
        [](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Pprg>) {
                require(s.a > 0.0, Errc::invalid_argument, "PPRG requires a > 0");
                require(s.gamma > 1.0, Errc::invalid_argument, "PPRG requires gamma > 1");
                require(std::isfinite(s.k1()), Errc::invalid_argument, "PPRG K1 not finite");
            } else if constexpr (std::is_same_v<S, Ppre>) {
                require(s.k2 > 0.0, Errc::invalid_argument, "PPRE requires K2 > 0");
            } else if constexpr (std::is_same_v<S, Pprp>) {
                require(s.k3 > 0.0, Errc::invalid_argument, "PPRP requires K3 > 0");
            } else if constexpr (std::is_same_v<S, Pps>) {
                require(s.liquidity > 0.0, Errc::invalid_liquidity, "PPS requires b > 0");
            }
        },
        scheme);
}

std::string scheme_name(const SchemeParams& scheme) {
    struct Namer {
        std::string operator()(const Ppm&) const { return "PPM"; }
        std::string operator()(const Ppr&) const { return "PPR"; }
        std::string operator()(const Pprg&) const { return "PPRG"; }
        std::string operator()(const Ppre&) const { return "PPRE"; }
        std::string operator()(const Pprp&) const { return "PPRP"; }
        std::string operator()(const Pps&) const { return "PPS"; }
    };
    return std::visit(Namer{}, scheme);
}

bool scheme_uses_sequence(const SchemeParams& scheme) {
    return std::holds_alternative<Pprg>(scheme) || std::holds_alternative<Pprp>(scheme);
}

// ----------------------------------------------------------------- project --

void ProjectSpec::validate() const {
    require(provision_point > 0.0, Errc::invalid_argument, "provision point H must be > 0");
    require(deadline > 0.0, Errc::invalid_argument, "deadline T must be > 0");
    require(budget >= 0.0, Errc::invalid_argument, "budget B must be >= 0");
    validate_scheme(scheme);
}

StrategyProfile StrategyProfile::build(std::vector<Player> players,
                                       const std::vector<Pledge>& pledges) {
    StrategyProfile p;
    p.players_ = std::move(players);
    p.contribution_of_player_.assign(p.players_.size(), 0);

    for (std::size_t i = 0; i < p.players_.size(); ++i) {
        const Player& pl = p.players_[i];
        require(pl.valuation >= 0.0, Errc::invalid_argument, "player valuation must be >= 0");
        require(pl.arrival >= 0.0, Errc::invalid_argument, "player arrival must be >= 0");
        for (std::size_t j = 0; j < i; ++j)
            require(p.players_[j].id != pl.id, Errc::invalid_argument, "duplicate player id");
    }

    std::vector<Pledge> ordered = pledges;
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const Pledge& a, const Pledge& b) { return a.at < b.at; });

    p.contributions_.reserve(ordered.size());
    int seq = 0;
    for (const Pledge& pl : ordered) {
        const std::size_t idx = p.player_index(pl.player_id);
        require(p.contribution_of_player_[idx] == 0, Errc::invalid_argument,
                "player contributes more than once");
        require(pl.amount >= 0.0, Errc::invalid_argument, "contribution amount must be >= 0");
        require(pl.at >= p.players_[idx].arrival, Errc::invalid_argument,
                "contribution before player arrival");
        ++seq;
        p.contributions_.push_back(Contribution{pl.player_id, pl.amount, pl.at, seq});
        p.contribution_of_player_[idx] = seq;
        p.total_ += pl.amount;
    }
    return p;
}

const Contribution& StrategyProfile::by_seq(int seq) const {
    require(seq >= 1 && seq <= static_cast<int>(contributions_.size()), Errc::invalid_seq,
            "seq " + std::to_string(seq) + " out of range");
    return contributions_[static_cast<std::size_t>(seq - 1)];
}

std::size_t StrategyProfile::player_index(int player_id) const {
    for (std::size_t i = 0; i < players_.size(); ++i)
        if (players_[i].id == player_id) return i;
    raise(Errc::invalid_argument, "unknown player id " + std::to_string(player_id));
}

bool StrategyProfile::contributed(int player_id) const {
    return contribution_of_player_[player_index(player_id)] != 0;
}

int StrategyProfile::contribution_seq(int player_id) const {
    return contribution_of_player_[player_index(player_id)];
}

void StrategyProfile::validate_against(const ProjectSpec& spec) const {
    spec.validate();
    for (const Contribution& c : contributions_) {
        require(c.amount <= spec.provision_point, Errc::invalid_argument,
                "contribution exceeds provision point");
        require(c.at <= spec.deadline, Errc::invalid_argument, "contribution after deadline");
    }
    for (const Player& pl : players_)
        require(pl.arrival <= spec.deadline, Errc::invalid_argument, "arrival after deadline");
}

bool provision_reached(Currency total, Currency provision_point) {
    return total >= provision_point * (1.0 - 1e-9);
}

// ------------------------------------------------------------- PPS market --

Currency pps_cost(double quantity, double liquidity) {
    require(liquidity > 0.0, Errc::invalid_liquidity, "PPS liquidity b must be > 0");
    const double z = quantity / liquidity;
    // softplus: b*ln(1+e^z) == q + b*ln(1+e^{-z}) for z > 0
    if (z > 0.0) return quantity + liquidity * std::log1p(std::exp(-z));
    return liquidity * std::log1p(std::exp(z));
}

double pps_cost_inverse(Currency cost, double liquidity) {
    require(liquidity > 0.0, Errc::invalid_liquidity, "PPS liquidity b must be > 0");
    const double floor = liquidity * std::log(2.0);
    require(cost >= floor, Errc::out_of_range,
            "cost below C0(0) = b*ln 2; no non-negative quantity matches");
    // q = b*ln(e^{c/b} - 1) = c + b*log1p(-e^{-c/b}), stable for all c >= b*ln 2
    return cost + liquidity * std::log1p(-std::exp(-cost / liquidity));
}

double pps_securities(Currency amount, double outstanding, double liquidity) {
    require(amount >= 0.0, Errc::domain_error, "PPS payment must be >= 0");
    if (amount == 0.0) return 0.0;
    return pps_cost_inverse(amount + pps_cost(outstanding, liquidity), liquidity) - outstanding;
}

Currency pps_refund(Currency amount, double outstanding, double liquidity) {
    return pps_securities(amount, outstanding, liquidity) - amount;
}

double pps_outstanding_before(const StrategyProfile& profile, int seq, double liquidity) {
    profile.by_seq(seq);  // range check
    double q = 0.0;
    for (int s = 1; s < seq; ++s)
        q += pps_securities(profile.by_seq(s).amount, q, liquidity);
    return q;
}

// ------------------------------------------------------------- operations --

Currency refund_at(const SchemeParams& scheme, Currency budget, const RefundPoint& point) {
    validate_scheme(scheme);
    require(budget >= 0.0, Errc::invalid_argument, "budget B must be >= 0");
    require(point.seq >= 1, Errc::invalid_seq, "seq must be >= 1");

    struct Eval {
        Currency budget;
        const RefundPoint& p;

        Currency operator()(const Ppm&) const { return 0.0; }
        Currency operator()(const Ppr&) const {
            require(p.total > 0.0, Errc::empty_profile, "PPR refund undefined for C = 0");
            return p.amount / p.total * budget;
        }
        Currency operator()(const Pprg& s) const {
            const double bonus = s.a * std::pow(1.0 / s.gamma, p.seq - 1);
            return (p.amount + bonus) / (p.total + s.k1()) * budget;
        }
        Currency operator()(const Ppre& s) const {
            return (p.amount + s.k2 * std::exp(-p.at)) / (p.total + s.k2) * budget;
        }
        Currency operator()(const Pprp& s) const {
            const double i = static_cast<double>(p.seq);
            return (p.amount + s.k3 / (i * (i + 1.0))) / (p.total + s.k3) * budget;
        }
        Currency operator()(const Pps& s) const {
            return pps_refund(p.amount, p.outstanding, s.liquidity);
        }
    };
    return std::visit(Eval{budget, point}, scheme);
}

Currency refund_share(const SchemeParams& scheme, const StrategyProfile& profile, Currency budget,
                      int seq) {
    const Contribution& c = profile.by_seq(seq);
    RefundPoint point;
    point.amount = c.amount;
    point.at = c.at;
    point.seq = c.seq;
    point.total = profile.total();
    if (const Pps* pps = std::get_if<Pps>(&scheme))
        point.outstanding = pps_outstanding_before(profile, seq, pps->liquidity);
    return refund_at(scheme, budget, point);
}

Currency remaining_amount(const ProjectSpec& spec, const StrategyProfile& profile, Time t) {
    require(t >= 0.0 && t <= spec.deadline, Errc::time_out_of_range,
            "t must lie in [0, deadline]");
    Currency paid = 0.0;
    for (const Contribution& c : profile.contributions())
        if (c.at <= t) paid += c.amount;
    return std::max(spec.provision_point - paid, 0.0);
}

Outcome payoffs(const ProjectSpec& spec, const StrategyProfile& profile) {
    profile.validate_against(spec);

    Outcome out;
    const std::size_t n = profile.players().size();
    out.refunds.assign(n, 0.0);
    out.payoffs.assign(n, 0.0);
    out.provisioned = provision_reached(profile.total(), spec.provision_point);

    // PPS folds market state across contributions in seq order; keep one pass.
    double q = 0.0;
    const Pps* pps = std::get_if<Pps>(&spec.scheme);

    std::vector<Currency> refund_by_seq(profile.contributions().size(), 0.0);
    for (const Contribution& c : profile.contributions()) {
        if (!out.provisioned) {
            if (pps) {
                refund_by_seq[c.seq - 1] = pps_refund(c.amount, q, pps->liquidity);
            } else {
                RefundPoint point{c.amount, c.at, c.seq, profile.total(), 0.0};
                refund_by_seq[c.seq - 1] = refund_at(spec.scheme, spec.budget, point);
            }
        }
        if (pps) q += pps_securities(c.amount, q, pps->liquidity);
    }

    for (std::size_t i = 0; i < n; ++i) {
        const Player& pl = profile.players()[i];
        const bool contributed = profile.contributed(pl.id);
        if (out.provisioned) {
            const Currency x = contributed
                                   ? profile.by_seq(profile.contribution_seq(pl.id)).amount
                                   : 0.0;
            out.payoffs[i] = pl.valuation - x;
        } else if (contributed) {
            out.refunds[i] = refund_by_seq[profile.contribution_seq(pl.id) - 1];
            out.payoffs[i] = out.refunds[i];
        }
        // non-contributor, not provisioned: payoff stays 0
    }
    return out;
}

}  // namespace ppcf
