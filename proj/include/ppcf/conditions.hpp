#pragma once

// Numeric verification of the two monotonicity conditions a refund bonus
// scheme must satisfy, plus a race-condition detector.
//
// Contribution monotonicity: the refund strictly increases in the player's
// own contribution. Time monotonicity: the refund never increases when the
// contribution is delayed, and strictly decreases somewhere. A scheme whose
// refunds are invariant to delay lets several players wait for the deadline
// simultaneously (the race condition).

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ppcf/mechanisms.hpp"

namespace ppcf {

struct SampleSpec {
    int num_points{1000};
    std::pair<Currency, Currency> x_range{1.0, 50.0};  // within (0, H)
    std::pair<Time, Time> t_range{0.01, 0.99};         // within (0, T)
    std::uint64_t seed{0};
    double fd_step{1e-6};  // relative finite-difference step

    void validate(const ProjectSpec& spec) const;
};

struct Violation {
    RefundPoint at;
    std::string coordinate;  // which perturbation failed ("x", "t", "seq", ...)
    double slope;
};

struct ConditionReport {
    bool passed{false};
    std::vector<Violation> violations;
    int points_checked{0};
};

struct RaceReport {
    bool race_detected{false};
    int witness_set_size{0};
};

// Finite-difference check of dR/dx > 0 at sampled profile points. The literal
// scheme is differenced (C moves with x); for PPRG/PPRE/PPRP the fixed-C
// difference is also compared against the closed form B/(C+K).
ConditionReport check_contribution_monotonicity(const SchemeParams& scheme,
                                                const ProjectSpec& spec, const SampleSpec& sample);

// Delay perturbation: t_i for PPRE/PPS (PPS delays also grow the outstanding
// quantity), integer sequence shifts for PPRG/PPRP. Requires non-increase
// everywhere sampled and strict decrease somewhere.
ConditionReport check_time_monotonicity(const SchemeParams& scheme, const ProjectSpec& spec,
                                        const SampleSpec& sample);

// Counts players of a sampled population whose refund is unchanged (within
// 1e-12) when they unilaterally delay to the population's latest arrival.
// More than one such player means a race.
RaceReport detect_race_condition(const SchemeParams& scheme, const ProjectSpec& spec,
                                 const SampleSpec& sample);

}  // namespace ppcf
