#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ppcf/conditions.hpp"

using namespace ppcf;

namespace {

ProjectSpec default_spec() {
    ProjectSpec spec;
    spec.provision_point = 100.0;
    spec.deadline = 1.0;
    spec.budget = 20.0;
    spec.scheme = Ppm{};
    return spec;
}

SampleSpec default_sample(int points = 1000, std::uint64_t seed = 42) {
    SampleSpec s;
    s.num_points = points;
    s.x_range = {1.0, 50.0};
    s.t_range = {0.01, 0.99};
    s.seed = seed;
    return s;
}

bool reports_equal(const ConditionReport& a, const ConditionReport& b) {
    if (a.passed != b.passed || a.points_checked != b.points_checked ||
        a.violations.size() != b.violations.size())
        return false;
    for (std::size_t i = 0; i < a.violations.size(); ++i) {
        if (a.violations[i].slope != b.violations[i].slope) return false;
        if (a.violations[i].coordinate != b.violations[i].coordinate) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("contribution monotonicity: refund schemes pass, PPM fails") {
    const ProjectSpec spec = default_spec();
    const SampleSpec sample = default_sample();

    // every seeded sample, not just the default
    for (const std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const SampleSpec s = default_sample(300, seed);
        CHECK(check_contribution_monotonicity(Pprg{1.0, 2.0}, spec, s).passed);
        CHECK(check_time_monotonicity(Pprg{1.0, 2.0}, spec, s).passed);
        CHECK(check_contribution_monotonicity(Ppre{1.0}, spec, s).passed);
        CHECK(check_time_monotonicity(Ppre{1.0}, spec, s).passed);
        CHECK(check_contribution_monotonicity(Pprp{1.0}, spec, s).passed);
        CHECK(check_time_monotonicity(Pprp{1.0}, spec, s).passed);
    }

    CHECK(check_contribution_monotonicity(Pprg{1.0, 2.0}, spec, sample).passed);
    CHECK(check_contribution_monotonicity(Ppre{1.0}, spec, sample).passed);
    CHECK(check_contribution_monotonicity(Pprp{1.0}, spec, sample).passed);
    CHECK(check_contribution_monotonicity(Ppr{}, spec, sample).passed);
    CHECK(check_contribution_monotonicity(Pps{1.0}, spec, sample).passed);

    const ConditionReport ppm = check_contribution_monotonicity(Ppm{}, spec, sample);
    CHECK_FALSE(ppm.passed);
    CHECK(ppm.violations.size() == static_cast<std::size_t>(sample.num_points));
    for (const Violation& v : ppm.violations) CHECK(v.slope == 0.0);
}

TEST_CASE("contribution slope matches the closed form B/(C+K)") {
    // fixed-C central difference of the PPRG formula at x=10, C=100
    const Pprg scheme{1.0, 2.0};
    const double h = 1e-6 * 10.0;
    RefundPoint hi{10.0 + h, 0.0, 1, 100.0, 0.0};
    RefundPoint lo{10.0 - h, 0.0, 1, 100.0, 0.0};
    const double slope = (refund_at(scheme, 20.0, hi) - refund_at(scheme, 20.0, lo)) / (2.0 * h);
    CHECK(slope == doctest::Approx(0.19607843137254902).epsilon(1e-9));  // 20/102
}

TEST_CASE("time monotonicity: decaying schemes pass, flat schemes fail at slope zero") {
    const ProjectSpec spec = default_spec();
    const SampleSpec sample = default_sample();

    CHECK(check_time_monotonicity(Pprg{1.0, 2.0}, spec, sample).passed);
    CHECK(check_time_monotonicity(Ppre{1.0}, spec, sample).passed);
    CHECK(check_time_monotonicity(Pprp{1.0}, spec, sample).passed);
    CHECK(check_time_monotonicity(Pps{1.0}, spec, sample).passed);

    const ConditionReport ppr = check_time_monotonicity(Ppr{}, spec, sample);
    CHECK_FALSE(ppr.passed);
    REQUIRE(ppr.violations.size() == 1);  // no increase anywhere, no strict decrease either
    CHECK(ppr.violations[0].slope == 0.0);

    const ConditionReport ppm = check_time_monotonicity(Ppm{}, spec, sample);
    CHECK_FALSE(ppm.passed);
    CHECK(ppm.violations[0].slope == 0.0);
}

TEST_CASE("sequence shift drops the PPRG refund between consecutive positions") {
    const Pprg scheme{1.0, 2.0};
    RefundPoint first{10.0, 0.0, 1, 100.0, 0.0};
    RefundPoint second{10.0, 0.0, 2, 100.0, 0.0};
    CHECK(refund_at(scheme, 20.0, first) ==
          doctest::Approx(2.1568627450980392).epsilon(1e-12));
    CHECK(refund_at(scheme, 20.0, second) ==
          doctest::Approx(2.0588235294117647).epsilon(1e-12));
}

TEST_CASE("a delayed PPRE contribution earns strictly less") {
    const Ppre scheme{1.0};
    RefundPoint early{10.0, 0.0, 1, 100.0, 0.0};
    RefundPoint late{10.0, 1.0, 1, 100.0, 0.0};
    const double at0 = refund_at(scheme, 20.0, early);
    const double at1 = refund_at(scheme, 20.0, late);
    CHECK(at0 == doctest::Approx(2.1782178217821782).epsilon(1e-12));  // 11/101*20
    CHECK(at1 == doctest::Approx(2.0530454338953351).epsilon(1e-12));  // (10+1/e)/101*20
    CHECK(at1 < at0);
}

TEST_CASE("race detection separates flat from decaying schemes") {
    const ProjectSpec spec = default_spec();

    SUBCASE("PPR races with the whole population waiting") {
        const RaceReport r = detect_race_condition(Ppr{}, spec, default_sample(5));
        CHECK(r.race_detected);
        CHECK(r.witness_set_size == 5);
    }
    SUBCASE("PPM races degenerately") {
        const RaceReport r = detect_race_condition(Ppm{}, spec, default_sample(5));
        CHECK(r.race_detected);
        CHECK(r.witness_set_size == 5);
    }
    SUBCASE("decaying schemes only leave the last arrival indifferent") {
        for (const SchemeParams scheme :
             {SchemeParams{Pprg{1.0, 2.0}}, SchemeParams{Ppre{1.0}}, SchemeParams{Pprp{1.0}},
              SchemeParams{Pps{1.0}}}) {
            const RaceReport r = detect_race_condition(scheme, spec, default_sample(1000));
            CHECK_FALSE(r.race_detected);
            CHECK(r.witness_set_size == 1);
        }
    }
    SUBCASE("a lone player cannot race") {
        const RaceReport r = detect_race_condition(Ppr{}, spec, default_sample(1));
        CHECK_FALSE(r.race_detected);
        CHECK(r.witness_set_size == 1);
    }
}

TEST_CASE("reports are deterministic in the sample seed") {
    const ProjectSpec spec = default_spec();
    const SampleSpec sample = default_sample(200, 7);

    for (const SchemeParams scheme :
         {SchemeParams{Ppr{}}, SchemeParams{Pprg{1.0, 2.0}}, SchemeParams{Pps{1.0}}}) {
        const auto c1 = check_contribution_monotonicity(scheme, spec, sample);
        const auto c2 = check_contribution_monotonicity(scheme, spec, sample);
        CHECK(reports_equal(c1, c2));
        const auto t1 = check_time_monotonicity(scheme, spec, sample);
        const auto t2 = check_time_monotonicity(scheme, spec, sample);
        CHECK(reports_equal(t1, t2));
        const auto r1 = detect_race_condition(scheme, spec, sample);
        const auto r2 = detect_race_condition(scheme, spec, sample);
        CHECK(r1.race_detected == r2.race_detected);
        CHECK(r1.witness_set_size == r2.witness_set_size);
    }
}

TEST_CASE("sample validation") {
    const ProjectSpec spec = default_spec();
    SampleSpec bad = default_sample();
    bad.num_points = 0;
    CHECK_THROWS_AS(check_contribution_monotonicity(Ppr{}, spec, bad), Error);
    bad = default_sample();
    bad.x_range = {0.0, 50.0};
    CHECK_THROWS_AS(check_contribution_monotonicity(Ppr{}, spec, bad), Error);
    bad = default_sample();
    bad.t_range = {0.0, 1.5};
    CHECK_THROWS_AS(check_time_monotonicity(Ppr{}, spec, bad), Error);
    bad = default_sample();
    bad.fd_step = 0.0;
    CHECK_THROWS_AS(check_time_monotonicity(Ppr{}, spec, bad), Error);
}
