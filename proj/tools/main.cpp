// ppcf — provision-point crowdfunding mechanisms: condition checks,
// equilibrium computation, gas reports, accuracy sweeps and figure emission.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ppcf/conditions.hpp"
#include "ppcf/csv.hpp"
#include "ppcf/equilibrium.hpp"
#include "ppcf/gascost.hpp"
#include "ppcf/mechanisms.hpp"
#include "ppcf/simulator.hpp"

#include "config.hpp"
#include "svg.hpp"

namespace {

using namespace ppcf;
using cli::ConfigDoc;
using cli::load_config;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::io_error, "cannot write " + path);
    out << content;
    if (!out) raise(Errc::io_error, "write failed: " + path);
}

// ------------------------------------------------------------------ check --

struct CheckExpectation {
    bool c1{true};
    bool c2{true};
    bool race{false};
};

CheckExpectation expected_pattern(const SchemeParams& scheme) {
    if (std::holds_alternative<Ppm>(scheme)) return {false, false, true};
    if (std::holds_alternative<Ppr>(scheme)) return {true, false, true};
    return {true, true, false};  // PPRG / PPRE / PPRP / PPS
}

int cmd_check(const std::string& scheme_name_arg, const std::string& config_path,
              const std::string& csv_path) {
    const ConfigDoc cfg = load_config(config_path);
    require(cfg.project.has_value(), Errc::bad_config, "check needs a \"project\" section");
    require(cfg.sample.has_value(), Errc::bad_config, "check needs a \"sample\" section");

    const SchemeParams scheme = cli::scheme_by_name(scheme_name_arg, cfg.scheme);
    ProjectSpec spec = *cfg.project;
    spec.scheme = scheme;

    const ConditionReport c1 = check_contribution_monotonicity(scheme, spec, *cfg.sample);
    const ConditionReport c2 = check_time_monotonicity(scheme, spec, *cfg.sample);
    const RaceReport race = detect_race_condition(scheme, spec, *cfg.sample);

    const std::string name = scheme_name(scheme);
    std::printf("%-6s %-26s %-6s points=%d violations=%zu\n", name.c_str(),
                "contribution-monotonicity", c1.passed ? "PASS" : "FAIL", c1.points_checked,
                c1.violations.size());
    std::printf("%-6s %-26s %-6s points=%d violations=%zu\n", name.c_str(), "time-monotonicity",
                c2.passed ? "PASS" : "FAIL", c2.points_checked, c2.violations.size());
    std::printf("%-6s %-26s %-6s witness_set_size=%d\n", name.c_str(), "race-condition",
                race.race_detected ? "YES" : "NO", race.witness_set_size);
    if (!c2.passed && !c2.violations.empty())
        std::printf("%-6s %-26s slope=%s\n", name.c_str(), "  worst time slope",
                    format_g9(c2.violations.front().slope).c_str());

    std::string csv = "scheme,check,result,points,violations,witness_set_size\n";
    csv += name + ",contribution_monotonicity," + (c1.passed ? "pass" : "fail") + "," +
           std::to_string(c1.points_checked) + "," + std::to_string(c1.violations.size()) + ",\n";
    csv += name + ",time_monotonicity," + (c2.passed ? "pass" : "fail") + "," +
           std::to_string(c2.points_checked) + "," + std::to_string(c2.violations.size()) + ",\n";
    csv += name + ",race_condition," + (race.race_detected ? "yes" : "no") + ",,," +
           std::to_string(race.witness_set_size) + "\n";
    std::printf("\n%s", csv.c_str());
    if (!csv_path.empty()) write_file(csv_path, csv);

    const CheckExpectation want = expected_pattern(scheme);
    const bool as_expected =
        c1.passed == want.c1 && c2.passed == want.c2 && race.race_detected == want.race;
    if (!as_expected) std::fprintf(stderr, "unexpected result pattern for %s\n", name.c_str());
    return as_expected ? 0 : 1;
}

// ------------------------------------------------------------ equilibrium --

const char* binding_name(CapBinding b) {
    switch (b) {
        case CapBinding::interior: return "interior";
        case CapBinding::capped_by_remaining: return "capped_by_remaining";
        case CapBinding::zero_remaining: return "zero_remaining";
    }
    return "?";
}

int cmd_equilibrium(const std::string& config_path, const std::string& csv_path) {
    const ConfigDoc cfg = load_config(config_path);
    require(cfg.project.has_value(), Errc::bad_config, "equilibrium needs a \"project\" section");
    require(cfg.scheme.has_value(), Errc::bad_config, "equilibrium needs a \"scheme\" section");
    require(cfg.players.has_value() && !cfg.players->empty(), Errc::bad_config,
            "equilibrium needs a non-empty \"players\" array");

    const ProjectSpec& spec = *cfg.project;
    const Currency theta_sum = std::accumulate(
        cfg.players->begin(), cfg.players->end(), 0.0,
        [](Currency acc, const Player& p) { return acc + p.valuation; });

    // Nash-existence bound: warn when exceeded, refuse when no budget can exist.
    Currency bound = 0.0;
    if (std::holds_alternative<Ppr>(*cfg.scheme)) {
        require(theta_sum > spec.provision_point, Errc::no_valid_budget,
                "no valid budget: total valuation does not exceed the provision point");
        bound = theta_sum - spec.provision_point;
    } else {
        bound = max_budget(*cfg.scheme, spec.provision_point, theta_sum).max_budget;
    }
    if (spec.budget > bound)
        std::fprintf(stderr,
                     "warning: budget %s exceeds the Nash-existence bound %s; proceeding\n",
                     format_g9(spec.budget).c_str(), format_g9(bound).c_str());

    std::vector<Player> players = *cfg.players;
    std::stable_sort(players.begin(), players.end(),
                     [](const Player& a, const Player& b) { return a.arrival < b.arrival; });

    const EquilibriumResult res =
        equilibrium_solve(*cfg.scheme, players, spec.provision_point, spec.budget);

    std::string csv = "player_id,valuation,arrival,cap,unconstrained_cap,binding\n";
    for (std::size_t i = 0; i < res.caps.size(); ++i) {
        const EquilibriumCap& c = res.caps[i];
        csv += std::to_string(c.player_id) + "," + format_g9(players[i].valuation) + "," +
               format_g9(players[i].arrival) + "," + format_g9(c.cap) + "," +
               format_g9(c.unconstrained_cap) + "," + binding_name(c.binding) + "\n";
    }
    csv += "total,,," + format_g9(res.total) + ",,\n";
    std::printf("%s", csv.c_str());
    if (!csv_path.empty()) write_file(csv_path, csv);

    std::fprintf(stderr, "realized C = %s (H = %s)\n", format_g9(res.total).c_str(),
                 format_g9(spec.provision_point).c_str());
    return 0;
}

// --------------------------------------------------------------- simulate --

std::string suffixed_path(const std::string& path, const std::string& suffix) {
    const std::size_t dot = path.find_last_of('.');
    const std::size_t slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + suffix;
    return path.substr(0, dot) + suffix + path.substr(dot);
}

int cmd_simulate(const std::string& config_path, const std::string& out_path) {
    const ConfigDoc cfg = load_config(config_path);
    require(cfg.sim.has_value(), Errc::bad_config, "simulate needs a \"sim\" section");

    std::vector<double> multipliers = cfg.sim_multipliers;
    const bool split = !multipliers.empty();
    if (!split) multipliers.push_back(cfg.sim->valuation_multiplier);

    for (const double m : multipliers) {
        SimConfig run = *cfg.sim;
        run.valuation_multiplier = m;
        const AccuracyResult result = train_and_evaluate(run);
        const std::string csv = to_csv(result);
        const std::string path =
            split ? suffixed_path(out_path, "_m" + format_g9(m)) : out_path;
        write_file(path, csv);
        std::printf("wrote %zu rows to %s (multiplier %s)\n", result.rows.size(), path.c_str(),
                    format_g9(m).c_str());
    }
    return 0;
}

// -------------------------------------------------------------------- gas --

int cmd_gas(const std::string& csv_path) {
    const GasMechanism mechs[] = {GasMechanism::PPS, GasMechanism::PPRG, GasMechanism::PPRE,
                                  GasMechanism::PPRP};
    std::vector<GasReport> reports;
    for (const GasMechanism m : mechs) reports.push_back(mechanism_gas(m));

    std::printf("%-10s", "operation");
    for (const GasReport& r : reports) std::printf("%8s", gas_mechanism_name(r.mechanism));
    std::printf("\n");
    for (const char* op : {"ADD", "SUB", "MUL", "DIV", "EXP", "LOG"}) {
        std::printf("%-10s", op);
        for (const GasReport& r : reports) std::printf("%8d", r.op_counts.at(op));
        std::printf("\n");
    }
    std::printf("%-10s", "total_min");
    for (const GasReport& r : reports) std::printf("%8llu", (unsigned long long)r.total_min);
    std::printf("\n%-10s", "published");
    for (const GasReport& r : reports) std::printf("%8llu", (unsigned long long)r.published_total);
    std::printf("\n%-10s", "consistent");
    for (const GasReport& r : reports) std::printf("%8s", r.totals_match ? "yes" : "NO");
    std::printf("\n");

    std::string csv = "mechanism,add,sub,mul,div,exp,log,total_min,published_total,totals_match\n";
    for (const GasReport& r : reports) {
        csv += std::string(gas_mechanism_name(r.mechanism)) + "," +
               std::to_string(r.op_counts.at("ADD")) + "," + std::to_string(r.op_counts.at("SUB")) +
               "," + std::to_string(r.op_counts.at("MUL")) + "," +
               std::to_string(r.op_counts.at("DIV")) + "," + std::to_string(r.op_counts.at("EXP")) +
               "," + std::to_string(r.op_counts.at("LOG")) + "," + std::to_string(r.total_min) +
               "," + std::to_string(r.published_total) + "," + (r.totals_match ? "yes" : "no") + "\n";
    }
    std::printf("\n%s", csv.c_str());
    if (!csv_path.empty()) write_file(csv_path, csv);
    return 0;
}

// ------------------------------------------------------------------- plot --

int cmd_plot(const std::string& config_path, const std::string& out_path) {
    const ConfigDoc cfg = load_config(config_path);
    require(cfg.project.has_value(), Errc::bad_config, "plot needs a \"project\" section");
    require(cfg.plot.has_value(), Errc::bad_config, "plot needs a \"plot\" section");
    const cli::PlotSpec& plot = *cfg.plot;
    const ProjectSpec& spec = *cfg.project;

    // same x, B, H and K across schemes; PPRG's a is derived from K1 = k
    const Pprg pprg{plot.k * (plot.gamma - 1.0) / plot.gamma, plot.gamma};
    const Ppre ppre{plot.k};
    const Pprp pprp{plot.k};

    cli::Series s_ppr{"PPR", "#666666", {}, {}};
    cli::Series s_pprg{"PPRG", "#d62728", {}, {}};
    cli::Series s_ppre{"PPRE", "#1f77b4", {}, {}};
    cli::Series s_pprp{"PPRP", "#2ca02c", {}, {}};
    cli::Series s_pps{"PPS", "#9467bd", {}, {}};

    for (int i = 1; i <= plot.positions; ++i) {
        const double pos = static_cast<double>(i);
        const Time t = pos - 1.0;  // PPRE's clock ticks one unit per position
        RefundPoint point{plot.contribution, t, i, plot.total, (pos - 1.0) * plot.pps_step};

        s_ppr.xs.push_back(pos);
        s_ppr.ys.push_back(refund_at(Ppr{}, spec.budget, point));
        s_pprg.xs.push_back(pos);
        s_pprg.ys.push_back(refund_at(pprg, spec.budget, point));
        s_ppre.xs.push_back(pos);
        s_ppre.ys.push_back(refund_at(ppre, spec.budget, point));
        s_pprp.xs.push_back(pos);
        s_pprp.ys.push_back(refund_at(pprp, spec.budget, point));
        s_pps.xs.push_back(pos);
        s_pps.ys.push_back(refund_at(Pps{plot.pps_liquidity}, spec.budget, point));
    }

    const std::string svg = cli::render_line_chart(
        "Refund share by contribution position", "contribution position / time",
        "refund share", {s_ppr, s_pprg, s_ppre, s_pprp, s_pps});
    write_file(out_path, svg);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"provision-point crowdfunding mechanisms with refund bonuses"};
    app.require_subcommand(1);

    std::string scheme, config_path, out_path, csv_path;

    CLI::App* check = app.add_subcommand("check", "verify monotonicity conditions and races");
    check->add_option("--scheme", scheme, "ppm, ppr, pprg, ppre, pprp or pps")->required();
    check->add_option("--config", config_path, "run configuration (JSON)")->required();
    check->add_option("--csv", csv_path, "also write the CSV report here");

    CLI::App* equilibrium =
        app.add_subcommand("equilibrium", "equilibrium caps and realized funding");
    equilibrium->add_option("--config", config_path)->required();
    equilibrium->add_option("--csv", csv_path, "also write the CSV report here");

    CLI::App* simulate = app.add_subcommand("simulate", "provision-accuracy budget sweep");
    simulate->add_option("--config", config_path)->required();
    simulate->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* gas = app.add_subcommand("gas", "per-contribution gas cost table");
    gas->add_option("--csv", csv_path, "also write the CSV report here");

    CLI::App* plot = app.add_subcommand("plot", "figure emission");
    CLI::App* refund_evolution =
        plot->add_subcommand("refund-evolution", "refund share vs contribution position");
    refund_evolution->add_option("--config", config_path)->required();
    refund_evolution->add_option("--out", out_path, "output SVG path")->required();
    plot->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (check->parsed()) return cmd_check(scheme, config_path, csv_path);
        if (equilibrium->parsed()) return cmd_equilibrium(config_path, csv_path);
        if (simulate->parsed()) return cmd_simulate(config_path, out_path);
        if (gas->parsed()) return cmd_gas(csv_path);
        if (plot->parsed() && refund_evolution->parsed())
            return cmd_plot(config_path, out_path);
    } catch (const ppcf::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.code() == ppcf::Errc::io_error ? 2 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
