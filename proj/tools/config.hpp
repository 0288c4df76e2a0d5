#pragma once

// Run-configuration document: one JSON file drives every command so that any
// table or figure can be reproduced from the file alone. Parsing is strict —
// unknown keys anywhere are rejected before any computation runs.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ppcf/conditions.hpp"
#include "ppcf/mechanisms.hpp"
#include "ppcf/simulator.hpp"

namespace ppcf::cli {

using nlohmann::json;

struct PlotSpec {
    int positions{25};
    Currency contribution{10.0};  // the fixed x_i of the compared player
    Currency total{100.0};        // the fixed C
    Currency k{2.0};              // shared decay constant K1 = K2 = K3
    double gamma{2.0};            // PPRG ratio; a is derived so K1 == k
    double pps_liquidity{1.0};
    double pps_step{1.0};  // securities issued per position before the player
};

struct ConfigDoc {
    std::optional<ProjectSpec> project;
    std::optional<SchemeParams> scheme;
    std::optional<SampleSpec> sample;
    std::optional<std::vector<Player>> players;
    std::optional<SimConfig> sim;
    std::vector<double> sim_multipliers;  // optional sweep over E[theta]/H
    std::optional<PlotSpec> plot;
};

// Reads and validates the file. Errc::io_error when unreadable,
// Errc::bad_config for malformed or unknown content.
ConfigDoc load_config(const std::string& path);

// Scheme selection by name with per-scheme defaults (a=1, gamma=2, K2=1,
// K3=1, b=1); `params`, when given, must describe the same scheme.
SchemeParams scheme_by_name(const std::string& name, const std::optional<SchemeParams>& params);

}  // namespace ppcf::cli
