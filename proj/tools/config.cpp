#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>

namespace ppcf::cli {
namespace {

[[noreturn]] void bad(const std::string& msg) { raise(Errc::bad_config, msg); }

void expect_object(const json& j, const std::string& where) {
    if (!j.is_object()) bad(where + " must be an object");
}

void expect_keys(const json& obj, const std::string& where,
                 std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
                return item.key() == k;
            }) == allowed.end())
            bad("unknown key \"" + item.key() + "\" in " + where);
    }
}

double get_num(const json& obj, const std::string& where, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) bad(where + "." + key + " must be a number");
    return obj[key].get<double>();
}

double require_num(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) bad(where + " is missing \"" + std::string(key) + "\"");
    if (!obj[key].is_number()) bad(where + "." + key + " must be a number");
    return obj[key].get<double>();
}

std::int64_t get_int(const json& obj, const std::string& where, const char* key,
                     std::int64_t fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) bad(where + "." + key + " must be an integer");
    return obj[key].get<std::int64_t>();
}

std::string get_str(const json& obj, const std::string& where, const char* key,
                    const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_string()) bad(where + "." + key + " must be a string");
    return obj[key].get<std::string>();
}

std::pair<double, double> get_range(const json& obj, const std::string& where, const char* key,
                                    std::pair<double, double> fallback) {
    if (!obj.contains(key)) return fallback;
    const json& r = obj[key];
    if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
        bad(where + "." + key + " must be [low, high]");
    return {r[0].get<double>(), r[1].get<double>()};
}

// default seed: config value > PPCF_SEED environment override > builtin
std::uint64_t resolve_seed(const json& obj, const std::string& where, std::uint64_t builtin) {
    if (obj.contains("seed")) {
        if (!obj["seed"].is_number_integer()) bad(where + ".seed must be an integer");
        return obj["seed"].get<std::uint64_t>();
    }
    if (const char* env = std::getenv("PPCF_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0') bad("PPCF_SEED must be a non-negative integer");
        return v;
    }
    return builtin;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

SchemeParams parse_scheme(const json& j, const std::string& where) {
    expect_object(j, where);
    expect_keys(j, where, {"name", "a", "gamma", "k2", "k3", "liquidity"});
    const std::string name = lower(get_str(j, where, "name", ""));
    if (name.empty()) bad(where + " is missing \"name\"");

    const auto reject_other_params = [&](std::initializer_list<const char*> mine) {
        for (const char* key : {"a", "gamma", "k2", "k3", "liquidity"}) {
            const bool allowed =
                std::find_if(mine.begin(), mine.end(), [&](const char* m) {
                    return std::string(m) == key;
                }) != mine.end();
            if (!allowed && j.contains(key))
                bad(where + "." + key + " does not apply to scheme " + name);
        }
    };

    if (name == "ppm") {
        reject_other_params({});
        return Ppm{};
    }
    if (name == "ppr") {
        reject_other_params({});
        return Ppr{};
    }
    if (name == "pprg") {
        reject_other_params({"a", "gamma"});
        return Pprg{get_num(j, where, "a", 1.0), get_num(j, where, "gamma", 2.0)};
    }
    if (name == "ppre") {
        reject_other_params({"k2"});
        return Ppre{get_num(j, where, "k2", 1.0)};
    }
    if (name == "pprp") {
        reject_other_params({"k3"});
        return Pprp{get_num(j, where, "k3", 1.0)};
    }
    if (name == "pps") {
        reject_other_params({"liquidity"});
        return Pps{get_num(j, where, "liquidity", 1.0)};
    }
    bad(where + ".name: unknown scheme \"" + name + "\"");
}

SimConfig parse_sim(const json& j) {
    expect_object(j, "sim");
    expect_keys(j, "sim",
                {"n_players", "valuation_multiplier", "valuation_distribution",
                 "budget_fractions", "runs_per_point", "episodes", "seed", "policy",
                 "free_rider_prob", "provision_point", "deadline", "mechanisms", "alpha",
                 "epsilon_start", "epsilon_end", "threads", "multipliers"});

    SimConfig cfg;
    cfg.n_players = static_cast<int>(get_int(j, "sim", "n_players", cfg.n_players));
    cfg.valuation_multiplier =
        get_num(j, "sim", "valuation_multiplier", cfg.valuation_multiplier);

    const std::string dist =
        lower(get_str(j, "sim", "valuation_distribution", "uniform"));
    if (dist == "uniform")
        cfg.valuation_distribution = ValuationDistribution::uniform;
    else if (dist == "exponential")
        cfg.valuation_distribution = ValuationDistribution::exponential;
    else
        bad("sim.valuation_distribution must be \"uniform\" or \"exponential\"");

    if (j.contains("budget_fractions")) {
        if (!j["budget_fractions"].is_array()) bad("sim.budget_fractions must be an array");
        cfg.budget_fractions.clear();
        for (const json& f : j["budget_fractions"]) {
            if (!f.is_number()) bad("sim.budget_fractions entries must be numbers");
            cfg.budget_fractions.push_back(f.get<double>());
        }
    }

    cfg.runs_per_point = static_cast<int>(get_int(j, "sim", "runs_per_point", cfg.runs_per_point));
    cfg.episodes = static_cast<int>(get_int(j, "sim", "episodes", cfg.episodes));
    cfg.seed = resolve_seed(j, "sim", cfg.seed);

    const std::string policy = lower(get_str(j, "sim", "policy", "equilibrium"));
    if (policy == "equilibrium") {
        cfg.policy = EquilibriumPolicy{};
    } else if (policy == "learner") {
        cfg.policy = LearnerPolicy{};
    } else if (policy == "free_rider_mix") {
        cfg.policy = FreeRiderMix{get_num(j, "sim", "free_rider_prob", 1.0)};
    } else {
        bad("sim.policy must be \"equilibrium\", \"learner\" or \"free_rider_mix\"");
    }
    if (policy != "free_rider_mix" && j.contains("free_rider_prob"))
        bad("sim.free_rider_prob only applies to the free_rider_mix policy");

    cfg.provision_point = get_num(j, "sim", "provision_point", cfg.provision_point);
    cfg.deadline = get_num(j, "sim", "deadline", cfg.deadline);

    if (j.contains("mechanisms")) {
        if (!j["mechanisms"].is_array()) bad("sim.mechanisms must be an array");
        cfg.mechanisms.clear();
        for (const json& m : j["mechanisms"]) {
            if (m.is_string())
                cfg.mechanisms.push_back(scheme_by_name(m.get<std::string>(), std::nullopt));
            else
                cfg.mechanisms.push_back(parse_scheme(m, "sim.mechanisms[]"));
        }
    }

    cfg.alpha = get_num(j, "sim", "alpha", cfg.alpha);
    cfg.epsilon_start = get_num(j, "sim", "epsilon_start", cfg.epsilon_start);
    cfg.epsilon_end = get_num(j, "sim", "epsilon_end", cfg.epsilon_end);
    cfg.threads = static_cast<int>(get_int(j, "sim", "threads", cfg.threads));
    return cfg;
}

}  // namespace

SchemeParams scheme_by_name(const std::string& name, const std::optional<SchemeParams>& params) {
    const std::string id = lower(name);
    const auto matches = [&](const SchemeParams& s) { return lower(scheme_name(s)) == id; };
    if (params && matches(*params)) return *params;
    json stub;
    stub["name"] = id;
    return parse_scheme(stub, "scheme");
}

ConfigDoc load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::io_error, "cannot open config file: " + path);

    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        bad(std::string("config is not valid JSON: ") + e.what());
    }
    expect_object(doc, "config");
    expect_keys(doc, "config", {"project", "scheme", "sample", "players", "sim", "plot"});

    ConfigDoc cfg;

    if (doc.contains("scheme")) cfg.scheme = parse_scheme(doc["scheme"], "scheme");

    if (doc.contains("project")) {
        const json& p = doc["project"];
        expect_object(p, "project");
        expect_keys(p, "project", {"provision_point", "deadline", "budget"});
        ProjectSpec spec;
        spec.provision_point = require_num(p, "project", "provision_point");
        spec.deadline = require_num(p, "project", "deadline");
        spec.budget = get_num(p, "project", "budget", 0.0);
        if (cfg.scheme) spec.scheme = *cfg.scheme;
        spec.validate();
        cfg.project = spec;
    }

    if (doc.contains("sample")) {
        const json& s = doc["sample"];
        expect_object(s, "sample");
        expect_keys(s, "sample", {"num_points", "x_range", "t_range", "seed", "fd_step"});
        SampleSpec sample;
        sample.num_points = static_cast<int>(get_int(s, "sample", "num_points", 1000));
        sample.x_range = get_range(s, "sample", "x_range", sample.x_range);
        sample.t_range = get_range(s, "sample", "t_range", sample.t_range);
        sample.seed = resolve_seed(s, "sample", 42);
        sample.fd_step = get_num(s, "sample", "fd_step", sample.fd_step);
        cfg.sample = sample;
    }

    if (doc.contains("players")) {
        const json& arr = doc["players"];
        if (!arr.is_array()) bad("players must be an array");
        std::vector<Player> players;
        int next_id = 0;
        for (const json& p : arr) {
            expect_object(p, "players[]");
            expect_keys(p, "players[]", {"id", "valuation", "arrival"});
            Player pl;
            pl.id = static_cast<int>(get_int(p, "players[]", "id", next_id));
            pl.valuation = require_num(p, "players[]", "valuation");
            pl.arrival = get_num(p, "players[]", "arrival", 0.0);
            players.push_back(pl);
            ++next_id;
        }
        cfg.players = std::move(players);
    }

    if (doc.contains("sim")) {
        cfg.sim = parse_sim(doc["sim"]);
        const json& j = doc["sim"];
        if (j.contains("multipliers")) {
            if (!j["multipliers"].is_array()) bad("sim.multipliers must be an array");
            for (const json& m : j["multipliers"]) {
                if (!m.is_number()) bad("sim.multipliers entries must be numbers");
                cfg.sim_multipliers.push_back(m.get<double>());
            }
        }
    }

    if (doc.contains("plot")) {
        const json& p = doc["plot"];
        expect_object(p, "plot");
        expect_keys(p, "plot",
                    {"positions", "contribution", "total", "k", "gamma", "pps_liquidity",
                     "pps_step"});
        PlotSpec plot;
        plot.positions = static_cast<int>(get_int(p, "plot", "positions", plot.positions));
        plot.contribution = get_num(p, "plot", "contribution", plot.contribution);
        plot.total = get_num(p, "plot", "total", plot.total);
        plot.k = get_num(p, "plot", "k", plot.k);
        plot.gamma = get_num(p, "plot", "gamma", plot.gamma);
        plot.pps_liquidity = get_num(p, "plot", "pps_liquidity", plot.pps_liquidity);
        plot.pps_step = get_num(p, "plot", "pps_step", plot.pps_step);
        if (plot.positions < 2) bad("plot.positions must be at least 2");
        if (plot.k <= 0 || plot.gamma <= 1.0) bad("plot needs k > 0 and gamma > 1");
        cfg.plot = plot;
    }

    return cfg;
}

}  // namespace ppcf::cli
