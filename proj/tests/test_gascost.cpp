#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ppcf/gascost.hpp"

using namespace ppcf;

TEST_CASE("per-mechanism op counts and floor totals") {
    const GasReport pprg = mechanism_gas(GasMechanism::PPRG);
    CHECK(pprg.op_counts.at("ADD") == 2);
    CHECK(pprg.op_counts.at("SUB") == 0);
    CHECK(pprg.op_counts.at("MUL") == 2);
    CHECK(pprg.op_counts.at("DIV") == 1);
    CHECK(pprg.op_counts.at("EXP") == 0);  // GP term carried in a variable
    CHECK(pprg.op_counts.at("LOG") == 0);
    CHECK(pprg.total_min == 21);
    CHECK(pprg.published_total == 21);
    CHECK(pprg.totals_match);

    const GasReport ppre = mechanism_gas(GasMechanism::PPRE);
    CHECK(ppre.op_counts.at("EXP") == 1);
    CHECK(ppre.total_min == 31);
    CHECK(ppre.published_total == 31);
    CHECK(ppre.totals_match);

    const GasReport pprp = mechanism_gas(GasMechanism::PPRP);
    CHECK(pprp.op_counts.at("MUL") == 3);
    CHECK(pprp.op_counts.at("DIV") == 2);
    CHECK(pprp.total_min == 31);
    CHECK(pprp.published_total == 31);
    CHECK(pprp.totals_match);

    const GasReport pps = mechanism_gas(GasMechanism::PPS);
    CHECK(pps.op_counts.at("ADD") == 2);
    CHECK(pps.op_counts.at("SUB") == 2);
    CHECK(pps.op_counts.at("MUL") == 2);
    CHECK(pps.op_counts.at("DIV") == 2);
    CHECK(pps.op_counts.at("EXP") == 2);
    CHECK(pps.op_counts.at("LOG") == 2);
    CHECK(pps.total_min == 782);   // the table's own rows at floor costs
    CHECK(pps.published_total == 407); // kept verbatim
    CHECK_FALSE(pps.totals_match); // the printed total disagrees with the rows
}

TEST_CASE("cheapest to dearest: PPRG < PPRE <= PPRP < PPS") {
    const Gas pprg = mechanism_gas(GasMechanism::PPRG).total_min;
    const Gas ppre = mechanism_gas(GasMechanism::PPRE).total_min;
    const Gas pprp = mechanism_gas(GasMechanism::PPRP).total_min;
    const Gas pps = mechanism_gas(GasMechanism::PPS).total_min;
    CHECK(pprg < ppre);
    CHECK(ppre <= pprp);
    CHECK(pprp < pps);
}

TEST_CASE("exp gas") {
    CHECK(exp_gas(1) == 10);  // floor in both modes
    OpCostTable log2_mode;
    log2_mode.exp_mode = ExpCostMode::literal_log2;
    CHECK(exp_gas(1, log2_mode) == 10);

    // byte-length mode: one byte -> floor, two bytes -> one step
    CHECK(exp_gas(255) == 10);
    CHECK(exp_gas(256) == 20);
    CHECK(exp_gas((1ULL << 16) - 1) == 20);
    CHECK(exp_gas(1ULL << 16) == 30);

    // literal log2 mode steps per bit
    CHECK(exp_gas(2, log2_mode) == 20);
    CHECK(exp_gas(3, log2_mode) == 20);
    CHECK(exp_gas(4, log2_mode) == 30);
    CHECK(exp_gas(256, log2_mode) == 90);

    CHECK_THROWS_AS(exp_gas(0), Error);
}

TEST_CASE("log gas") {
    CHECK(log_gas(0) == 365);
    CHECK(log_gas(32) == 621);  // 365 + 8*32
}
