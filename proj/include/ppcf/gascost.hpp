#pragma once

// EVM-style per-contribution gas accounting for the refund mechanisms when
// run as smart contracts. Costs per operation: ADD 3, SUB 3, MUL 5, DIV 5,
// EXP(x) 10 + 10*L(x), LOG 365 + 8*bytes.

#include <cstdint>
#include <map>
#include <string>

#include "ppcf/errors.hpp"

namespace ppcf {

using Gas = std::uint64_t;

enum class GasMechanism { PPS, PPRG, PPRE, PPRP };

const char* gas_mechanism_name(GasMechanism m) noexcept;

enum class ExpCostMode {
    byte_length,  // L(x) = bytes needed for x, minus one (EVM exponent-byte rule)
    literal_log2, // L(x) = floor(log2 x)
};

struct OpCostTable {
    Gas add{3};
    Gas sub{3};
    Gas mul{5};
    Gas div{5};
    Gas exp_base{10};
    Gas exp_per_unit{10};
    Gas log_base{365};
    Gas log_per_byte{8};
    ExpCostMode exp_mode{ExpCostMode::byte_length};
};

// Errc::domain_error for x < 1. exp_gas(1) is the 10-unit floor in both modes.
Gas exp_gas(std::uint64_t x, const OpCostTable& table = {});
Gas log_gas(std::uint64_t bytes, const OpCostTable& table = {});

struct GasReport {
    GasMechanism mechanism{GasMechanism::PPS};
    std::map<std::string, int> op_counts;
    Gas total_min{0};     // every EXP at its 10-unit floor, every LOG at 365
    Gas published_total{0};   // the total as printed in the source cost table
    bool totals_match{false};
};

// Per-player operation counts of each mechanism's refund bookkeeping and the
// floor-cost total. published_total is stored as printed and never recomputed;
// PPS's printed 407 disagrees with its own rows (floor 782) and is flagged.
GasReport mechanism_gas(GasMechanism mechanism, const OpCostTable& table = {});

}  // namespace ppcf
