#include "ppcf/gascost.hpp"

#include <bit>

namespace ppcf {

const char* gas_mechanism_name(GasMechanism m) noexcept {
    switch (m) {
        case GasMechanism::PPS: return "PPS";
        case GasMechanism::PPRG: return "PPRG";
        case GasMechanism::PPRE: return "PPRE";
        case GasMechanism::PPRP: return "PPRP";
    }
    return "?";
}

Gas exp_gas(std::uint64_t x, const OpCostTable& table) {
    require(x >= 1, Errc::domain_error, "exp gas defined for x >= 1");
    const unsigned bits = std::bit_width(x);  // >= 1
    Gas units = 0;
    switch (table.exp_mode) {
        case ExpCostMode::byte_length:
            units = (bits + 7) / 8 - 1;
            break;
        case ExpCostMode::literal_log2:
            units = bits - 1;  // floor(log2 x)
            break;
    }
    return table.exp_base + table.exp_per_unit * units;
}

Gas log_gas(std::uint64_t bytes, const OpCostTable& table) {
    return table.log_base + table.log_per_byte * bytes;
}

GasReport mechanism_gas(GasMechanism mechanism, const OpCostTable& table) {
    GasReport r;
    r.mechanism = mechanism;

    int n_add = 0, n_sub = 0, n_mul = 0, n_div = 0, n_exp = 0, n_log = 0;
    switch (mechanism) {
        case GasMechanism::PPS:
            n_add = 2, n_sub = 2, n_mul = 2, n_div = 2, n_exp = 2, n_log = 2;
            r.published_total = 407;
            break;
        case GasMechanism::PPRG:
            // the running GP term turns the exponentiation into one multiply
            n_add = 2, n_mul = 2, n_div = 1;
            r.published_total = 21;
            break;
        case GasMechanism::PPRE:
            n_add = 2, n_mul = 2, n_div = 1, n_exp = 1;
            r.published_total = 31;
            break;
        case GasMechanism::PPRP:
            n_add = 2, n_mul = 3, n_div = 2;
            r.published_total = 31;
            break;
        default:
            raise(Errc::unsupported_mechanism, "no gas table for this mechanism");
    }

    r.op_counts = {{"ADD", n_add}, {"SUB", n_sub}, {"MUL", n_mul},
                   {"DIV", n_div}, {"EXP", n_exp}, {"LOG", n_log}};
    r.total_min = n_add * table.add + n_sub * table.sub + n_mul * table.mul + n_div * table.div +
                  n_exp * exp_gas(1, table) + n_log * log_gas(0, table);
    r.totals_match = r.total_min == r.published_total;
    return r;
}

}  // namespace ppcf
