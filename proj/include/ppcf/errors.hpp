#pragma once

#include <stdexcept>
#include <string>

namespace ppcf {

// Every domain failure maps to one code so callers (and the CLI exit-code
// mapping) can dispatch without string matching.
enum class Errc {
    invalid_argument,
    empty_profile,
    invalid_seq,
    time_out_of_range,
    invalid_liquidity,
    out_of_range,
    no_valid_budget,
    unsupported_scheme,
    unsupported_mechanism,
    domain_error,
    bad_config,
    io_error,
};

const char* errc_name(Errc c) noexcept;

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, Errc code, const std::string& msg) {
    if (!cond) raise(code, msg);
}

}  // namespace ppcf
