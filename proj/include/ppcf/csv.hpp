#pragma once

#include <cstdio>
#include <string>

namespace ppcf {

// Fixed 9-significant-digit rendering; keeps CSV output byte-stable.
inline std::string format_g9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace ppcf
