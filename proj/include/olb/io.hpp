#pragma once

#include <cstdio>
#include <string>

namespace olb {

/// Fixed 17-significant-digit rendering used by every data file.
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace olb
