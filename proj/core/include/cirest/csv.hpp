#ifndef CIREST_CSV_HPP
#define CIREST_CSV_HPP

#include <cstdio>
#include <string>

namespace cirest {

/// Round-trip decimal form of x ("%.17g").
inline std::string csv_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace cirest

#endif // CIREST_CSV_HPP
