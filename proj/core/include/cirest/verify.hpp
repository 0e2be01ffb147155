#ifndef CIREST_VERIFY_HPP
#define CIREST_VERIFY_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cirest {

struct SuiteCheck {
    std::string module;
    std::string name;
    double value = 0.0; // measured residual or quantity
    double tolerance = 0.0;
    bool pass = false;
};

/// Fast invariant checks for every module. Deterministic for a given seed and independent of the
/// thread count.
std::vector<SuiteCheck> verify_all(std::uint64_t seed);

bool all_passed(const std::vector<SuiteCheck>& checks);

/// Header module,check,value,tolerance,status.
void write_checks_csv(const std::vector<SuiteCheck>& checks, std::ostream& out);

} // namespace cirest

#endif // CIREST_VERIFY_HPP
