#ifndef LOGCONC_VERIFY_HPP
#define LOGCONC_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace logconc {

/// One checked statement: `value` compared against `reference` (or a bound)
/// with `tolerance`.
struct CheckRow {
    std::string name;
    double value = 0.0;
    double reference = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    std::string detail;
};

struct SuiteReport {
    std::string name;
    std::vector<CheckRow> rows;
    double seconds = 0.0;

    bool pass() const;
};

/// equality, urysohn, santalo, shannon, properties, convergence, legendre,
/// bodies, levelsets, lowmstar.
const std::vector<std::string>& suite_names();

/// Runs a named suite; `all` is not accepted here (callers loop).
SuiteReport run_suite(const std::string& name, std::uint64_t seed = 20240601);

}  // namespace logconc

#endif
