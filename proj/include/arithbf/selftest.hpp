#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace arithbf::selftest {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct BatteryOptions {
    // quick trims sample sizes to fit interactive use; full runs the
    // complete battery with its per-check time budgets enforced
    bool full = false;
    // negative control: corrupts the pairing evaluation (every phase
    // forced to zero) so the identity checks must fail by name
    bool debug_zero_pairing = false;
};

// Runs every check and reports one result per named identity.
std::vector<CheckResult> run_battery(const BatteryOptions& opt);

// One line per check plus a summary; returns the number of failures.
int print_battery(const std::vector<CheckResult>& results, std::ostream& out);

} // namespace arithbf::selftest
