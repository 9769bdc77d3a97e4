#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace polybound {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Property suites behind the `verify` subcommand. Each check regenerates its
// instances from the seed, runs the relevant identity or inequality against
// the exact oracles, and reports one line.
//
// Suites: "moments", "cmb", "ordering", "counting", "all".
bool known_suite(const std::string& name);
std::vector<CheckResult> run_suite(const std::string& name, std::uint64_t seed);

}  // namespace polybound
