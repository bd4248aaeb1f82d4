#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace entscale {

/// Runs one subcommand. Returns 0 on success, 1 on domain errors and failed
/// verification, 2 on usage errors.
int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err);

struct VerifyAllOptions {
    std::size_t max_qubits = 16;
    std::size_t seeds = 100;
    std::size_t depth = 12;
    std::size_t random_cuts = 10;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

/// Table 1 reproduction, the general-graph/deformed-grid consistency sweep and
/// the simulator cap suite on every grid with 4 <= n <= max_qubits.
std::vector<CheckResult> verify_all(const VerifyAllOptions& options);

} // namespace entscale
