#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mipt {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool all_pass = false;
};

/// Desk-scale correctness suite: cross-engine survival equality, propagator
/// accuracy against the dense exponential, closed-form recursion anchors,
/// and the protocol/entanglement/overlap invariants. Runs in seconds.
/// The seed feeds the randomized states.
ValidationReport run_validation(std::uint64_t seed);

std::string report_to_json(const ValidationReport& report);

}  // namespace mipt
