#pragma once

#include <stdexcept>
#include <string>

namespace mipt {

// Thrown when a numerical sentinel trips (out-of-range survival probability,
// non-finite amplitudes, imaginary residue beyond tolerance). Carries the
// protocol step at which the failure was detected.
class precision_error : public std::runtime_error {
public:
    precision_error(const std::string& what, long step)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

    long step() const noexcept { return step_; }

private:
    long step_;
};

}  // namespace mipt
